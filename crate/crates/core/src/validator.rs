//! Continuous trajectories for discrete plans, and an analytic collision check.
//!
//! A plan runs in three phases: every disc moves in a straight line to its
//! start vertex, all discs take one grid step per `4/sqrt(3)` time units, and
//! finally every disc moves from its goal vertex to its goal point. Snapping
//! phases are synchronized: each disc covers its segment at constant speed over
//! the whole phase.

use thiserror::Error;

use crate::discretizer::SnapResult;
use crate::geometry::{min_linear_distance, TriGrid, Vec2, Workspace, EDGE_LENGTH, RADIUS};
use crate::plan::DiscretePlan;

pub const CLEARANCE_TOL: f64 = 1e-9;
pub const SPEED_TOL: f64 = 1e-9;
const STORED_VIOLATIONS: usize = 64;
/// Below this many discs every pair is checked; above it only nearby pairs.
const BRUTE_FORCE_DISCS: usize = 64;
/// Pair distances below this are always found exactly.
const NEAR_RANGE: f64 = 4.0;

#[derive(Debug, Error, PartialEq)]
pub enum SynthesisError {
    #[error("plan has no configurations")]
    EmptyPlan,
    #[error("plan moves {plan} robots but the snaps cover {snap}")]
    CountMismatch { plan: usize, snap: usize },
    #[error("robot {0} does not start on its snapped start vertex")]
    StartMismatch(usize),
    #[error("robot {0} does not end on its snapped goal vertex")]
    GoalMismatch(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Phases {
    pub snap_in: f64,
    pub grid: f64,
    pub snap_out: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousPlan {
    /// Breakpoints `(time, position)` of every disc, times strictly increasing.
    pub trajectories: Vec<Vec<(f64, Vec2)>>,
    pub makespan: f64,
    pub phases: Phases,
}

impl ContinuousPlan {
    pub fn robot_count(&self) -> usize {
        self.trajectories.len()
    }

    /// Position of `disc` at time `t`, clamped to the plan's time span.
    pub fn position(&self, disc: usize, t: f64) -> Vec2 {
        let tr = &self.trajectories[disc];
        if t <= tr[0].0 {
            return tr[0].1;
        }
        for w in tr.windows(2) {
            let ((t0, p0), (t1, p1)) = (w[0], w[1]);
            if t <= t1 {
                return p0 + (p1 - p0) * ((t - t0) / (t1 - t0));
            }
        }
        tr.last().unwrap().1
    }
}

/// Three-phase trajectories for `dplan`, using the snap segments of both ends.
pub fn synthesize(grid: &TriGrid, dplan: &DiscretePlan, start: &SnapResult, goal: &SnapResult) -> Result<ContinuousPlan, SynthesisError> {
    let first = dplan.steps.first().ok_or(SynthesisError::EmptyPlan)?;
    let last = dplan.last();
    let n = first.len();
    for snap in [start, goal] {
        if snap.assignment.len() != n {
            return Err(SynthesisError::CountMismatch { plan: n, snap: snap.assignment.len() });
        }
    }
    if let Some(r) = (0..n).find(|&r| start.assignment[r] != first[r]) {
        return Err(SynthesisError::StartMismatch(r));
    }
    if let Some(r) = (0..n).find(|&r| goal.assignment[r] != last[r]) {
        return Err(SynthesisError::GoalMismatch(r));
    }
    let phases = Phases {
        snap_in: start.phase_duration(),
        grid: dplan.makespan() as f64 * EDGE_LENGTH,
        snap_out: goal.phase_duration(),
    };
    let mut trajectories = Vec::with_capacity(n);
    for r in 0..n {
        let mut tr = vec![(0.0, start.segments[r].0)];
        let mut t = 0.0;
        if phases.snap_in > 0.0 {
            t = phases.snap_in;
            tr.push((t, grid.position(first[r])));
        }
        for k in 1..dplan.steps.len() {
            t = phases.snap_in + k as f64 * EDGE_LENGTH;
            tr.push((t, grid.position(dplan.steps[k][r])));
        }
        if phases.snap_out > 0.0 {
            t += phases.snap_out;
            tr.push((t, goal.segments[r].0));
        }
        trajectories.push(tr);
    }
    Ok(ContinuousPlan { trajectories, makespan: phases.snap_in + phases.grid + phases.snap_out, phases })
}

/// Trajectories for a plan whose robots start and end exactly on grid vertices.
pub fn synthesize_on_grid(grid: &TriGrid, dplan: &DiscretePlan) -> Result<ContinuousPlan, SynthesisError> {
    let on_vertex = |cfg: &[usize]| {
        let segments: Vec<(Vec2, Vec2)> = cfg.iter().map(|&v| (grid.position(v), grid.position(v))).collect();
        SnapResult { assignment: cfg.to_vec(), max_distance: 0.0, segments }
    };
    let first = dplan.steps.first().ok_or(SynthesisError::EmptyPlan)?;
    synthesize(grid, dplan, &on_vertex(first), &on_vertex(dplan.last()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClearanceViolation {
    pub i: usize,
    pub j: usize,
    /// Start of the time interval in which the pair comes closest.
    pub time: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// Smallest center distance over all pairs and times; exact whenever it is below 4.
    pub min_pair_clearance: f64,
    pub violations: Vec<ClearanceViolation>,
    pub violation_count: usize,
    pub min_boundary_clearance: f64,
    pub boundary_ok: bool,
    pub max_speed: f64,
    pub speed_ok: bool,
    pub makespan: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation_count == 0 && self.boundary_ok && self.speed_ok
    }
}

/// Checks pairwise clearance, boundary clearance and the unit speed cap.
pub fn validate(plan: &ContinuousPlan, ws: &Workspace) -> ValidationReport {
    let n = plan.robot_count();
    let mut report = ValidationReport {
        min_pair_clearance: f64::INFINITY,
        violations: Vec::new(),
        violation_count: 0,
        min_boundary_clearance: f64::INFINITY,
        boundary_ok: true,
        max_speed: 0.0,
        speed_ok: true,
        makespan: plan.makespan,
    };
    for tr in &plan.trajectories {
        for &(_, p) in tr {
            report.min_boundary_clearance = report.min_boundary_clearance.min(ws.boundary_distance(p));
        }
        for w in tr.windows(2) {
            let dt = w[1].0 - w[0].0;
            let len = w[0].1.dist(w[1].1);
            let v = if dt > 0.0 { len / dt } else if len > 0.0 { f64::INFINITY } else { 0.0 };
            report.max_speed = report.max_speed.max(v);
        }
    }
    // the boundary distance is concave inside the rectangle, so breakpoints suffice
    report.boundary_ok = report.min_boundary_clearance >= RADIUS - CLEARANCE_TOL;
    report.speed_ok = report.max_speed <= 1.0 + SPEED_TOL;
    if n < 2 {
        return report;
    }
    let mut times: Vec<f64> = plan.trajectories.iter().flat_map(|tr| tr.iter().map(|b| b.0)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut prev: Vec<Vec2> = (0..n).map(|d| plan.position(d, times[0])).collect();
    let mut cursor = vec![0usize; n];
    let check = |i: usize, j: usize, t0: f64, a: &[Vec2], b: &[Vec2], report: &mut ValidationReport| {
        let d = min_linear_distance(a[i], b[i], a[j], b[j]);
        report.min_pair_clearance = report.min_pair_clearance.min(d);
        if d < 2.0 * RADIUS - CLEARANCE_TOL {
            report.violation_count += 1;
            if report.violations.len() < STORED_VIOLATIONS {
                report.violations.push(ClearanceViolation { i, j, time: t0, distance: d });
            }
        }
    };
    let single = times.len() == 1;
    for k in 0..times.len().max(2) - 1 {
        let t0 = times[k];
        let t1 = if single { t0 } else { times[k + 1] };
        let next: Vec<Vec2> = (0..n)
            .map(|d| {
                let tr = &plan.trajectories[d];
                while cursor[d] + 1 < tr.len() && tr[cursor[d] + 1].0 < t1 {
                    cursor[d] += 1;
                }
                interpolate(tr, cursor[d], t1)
            })
            .collect();
        if n <= BRUTE_FORCE_DISCS {
            for i in 0..n {
                for j in i + 1..n {
                    check(i, j, t0, &prev, &next, &mut report);
                }
            }
        } else {
            let reach = (0..n).map(|d| prev[d].dist(next[d])).fold(0.0, f64::max);
            let h = NEAR_RANGE + reach;
            let mid: Vec<Vec2> = (0..n).map(|d| (prev[d] + next[d]) * 0.5).collect();
            let key = |p: Vec2| ((p.x / h).floor() as i64, (p.y / h).floor() as i64);
            let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> = std::collections::HashMap::new();
            for (d, &p) in mid.iter().enumerate() {
                buckets.entry(key(p)).or_default().push(d);
            }
            for i in 0..n {
                let (cx, cy) = key(mid[i]);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(b) = buckets.get(&(cx + dx, cy + dy)) {
                            for &j in b.iter().filter(|&&j| j > i) {
                                check(i, j, t0, &prev, &next, &mut report);
                            }
                        }
                    }
                }
            }
        }
        prev = next;
    }
    report
}

fn interpolate(tr: &[(f64, Vec2)], seg: usize, t: f64) -> Vec2 {
    let (t0, p0) = tr[seg];
    if seg + 1 >= tr.len() || t <= t0 {
        return p0;
    }
    let (t1, p1) = tr[seg + 1];
    if t >= t1 {
        return p1;
    }
    p0 + (p1 - p0) * ((t - t0) / (t1 - t0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRatio {
    pub per_instance: Vec<f64>,
    pub makespan_sum: usize,
    pub underestimate_sum: usize,
    /// `sum(makespan) / sum(underestimate)`, 1 when both sums are 0.
    pub aggregate: f64,
}

/// Optimality ratios from `(makespan, underestimate)` pairs, both in grid steps.
pub fn optimality_metrics(rows: &[(usize, usize)]) -> SuiteRatio {
    let per_instance = rows.iter().map(|&(t, u)| crate::triilp_solver::ratio(t, u)).collect();
    let makespan_sum = rows.iter().map(|r| r.0).sum();
    let underestimate_sum = rows.iter().map(|r| r.1).sum();
    SuiteRatio { per_instance, makespan_sum, underestimate_sum, aggregate: crate::triilp_solver::ratio(makespan_sum, underestimate_sum) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, build_workspace};

    fn grid() -> TriGrid {
        build_grid(&build_workspace(3, 4).unwrap())
    }

    fn inner_vertex(g: &TriGrid) -> usize {
        (0..g.vertex_count()).find(|&v| g.neighbors(v).len() == 6).unwrap()
    }

    #[test]
    fn single_step_takes_one_edge_length() {
        let g = grid();
        let v = inner_vertex(&g);
        let w = g.neighbors(v)[0];
        let plan = synthesize_on_grid(&g, &DiscretePlan { steps: vec![vec![v], vec![w]] }).unwrap();
        assert!((plan.makespan - 4.0 / 3f64.sqrt()).abs() < 1e-12);
        let r = validate(&plan, &g.workspace);
        assert!(r.is_valid());
        assert!((r.max_speed - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_plan_has_zero_makespan() {
        let g = grid();
        let plan = synthesize_on_grid(&g, &DiscretePlan::stationary(vec![0, 5])).unwrap();
        assert_eq!(plan.makespan, 0.0);
        let r = validate(&plan, &g.workspace);
        assert!(r.is_valid());
        assert!((r.min_pair_clearance - g.position(0).dist(g.position(5))).abs() < 1e-12);
    }

    #[test]
    fn head_on_swap_collides() {
        let g = grid();
        let v = inner_vertex(&g);
        let w = g.neighbors(v)[0];
        let plan = synthesize_on_grid(&g, &DiscretePlan { steps: vec![vec![v, w], vec![w, v]] }).unwrap();
        let r = validate(&plan, &g.workspace);
        assert!(!r.is_valid());
        assert!(r.min_pair_clearance < 1e-12);
    }

    /// Two discs on adjacent vertices moving along two edges of one triangle
    /// (a sharp angle) collide; moving away from each other does not.
    #[test]
    fn sharp_and_open_concurrent_moves() {
        let g = grid();
        let v = inner_vertex(&g);
        let u = g.neighbors(v).iter().copied().find(|&x| g.neighbors(x).len() == 6).unwrap();
        let w = *g.apexes(v, u).first().unwrap();
        // u -> w while v -> u: both edges lie on triangle (u, v, w)
        let sharp = DiscretePlan { steps: vec![vec![u, v], vec![w, u]] };
        let r = validate(&synthesize_on_grid(&g, &sharp).unwrap(), &g.workspace);
        assert!(r.violation_count > 0);
        // both discs step to their own far neighbors
        let far = |a: usize, b: usize| {
            let (pa, pb) = (g.position(a), g.position(b));
            g.neighbors(a).iter().copied().find(|&x| (g.position(x) - pa).dot(pb - pa) < -1.0).unwrap()
        };
        let open = DiscretePlan { steps: vec![vec![u, v], vec![far(u, v), far(v, u)]] };
        let r = validate(&synthesize_on_grid(&g, &open).unwrap(), &g.workspace);
        assert!(r.is_valid(), "{r:?}");
    }

    #[test]
    fn ratio_formula() {
        let m = optimality_metrics(&[(3, 2), (5, 4)]);
        assert!((m.aggregate - 8.0 / 6.0).abs() < 1e-12);
        assert_eq!(optimality_metrics(&[(0, 0), (0, 0)]).aggregate, 1.0);
    }

    #[test]
    fn mismatched_endpoints_are_rejected() {
        let g = grid();
        let plan = DiscretePlan::stationary(vec![0]);
        let snap = SnapResult { assignment: vec![1], max_distance: 0.0, segments: vec![(g.position(1), g.position(1))] };
        assert_eq!(synthesize(&g, &plan, &snap, &snap), Err(SynthesisError::StartMismatch(0)));
    }
}
