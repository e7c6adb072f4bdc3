//! Makespan-optimal routing by solving the time-expanded model for growing horizons,
//! plus a k-way split that trades optimality for smaller models.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::ilp_core::{build_model, decode, solve, Backend, IlpError};
use crate::plan::{DiscreteInstance, DiscretePlan};

#[derive(Debug, Error)]
pub enum TriIlpError {
    #[error(transparent)]
    Ilp(#[from] IlpError),
    #[error("robot {0} cannot reach its goal")]
    Unreachable(usize),
    #[error("no plan found up to horizon {0}")]
    HorizonExceeded(usize),
    #[error("split needs k >= 1")]
    BadSplit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub makespan: usize,
    pub underestimate: usize,
    pub optimality_ratio: f64,
    pub wall_time: Duration,
    pub iterations: usize,
    pub split_k: usize,
}

/// Makespan over underestimate, with `0/0` read as 1.
pub fn ratio(makespan: usize, underestimate: usize) -> f64 {
    if underestimate == 0 {
        if makespan == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        makespan as f64 / underestimate as f64
    }
}

/// Largest start-to-goal hop distance, ignoring the other robots.
pub fn underestimated_makespan(inst: &DiscreteInstance) -> Result<usize, TriIlpError> {
    let mut best = 0;
    for (r, (&s, &g)) in inst.starts.iter().zip(&inst.goals).enumerate() {
        let d = inst.grid.distances_from(s)[g];
        if d == usize::MAX {
            return Err(TriIlpError::Unreachable(r));
        }
        best = best.max(d);
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TriIlpOptions {
    /// Largest horizon tried; defaults to the underestimate plus `|V|`.
    pub ceiling: Option<usize>,
}

pub fn solve_triilp(inst: &DiscreteInstance, backend: &Backend) -> Result<(DiscretePlan, SolveReport), TriIlpError> {
    solve_triilp_with(inst, backend, TriIlpOptions::default())
}

pub fn solve_triilp_with(
    inst: &DiscreteInstance,
    backend: &Backend,
    opts: TriIlpOptions,
) -> Result<(DiscretePlan, SolveReport), TriIlpError> {
    let clock = Instant::now();
    let under = underestimated_makespan(inst)?;
    let report = |makespan: usize, iterations: usize| SolveReport {
        makespan,
        underestimate: under,
        optimality_ratio: ratio(makespan, under),
        wall_time: clock.elapsed(),
        iterations,
        split_k: 1,
    };
    if under == 0 {
        return Ok((DiscretePlan::stationary(inst.starts.clone()), report(0, 0)));
    }
    let ceiling = opts.ceiling.unwrap_or(under + inst.grid.vertex_count());
    let mut iterations = 0;
    for t in under..=ceiling {
        iterations += 1;
        let model = build_model(inst, t)?;
        let sol = solve(&model, backend)?;
        if sol.objective_value == inst.robot_count() {
            let plan = decode(&model, &sol).expect("full objective decodes to a plan");
            return Ok((plan, report(t, iterations)));
        }
    }
    Err(TriIlpError::HorizonExceeded(ceiling))
}

/// Shortest path from `s` to `g`, choosing the lowest-id predecessor at each hop.
pub fn shortest_path(inst: &DiscreteInstance, s: usize, g: usize) -> Vec<usize> {
    let grid = &inst.grid;
    let from_s = grid.distances_from(s);
    let mut path = vec![g];
    let mut cur = g;
    while cur != s {
        cur = *grid
            .neighbors(cur)
            .iter()
            .filter(|&&w| from_s[w] + 1 == from_s[cur])
            .min()
            .expect("predecessor on a shortest path");
        path.push(cur);
    }
    path.reverse();
    path
}

/// Splits into `k` chained sub-instances through intermediate configurations.
///
/// Robot `r`'s `m`-th waypoint lies `floor(m d / k)` hops along its shortest
/// path; a robot whose waypoint is already taken moves to the nearest free
/// vertex (breadth-first, lowest id first).
pub fn split_k_way(inst: &DiscreteInstance, k: usize) -> Result<Vec<DiscreteInstance>, TriIlpError> {
    if k == 0 {
        return Err(TriIlpError::BadSplit);
    }
    let paths: Vec<Vec<usize>> = (0..inst.robot_count())
        .map(|r| shortest_path(inst, inst.starts[r], inst.goals[r]))
        .collect();
    let mut configs = vec![inst.starts.clone()];
    for m in 1..k {
        let mut taken = vec![false; inst.grid.vertex_count()];
        let mut cfg = Vec::with_capacity(paths.len());
        for p in &paths {
            let d = p.len() - 1;
            let want = p[m * d / k];
            let v = if taken[want] { nearest_free(inst, want, &taken) } else { want };
            taken[v] = true;
            cfg.push(v);
        }
        configs.push(cfg);
    }
    configs.push(inst.goals.clone());
    Ok(configs
        .windows(2)
        .map(|w| DiscreteInstance::new(inst.grid.clone(), w[0].clone(), w[1].clone()).expect("distinct waypoints"))
        .collect())
}

fn nearest_free(inst: &DiscreteInstance, from: usize, taken: &[bool]) -> usize {
    let g = &inst.grid;
    let mut seen = vec![false; g.vertex_count()];
    let mut frontier = vec![from];
    seen[from] = true;
    while !frontier.is_empty() {
        let mut free: Vec<usize> = frontier.iter().copied().filter(|&v| !taken[v]).collect();
        if !free.is_empty() {
            free.sort_unstable();
            return free[0];
        }
        let mut next = VecDeque::new();
        for &v in &frontier {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    next.push_back(w);
                }
            }
        }
        frontier = next.into_iter().collect();
    }
    panic!("more robots than vertices")
}

/// Solves the `k` sub-instances in order and concatenates their plans.
pub fn solve_split(inst: &DiscreteInstance, k: usize, backend: &Backend) -> Result<(DiscretePlan, SolveReport), TriIlpError> {
    if k <= 1 {
        return solve_triilp(inst, backend);
    }
    let clock = Instant::now();
    let under = underestimated_makespan(inst)?;
    let mut plan = DiscretePlan::stationary(inst.starts.clone());
    let mut iterations = 0;
    for sub in split_k_way(inst, k)? {
        let (p, r) = solve_triilp(&sub, backend)?;
        iterations += r.iterations;
        plan.extend(&p);
    }
    let makespan = plan.makespan();
    Ok((
        plan,
        SolveReport {
            makespan,
            underestimate: under,
            optimality_ratio: ratio(makespan, under),
            wall_time: clock.elapsed(),
            iterations,
            split_k: k,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, build_workspace};
    use crate::ilp_core::ExhaustiveLimits;
    use crate::plan::check_plan;
    use std::sync::Arc;

    fn grid() -> Arc<crate::geometry::TriGrid> {
        Arc::new(build_grid(&build_workspace(2, 3).unwrap()))
    }

    #[test]
    fn stationary_instance() {
        let inst = DiscreteInstance::new(grid(), vec![2, 7], vec![2, 7]).unwrap();
        assert_eq!(underestimated_makespan(&inst).unwrap(), 0);
        let (plan, rep) = solve_triilp(&inst, &Backend::Exhaustive(ExhaustiveLimits::default())).unwrap();
        assert_eq!(plan.makespan(), 0);
        assert_eq!(rep.optimality_ratio, 1.0);
    }

    #[test]
    fn single_robot_uses_shortest_path() {
        let g = grid();
        let inst = DiscreteInstance::new(g.clone(), vec![0], vec![g.vertex_count() - 1]).unwrap();
        let (plan, rep) = solve_triilp(&inst, &Backend::Exhaustive(ExhaustiveLimits::default())).unwrap();
        assert_eq!(rep.makespan, rep.underestimate);
        check_plan(&inst, &plan).unwrap();
    }

    #[test]
    fn midpoint_waypoints() {
        let g = grid();
        let inst = DiscreteInstance::new(g.clone(), vec![0], vec![g.vertex_count() - 1]).unwrap();
        let subs = split_k_way(&inst, 2).unwrap();
        let p = shortest_path(&inst, 0, g.vertex_count() - 1);
        assert_eq!(subs[0].goals[0], p[(p.len() - 1) / 2]);
        assert_eq!(subs[0].goals, subs[1].starts);
    }

    #[test]
    fn waypoint_conflicts_are_relocated() {
        let g = grid();
        let (a, b) = g.edges()[3];
        // both robots pass the same vertex halfway
        let inst = DiscreteInstance::new(g.clone(), vec![a, b], vec![b, a]).unwrap();
        let subs = split_k_way(&inst, 3).unwrap();
        for s in &subs {
            assert_ne!(s.starts[0], s.starts[1]);
        }
    }
}
