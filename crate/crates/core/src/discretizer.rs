//! Continuous instances and their snap onto the grid.
//!
//! Every start and goal moves along a straight segment to its nearest grid
//! vertex. All discs of one snapping phase move synchronously and finish
//! together after `d_max` time units, so no disc exceeds unit speed.

use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{min_linear_distance, TriGrid, Vec2, Workspace, RADIUS, SEPARATION};
use crate::plan::{DiscreteInstance, InstanceError};

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousInstance {
    pub workspace: Workspace,
    pub starts: Vec<Vec2>,
    pub goals: Vec<Vec2>,
}

impl ContinuousInstance {
    pub fn robot_count(&self) -> usize {
        self.starts.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Start,
    Goal,
}

impl std::fmt::Display for Endpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Endpoint::Start => "start",
            Endpoint::Goal => "goal",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairViolation {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryViolation {
    pub robot: usize,
    pub endpoint: Endpoint,
    pub distance: f64,
}

/// All separation and boundary failures of an instance; empty means admissible.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeparationReport {
    pub start_violations: Vec<PairViolation>,
    pub goal_violations: Vec<PairViolation>,
    pub boundary_violations: Vec<BoundaryViolation>,
    pub count_mismatch: Option<(usize, usize)>,
}

impl SeparationReport {
    pub fn is_admissible(&self) -> bool {
        self.start_violations.is_empty()
            && self.goal_violations.is_empty()
            && self.boundary_violations.is_empty()
            && self.count_mismatch.is_none()
    }
}

impl std::fmt::Display for SeparationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some((s, g)) = self.count_mismatch {
            writeln!(f, "{s} starts but {g} goals")?;
        }
        for (label, list) in [("starts", &self.start_violations), ("goals", &self.goal_violations)] {
            for v in list {
                writeln!(f, "{label} {} and {} are {:.9} apart", v.i, v.j, v.distance)?;
            }
        }
        for b in &self.boundary_violations {
            writeln!(f, "{} of robot {} is {:.9} from the boundary", b.endpoint, b.robot, b.distance)?;
        }
        Ok(())
    }
}

fn pair_violations(points: &[Vec2]) -> Vec<PairViolation> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[i].dist(points[j]);
            if d <= SEPARATION {
                out.push(PairViolation { i, j, distance: d });
            }
        }
    }
    out
}

/// Checks pairwise separation strictly greater than 8/3 among starts and among
/// goals, and unit clearance from the workspace boundary.
pub fn validate_separation(inst: &ContinuousInstance) -> SeparationReport {
    let mut report = SeparationReport {
        start_violations: pair_violations(&inst.starts),
        goal_violations: pair_violations(&inst.goals),
        ..Default::default()
    };
    if inst.starts.len() != inst.goals.len() {
        report.count_mismatch = Some((inst.starts.len(), inst.goals.len()));
    }
    for (endpoint, points) in [(Endpoint::Start, &inst.starts), (Endpoint::Goal, &inst.goals)] {
        for (robot, &p) in points.iter().enumerate() {
            let distance = inst.workspace.boundary_distance(p);
            if distance.is_nan() || distance < RADIUS {
                report.boundary_violations.push(BoundaryViolation { robot, endpoint, distance });
            }
        }
    }
    report
}

#[derive(Debug, Error)]
pub enum DiscretizeError {
    #[error("instance is not admissible:\n{0}")]
    Inadmissible(SeparationReport),
    #[error("robots {0} and {1} snap to the same vertex")]
    SnapConflict(usize, usize),
    #[error("snapping would bring robots {i} and {j} to distance {distance}")]
    SnapCollision { i: usize, j: usize, distance: f64 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Straight-line snapping of one endpoint set onto the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapResult {
    pub assignment: Vec<usize>,
    pub max_distance: f64,
    /// Per-robot segment from the continuous point to its vertex.
    pub segments: Vec<(Vec2, Vec2)>,
}

impl SnapResult {
    /// Duration of the synchronized snapping phase.
    pub fn phase_duration(&self) -> f64 {
        self.max_distance
    }
}

/// Smallest pairwise distance reached during a synchronized snap.
pub fn snap_min_distance(snap: &SnapResult) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    let segs = &snap.segments;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let d = min_linear_distance(segs[i].0, segs[i].1, segs[j].0, segs[j].1);
            if best.is_none_or(|b| d < b.2) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

pub fn snap(grid: &TriGrid, points: &[Vec2]) -> Result<SnapResult, DiscretizeError> {
    let mut assignment = Vec::with_capacity(points.len());
    let mut owner = vec![usize::MAX; grid.vertex_count()];
    let mut max_distance: f64 = 0.0;
    let mut segments = Vec::with_capacity(points.len());
    for (r, &p) in points.iter().enumerate() {
        let v = grid.nearest_vertex(p);
        if owner[v] != usize::MAX {
            return Err(DiscretizeError::SnapConflict(owner[v], r));
        }
        owner[v] = r;
        let q = grid.position(v);
        max_distance = max_distance.max(p.dist(q));
        assignment.push(v);
        segments.push((p, q));
    }
    Ok(SnapResult { assignment, max_distance, segments })
}

/// Validates the instance, snaps starts and goals, and checks both snapping
/// phases keep every pair at distance at least 2.
pub fn discretize(
    inst: &ContinuousInstance,
    grid: Arc<TriGrid>,
) -> Result<(DiscreteInstance, SnapResult, SnapResult), DiscretizeError> {
    let report = validate_separation(inst);
    if !report.is_admissible() {
        return Err(DiscretizeError::Inadmissible(report));
    }
    let start_snap = snap(&grid, &inst.starts)?;
    let goal_snap = snap(&grid, &inst.goals)?;
    for s in [&start_snap, &goal_snap] {
        if let Some((i, j, distance)) = snap_min_distance(s) {
            if distance < 2.0 * RADIUS - 1e-9 {
                return Err(DiscretizeError::SnapCollision { i, j, distance });
            }
        }
    }
    let discrete = DiscreteInstance::new(grid, start_snap.assignment.clone(), goal_snap.assignment.clone())?;
    Ok((discrete, start_snap, goal_snap))
}
