//! Discrete instances on the grid and synchronous step plans.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::TriGrid;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("{starts} starts but {goals} goals")]
    CountMismatch { starts: usize, goals: usize },
    #[error("vertex {0} is not on the grid")]
    UnknownVertex(usize),
    #[error("robots {0} and {1} share a start vertex")]
    SharedStart(usize, usize),
    #[error("robots {0} and {1} share a goal vertex")]
    SharedGoal(usize, usize),
}

/// Labeled robots on distinct grid vertices with distinct goals.
#[derive(Clone, Debug)]
pub struct DiscreteInstance {
    pub grid: Arc<TriGrid>,
    pub starts: Vec<usize>,
    pub goals: Vec<usize>,
}

impl DiscreteInstance {
    pub fn new(grid: Arc<TriGrid>, starts: Vec<usize>, goals: Vec<usize>) -> Result<Self, InstanceError> {
        if starts.len() != goals.len() {
            return Err(InstanceError::CountMismatch { starts: starts.len(), goals: goals.len() });
        }
        let nv = grid.vertex_count();
        for (seq, shared) in [(&starts, 0), (&goals, 1)] {
            let mut owner = vec![usize::MAX; nv];
            for (r, &v) in seq.iter().enumerate() {
                if v >= nv {
                    return Err(InstanceError::UnknownVertex(v));
                }
                if owner[v] != usize::MAX {
                    return Err(if shared == 0 {
                        InstanceError::SharedStart(owner[v], r)
                    } else {
                        InstanceError::SharedGoal(owner[v], r)
                    });
                }
                owner[v] = r;
            }
        }
        Ok(DiscreteInstance { grid, starts, goals })
    }

    pub fn robot_count(&self) -> usize {
        self.starts.len()
    }
}

/// Vertex of every robot at every step; `steps[0]` is the start configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretePlan {
    pub steps: Vec<Vec<usize>>,
}

impl DiscretePlan {
    pub fn stationary(config: Vec<usize>) -> Self {
        DiscretePlan { steps: vec![config] }
    }
    pub fn makespan(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }
    pub fn last(&self) -> &[usize] {
        self.steps.last().expect("plan has a start configuration")
    }
    /// Appends `other`, whose first configuration must equal this plan's last.
    pub fn extend(&mut self, other: &DiscretePlan) {
        assert_eq!(self.last(), &other.steps[0][..], "plans do not chain");
        self.steps.extend(other.steps.iter().skip(1).cloned());
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum StepViolation {
    #[error("robot {robot} jumps from {from} to non-adjacent {to}")]
    NotAdjacent { robot: usize, from: usize, to: usize },
    #[error("robots {0} and {1} occupy the same vertex")]
    SameVertex(usize, usize),
    #[error("robots {0} and {1} swap along an edge")]
    HeadOn(usize, usize),
    #[error("robots {0} and {1} move inside one triangle")]
    SharedTriangle(usize, usize),
}

/// Checks one synchronous step against the discrete motion rules.
pub fn check_step(grid: &TriGrid, from: &[usize], to: &[usize]) -> Result<(), StepViolation> {
    let mut at: HashMap<usize, usize> = HashMap::with_capacity(to.len());
    for (r, (&a, &b)) in from.iter().zip(to).enumerate() {
        if a != b && !grid.is_adjacent(a, b) {
            return Err(StepViolation::NotAdjacent { robot: r, from: a, to: b });
        }
        if let Some(o) = at.insert(b, r) {
            return Err(StepViolation::SameVertex(o, r));
        }
    }
    let mut origin: HashMap<usize, usize> = HashMap::with_capacity(from.len());
    for (r, &a) in from.iter().enumerate() {
        origin.insert(a, r);
    }
    let mut tri: HashMap<[usize; 3], usize> = HashMap::new();
    for (r, (&a, &b)) in from.iter().zip(to).enumerate() {
        if a == b {
            continue;
        }
        if let Some(&o) = origin.get(&b) {
            if o != r && to[o] == a {
                return Err(StepViolation::HeadOn(o.min(r), o.max(r)));
            }
        }
        for c in grid.apexes(a, b) {
            let mut key = [a, b, c];
            key.sort_unstable();
            if let Some(o) = tri.insert(key, r) {
                return Err(StepViolation::SharedTriangle(o, r));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("plan is empty")]
    Empty,
    #[error("step {step}: configuration has {found} robots, expected {expected}")]
    WrongArity { step: usize, found: usize, expected: usize },
    #[error("plan does not start at the start configuration")]
    WrongStart,
    #[error("plan does not end at the goal configuration")]
    WrongGoal,
    #[error("step {step}: {violation}")]
    Step { step: usize, violation: StepViolation },
}

/// Checks that a plan connects the instance's starts and goals by legal steps.
pub fn check_plan(inst: &DiscreteInstance, plan: &DiscretePlan) -> Result<(), PlanError> {
    let n = inst.robot_count();
    if plan.steps.is_empty() {
        return Err(PlanError::Empty);
    }
    for (step, cfg) in plan.steps.iter().enumerate() {
        if cfg.len() != n {
            return Err(PlanError::WrongArity { step, found: cfg.len(), expected: n });
        }
    }
    if plan.steps[0] != inst.starts {
        return Err(PlanError::WrongStart);
    }
    if *plan.last() != inst.goals[..] {
        return Err(PlanError::WrongGoal);
    }
    for (t, w) in plan.steps.windows(2).enumerate() {
        check_step(&inst.grid, &w[0], &w[1]).map_err(|violation| PlanError::Step { step: t, violation })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, build_workspace};

    fn grid() -> Arc<TriGrid> {
        Arc::new(build_grid(&build_workspace(2, 3).unwrap()))
    }

    #[test]
    fn instance_rejects_duplicates() {
        let g = grid();
        assert_eq!(
            DiscreteInstance::new(g.clone(), vec![0, 0], vec![1, 2]).unwrap_err(),
            InstanceError::SharedStart(0, 1)
        );
        assert_eq!(
            DiscreteInstance::new(g.clone(), vec![0, 1], vec![2, 2]).unwrap_err(),
            InstanceError::SharedGoal(0, 1)
        );
        assert!(DiscreteInstance::new(g, vec![0], vec![0]).is_ok());
    }

    #[test]
    fn step_rules() {
        let g = grid();
        let v = 8;
        let nb = g.neighbors(v).to_vec();
        let (a, b) = (nb[0], nb[1]);
        // head-on swap
        assert!(matches!(check_step(&g, &[v, a], &[a, v]), Err(StepViolation::HeadOn(0, 1))));
        // chase around a triangle corner
        let c = g.apexes(v, a)[0];
        assert!(matches!(check_step(&g, &[v, a], &[a, c]), Err(StepViolation::SharedTriangle(..))));
        // stationary robot next to a moving one is fine
        assert_eq!(check_step(&g, &[v, b], &[a, b]), Ok(()));
        assert!(matches!(check_step(&g, &[v, b], &[a, a]), Err(StepViolation::SameVertex(0, 1))));
    }

    #[test]
    fn straight_following_is_legal() {
        let g = grid();
        let col = &g.vertical_paths()[1];
        assert_eq!(check_step(&g, &[col[0], col[1]], &[col[1], col[2]]), Ok(()));
    }
}
