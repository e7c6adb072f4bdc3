//! Discretize, plan, synthesize and validate one continuous instance.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use oldr::discretizer::{discretize, ContinuousInstance, DiscretizeError};
use oldr::geometry::{build_grid, TriGrid};
use oldr::ilp_core::Backend;
use oldr::paft_planner::{isag, paft};
use oldr::plan::DiscretePlan;
use oldr::triilp_solver::{ratio, solve_split, solve_triilp, underestimated_makespan, TriIlpError};
use oldr::validator::{synthesize, validate, ContinuousPlan, SynthesisError, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Triilp,
    TriilpSplit(usize),
    Paft,
    Isag,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Triilp => write!(f, "triilp"),
            Method::TriilpSplit(k) => write!(f, "triilp-split-{k}"),
            Method::Paft => write!(f, "paft"),
            Method::Isag => write!(f, "isag"),
        }
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "triilp" => Ok(Method::Triilp),
            "paft" => Ok(Method::Paft),
            "isag" => Ok(Method::Isag),
            "triilp-split-k" => Ok(Method::TriilpSplit(2)),
            _ => s
                .strip_prefix("triilp-split-")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .map(Method::TriilpSplit)
                .ok_or_else(|| format!("unknown method `{s}` (triilp, triilp-split-K, paft, isag)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Inadmissible(#[from] DiscretizeError),
    #[error("solver failed: {0}")]
    Solver(#[from] TriIlpError),
    #[error("cannot build trajectories: {0}")]
    Synthesis(#[from] SynthesisError),
    #[error("plan fails validation: {} clearance violations, min clearance {:.9}, boundary ok {}, max speed {:.9}",
        .0.violation_count, .0.min_pair_clearance, .0.boundary_ok, .0.max_speed)]
    Validation(Box<ValidationReport>),
}

impl SolveError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            SolveError::Inadmissible(_) => 3,
            SolveError::Solver(_) | SolveError::Synthesis(_) => 4,
            SolveError::Validation(_) => 5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub method: Method,
    pub discrete: DiscretePlan,
    pub continuous: ContinuousPlan,
    pub validation: ValidationReport,
    pub makespan: usize,
    pub underestimate: usize,
    pub ratio: f64,
    pub wall_time: Duration,
}

impl SolveOutcome {
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("method", self.method.to_string()),
            ("robots", self.discrete.steps[0].len().to_string()),
            ("makespan_steps", self.makespan.to_string()),
            ("underestimate_steps", self.underestimate.to_string()),
            ("ratio", format!("{:.6}", self.ratio)),
            ("continuous_makespan", format!("{:.6}", self.continuous.makespan)),
            ("snap_in", format!("{:.6}", self.continuous.phases.snap_in)),
            ("grid_phase", format!("{:.6}", self.continuous.phases.grid)),
            ("snap_out", format!("{:.6}", self.continuous.phases.snap_out)),
            ("min_clearance", format!("{:.9}", self.validation.min_pair_clearance)),
            ("max_speed", format!("{:.9}", self.validation.max_speed)),
            ("wall_time_s", format!("{:.6}", self.wall_time.as_secs_f64())),
        ]
    }
}

pub fn solve_instance(inst: &ContinuousInstance, method: Method, backend: &Backend) -> Result<SolveOutcome, SolveError> {
    let grid: Arc<TriGrid> = Arc::new(build_grid(&inst.workspace));
    let (dinst, start_snap, goal_snap) = discretize(inst, grid.clone())?;
    let clock = Instant::now();
    let underestimate = underestimated_makespan(&dinst)?;
    let discrete = match method {
        Method::Triilp => solve_triilp(&dinst, backend)?.0,
        Method::TriilpSplit(k) => solve_split(&dinst, k, backend)?.0,
        Method::Paft => paft(&dinst).0,
        Method::Isag => isag(&dinst),
    };
    let wall_time = clock.elapsed();
    let continuous = synthesize(&grid, &discrete, &start_snap, &goal_snap)?;
    let validation = validate(&continuous, &inst.workspace);
    if !validation.is_valid() {
        return Err(SolveError::Validation(Box::new(validation)));
    }
    let makespan = discrete.makespan();
    Ok(SolveOutcome {
        method,
        discrete,
        continuous,
        validation,
        makespan,
        underestimate,
        ratio: ratio(makespan, underestimate),
        wall_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Triilp, Method::TriilpSplit(3), Method::Paft, Method::Isag] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert_eq!("triilp-split-k".parse::<Method>().unwrap(), Method::TriilpSplit(2));
        assert!("bogus".parse::<Method>().is_err());
    }
}
