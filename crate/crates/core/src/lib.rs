//! Labeled disc routing on a triangular grid.
//!
//! Unit discs in a rectangle are snapped to a triangular lattice, routed on the
//! lattice by an integer program or by swap-based planners, and the result is
//! lifted back to continuous time and checked for collisions.

pub mod geometry;
pub mod discretizer;
pub mod plan;
pub mod separation_prover;
pub mod ilp_core;
pub mod triilp_solver;
pub mod instance_gen;
pub mod paft_planner;
pub mod validator;
