//! Seeded instance generators.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::discretizer::ContinuousInstance;
use crate::geometry::{TriGrid, Vec2, Workspace, SEPARATION, SQRT_3};
use crate::plan::DiscreteInstance;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("{wanted} robots do not fit ({available} places)")]
    TooMany { wanted: usize, available: usize },
    #[error("could not place {wanted} robots after {attempts} attempts")]
    Saturated { wanted: usize, attempts: usize },
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distinct random start and goal vertices for `n` robots.
pub fn random_discrete(grid: Arc<TriGrid>, n: usize, seed: u64) -> Result<DiscreteInstance, GenError> {
    let nv = grid.vertex_count();
    if n > nv {
        return Err(GenError::TooMany { wanted: n, available: nv });
    }
    let mut r = rng(seed);
    let mut all: Vec<usize> = (0..nv).collect();
    all.shuffle(&mut r);
    let starts = all[..n].to_vec();
    all.shuffle(&mut r);
    let goals = all[..n].to_vec();
    Ok(DiscreteInstance::new(grid, starts, goals).expect("distinct vertices"))
}

/// Every vertex occupied; goals are a random permutation of the starts.
pub fn full_occupancy(grid: Arc<TriGrid>, seed: u64) -> DiscreteInstance {
    let nv = grid.vertex_count();
    let mut goals: Vec<usize> = (0..nv).collect();
    goals.shuffle(&mut rng(seed));
    DiscreteInstance::new(grid, (0..nv).collect(), goals).expect("permutation")
}

/// Uniform random points at pairwise distance above `8/3`, by rejection sampling.
pub fn random_points(ws: &Workspace, n: usize, r: &mut ChaCha8Rng) -> Result<Vec<Vec2>, GenError> {
    const ATTEMPTS: usize = 200_000;
    let mut pts: Vec<Vec2> = Vec::with_capacity(n);
    let mut attempts = 0;
    while pts.len() < n {
        attempts += 1;
        if attempts > ATTEMPTS {
            return Err(GenError::Saturated { wanted: n, attempts: ATTEMPTS });
        }
        let p = Vec2::new(r.random_range(1.0..=ws.width - 1.0), r.random_range(1.0..=ws.height - 1.0));
        if pts.iter().all(|q| q.dist(p) > SEPARATION) {
            pts.push(p);
        }
    }
    Ok(pts)
}

pub fn random_continuous(ws: &Workspace, n: usize, seed: u64) -> Result<ContinuousInstance, GenError> {
    let mut r = rng(seed);
    let starts = random_points(ws, n, &mut r)?;
    let goals = random_points(ws, n, &mut r)?;
    Ok(ContinuousInstance { workspace: *ws, starts, goals })
}

/// Hexagonal packing at pitch `pitch` anchored at `(1, 1)`, row by row.
pub fn packing_points(ws: &Workspace, pitch: f64) -> Vec<Vec2> {
    let row_gap = pitch * SQRT_3 / 2.0;
    let mut pts = Vec::new();
    let mut row = 0;
    loop {
        let y = 1.0 + row as f64 * row_gap;
        if y > ws.height - 1.0 {
            break;
        }
        let mut x = 1.0 + if row % 2 == 1 { pitch / 2.0 } else { 0.0 };
        while x <= ws.width - 1.0 {
            pts.push(Vec2::new(x, y));
            x += pitch;
        }
        row += 1;
    }
    pts
}

/// Densely packed discs: the first `count` packing sites (all if `None`) as
/// starts, and a random relabeling of them as goals. With `strict` the pitch
/// exceeds 8/3 by `1e-6` so the instance is admissible.
pub fn dense_continuous(ws: &Workspace, count: Option<usize>, strict: bool, seed: u64) -> Result<ContinuousInstance, GenError> {
    let pitch = if strict { SEPARATION + 1e-6 } else { SEPARATION };
    let mut pts = packing_points(ws, pitch);
    if let Some(c) = count {
        if c > pts.len() {
            return Err(GenError::TooMany { wanted: c, available: pts.len() });
        }
        pts.truncate(c);
    }
    let mut goals = pts.clone();
    goals.shuffle(&mut rng(seed));
    Ok(ContinuousInstance { workspace: *ws, starts: pts, goals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretizer::validate_separation;
    use crate::geometry::{build_grid, build_workspace};

    #[test]
    fn generators_are_seeded() {
        let ws = build_workspace(3, 4).unwrap();
        assert_eq!(random_continuous(&ws, 5, 3).unwrap(), random_continuous(&ws, 5, 3).unwrap());
        let g = Arc::new(build_grid(&ws));
        assert_eq!(random_discrete(g.clone(), 4, 9).unwrap().goals, random_discrete(g, 4, 9).unwrap().goals);
    }

    #[test]
    fn generated_instances_are_admissible() {
        let ws = build_workspace(3, 5).unwrap();
        for seed in 0..20 {
            assert!(validate_separation(&random_continuous(&ws, 6, seed).unwrap()).is_admissible());
        }
        let dense = dense_continuous(&ws, None, true, 1).unwrap();
        assert!(dense.robot_count() >= 20);
        assert!(validate_separation(&dense).is_admissible());
        let exact = dense_continuous(&ws, None, false, 1).unwrap();
        assert!(!validate_separation(&exact).is_admissible());
    }
}
