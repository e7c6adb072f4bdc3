//! Applies swap rounds, line sorts and cycle rotations to a fully occupied grid
//! and records every intermediate configuration.

use std::sync::Arc;

use crate::geometry::TriGrid;

use super::swap::{SwapLibrary, SwapSchedule};

pub struct Executor<'g> {
    pub grid: &'g TriGrid,
    lib: SwapLibrary<'g>,
    occupant: Vec<usize>,
    position: Vec<usize>,
    trace: Vec<Vec<usize>>,
    pub swap_rounds: usize,
}

/// A path of vertices and the target index of the disc currently on each of them.
pub type LineSort = (Vec<usize>, Vec<usize>);

impl<'g> Executor<'g> {
    /// `position[d]` is the vertex of disc `d`; every vertex must hold exactly one disc.
    pub fn new(grid: &'g TriGrid, position: Vec<usize>) -> Self {
        let mut occupant = vec![usize::MAX; grid.vertex_count()];
        for (d, &v) in position.iter().enumerate() {
            assert_eq!(occupant[v], usize::MAX, "vertex {v} holds two discs");
            occupant[v] = d;
        }
        assert!(occupant.iter().all(|&d| d != usize::MAX), "grid is not fully occupied");
        Executor { grid, lib: SwapLibrary::new(grid), trace: vec![position.clone()], occupant, position, swap_rounds: 0 }
    }

    pub fn position(&self, disc: usize) -> usize {
        self.position[disc]
    }
    pub fn positions(&self) -> &[usize] {
        &self.position
    }
    pub fn occupant(&self, v: usize) -> usize {
        self.occupant[v]
    }
    pub fn trace(&self) -> &[Vec<usize>] {
        &self.trace
    }
    pub fn into_trace(self) -> Vec<Vec<usize>> {
        self.trace
    }

    /// One synchronous step moving the disc on each `from` to its `to`.
    pub fn apply_moves(&mut self, moves: &[(usize, usize)]) {
        if moves.is_empty() {
            return;
        }
        let discs: Vec<usize> = moves.iter().map(|&(f, _)| self.occupant[f]).collect();
        for (&(_, t), &d) in moves.iter().zip(&discs) {
            self.position[d] = t;
        }
        for (&(_, t), &d) in moves.iter().zip(&discs) {
            self.occupant[t] = d;
        }
        self.trace.push(self.position.clone());
    }

    /// Transposes the discs of each vertex pair. Pairs must be disjoint; swaps
    /// whose regions overlap are serialized by greedy coloring.
    pub fn execute_round(&mut self, pairs: &[(usize, usize)]) {
        if pairs.is_empty() {
            return;
        }
        self.swap_rounds += 1;
        let scheds: Vec<Arc<SwapSchedule>> = pairs
            .iter()
            .map(|&(a, b)| self.lib.schedule(a, b).expect("every grid edge has a swap region"))
            .collect();
        let mut classes: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
        for (k, s) in scheds.iter().enumerate() {
            let slot = classes.iter().position(|(used, _)| s.region.iter().all(|&v| !used[v]));
            let idx = match slot {
                Some(i) => i,
                None => {
                    classes.push((vec![false; self.grid.vertex_count()], Vec::new()));
                    classes.len() - 1
                }
            };
            for &v in &s.region {
                classes[idx].0[v] = true;
            }
            classes[idx].1.push(k);
        }
        for (_, members) in classes {
            let len = members.iter().map(|&k| scheds[k].len()).max().unwrap_or(0);
            for step in 0..len {
                let moves: Vec<(usize, usize)> = members
                    .iter()
                    .filter_map(|&k| scheds[k].steps.get(step))
                    .flatten()
                    .copied()
                    .collect();
                self.apply_moves(&moves);
            }
        }
    }

    /// Odd-even transposition sort along every line at once.
    pub fn sort_lines(&mut self, sorts: &[LineSort]) {
        let mut keys: Vec<Vec<usize>> = sorts.iter().map(|(_, k)| k.clone()).collect();
        let sorted = |keys: &Vec<Vec<usize>>| keys.iter().all(|k| k.windows(2).all(|w| w[0] <= w[1]));
        let mut round = 0;
        while !sorted(&keys) {
            let mut pairs = Vec::new();
            for ((line, _), k) in sorts.iter().zip(keys.iter_mut()) {
                let mut i = round % 2;
                while i + 1 < line.len() {
                    if k[i] > k[i + 1] {
                        k.swap(i, i + 1);
                        pairs.push((line[i], line[i + 1]));
                    }
                    i += 2;
                }
            }
            self.execute_round(&pairs);
            round += 1;
        }
    }

    /// Rotates every disc of each closed walk one vertex forward, `steps` times.
    pub fn rotate_cycles(&mut self, cycles: &[Vec<usize>], steps: usize) {
        let moves: Vec<(usize, usize)> = cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()])))
            .collect();
        for _ in 0..steps {
            self.apply_moves(&moves);
        }
    }
}
