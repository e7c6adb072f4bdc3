//! Transposing two adjacent discs by rotating two overlapping hexagons.
//!
//! Two hexagons whose rings share exactly two vertices span ten vertices;
//! rotating either ring by one position is always a legal step, and the
//! rotations generate every permutation of the ten discs. The shortest rotation
//! word realizing a given transposition is found by bidirectional breadth-first
//! search and cached per region shape.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::geometry::{Hexagon, TriGrid};

#[derive(Debug, Error, PartialEq)]
pub enum SwapError {
    #[error("hexagon rings share {0} vertices, expected 2")]
    NotAdjacent(usize),
    #[error("vertices {0} and {1} are not both in the region")]
    OutsideRegion(usize, usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAnEdge(usize, usize),
    #[error("search exhausted after {0} states")]
    Exhausted(usize),
    #[error("no hexagon pair covers edge {0}-{1}")]
    NoRegion(usize, usize),
}

/// Rotation of hexagon 0 or 1 by one position, forward or backward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rotation {
    pub hexagon: u8,
    pub forward: bool,
}

impl Rotation {
    fn inverse(self) -> Rotation {
        Rotation { hexagon: self.hexagon, forward: !self.forward }
    }
}

const ROTATIONS: [Rotation; 4] = [
    Rotation { hexagon: 0, forward: true },
    Rotation { hexagon: 0, forward: false },
    Rotation { hexagon: 1, forward: true },
    Rotation { hexagon: 1, forward: false },
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapSchedule {
    /// Vertices of both rings.
    pub region: Vec<usize>,
    /// Concurrent moves `(from, to)` of every step.
    pub steps: Vec<Vec<(usize, usize)>>,
    /// Where the disc starting at each region vertex ends up.
    pub net_permutation: Vec<(usize, usize)>,
}

impl SwapSchedule {
    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

type State = [u8; 10];

/// Region shape: ring 0 is positions 0..6, ring 1 lists its positions; then the swapped pair.
type ShapeKey = ([u8; 6], u8, u8);

fn apply(state: &State, ring: &[u8; 6], forward: bool) -> State {
    let mut next = *state;
    for i in 0..6 {
        let (src, dst) = if forward { (ring[i], ring[(i + 1) % 6]) } else { (ring[(i + 1) % 6], ring[i]) };
        next[dst as usize] = state[src as usize];
    }
    next
}

fn rings_of(ring1: &[u8; 6]) -> [[u8; 6]; 2] {
    [[0, 1, 2, 3, 4, 5], *ring1]
}

/// Shortest rotation word whose effect transposes positions `pa` and `pb`.
fn search(ring1: &[u8; 6], pa: u8, pb: u8) -> Result<Vec<Rotation>, SwapError> {
    let rings = rings_of(ring1);
    let mut start: State = [0; 10];
    for (i, s) in start.iter_mut().enumerate() {
        *s = i as u8;
    }
    let mut target = start;
    target.swap(pa as usize, pb as usize);
    if start == target {
        return Ok(Vec::new());
    }
    let step = |s: &State, r: Rotation| apply(s, &rings[r.hexagon as usize], r.forward);
    let mut fwd: HashMap<State, Option<(State, Rotation)>> = HashMap::from([(start, None)]);
    let mut bwd: HashMap<State, Option<(State, Rotation)>> = HashMap::from([(target, None)]);
    let mut ff = vec![start];
    let mut bf = vec![target];
    let mut meet = None;
    while meet.is_none() {
        if ff.is_empty() || bf.is_empty() {
            return Err(SwapError::Exhausted(fwd.len() + bwd.len()));
        }
        if ff.len() <= bf.len() {
            let mut next = Vec::new();
            'f: for s in &ff {
                for r in ROTATIONS {
                    let n = step(s, r);
                    if fwd.contains_key(&n) {
                        continue;
                    }
                    fwd.insert(n, Some((*s, r)));
                    if bwd.contains_key(&n) {
                        meet = Some(n);
                        break 'f;
                    }
                    next.push(n);
                }
            }
            ff = next;
        } else {
            let mut next = Vec::new();
            'b: for s in &bf {
                for r in ROTATIONS {
                    let p = step(s, r.inverse());
                    if bwd.contains_key(&p) {
                        continue;
                    }
                    bwd.insert(p, Some((*s, r)));
                    if fwd.contains_key(&p) {
                        meet = Some(p);
                        break 'b;
                    }
                    next.push(p);
                }
            }
            bf = next;
        }
    }
    let m = meet.unwrap();
    let mut head = Vec::new();
    let mut cur = m;
    while let Some((parent, r)) = fwd[&cur] {
        head.push(r);
        cur = parent;
    }
    head.reverse();
    let mut cur = m;
    while let Some((child, r)) = bwd[&cur] {
        head.push(r);
        cur = child;
    }
    Ok(head)
}

fn word_cache() -> &'static Mutex<HashMap<ShapeKey, Arc<Vec<Rotation>>>> {
    static CACHE: OnceLock<Mutex<HashMap<ShapeKey, Arc<Vec<Rotation>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_word(key: ShapeKey) -> Result<Arc<Vec<Rotation>>, SwapError> {
    if let Some(w) = word_cache().lock().unwrap().get(&key) {
        return Ok(w.clone());
    }
    let w = Arc::new(search(&key.0, key.1, key.2)?);
    word_cache().lock().unwrap().insert(key, w.clone());
    Ok(w)
}

/// Schedule transposing the discs on `a` and `b` using the rings of `hex_a` and `hex_b`.
pub fn find_swap_schedule(g: &TriGrid, hex_a: &Hexagon, hex_b: &Hexagon, a: usize, b: usize) -> Result<SwapSchedule, SwapError> {
    let shared = hex_a.cycle.iter().filter(|v| hex_b.cycle.contains(v)).count();
    if shared != 2 {
        return Err(SwapError::NotAdjacent(shared));
    }
    let mut region: Vec<usize> = hex_a.cycle.to_vec();
    let mut ring1 = [0u8; 6];
    for (k, &v) in hex_b.cycle.iter().enumerate() {
        let pos = match region.iter().position(|&u| u == v) {
            Some(p) => p,
            None => {
                region.push(v);
                region.len() - 1
            }
        };
        ring1[k] = pos as u8;
    }
    let pos = |v: usize| region.iter().position(|&u| u == v);
    let (Some(pa), Some(pb)) = (pos(a), pos(b)) else {
        return Err(SwapError::OutsideRegion(a, b));
    };
    if a != b && !g.is_adjacent(a, b) {
        return Err(SwapError::NotAnEdge(a, b));
    }
    let word = cached_word((ring1, pa.min(pb) as u8, pa.max(pb) as u8))?;
    let rings = rings_of(&ring1);
    let steps: Vec<Vec<(usize, usize)>> = word
        .iter()
        .map(|r| {
            let ring = &rings[r.hexagon as usize];
            (0..6)
                .map(|i| {
                    let (s, d) = if r.forward { (ring[i], ring[(i + 1) % 6]) } else { (ring[(i + 1) % 6], ring[i]) };
                    (region[s as usize], region[d as usize])
                })
                .collect()
        })
        .collect();
    let mut at: Vec<usize> = (0..region.len()).collect();
    for r in word.iter() {
        let mut label = vec![0usize; region.len()];
        for (l, &p) in at.iter().enumerate() {
            label[p] = l;
        }
        let next = apply_labels(&label, &rings[r.hexagon as usize], r.forward);
        for (p, &l) in next.iter().enumerate() {
            at[l] = p;
        }
    }
    let net_permutation = (0..region.len()).map(|l| (region[l], region[at[l]])).collect();
    Ok(SwapSchedule { region, steps, net_permutation })
}

fn apply_labels(label: &[usize], ring: &[u8; 6], forward: bool) -> Vec<usize> {
    let mut next = label.to_vec();
    for i in 0..6 {
        let (src, dst) = if forward { (ring[i], ring[(i + 1) % 6]) } else { (ring[(i + 1) % 6], ring[i]) };
        next[dst as usize] = label[src as usize];
    }
    next
}

/// Per-grid choice of the shortest swap region for every edge.
#[derive(Debug)]
pub struct SwapLibrary<'g> {
    grid: &'g TriGrid,
    by_vertex: Vec<Vec<Hexagon>>,
    chosen: HashMap<(usize, usize), Arc<SwapSchedule>>,
}

impl<'g> SwapLibrary<'g> {
    pub fn new(grid: &'g TriGrid) -> Self {
        let mut by_vertex = vec![Vec::new(); grid.vertex_count()];
        for cover in grid.hex_covers() {
            for h in &cover.hexagons {
                for &v in &h.cycle {
                    by_vertex[v].push(h.clone());
                }
            }
        }
        SwapLibrary { grid, by_vertex, chosen: HashMap::new() }
    }

    /// Shortest schedule transposing the discs on adjacent `a` and `b`.
    pub fn schedule(&mut self, a: usize, b: usize) -> Result<Arc<SwapSchedule>, SwapError> {
        let key = (a.min(b), a.max(b));
        if let Some(s) = self.chosen.get(&key) {
            return Ok(s.clone());
        }
        let mut hexes: Vec<&Hexagon> = self.by_vertex[key.0].iter().chain(&self.by_vertex[key.1]).collect();
        hexes.sort_by_key(|h| h.center);
        hexes.dedup_by_key(|h| h.center);
        let mut best: Option<SwapSchedule> = None;
        for h1 in &hexes {
            let mut partners: Vec<&Hexagon> = h1.cycle.iter().flat_map(|&v| &self.by_vertex[v]).collect();
            partners.sort_by_key(|h| h.center);
            partners.dedup_by_key(|h| h.center);
            for h2 in partners {
                if h2.center == h1.center {
                    continue;
                }
                let shared = h1.cycle.iter().filter(|v| h2.cycle.contains(v)).count();
                let covers = |v: usize| h1.contains(v) || h2.contains(v);
                if shared != 2 || !covers(a) || !covers(b) {
                    continue;
                }
                let s = find_swap_schedule(self.grid, h1, h2, key.0, key.1)?;
                let better = match &best {
                    None => true,
                    Some(bs) => (s.len(), &s.region) < (bs.len(), &bs.region),
                };
                if better {
                    best = Some(s);
                }
            }
        }
        let s = Arc::new(best.ok_or(SwapError::NoRegion(a, b))?);
        self.chosen.insert(key, s.clone());
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, build_workspace};
    use crate::plan::check_step;

    fn grid(n1: usize, n2: usize) -> TriGrid {
        build_grid(&build_workspace(n1, n2).unwrap())
    }

    fn run(g: &TriGrid, s: &SwapSchedule) -> Vec<usize> {
        // one disc per region vertex, labelled by region index
        let mut pos = s.region.clone();
        for step in &s.steps {
            let next: Vec<usize> = pos
                .iter()
                .map(|&p| step.iter().find(|m| m.0 == p).map(|m| m.1).unwrap_or(p))
                .collect();
            check_step(g, &pos, &next).unwrap();
            pos = next;
        }
        pos
    }

    #[test]
    fn rotation_and_inverse_cancel() {
        let ring = [6, 7, 8, 9, 0, 1];
        let mut s: State = [0; 10];
        for (i, x) in s.iter_mut().enumerate() {
            *x = i as u8;
        }
        assert_eq!(apply(&apply(&s, &ring, true), &ring, false), s);
    }

    #[test]
    fn trivial_swap_is_empty() {
        let g = grid(2, 3);
        let h = &g.hex_covers().iter().flat_map(|c| &c.hexagons).collect::<Vec<_>>();
        let (h1, h2) = h
            .iter()
            .enumerate()
            .flat_map(|(i, a)| h[i + 1..].iter().map(move |b| (*a, *b)))
            .find(|(a, b)| a.cycle.iter().filter(|v| b.cycle.contains(v)).count() == 2)
            .unwrap();
        let s = find_swap_schedule(&g, h1, h2, h1.cycle[0], h1.cycle[0]).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn every_edge_has_a_legal_transposition() {
        let g = grid(3, 4);
        let mut lib = SwapLibrary::new(&g);
        let mut longest = 0;
        for &(a, b) in g.edges() {
            let s = lib.schedule(a, b).unwrap();
            longest = longest.max(s.len());
            let end = run(&g, &s);
            for (k, &v) in s.region.iter().enumerate() {
                let expect = if v == a { b } else if v == b { a } else { v };
                assert_eq!(end[k], expect, "edge {a}-{b}");
            }
            for &(from, to) in &s.net_permutation {
                let expect = if from == a { b } else if from == b { a } else { from };
                assert_eq!(to, expect);
            }
        }
        assert!(longest <= super::super::SWAP_STEP_BOUND, "longest schedule {longest}");
    }

    #[test]
    fn schedule_length_is_translation_invariant() {
        let g = grid(5, 5);
        let mut lib = SwapLibrary::new(&g);
        let mut by_shape: HashMap<(i64, i64), usize> = HashMap::new();
        for &(a, b) in g.edges() {
            let deep = |v: usize| g.neighbors(v).len() == 6 && g.neighbors(v).iter().all(|&w| g.neighbors(w).len() == 6);
            if !deep(a) || !deep(b) {
                continue;
            }
            let (ca, ma) = g.coord(a);
            let (cb, mb) = g.coord(b);
            let shape = (cb as i64 - ca as i64, mb as i64 - ma as i64);
            let len = lib.schedule(a, b).unwrap().len();
            let e = by_shape.entry(shape).or_insert(len);
            assert_eq!(*e, len, "shape {shape:?}");
        }
    }
}
