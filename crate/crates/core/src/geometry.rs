//! Workspace rectangle and the triangular grid embedded in it.
//!
//! The grid has vertical edges of length `4/sqrt(3)`. Columns sit at
//! `x = 1 + 2c` for `c in 0..=2*n1`; a vertex in column `c` has a half-height
//! index `m` with `y = 1 + m * 2/sqrt(3)`, where odd columns use even `m` in
//! `0..=2*n2` and even columns use odd `m` in `1..2*n2`. Every vertex is at
//! distance at least 1 from the workspace boundary, and vertex ids are assigned
//! row-major (by `m`, then by column).

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;
/// Side length of the lattice triangles.
pub const EDGE_LENGTH: f64 = 4.0 / SQRT_3;
/// Minimum start/goal separation required of admissible instances.
pub const SEPARATION: f64 = 8.0 / 3.0;
/// Circumradius of a lattice triangle; the largest snapping distance.
pub const CIRCUMRADIUS: f64 = 4.0 / 3.0;
/// Disc radius.
pub const RADIUS: f64 = 1.0;
/// Vertical distance between consecutive half-height indices.
pub const HALF_STEP: f64 = 2.0 / SQRT_3;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("workspace needs n1 >= 2 and n2 >= 3, got n1={n1}, n2={n2}")]
    TooSmall { n1: usize, n2: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

/// The rectangle `[0, w] x [0, h]` with `w = 4 n1 + 2` and `h = 4 n2 / sqrt(3) + 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Workspace {
    pub n1: usize,
    pub n2: usize,
    pub width: f64,
    pub height: f64,
}

impl Workspace {
    /// Distance from `p` to the rectangle boundary (negative outside).
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        p.x.min(self.width - p.x).min(p.y).min(self.height - p.y)
    }
}

pub fn build_workspace(n1: usize, n2: usize) -> Result<Workspace, GeometryError> {
    if n1 < 2 || n2 < 3 {
        return Err(GeometryError::TooSmall { n1, n2 });
    }
    Ok(Workspace {
        n1,
        n2,
        width: 4.0 * n1 as f64 + 2.0,
        height: 4.0 * n2 as f64 / SQRT_3 + 2.0,
    })
}

/// Best-known density of a disc packing with pairwise separation 8/3.
pub fn density_limit() -> f64 {
    (PI / 2.0) / (0.5 * SEPARATION * EDGE_LENGTH)
}

/// One hexagon: an interior vertex and its six neighbours in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hexagon {
    pub center: usize,
    pub cycle: [usize; 6],
}

impl Hexagon {
    pub fn contains(&self, v: usize) -> bool {
        self.cycle.contains(&v)
    }
}

/// The hexagons whose centers share one of the three lattice colors.
#[derive(Clone, Debug)]
pub struct HexCover {
    pub color: u8,
    pub hexagons: Vec<Hexagon>,
}

#[derive(Clone, Debug)]
pub struct TriGrid {
    pub workspace: Workspace,
    positions: Vec<Vec2>,
    coords: Vec<(usize, usize)>,
    slot: Vec<Vec<Option<usize>>>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    triangles: Vec<[usize; 3]>,
    colors: Vec<u8>,
    covers: Vec<HexCover>,
    vertical: Vec<Vec<usize>>,
    horizontal: Vec<Vec<usize>>,
}

pub fn build_grid(ws: &Workspace) -> TriGrid {
    let ncols = 2 * ws.n1 + 1;
    let mmax = 2 * ws.n2;
    let mut cells = Vec::new();
    for m in 0..=mmax {
        for c in 0..ncols {
            let valid = if c % 2 == 1 { m % 2 == 0 } else { m % 2 == 1 && m < mmax };
            if valid {
                cells.push((c, m));
            }
        }
    }
    let mut slot = vec![vec![None; mmax + 1]; ncols];
    let mut positions = Vec::with_capacity(cells.len());
    for (id, &(c, m)) in cells.iter().enumerate() {
        slot[c][m] = Some(id);
        positions.push(Vec2::new(1.0 + 2.0 * c as f64, 1.0 + m as f64 * HALF_STEP));
    }
    let lookup = |c: i64, m: i64| -> Option<usize> {
        if c < 0 || m < 0 || c >= ncols as i64 || m > mmax as i64 {
            None
        } else {
            slot[c as usize][m as usize]
        }
    };
    let mut adjacency = vec![Vec::new(); cells.len()];
    for (id, &(c, m)) in cells.iter().enumerate() {
        let (c, m) = (c as i64, m as i64);
        for (dc, dm) in [(0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1)] {
            if let Some(n) = lookup(c + dc, m + dm) {
                adjacency[id].push(n);
            }
        }
        adjacency[id].sort_unstable();
    }
    let mut edges = Vec::new();
    let mut triangles = Vec::new();
    for (a, nbrs) in adjacency.iter().enumerate() {
        for &b in nbrs.iter().filter(|&&b| b > a) {
            edges.push((a, b));
            for &c in adjacency[b].iter().filter(|&&c| c > b) {
                if adjacency[a].binary_search(&c).is_ok() {
                    triangles.push([a, b, c]);
                }
            }
        }
    }
    let colors: Vec<u8> = cells
        .iter()
        .map(|&(c, m)| {
            let a = c as i64;
            let b = (m as i64 - a - 1).div_euclid(2);
            (a + 2 * b).rem_euclid(3) as u8
        })
        .collect();
    let mut covers: Vec<HexCover> = (0..3).map(|k| HexCover { color: k, hexagons: Vec::new() }).collect();
    for (id, nbrs) in adjacency.iter().enumerate() {
        if nbrs.len() == 6 {
            let p = positions[id];
            let mut ring: Vec<usize> = nbrs.clone();
            ring.sort_by(|&u, &v| {
                let au = angle_from(positions[u] - p);
                let av = angle_from(positions[v] - p);
                au.partial_cmp(&av).unwrap()
            });
            let cycle = [ring[0], ring[1], ring[2], ring[3], ring[4], ring[5]];
            covers[colors[id] as usize].hexagons.push(Hexagon { center: id, cycle });
        }
    }
    let vertical = (0..ncols)
        .map(|c| (0..=mmax).filter_map(|m| slot[c][m]).collect())
        .collect();
    let horizontal = (0..ws.n2)
        .map(|j| {
            (0..ncols)
                .map(|c| {
                    let m = if c % 2 == 0 { 2 * j + 1 } else { 2 * j + 2 };
                    slot[c][m].expect("zigzag vertex")
                })
                .collect()
        })
        .collect();
    TriGrid {
        workspace: *ws,
        positions,
        coords: cells,
        slot,
        adjacency,
        edges,
        triangles,
        colors,
        covers,
        vertical,
        horizontal,
    }
}

fn angle_from(d: Vec2) -> f64 {
    let a = d.y.atan2(d.x);
    if a < -1e-12 {
        a + 2.0 * PI
    } else {
        a.max(0.0)
    }
}

impl TriGrid {
    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }
    pub fn position(&self, v: usize) -> Vec2 {
        self.positions[v]
    }
    pub fn positions(&self) -> &[Vec2] {
        &self.positions
    }
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }
    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }
    /// Column and half-height index of a vertex.
    pub fn coord(&self, v: usize) -> (usize, usize) {
        self.coords[v]
    }
    pub fn vertex_at(&self, col: usize, m: usize) -> Option<usize> {
        self.slot.get(col).and_then(|s| s.get(m)).copied().flatten()
    }
    pub fn column_count(&self) -> usize {
        self.slot.len()
    }
    /// Lattice color of a vertex; adjacent vertices always differ.
    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }
    pub fn hex_covers(&self) -> &[HexCover] {
        &self.covers
    }
    pub fn hexagon_at(&self, center: usize) -> Option<&Hexagon> {
        let k = self.colors[center] as usize;
        self.covers[k].hexagons.iter().find(|h| h.center == center)
    }
    /// One bottom-to-top path per column.
    pub fn vertical_paths(&self) -> &[Vec<usize>] {
        &self.vertical
    }
    /// Left-to-right zigzag rows; these miss the bottom vertex of every odd column.
    pub fn horizontal_paths(&self) -> &[Vec<usize>] {
        &self.horizontal
    }

    /// Third vertices of the (at most two) triangles on edge `a`-`b`.
    pub fn apexes(&self, a: usize, b: usize) -> Vec<usize> {
        self.adjacency[a]
            .iter()
            .copied()
            .filter(|&c| c != b && self.is_adjacent(b, c))
            .collect()
    }

    /// Nearest grid vertex to `p`, ties broken by lowest id.
    pub fn nearest_vertex(&self, p: Vec2) -> usize {
        let ncols = self.column_count() as i64;
        let mmax = 2 * self.workspace.n2 as i64;
        let cf = ((p.x - 1.0) / 2.0).floor() as i64;
        let mf = (p.y - 1.0) / HALF_STEP;
        let mut best: Option<(f64, usize)> = None;
        for c in (cf - 1)..=(cf + 2) {
            if c < 0 || c >= ncols {
                continue;
            }
            let parity = if c % 2 == 1 { 0 } else { 1 };
            let hi = if parity == 0 { mmax } else { mmax - 1 };
            let base = mf.floor() as i64;
            for m0 in (base - 2)..=(base + 3) {
                let m = m0.clamp(parity, hi);
                if m.rem_euclid(2) != parity {
                    continue;
                }
                if let Some(v) = self.vertex_at(c as usize, m as usize) {
                    let d = self.positions[v].dist(p);
                    if best.is_none_or(|(bd, bv)| d < bd || (d == bd && v < bv)) {
                        best = Some((d, v));
                    }
                }
            }
        }
        best.expect("grid has vertices").1
    }

    /// Hop distances from `src` to every vertex.
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs hop distances, row-major `|V| x |V|`.
    pub fn all_distances(&self) -> DistanceTable {
        let n = self.vertex_count();
        let mut table = Vec::with_capacity(n * n);
        for v in 0..n {
            table.extend(self.distances_from(v));
        }
        DistanceTable { n, table }
    }

    /// Lattice-edge subgraph whose vertices avoid color `k`; every turn in it is 120 degrees.
    pub fn honeycomb_neighbors(&self, k: u8, v: usize) -> impl Iterator<Item = usize> + '_ {
        let ok = self.colors[v] != k;
        self.adjacency[v]
            .iter()
            .copied()
            .filter(move |&w| ok && self.colors[w] != k)
    }
}

/// Minimum distance over `t in [0, 1]` between two points moving linearly
/// from `p0` to `p1` and from `q0` to `q1`.
pub fn min_linear_distance(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> f64 {
    let d0 = p0 - q0;
    let dv = (p1 - p0) - (q1 - q0);
    let vv = dv.dot(dv);
    if vv <= 0.0 {
        return d0.norm();
    }
    let t = (-d0.dot(dv) / vv).clamp(0.0, 1.0);
    (d0 + dv * t).norm()
}

#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    table: Vec<usize>,
}

impl DistanceTable {
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n1: usize, n2: usize) -> TriGrid {
        build_grid(&build_workspace(n1, n2).unwrap())
    }

    #[test]
    fn workspace_dimensions() {
        let ws = build_workspace(2, 3).unwrap();
        assert_eq!(ws.width, 10.0);
        assert!((ws.height - (12.0 / 3f64.sqrt() + 2.0)).abs() < 1e-12);
        assert_eq!(build_workspace(1, 3), Err(GeometryError::TooSmall { n1: 1, n2: 3 }));
        assert_eq!(build_workspace(2, 2), Err(GeometryError::TooSmall { n1: 2, n2: 2 }));
    }

    #[test]
    fn constants() {
        assert!((EDGE_LENGTH - 4.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((density_limit() - 0.5101).abs() < 5e-4);
    }

    #[test]
    fn vertex_counts_and_clearance() {
        for (n1, n2) in [(2, 3), (3, 3), (4, 5), (7, 3)] {
            let g = grid(n1, n2);
            assert_eq!(g.vertex_count(), (2 * n1 + 1) * n2 + n1);
            for v in 0..g.vertex_count() {
                let d = g.workspace.boundary_distance(g.position(v));
                assert!(d >= 1.0 - 1e-12);
                assert!(g.neighbors(v).len() >= 3);
            }
            for &(a, b) in g.edges() {
                assert!((g.position(a).dist(g.position(b)) - EDGE_LENGTH).abs() < 1e-12);
                assert_ne!(g.color(a), g.color(b));
            }
        }
    }

    #[test]
    fn ids_are_row_major() {
        let g = grid(3, 4);
        for v in 1..g.vertex_count() {
            let (c0, m0) = g.coord(v - 1);
            let (c1, m1) = g.coord(v);
            assert!((m0, c0) < (m1, c1));
        }
    }

    #[test]
    fn triangles_are_equilateral() {
        let g = grid(3, 4);
        for t in g.triangles() {
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                assert!(g.is_adjacent(t[i], t[j]));
            }
        }
        for &(a, b) in g.edges() {
            let k = g.apexes(a, b).len();
            assert!(k == 1 || k == 2);
        }
    }

    #[test]
    fn hexagon_covers_cover_every_vertex() {
        for (n1, n2) in [(2, 3), (3, 3), (3, 5), (6, 4)] {
            let g = grid(n1, n2);
            let mut seen = vec![false; g.vertex_count()];
            for cover in g.hex_covers() {
                for h in &cover.hexagons {
                    for (i, &v) in h.cycle.iter().enumerate() {
                        seen[v] = true;
                        assert!(g.is_adjacent(v, h.cycle[(i + 1) % 6]));
                        assert!(g.is_adjacent(v, h.center));
                    }
                }
            }
            assert!(seen.iter().all(|&s| s), "grid ({n1},{n2})");
        }
    }

    #[test]
    fn same_cover_hexagons_have_disjoint_interiors() {
        let g = grid(4, 5);
        for cover in g.hex_covers() {
            let mut used = std::collections::HashSet::new();
            for h in &cover.hexagons {
                for i in 0..6 {
                    let (a, b) = (h.cycle[i], h.cycle[(i + 1) % 6]);
                    let mut t = [h.center, a, b];
                    t.sort_unstable();
                    assert!(used.insert(t));
                }
            }
        }
    }

    #[test]
    fn path_families() {
        let g = grid(3, 4);
        let mut seen = vec![0; g.vertex_count()];
        for p in g.vertical_paths() {
            for w in p.windows(2) {
                assert!(g.is_adjacent(w[0], w[1]));
            }
            for &v in p {
                seen[v] += 1;
            }
        }
        assert!(seen.iter().all(|&s| s == 1));
        let mut hit = vec![false; g.vertex_count()];
        for p in g.horizontal_paths() {
            assert_eq!(p.len(), g.column_count());
            for w in p.windows(2) {
                assert!(g.is_adjacent(w[0], w[1]));
            }
            for &v in p {
                hit[v] = true;
            }
        }
        for v in 0..g.vertex_count() {
            let (c, m) = g.coord(v);
            assert_eq!(hit[v], !(c % 2 == 1 && m == 0));
        }
    }

    #[test]
    fn nearest_vertex_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let g = grid(3, 4);
        let ws = g.workspace;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..20000 {
            let p = Vec2::new(rng.random_range(1.0..ws.width - 1.0), rng.random_range(1.0..ws.height - 1.0));
            let v = g.nearest_vertex(p);
            let best = (0..g.vertex_count())
                .map(|u| g.position(u).dist(p))
                .fold(f64::INFINITY, f64::min);
            assert!((g.position(v).dist(p) - best).abs() < 1e-12);
            worst = worst.max(best);
        }
        assert!(worst <= CIRCUMRADIUS + 1e-12);
    }

    #[test]
    fn grid_is_deterministic() {
        let a = grid(3, 3);
        let b = grid(3, 3);
        assert_eq!(a.positions(), b.positions());
        assert_eq!(a.edges(), b.edges());
    }
}
