//! Exhaustive case sweep bounding how close two snapping discs can get.
//!
//! Disc `i` starts in the fundamental triangle `vox` (apex `v` at a lattice
//! vertex, `o` the centroid of an adjacent lattice triangle, `x` the midpoint
//! of the edge between them) and snaps to `v`. Disc `j` starts at distance
//! 8/3 and snaps to any vertex that can be nearest to it. The triangle is
//! covered by an `eps`-grid of boxes and the circle of radius 8/3 around each
//! box center by annular cells of side about `sqrt(2) eps`; every combination
//! is evaluated with the exact moving-point distance.

use std::f64::consts::PI;
use std::fmt;

use crate::geometry::{min_linear_distance, Vec2, EDGE_LENGTH, SEPARATION};

const CANDIDATE_TOL: f64 = 1e-9;

/// A disc center moving linearly over the normalized time `t in [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MovingDisc {
    pub from: Vec2,
    pub to: Vec2,
}

impl MovingDisc {
    pub fn at(&self, t: f64) -> Vec2 {
        self.from + (self.to - self.from) * t
    }
}

/// Exact minimum center distance of two synchronized linear motions.
pub fn min_pair_distance(a: MovingDisc, b: MovingDisc) -> f64 {
    min_linear_distance(a.from, a.to, b.from, b.to)
}

/// Corners of the fundamental triangle in local lattice coordinates.
pub fn fundamental_triangle() -> [Vec2; 3] {
    let h = EDGE_LENGTH / 2.0;
    [Vec2::new(0.0, 0.0), Vec2::new(2.0 / 3.0, h), Vec2::new(0.0, h)]
}

fn box_hits_triangle(lo: Vec2, hi: Vec2, tri: &[Vec2; 3]) -> bool {
    const TOL: f64 = 1e-12;
    let (tx0, tx1) = tri.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.x), a.1.max(p.x)));
    let (ty0, ty1) = tri.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.y), a.1.max(p.y)));
    if tx1 <= lo.x + TOL || hi.x <= tx0 + TOL || ty1 <= lo.y + TOL || hi.y <= ty0 + TOL {
        return false;
    }
    let corners = [lo, Vec2::new(hi.x, lo.y), hi, Vec2::new(lo.x, hi.y)];
    for k in 0..3 {
        let a = tri[k];
        let b = tri[(k + 1) % 3];
        let normal = Vec2::new(b.y - a.y, a.x - b.x);
        let proj = |p: Vec2| normal.dot(p);
        let (t0, t1) = tri.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, &p| {
            let q = proj(p);
            (acc.0.min(q), acc.1.max(q))
        });
        let (b0, b1) = corners.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, &p| {
            let q = proj(p);
            (acc.0.min(q), acc.1.max(q))
        });
        if t1 <= b0 + TOL || b1 <= t0 + TOL {
            return false;
        }
    }
    true
}

/// Centers of the `eps`-boxes, anchored at the triangle's lower-left bound, that overlap `vox`.
pub fn enumerate_region_boxes(epsilon: f64) -> Vec<Vec2> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let tri = fundamental_triangle();
    let nx = ((2.0 / 3.0) / epsilon).ceil().max(1.0) as usize;
    let ny = ((EDGE_LENGTH / 2.0) / epsilon).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let lo = Vec2::new(ix as f64 * epsilon, iy as f64 * epsilon);
            let hi = lo + Vec2::new(epsilon, epsilon);
            if box_hits_triangle(lo, hi, &tri) {
                out.push(lo + Vec2::new(epsilon / 2.0, epsilon / 2.0));
            }
        }
    }
    out
}

/// Vertices of the infinite local lattice nearest to `p`, within tolerance of the minimum.
pub fn nearest_lattice_vertices(p: Vec2) -> Vec<Vec2> {
    let j0 = (p.x / 2.0).floor() as i64;
    let mut pts = Vec::with_capacity(16);
    for j in (j0 - 1)..=(j0 + 2) {
        let i0 = ((p.y - j as f64 * EDGE_LENGTH / 2.0) / EDGE_LENGTH).floor() as i64;
        for i in (i0 - 1)..=(i0 + 2) {
            pts.push(Vec2::new(2.0 * j as f64, i as f64 * EDGE_LENGTH + j as f64 * EDGE_LENGTH / 2.0));
        }
    }
    let best = pts.iter().map(|q| q.dist(p)).fold(f64::INFINITY, f64::min);
    pts.retain(|q| q.dist(p) <= best + CANDIDATE_TOL);
    pts
}

/// One `s_i` box center against one annulus cell and every vertex `s_j` may snap to.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCase {
    pub s_i: Vec2,
    pub v_i: Vec2,
    pub s_j: Vec2,
    pub v_j_candidates: Vec<Vec2>,
}

/// An annular cell: its representative center, its four corners and its polar extent.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusCell {
    pub center: Vec2,
    pub corners: [Vec2; 4],
    pub radius: (f64, f64),
    pub angle: (f64, f64),
}

pub fn annulus_cell_count(epsilon: f64) -> usize {
    let half = std::f64::consts::SQRT_2 * epsilon / 2.0;
    (2.0 * PI * (SEPARATION + half) / (std::f64::consts::SQRT_2 * epsilon)).ceil() as usize
}

/// Cells covering the annulus `[8/3 - sqrt(2) eps/2, 8/3 + sqrt(2) eps/2]` around `s_i`.
pub fn annulus_cells(s_i: Vec2, epsilon: f64) -> Vec<AnnulusCell> {
    let half = std::f64::consts::SQRT_2 * epsilon / 2.0;
    let (r0, r1) = (SEPARATION - half, SEPARATION + half);
    let n = annulus_cell_count(epsilon);
    let step = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let (a0, a1) = (k as f64 * step, (k + 1) as f64 * step);
            let polar = |r: f64, a: f64| s_i + Vec2::new(a.cos(), a.sin()) * r;
            let mid = (a0 + a1) / 2.0;
            AnnulusCell {
                center: polar(SEPARATION, mid),
                corners: [polar(r0, a0), polar(r1, a0), polar(r1, a1), polar(r0, a1)],
                radius: (r0, r1),
                angle: (a0, a1),
            }
        })
        .collect()
}

fn push_unique(out: &mut Vec<Vec2>, p: Vec2) {
    if !out.iter().any(|q| q.dist(p) < 1e-9) {
        out.push(p);
    }
}

/// Sweep cases for one `s_i`: every cell with the vertices nearest to its corners and center.
/// The apex `v` itself is never a candidate for `s_j`.
pub fn enumerate_annulus_cells(s_i: Vec2, epsilon: f64) -> Vec<SweepCase> {
    let v = Vec2::new(0.0, 0.0);
    annulus_cells(s_i, epsilon)
        .into_iter()
        .map(|cell| {
            let mut cands = Vec::new();
            for p in cell.corners.iter().chain(std::iter::once(&cell.center)) {
                for q in nearest_lattice_vertices(*p) {
                    if q.dist(v) > 1e-9 {
                        push_unique(&mut cands, q);
                    }
                }
            }
            SweepCase { s_i, v_i: v, s_j: cell.center, v_j_candidates: cands }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub epsilon: f64,
    /// Smallest center distance found over all cases.
    pub min_distance: f64,
    /// `min_distance - 2`, the clearance above contact.
    pub min_delta: f64,
    pub worst_case: SweepCase,
    pub worst_v_j: Vec2,
    pub box_count: usize,
    pub cells_per_box: usize,
    pub case_count: usize,
    pub verdict: Verdict,
}

/// Runs the sweep; the verdict passes iff the clearance exceeds `2 eps`.
pub fn verify(epsilon: f64) -> Certificate {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let boxes = enumerate_region_boxes(epsilon);
    let mut best: Option<(f64, SweepCase, Vec2)> = None;
    let mut case_count = 0;
    let mut cells_per_box = 0;
    for &s_i in &boxes {
        let cases = enumerate_annulus_cells(s_i, epsilon);
        cells_per_box = cases.len();
        for case in cases {
            let a = MovingDisc { from: case.s_i, to: case.v_i };
            let mut local: Option<(f64, Vec2)> = None;
            for &v_j in &case.v_j_candidates {
                case_count += 1;
                let d = min_pair_distance(a, MovingDisc { from: case.s_j, to: v_j });
                if local.is_none_or(|(b, _)| d < b) {
                    local = Some((d, v_j));
                }
            }
            if let Some((d, v_j)) = local {
                if best.as_ref().is_none_or(|(b, _, _)| d < *b) {
                    best = Some((d, case, v_j));
                }
            }
        }
    }
    let (min_distance, worst_case, worst_v_j) = best.expect("sweep has cases");
    let min_delta = min_distance - 2.0;
    Certificate {
        epsilon,
        min_distance,
        min_delta,
        worst_case,
        worst_v_j,
        box_count: boxes.len(),
        cells_per_box,
        case_count,
        verdict: if min_delta > 2.0 * epsilon { Verdict::Pass } else { Verdict::Fail },
    }
}

fn fmt_point(p: Vec2) -> String {
    format!("{:.9} {:.9}", p.x, p.y)
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "oldr-certificate 1")?;
        writeln!(f, "epsilon {}", self.epsilon)?;
        writeln!(f, "box_count {}", self.box_count)?;
        writeln!(f, "cells_per_box {}", self.cells_per_box)?;
        writeln!(f, "case_count {}", self.case_count)?;
        writeln!(f, "min_distance {:.9}", self.min_distance)?;
        writeln!(f, "min_delta {}", sig9(self.min_delta))?;
        writeln!(f, "threshold {}", 2.0 * self.epsilon)?;
        writeln!(f, "worst_s_i {}", fmt_point(self.worst_case.s_i))?;
        writeln!(f, "worst_v_i {}", fmt_point(self.worst_case.v_i))?;
        writeln!(f, "worst_s_j {}", fmt_point(self.worst_case.s_j))?;
        writeln!(f, "worst_v_j {}", fmt_point(self.worst_v_j))?;
        writeln!(f, "verdict {}", self.verdict)
    }
}

/// Formats with nine significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc(a: (f64, f64), b: (f64, f64)) -> MovingDisc {
        MovingDisc { from: Vec2::new(a.0, a.1), to: Vec2::new(b.0, b.1) }
    }

    #[test]
    fn head_on_stop_at_contact() {
        assert!((min_pair_distance(disc((0., 0.), (1., 0.)), disc((4., 0.), (3., 0.))) - 2.0).abs() < 1e-12);
        let s = disc((0., 0.), (0., 0.));
        let t = disc((SEPARATION, 0.), (SEPARATION, 0.));
        assert!((min_pair_distance(s, t) - SEPARATION).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn analytic_min_matches_sampling(ax in -5.0..5.0f64, ay in -5.0..5.0f64, bx in -5.0..5.0f64, by in -5.0..5.0f64,
                                         cx in -5.0..5.0f64, cy in -5.0..5.0f64, dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
            let a = disc((ax, ay), (bx, by));
            let b = disc((cx, cy), (dx, dy));
            let exact = min_pair_distance(a, b);
            let sampled = (0..=10_000).map(|k| {
                let t = k as f64 / 10_000.0;
                a.at(t).dist(b.at(t))
            }).fold(f64::INFINITY, f64::min);
            prop_assert!(exact <= sampled + 1e-12);
            prop_assert!(sampled - exact < 1e-6 * (1.0 + (b.to - b.from - (a.to - a.from)).norm() * 100.0));
        }
    }

    #[test]
    fn triangle_area_is_one_twelfth_of_voronoi_cell() {
        let [v, o, x] = fundamental_triangle();
        let area = ((o - v).cross(x - v)).abs() / 2.0;
        assert!((area - EDGE_LENGTH / 6.0).abs() < 1e-12);
    }

    #[test]
    fn box_counts() {
        assert_eq!(enumerate_region_boxes(2.0).len(), 1);
        let eps = 0.025;
        let n = enumerate_region_boxes(eps).len() as f64;
        let area = EDGE_LENGTH / 6.0;
        let ratio = n / (area / (eps * eps));
        assert!((0.5..=2.0).contains(&ratio), "{n} boxes");
    }

    #[test]
    fn annulus_cells_are_on_the_annulus() {
        let eps = 0.025;
        let s_i = Vec2::new(0.3, 0.5);
        let cases = enumerate_annulus_cells(s_i, eps);
        assert_eq!(cases.len(), annulus_cell_count(eps));
        let half = std::f64::consts::SQRT_2 * eps / 2.0;
        for c in &cases {
            assert!(((c.s_j - s_i).norm() - SEPARATION).abs() <= half + 1e-9);
            assert!(!c.v_j_candidates.is_empty());
        }
    }

    #[test]
    fn lattice_nearest_vertex_agrees_with_scan() {
        for k in 0..500 {
            let p = Vec2::new((k as f64 * 0.731).sin() * 6.0, (k as f64 * 1.37).cos() * 6.0);
            let got = nearest_lattice_vertices(p);
            let mut best = f64::INFINITY;
            for j in -6..=6 {
                for i in -8..=8 {
                    let q = Vec2::new(2.0 * j as f64, i as f64 * EDGE_LENGTH + j as f64 * EDGE_LENGTH / 2.0);
                    best = best.min(q.dist(p));
                }
            }
            assert!((got[0].dist(p) - best).abs() < 1e-12);
        }
    }

    #[test]
    fn large_epsilon_fails() {
        assert_eq!(verify(0.5).verdict, Verdict::Fail);
    }

    #[test]
    fn sig9_digits() {
        assert_eq!(sig9(0.0764321987654), "0.0764321988");
        assert_eq!(sig9(2.5), "2.50000000");
    }
}
