//! Rectangular regions of the grid and the paths ("lines") through them.
//!
//! Row `j` of the grid is the zigzag through half-height `2j+1` on even columns
//! and `2j+2` on odd columns; row 0 also holds the bottom vertex of every odd
//! column, which the zigzag misses, and is traversed as a strip.

use crate::geometry::TriGrid;

/// Columns `c0..=c1` and rows `j0..=j1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    pub c0: usize,
    pub c1: usize,
    pub j0: usize,
    pub j1: usize,
}

impl Region {
    pub fn whole(g: &TriGrid) -> Region {
        Region { c0: 0, c1: g.column_count() - 1, j0: 0, j1: g.workspace.n2 - 1 }
    }
    pub fn columns(&self) -> usize {
        self.c1 - self.c0 + 1
    }
    pub fn rows(&self) -> usize {
        self.j1 - self.j0 + 1
    }
    pub fn contains(&self, g: &TriGrid, v: usize) -> bool {
        let (c, _) = g.coord(v);
        let j = row_of(g, v);
        (self.c0..=self.c1).contains(&c) && (self.j0..=self.j1).contains(&j)
    }
    pub fn vertices(&self, g: &TriGrid) -> Vec<usize> {
        let mut out: Vec<usize> = (self.c0..=self.c1).flat_map(|c| column_line(g, c, self.j0, self.j1)).collect();
        out.sort_unstable();
        out
    }
}

pub fn row_of(g: &TriGrid, v: usize) -> usize {
    let (c, m) = g.coord(v);
    if c % 2 == 0 {
        (m - 1) / 2
    } else {
        (m / 2).saturating_sub(1)
    }
}

/// Vertices of column `c` in rows `j0..=j1`, bottom to top.
pub fn column_line(g: &TriGrid, c: usize, j0: usize, j1: usize) -> Vec<usize> {
    let ms: Vec<usize> = if c % 2 == 0 {
        (j0..=j1).map(|j| 2 * j + 1).collect()
    } else {
        let mut v: Vec<usize> = (j0..=j1).map(|j| 2 * j + 2).collect();
        if j0 == 0 {
            v.insert(0, 0);
        }
        v
    };
    ms.into_iter().map(|m| g.vertex_at(c, m).expect("column vertex")).collect()
}

/// Vertices of row `j` in columns `c0..=c1`, left to right.
pub fn row_line(g: &TriGrid, j: usize, c0: usize, c1: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for c in c0..=c1 {
        if c % 2 == 0 {
            out.push(g.vertex_at(c, 2 * j + 1).expect("row vertex"));
        } else {
            if j == 0 {
                out.push(g.vertex_at(c, 0).expect("strip vertex"));
            }
            out.push(g.vertex_at(c, 2 * j + 2).expect("row vertex"));
        }
    }
    out
}

/// Vertices of column `c` that lie in row `j` (two for row 0 of an odd column).
pub fn slots(g: &TriGrid, c: usize, j: usize) -> Vec<usize> {
    column_line(g, c, j, j)
}

/// Hamiltonian path of the region: up the first column, down the next, and so on.
pub fn snake(g: &TriGrid, r: &Region) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, c) in (r.c0..=r.c1).enumerate() {
        let mut col = column_line(g, c, r.j0, r.j1);
        if k % 2 == 1 {
            col.reverse();
        }
        out.extend(col);
    }
    out
}
