//! Recursive split-and-group routing on a fully occupied region.
//!
//! A region is halved across its longer side. Discs whose goals lie in the
//! other half are first spread over the crossing lines (columns for a
//! horizontal cut, rows for a vertical one) so that each line carries as many
//! crossers each way, using a max-flow assignment; then every crossing line is
//! sorted so each disc lands in its goal half. All regions of one recursion
//! level run concurrently. Single-line regions are sorted directly, and a region
//! whose balancing flow is infeasible is sorted along its snake path.

use crate::geometry::TriGrid;

use super::executor::{Executor, LineSort};
use super::flow::FlowNet;
use super::lines::{column_line, row_line, row_of, slots, snake, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cut {
    /// Left and right halves; rows cross the cut.
    Vertical { cm: usize },
    /// Bottom and top bands; columns cross the cut.
    Horizontal { jm: usize },
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct IsagStats {
    pub levels: usize,
    pub splits: usize,
    pub snake_fallbacks: usize,
}

/// Routes every disc to `goal[disc]`; each region's discs must have goals inside it.
pub fn route_regions(exec: &mut Executor, regions: Vec<Region>, goal: &[usize]) -> IsagStats {
    let g = exec.grid;
    let mut stats = IsagStats::default();
    let mut level = regions;
    while !level.is_empty() {
        stats.levels += 1;
        let mut phase_a: Vec<LineSort> = Vec::new();
        let mut cuts = Vec::new();
        let mut next = Vec::new();
        for reg in level {
            let verts = reg.vertices(g);
            if verts.iter().all(|&v| goal[exec.occupant(v)] == v) {
                continue;
            }
            if reg.columns() == 1 {
                phase_a.push(final_sort(exec, goal, column_line(g, reg.c0, reg.j0, reg.j1)));
            } else if reg.rows() == 1 {
                phase_a.push(final_sort(exec, goal, row_line(g, reg.j0, reg.c0, reg.c1)));
            } else {
                let cut = choose_cut(&reg);
                match balance(exec, goal, &reg, cut) {
                    Some(sorts) => {
                        stats.splits += 1;
                        phase_a.extend(sorts);
                        cuts.push((reg, cut));
                        next.extend(children(&reg, cut));
                    }
                    None => {
                        stats.snake_fallbacks += 1;
                        phase_a.push(final_sort(exec, goal, snake(g, &reg)));
                    }
                }
            }
        }
        exec.sort_lines(&phase_a);
        let phase_b: Vec<LineSort> = cuts.iter().flat_map(|(reg, cut)| crossing_sorts(exec, goal, reg, *cut)).collect();
        exec.sort_lines(&phase_b);
        level = next;
    }
    stats
}

fn choose_cut(r: &Region) -> Cut {
    let width = 2.0 * r.columns() as f64;
    let height = crate::geometry::EDGE_LENGTH * r.rows() as f64;
    if width >= height {
        Cut::Vertical { cm: r.c0 + r.columns() / 2 - 1 }
    } else {
        Cut::Horizontal { jm: r.j0 + r.rows() / 2 - 1 }
    }
}

fn children(r: &Region, cut: Cut) -> [Region; 2] {
    match cut {
        Cut::Vertical { cm } => [Region { c1: cm, ..*r }, Region { c0: cm + 1, ..*r }],
        Cut::Horizontal { jm } => [Region { j1: jm, ..*r }, Region { j0: jm + 1, ..*r }],
    }
}

/// 0 for the lower/left half, 1 for the upper/right half.
fn side(g: &TriGrid, v: usize, cut: Cut) -> usize {
    match cut {
        Cut::Vertical { cm } => usize::from(g.coord(v).0 > cm),
        Cut::Horizontal { jm } => usize::from(row_of(g, v) > jm),
    }
}

fn final_sort(exec: &Executor, goal: &[usize], line: Vec<usize>) -> LineSort {
    let keys = line
        .iter()
        .map(|&v| {
            let target = goal[exec.occupant(v)];
            line.iter().position(|&u| u == target).expect("goal lies on the line")
        })
        .collect();
    (line, keys)
}

/// Keys that move the discs on the marked positions of `line` onto `slots`,
/// keeping the relative order of both groups.
fn placement_keys(line: &[usize], movers: &[bool], targets: &[usize]) -> Vec<usize> {
    let mut target_idx: Vec<usize> = targets.iter().map(|&v| line.iter().position(|&u| u == v).expect("slot on line")).collect();
    target_idx.sort_unstable();
    let mut taken = vec![false; line.len()];
    for &t in &target_idx {
        taken[t] = true;
    }
    let mut rest = (0..line.len()).filter(|&i| !taken[i]);
    let mut mover_targets = target_idx.into_iter();
    movers
        .iter()
        .map(|&m| if m { mover_targets.next() } else { rest.next() }.expect("counts match"))
        .collect()
}

/// Spreads crossers over the crossing lines; `None` if no balanced spread exists.
fn balance(exec: &Executor, goal: &[usize], r: &Region, cut: Cut) -> Option<Vec<LineSort>> {
    let g = exec.grid;
    // A "group" is a balancing line (row or column) on one side of the cut;
    // a "lane" is a crossing line.
    let (groups, lanes): (Vec<(usize, usize)>, Vec<usize>) = match cut {
        Cut::Vertical { cm } => ((r.c0..=r.c1).map(|c| (c, usize::from(c > cm))).collect(), (r.j0..=r.j1).collect()),
        Cut::Horizontal { jm } => ((r.j0..=r.j1).map(|j| (j, usize::from(j > jm))).collect(), (r.c0..=r.c1).collect()),
    };
    let group_line = |grp: usize| match cut {
        Cut::Vertical { .. } => column_line(g, grp, r.j0, r.j1),
        Cut::Horizontal { .. } => row_line(g, grp, r.c0, r.c1),
    };
    let cell = |grp: usize, lane: usize| match cut {
        Cut::Vertical { .. } => slots(g, grp, lane),
        Cut::Horizontal { .. } => slots(g, lane, grp),
    };
    let lines: Vec<Vec<usize>> = groups.iter().map(|&(grp, _)| group_line(grp)).collect();
    let movers: Vec<Vec<bool>> = groups
        .iter()
        .zip(&lines)
        .map(|(&(_, s), line)| line.iter().map(|&v| side(g, goal[exec.occupant(v)], cut) != s).collect())
        .collect();
    let total: [i64; 2] = [0, 1].map(|s| {
        groups.iter().zip(&movers).filter(|((_, gs), _)| *gs == s).map(|(_, m)| m.iter().filter(|&&x| x).count() as i64).sum()
    });
    debug_assert_eq!(total[0], total[1]);
    if total[0] == 0 {
        return Some(Vec::new());
    }
    let ng = groups.len();
    let nl = lanes.len();
    // source, sink, groups, lane-in, lane-out
    let (src, sink) = (0, 1);
    let gnode = |k: usize| 2 + k;
    let lin = |l: usize| 2 + ng + l;
    let lout = |l: usize| 2 + ng + nl + l;
    let mut net = FlowNet::new(2 + ng + 2 * nl);
    let mut edge_of = vec![vec![usize::MAX; nl]; ng];
    for (k, &(grp, s)) in groups.iter().enumerate() {
        let count = movers[k].iter().filter(|&&x| x).count() as i64;
        if s == 0 {
            net.add_edge(src, gnode(k), count);
        } else {
            net.add_edge(gnode(k), sink, count);
        }
        for (l, &lane) in lanes.iter().enumerate() {
            let cap = cell(grp, lane).len() as i64;
            edge_of[k][l] = if s == 0 { net.add_edge(gnode(k), lin(l), cap) } else { net.add_edge(lout(l), gnode(k), cap) };
        }
    }
    for (l, &lane) in lanes.iter().enumerate() {
        let per_side: [i64; 2] = [0, 1].map(|s| {
            groups.iter().filter(|(_, gs)| *gs == s).map(|&(grp, _)| cell(grp, lane).len() as i64).sum()
        });
        net.add_edge(lin(l), lout(l), per_side[0].min(per_side[1]));
    }
    if net.max_flow(src, sink) != total[0] {
        return None;
    }
    let mut sorts = Vec::new();
    for (k, &(grp, s)) in groups.iter().enumerate() {
        if !movers[k].iter().any(|&x| x) {
            continue;
        }
        let mut targets = Vec::new();
        for (l, &lane) in lanes.iter().enumerate() {
            let f = net.flow(edge_of[k][l]) as usize;
            let mut cells = cell(grp, lane);
            // the far end of a two-vertex cell is nearer the cut for a column crossing
            if s == 0 {
                cells.reverse();
            }
            targets.extend(cells.into_iter().take(f));
        }
        let keys = placement_keys(&lines[k], &movers[k], &targets);
        sorts.push((lines[k].clone(), keys));
    }
    Some(sorts)
}

fn crossing_sorts(exec: &Executor, goal: &[usize], r: &Region, cut: Cut) -> Vec<LineSort> {
    let g = exec.grid;
    let lines: Vec<Vec<usize>> = match cut {
        Cut::Vertical { .. } => (r.j0..=r.j1).map(|j| row_line(g, j, r.c0, r.c1)).collect(),
        Cut::Horizontal { .. } => (r.c0..=r.c1).map(|c| column_line(g, c, r.j0, r.j1)).collect(),
    };
    lines
        .into_iter()
        .map(|line| {
            let sides: Vec<usize> = line.iter().map(|&v| side(g, goal[exec.occupant(v)], cut)).collect();
            let lower = sides.iter().filter(|&&s| s == 0).count();
            let (mut a, mut b) = (0, lower);
            let keys = sides
                .iter()
                .map(|&s| {
                    let slot = if s == 0 { &mut a } else { &mut b };
                    *slot += 1;
                    *slot - 1
                })
                .collect();
            (line, keys)
        })
        .collect()
}
