//! Swap-based routing for any number of robots, including one per vertex.
//!
//! Empty vertices are filled with virtual discs so the grid is fully occupied.
//! [`isag`] routes everything by recursive split-and-group. [`paft`] first cuts
//! the grid into cells about `5 d_g` wide (`d_g` the largest start-goal hop
//! distance), moves discs into their goal cells by rotating disjoint cycles of
//! one hexagonal subgrid, and finishes with split-and-group inside every cell.

pub mod executor;
pub mod flow;
pub mod isag;
pub mod lines;
pub mod swap;

use std::collections::HashMap;

use crate::geometry::TriGrid;
use crate::plan::{DiscreteInstance, DiscretePlan};

use executor::Executor;
use isag::{route_regions, IsagStats};
use lines::Region;

/// Longest swap schedule over all edges of any grid (regions of two hexagons).
pub const SWAP_STEP_BOUND: usize = 15;

/// Start and goal of every disc, real robots first, then virtual discs on the
/// empty vertices. A virtual disc keeps its vertex when that vertex is also free
/// at the end; the others take the nearest remaining free goal vertex.
pub fn complete(inst: &DiscreteInstance) -> (Vec<usize>, Vec<usize>) {
    let g = &inst.grid;
    let nv = g.vertex_count();
    let mut start_used = vec![false; nv];
    let mut goal_used = vec![false; nv];
    for (&s, &t) in inst.starts.iter().zip(&inst.goals) {
        start_used[s] = true;
        goal_used[t] = true;
    }
    let mut starts = inst.starts.clone();
    let mut goals = inst.goals.clone();
    let free_start: Vec<usize> = (0..nv).filter(|&v| !start_used[v]).collect();
    let mut pending = Vec::new();
    for &v in &free_start {
        starts.push(v);
        if !goal_used[v] {
            goal_used[v] = true;
            goals.push(v);
        } else {
            pending.push(starts.len() - 1);
            goals.push(usize::MAX);
        }
    }
    for d in pending {
        let dist = g.distances_from(starts[d]);
        let t = (0..nv).filter(|&v| !goal_used[v]).min_by_key(|&v| (dist[v], v)).expect("free goal vertex");
        goal_used[t] = true;
        goals[d] = t;
    }
    (starts, goals)
}

/// Real-robot plan from a full trace, dropping steps in which no real robot moves.
fn real_plan(trace: &[Vec<usize>], n: usize) -> DiscretePlan {
    let mut steps: Vec<Vec<usize>> = vec![trace[0][..n].to_vec()];
    for cfg in &trace[1..] {
        if cfg[..n] != steps.last().unwrap()[..] {
            steps.push(cfg[..n].to_vec());
        }
    }
    DiscretePlan { steps }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsagOutcome {
    /// Plan for the instance's robots.
    pub plan: DiscretePlan,
    /// Plan for all discs including the virtual ones, step for step.
    pub full: DiscretePlan,
    pub stats: IsagStats,
    pub swap_rounds: usize,
}

pub fn isag(inst: &DiscreteInstance) -> DiscretePlan {
    isag_detailed(inst).plan
}

pub fn isag_detailed(inst: &DiscreteInstance) -> IsagOutcome {
    let g: &TriGrid = &inst.grid;
    let (starts, goals) = complete(inst);
    let mut exec = Executor::new(g, starts);
    let stats = route_regions(&mut exec, vec![Region::whole(g)], &goals);
    let swap_rounds = exec.swap_rounds;
    let trace = exec.into_trace();
    IsagOutcome {
        plan: real_plan(&trace, inst.robot_count()),
        full: DiscretePlan { steps: trace },
        stats,
        swap_rounds,
    }
}

/// Cells of roughly `5 d_g` columns by `5 d_g` rows, each at least `d_g` wide.
#[derive(Clone, Debug, PartialEq)]
pub struct CellPartition {
    pub d_g: usize,
    pub side: usize,
    pub columns: Vec<(usize, usize)>,
    pub rows: Vec<(usize, usize)>,
}

impl CellPartition {
    pub fn new(g: &TriGrid, d_g: usize) -> Self {
        let split = |extent: usize| -> (usize, Vec<(usize, usize)>) {
            let side = (5 * d_g).clamp(2.min(extent), extent);
            let blocks = (extent / side).max(1);
            let bounds = (0..blocks).map(|i| (i * extent / blocks, (i + 1) * extent / blocks - 1)).collect();
            (side, bounds)
        };
        let (side, columns) = split(g.column_count());
        let (_, rows) = split(g.workspace.n2);
        CellPartition { d_g, side, columns, rows }
    }
    pub fn cells(&self) -> Vec<Region> {
        self.rows
            .iter()
            .flat_map(|&(j0, j1)| self.columns.iter().map(move |&(c0, c1)| Region { c0, c1, j0, j1 }))
            .collect()
    }
    pub fn cell_of(&self, g: &TriGrid, v: usize) -> usize {
        let c = g.coord(v).0;
        let j = lines::row_of(g, v);
        let ci = self.columns.iter().position(|&(a, b)| (a..=b).contains(&c)).unwrap();
        let ri = self.rows.iter().position(|&(a, b)| (a..=b).contains(&j)).unwrap();
        ri * self.columns.len() + ci
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PaftReport {
    pub makespan: usize,
    pub d_g: usize,
    pub cells: usize,
    pub waves: usize,
    pub circulated: usize,
    pub global_fallback: bool,
    pub snake_fallbacks: usize,
    pub swap_rounds: usize,
    /// `makespan / max(1, d_g)`.
    pub empirical_ratio: f64,
}

struct Embedded {
    walk: Vec<usize>,
    /// Start offset and length of each cell's segment in `walk`.
    segments: Vec<(usize, usize)>,
    cells: Vec<usize>,
    width: usize,
}

pub fn paft(inst: &DiscreteInstance) -> (DiscretePlan, PaftReport) {
    let g: &TriGrid = &inst.grid;
    let n = inst.robot_count();
    let d_g = (0..n).map(|r| g.distances_from(inst.starts[r])[inst.goals[r]]).max().unwrap_or(0);
    let mut report = PaftReport {
        makespan: 0,
        d_g,
        cells: 1,
        waves: 0,
        circulated: 0,
        global_fallback: false,
        snake_fallbacks: 0,
        swap_rounds: 0,
        empirical_ratio: 0.0,
    };
    if d_g == 0 {
        report.empirical_ratio = 0.0;
        return (DiscretePlan::stationary(inst.starts.clone()), report);
    }
    let (starts, goals) = complete(inst);
    let d_all = starts.iter().zip(&goals).map(|(&s, &t)| g.distances_from(s)[t]).max().unwrap_or(0);
    let part = CellPartition::new(g, d_all.max(d_g));
    let cells = part.cells();
    report.cells = cells.len();
    let cell_of: Vec<usize> = (0..g.vertex_count()).map(|v| part.cell_of(g, v)).collect();
    let mut exec = Executor::new(g, starts);
    if cells.len() > 1 {
        let wave_limit = 4 * g.vertex_count();
        loop {
            let mut flow = vec![vec![0usize; cells.len()]; cells.len()];
            let mut crossing = 0;
            for (d, &t) in goals.iter().enumerate() {
                let (a, b) = (cell_of[exec.position(d)], cell_of[t]);
                if a != b {
                    flow[a][b] += 1;
                    crossing += 1;
                }
            }
            if crossing == 0 {
                break;
            }
            let cover = (report.waves % 3) as u8;
            let embedded = embed_cycles(g, &cells, &cell_of, decompose(flow), cover);
            if embedded.is_empty() || report.waves >= wave_limit {
                report.global_fallback = true;
                let s = route_regions(&mut exec, vec![Region::whole(g)], &goals);
                report.snake_fallbacks += s.snake_fallbacks;
                break;
            }
            report.waves += 1;
            let prep = prepare_wave(&exec, g, &cell_of, &goals, &embedded);
            let s = route_regions(&mut exec, cells.clone(), &prep);
            report.snake_fallbacks += s.snake_fallbacks;
            let widest = embedded.iter().map(|e| e.width).max().unwrap_or(0);
            for step in 0..widest {
                let moves: Vec<(usize, usize)> = embedded
                    .iter()
                    .filter(|e| e.width > step)
                    .flat_map(|e| (0..e.walk.len()).map(|i| (e.walk[i], e.walk[(i + 1) % e.walk.len()])))
                    .collect();
                exec.apply_moves(&moves);
            }
            report.circulated += embedded.iter().map(|e| e.width * e.cells.len()).sum::<usize>();
        }
    }
    if !report.global_fallback {
        let s = route_regions(&mut exec, cells, &goals);
        report.snake_fallbacks += s.snake_fallbacks;
    }
    report.swap_rounds = exec.swap_rounds;
    let trace = exec.into_trace();
    let plan = real_plan(&trace, n);
    report.makespan = plan.makespan();
    report.empirical_ratio = plan.makespan() as f64 / d_g.max(1) as f64;
    (plan, report)
}

/// Splits a cell-level circulation into simple cycles with weights.
fn decompose(mut flow: Vec<Vec<usize>>) -> Vec<(Vec<usize>, usize)> {
    let k = flow.len();
    let mut out = Vec::new();
    while let Some(a) = (0..k).find(|&a| flow[a].iter().any(|&f| f > 0)) {
        let mut path = vec![a];
        let cycle = loop {
            let cur = *path.last().unwrap();
            let next = (0..k).find(|&b| flow[cur][b] > 0).expect("circulation has no sinks");
            if let Some(i) = path.iter().position(|&c| c == next) {
                break path[i..].to_vec();
            }
            path.push(next);
        };
        let w = (0..cycle.len()).map(|i| flow[cycle[i]][cycle[(i + 1) % cycle.len()]]).min().unwrap();
        for i in 0..cycle.len() {
            flow[cycle[i]][cycle[(i + 1) % cycle.len()]] -= w;
        }
        out.push((cycle, w));
    }
    out
}

fn honeycomb_path(g: &TriGrid, cover: u8, cell: &Region, used: &[bool], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: HashMap<usize, usize> = HashMap::from([(from, from)]);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for w in g.honeycomb_neighbors(cover, u) {
            if !prev.contains_key(&w) && cell.contains(g, w) && (w == to || !used[w]) {
                prev.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Greedily places vertex-disjoint closed walks on the subgraph avoiding `cover`.
fn embed_cycles(g: &TriGrid, cells: &[Region], cell_of: &[usize], cycles: Vec<(Vec<usize>, usize)>, cover: u8) -> Vec<Embedded> {
    let mut used = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    'cycle: for (cyc, weight) in cycles {
        let k = cyc.len();
        let mut marked: Vec<usize> = Vec::new();
        let mut portals = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (cyc[i], cyc[(i + 1) % k]);
            let found = cells[a].vertices(g).into_iter().filter(|&u| !used[u] && g.color(u) != cover).find_map(|u| {
                g.honeycomb_neighbors(cover, u).find(|&w| cell_of[w] == b && !used[w] && w != u).map(|w| (u, w))
            });
            let Some((u, w)) = found else {
                for v in marked {
                    used[v] = false;
                }
                continue 'cycle;
            };
            used[u] = true;
            used[w] = true;
            marked.extend([u, w]);
            portals.push((u, w));
        }
        let mut walk = Vec::new();
        let mut segments = Vec::with_capacity(k);
        for i in 0..k {
            let entry = portals[(i + k - 1) % k].1;
            let exit = portals[i].0;
            used[entry] = false;
            let path = honeycomb_path(g, cover, &cells[cyc[i]], &used, entry, exit);
            used[entry] = true;
            let Some(path) = path else {
                for v in marked {
                    used[v] = false;
                }
                continue 'cycle;
            };
            for &v in &path {
                if !used[v] {
                    used[v] = true;
                    marked.push(v);
                }
            }
            segments.push((walk.len(), path.len()));
            walk.extend(path);
        }
        let width = weight.min(segments.iter().map(|s| s.1).min().unwrap());
        out.push(Embedded { walk, segments, cells: cyc, width });
    }
    out
}

/// Temporary goals for one wave: the chosen crossers go to the last `width`
/// vertices of their segment; displaced discs take the vacated vertices.
fn prepare_wave(exec: &Executor, g: &TriGrid, cell_of: &[usize], goals: &[usize], embedded: &[Embedded]) -> Vec<usize> {
    let mut prep: Vec<usize> = exec.positions().to_vec();
    let mut designated = vec![false; goals.len()];
    let mut reserved = vec![false; g.vertex_count()];
    for e in embedded {
        let k = e.cells.len();
        for i in 0..k {
            let (from_cell, to_cell) = (e.cells[i], e.cells[(i + 1) % k]);
            let (off, len) = e.segments[i];
            let targets = &e.walk[off + len - e.width..off + len];
            let exit = e.walk[off + len - 1];
            let dist = g.distances_from(exit);
            let mut cands: Vec<usize> = (0..goals.len())
                .filter(|&d| !designated[d] && cell_of[exec.position(d)] == from_cell && cell_of[goals[d]] == to_cell)
                .collect();
            cands.sort_by_key(|&d| (dist[exec.position(d)], d));
            for (&d, &t) in cands.iter().zip(targets) {
                designated[d] = true;
                prep[d] = t;
                reserved[t] = true;
            }
        }
    }
    let displaced: Vec<usize> = (0..goals.len())
        .filter(|&d| !designated[d] && reserved[exec.position(d)])
        .collect();
    for d in displaced {
        let cell = cell_of[exec.position(d)];
        let dist = g.distances_from(exec.position(d));
        let free = (0..g.vertex_count())
            .filter(|&v| cell_of[v] == cell && !reserved[v] && designated[exec.occupant(v)])
            .min_by_key(|&v| (dist[v], v))
            .expect("a crosser vacated a vertex in this cell");
        reserved[free] = true;
        prep[d] = free;
    }
    prep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, build_workspace};
    use crate::instance_gen::{full_occupancy, random_discrete};
    use crate::plan::check_plan;
    use std::sync::Arc;

    fn grid(n1: usize, n2: usize) -> Arc<TriGrid> {
        Arc::new(build_grid(&build_workspace(n1, n2).unwrap()))
    }

    #[test]
    fn identity_is_zero_steps() {
        let g = grid(2, 3);
        let inst = DiscreteInstance::new(g.clone(), (0..g.vertex_count()).collect(), (0..g.vertex_count()).collect()).unwrap();
        assert_eq!(isag(&inst).makespan(), 0);
        assert_eq!(paft(&inst).0.makespan(), 0);
    }

    #[test]
    fn full_occupancy_isag_is_valid() {
        for (n1, n2) in [(2, 3), (3, 3), (3, 4)] {
            let g = grid(n1, n2);
            for seed in 0..3 {
                let inst = full_occupancy(g.clone(), seed);
                let out = isag_detailed(&inst);
                check_plan(&inst, &out.plan).unwrap();
            }
        }
    }

    #[test]
    fn sparse_isag_and_full_trace_are_valid() {
        let g = grid(3, 4);
        let inst = random_discrete(g.clone(), 5, 4).unwrap();
        let out = isag_detailed(&inst);
        check_plan(&inst, &out.plan).unwrap();
        let (s, t) = complete(&inst);
        let full = DiscreteInstance::new(g, s, t).unwrap();
        check_plan(&full, &out.full).unwrap();
    }

    /// Goals a few disjoint edge swaps away from the starts.
    fn local_shuffle(g: Arc<TriGrid>, rounds: usize, seed: u64) -> DiscreteInstance {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let mut r = crate::instance_gen::rng(seed);
        let nv = g.vertex_count();
        let mut goal: Vec<usize> = (0..nv).collect();
        for _ in 0..rounds {
            let mut edges = g.edges().to_vec();
            edges.shuffle(&mut r);
            let mut used = vec![false; nv];
            for (a, b) in edges {
                if !used[a] && !used[b] && r.random_bool(0.5) {
                    used[a] = true;
                    used[b] = true;
                    goal.swap(a, b);
                }
            }
        }
        DiscreteInstance::new(g, (0..nv).collect(), goal).unwrap()
    }

    #[test]
    fn paft_circulates_between_cells() {
        let g = grid(28, 3);
        let mut waves = 0;
        for seed in 0..3 {
            let inst = local_shuffle(g.clone(), 2, seed);
            let (plan, rep) = paft(&inst);
            check_plan(&inst, &plan).unwrap();
            assert!(rep.cells > 1, "{rep:?}");
            assert!(!rep.global_fallback);
            waves += rep.waves;
        }
        assert!(waves > 0);
    }

    #[test]
    fn cells_are_at_least_d_g_wide() {
        let g = grid(28, 6);
        for d in 1..6 {
            let p = CellPartition::new(&g, d);
            for &(a, b) in &p.columns {
                assert!(b - a + 1 >= d.min(g.column_count()));
            }
            let mut cover: Vec<usize> = p.cells().iter().flat_map(|c| c.vertices(&g)).collect();
            cover.sort_unstable();
            assert_eq!(cover, (0..g.vertex_count()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn completion_keeps_free_vertices_in_place() {
        let g = grid(2, 3);
        let inst = DiscreteInstance::new(g.clone(), vec![0, 1], vec![1, 2]).unwrap();
        let (s, t) = complete(&inst);
        assert_eq!(s.len(), g.vertex_count());
        for d in 2..s.len() {
            if s[d] != 2 {
                assert_eq!(s[d], t[d]);
            }
        }
        // the disc displaced from goal vertex 2 takes the vacated start 0
        assert_eq!(t[s.iter().position(|&v| v == 2).unwrap()], 0);
    }
}
