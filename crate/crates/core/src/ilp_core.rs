//! Time-expanded integer program for synchronous routing on the grid.
//!
//! Binary `x_r_i_j_t` is 1 when robot `r` goes from `i` to `j` (equal or
//! adjacent) during step `t`; `x_r_g_s_T` is the virtual return edge from the
//! goal to the start whose sum is maximized. Step-0 variables exist only at the
//! robot's start vertex, so a robot contributes to the objective exactly when
//! its single path reaches the goal at step `T`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::Command;

use thiserror::Error;

use crate::plan::{DiscreteInstance, DiscretePlan};

#[derive(Debug, Error)]
pub enum IlpError {
    #[error("horizon must be at least 1")]
    HorizonTooSmall,
    #[error("exhaustive backend limited to {max_robots} robots and horizon {max_horizon}, got {robots} and {horizon}")]
    GuardExceeded { robots: usize, horizon: usize, max_robots: usize, max_horizon: usize },
    #[error("could not run solver command `{command}`: {source}")]
    Spawn { command: String, source: std::io::Error },
    #[error("solver command `{command}` exited with {status}: {stderr}")]
    SolverFailed { command: String, status: String, stderr: String },
    #[error("could not read solution file: {0}")]
    SolutionMissing(std::io::Error),
    #[error("solution line {line}: {message}")]
    SolutionParse { line: usize, message: String },
    #[error("solution names unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Move,
    Stay,
    Virtual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IlpVariable {
    pub robot: usize,
    pub from: usize,
    pub to: usize,
    pub step: usize,
    pub kind: VarKind,
}

impl IlpVariable {
    pub fn name(&self) -> String {
        format!("x_{}_{}_{}_{}", self.robot, self.from, self.to, self.step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Flow,
    Coupling,
    Vertex,
    Edge,
    Triangle,
}

impl Family {
    fn prefix(self) -> &'static str {
        match self {
            Family::Flow => "flow",
            Family::Coupling => "link",
            Family::Vertex => "vtx",
            Family::Edge => "edge",
            Family::Triangle => "tri",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub family: Family,
    pub terms: Vec<(usize, i32)>,
    pub sense: Sense,
    pub rhs: i32,
}

impl Row {
    pub fn activity(&self, values: &[bool]) -> i32 {
        self.terms.iter().map(|&(v, c)| if values[v] { c } else { 0 }).sum()
    }
    pub fn holds(&self, values: &[bool]) -> bool {
        let a = self.activity(values);
        match self.sense {
            Sense::Le => a <= self.rhs,
            Sense::Eq => a == self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelOptions {
    pub prune: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions { prune: true }
    }
}

#[derive(Clone, Debug)]
pub struct IlpModel {
    pub horizon: usize,
    pub robots: usize,
    pub starts: Vec<usize>,
    pub goals: Vec<usize>,
    pub variables: Vec<IlpVariable>,
    pub rows: Vec<Row>,
    /// Virtual variable of each robot.
    pub objective: Vec<usize>,
    pub pruned_count: usize,
    index: HashMap<(usize, usize, usize, usize), usize>,
}

impl IlpModel {
    pub fn lookup(&self, robot: usize, from: usize, to: usize, step: usize) -> Option<usize> {
        self.index.get(&(robot, from, to, step)).copied()
    }

    pub fn objective_value(&self, values: &[bool]) -> usize {
        self.objective.iter().filter(|&&v| values[v]).count()
    }

    /// First violated row, if any.
    pub fn violated_row(&self, values: &[bool]) -> Option<usize> {
        self.rows.iter().position(|r| !r.holds(values))
    }

    pub fn family_count(&self, family: Family) -> usize {
        self.rows.iter().filter(|r| r.family == family).count()
    }
}

/// Builds the pruned model for horizon `horizon`.
pub fn build_model(inst: &DiscreteInstance, horizon: usize) -> Result<IlpModel, IlpError> {
    build_model_with(inst, horizon, ModelOptions::default())
}

pub fn build_model_with(inst: &DiscreteInstance, horizon: usize, opts: ModelOptions) -> Result<IlpModel, IlpError> {
    if horizon < 1 {
        return Err(IlpError::HorizonTooSmall);
    }
    let g = &inst.grid;
    let nv = g.vertex_count();
    let n = inst.robot_count();
    let t_max = horizon;
    let mut variables = Vec::new();
    let mut index = HashMap::new();
    let mut pruned_count = 0;
    let mut objective = Vec::with_capacity(n);
    for r in 0..n {
        let (s, goal) = (inst.starts[r], inst.goals[r]);
        let from_start = g.distances_from(s);
        let to_goal = g.distances_from(goal);
        for t in 0..t_max {
            for i in 0..nv {
                if t == 0 && i != s {
                    continue;
                }
                let targets = std::iter::once(i).chain(g.neighbors(i).iter().copied());
                let mut targets: Vec<usize> = targets.collect();
                targets.sort_unstable();
                for j in targets {
                    if opts.prune && (from_start[i] > t || to_goal[j] > t_max - t - 1) {
                        pruned_count += 1;
                        continue;
                    }
                    let kind = if i == j { VarKind::Stay } else { VarKind::Move };
                    index.insert((r, i, j, t), variables.len());
                    variables.push(IlpVariable { robot: r, from: i, to: j, step: t, kind });
                }
            }
        }
        index.insert((r, goal, s, t_max), variables.len());
        objective.push(variables.len());
        variables.push(IlpVariable { robot: r, from: goal, to: s, step: t_max, kind: VarKind::Virtual });
    }
    let var = |r: usize, i: usize, j: usize, t: usize| index.get(&(r, i, j, t)).copied();
    let closed = |v: usize| std::iter::once(v).chain(g.neighbors(v).iter().copied());
    let mut rows = Vec::new();
    for r in 0..n {
        for t in 0..t_max.saturating_sub(1) {
            for j in 0..nv {
                let mut terms: Vec<(usize, i32)> = closed(j).filter_map(|i| var(r, i, j, t)).map(|v| (v, 1)).collect();
                terms.extend(closed(j).filter_map(|k| var(r, j, k, t + 1)).map(|v| (v, -1)));
                if !terms.is_empty() {
                    rows.push(Row { family: Family::Flow, terms, sense: Sense::Eq, rhs: 0 });
                }
            }
        }
        let virt = objective[r];
        let (s, goal) = (inst.starts[r], inst.goals[r]);
        let mut depart: Vec<(usize, i32)> = closed(s).filter_map(|j| var(r, s, j, 0)).map(|v| (v, 1)).collect();
        depart.push((virt, -1));
        rows.push(Row { family: Family::Coupling, terms: depart, sense: Sense::Eq, rhs: 0 });
        let mut arrive: Vec<(usize, i32)> = closed(goal).filter_map(|i| var(r, i, goal, t_max - 1)).map(|v| (v, 1)).collect();
        arrive.push((virt, -1));
        rows.push(Row { family: Family::Coupling, terms: arrive, sense: Sense::Eq, rhs: 0 });
    }
    let mut push_le = |family: Family, terms: Vec<(usize, i32)>| {
        if terms.len() >= 2 {
            rows.push(Row { family, terms, sense: Sense::Le, rhs: 1 });
        }
    };
    for t in 0..t_max {
        for i in 0..nv {
            let terms = (0..n).flat_map(|r| closed(i).filter_map(move |j| var(r, i, j, t))).map(|v| (v, 1)).collect();
            push_le(Family::Vertex, terms);
        }
        for &(a, b) in g.edges() {
            let terms = (0..n)
                .flat_map(|r| [var(r, a, b, t), var(r, b, a, t)])
                .flatten()
                .map(|v| (v, 1))
                .collect();
            push_le(Family::Edge, terms);
        }
        for tri in g.triangles() {
            let [a, b, c] = *tri;
            let terms = (0..n)
                .flat_map(|r| {
                    [(a, b), (b, a), (a, c), (c, a), (b, c), (c, b)].map(|(i, j)| var(r, i, j, t))
                })
                .flatten()
                .map(|v| (v, 1))
                .collect();
            push_le(Family::Triangle, terms);
        }
    }
    Ok(IlpModel {
        horizon,
        robots: n,
        starts: inst.starts.clone(),
        goals: inst.goals.clone(),
        variables,
        rows,
        objective,
        pruned_count,
        index,
    })
}

/// Pairwise sharp-angle rows: moves on two edges meeting at 60 degrees.
/// The triangle rows imply all of these; kept as a cross-check.
pub fn sharp_angle_rows(model: &IlpModel, inst: &DiscreteInstance) -> Vec<Row> {
    let g = &inst.grid;
    let mut rows = Vec::new();
    for t in 0..model.horizon {
        for tri in g.triangles() {
            for apex in 0..3 {
                let j = tri[apex];
                let i = tri[(apex + 1) % 3];
                let k = tri[(apex + 2) % 3];
                let terms: Vec<(usize, i32)> = (0..model.robots)
                    .flat_map(|r| [(i, j), (j, i), (j, k), (k, j)].map(|(a, b)| model.lookup(r, a, b, t)))
                    .flatten()
                    .map(|v| (v, 1))
                    .collect();
                if terms.len() >= 2 {
                    rows.push(Row { family: Family::Triangle, terms, sense: Sense::Le, rhs: 1 });
                }
            }
        }
    }
    rows
}

fn write_expr(out: &mut String, terms: impl Iterator<Item = (String, i32)>) {
    let mut first = true;
    let mut on_line = 0;
    for (name, c) in terms {
        if on_line == 8 {
            out.push_str("\n   ");
            on_line = 0;
        }
        let sign = if c < 0 { "-" } else if first { "" } else { "+" };
        let mag = c.abs();
        let coef = if mag == 1 { String::new() } else { format!("{mag} ") };
        if first {
            let _ = write!(out, " {sign}{}{coef}{name}", if sign.is_empty() { "" } else { " " });
        } else {
            let _ = write!(out, " {sign} {coef}{name}");
        }
        first = false;
        on_line += 1;
    }
    if first {
        out.push_str(" 0");
    }
}

/// LP-format text of the model, with deterministic names and ordering.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str("\\ time-expanded routing model\n");
    let _ = writeln!(out, "\\ robots {} horizon {}", model.robots, model.horizon);
    out.push_str("Maximize\n obj:");
    write_expr(&mut out, model.objective.iter().map(|&v| (model.variables[v].name(), 1)));
    out.push_str("\nSubject To\n");
    let mut counters: HashMap<Family, usize> = HashMap::new();
    for row in &model.rows {
        let k = counters.entry(row.family).or_insert(0);
        let _ = write!(out, " {}{}:", row.family.prefix(), k);
        *k += 1;
        write_expr(&mut out, row.terms.iter().map(|&(v, c)| (model.variables[v].name(), c)));
        let rel = match row.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {rel} {}", row.rhs);
    }
    if !model.variables.is_empty() {
        out.push_str("Binary\n");
        for v in &model.variables {
            let _ = writeln!(out, " {}", v.name());
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub values: Vec<bool>,
    pub objective_value: usize,
}

/// Reads `name value` lines; blank lines and lines starting with `#` are skipped.
pub fn parse_solution(model: &IlpModel, text: &str) -> Result<Solution, IlpError> {
    let names: HashMap<String, usize> = model.variables.iter().enumerate().map(|(k, v)| (v.name(), k)).collect();
    let mut values = vec![false; model.variables.len()];
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(IlpError::SolutionParse { line: line_no + 1, message: format!("expected `name value`, got `{line}`") });
        };
        let value: f64 = value.parse().map_err(|_| IlpError::SolutionParse {
            line: line_no + 1,
            message: format!("bad value `{value}`"),
        })?;
        let Some(&k) = names.get(name) else {
            return Err(IlpError::UnknownVariable(name.to_string()));
        };
        values[k] = value >= 0.5;
    }
    let objective_value = model.objective_value(&values);
    Ok(Solution { values, objective_value })
}

/// Plan encoded by a solution in which every robot reaches its goal.
pub fn decode(model: &IlpModel, solution: &Solution) -> Option<DiscretePlan> {
    if solution.objective_value != model.robots {
        return None;
    }
    let mut steps = vec![model.starts.clone()];
    let mut pos = model.starts.clone();
    for t in 0..model.horizon {
        for (r, p) in pos.iter_mut().enumerate() {
            let next = model
                .variables
                .iter()
                .enumerate()
                .filter(|(k, v)| solution.values[*k] && v.robot == r && v.step == t && v.from == *p && v.kind != VarKind::Virtual)
                .map(|(_, v)| v.to)
                .next()?;
            *p = next;
        }
        steps.push(pos.clone());
    }
    (pos == model.goals).then_some(DiscretePlan { steps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExhaustiveLimits {
    pub max_robots: usize,
    pub max_horizon: usize,
}

impl Default for ExhaustiveLimits {
    fn default() -> Self {
        ExhaustiveLimits { max_robots: 6, max_horizon: 8 }
    }
}

/// Runs an external solver through a shell command template containing
/// `{model}` and `{solution}` placeholders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalSolver {
    pub command: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Exhaustive(ExhaustiveLimits),
    External(ExternalSolver),
}

pub fn solve(model: &IlpModel, backend: &Backend) -> Result<Solution, IlpError> {
    match backend {
        Backend::Exhaustive(limits) => solve_exhaustive(model, *limits),
        Backend::External(ext) => solve_external(model, ext),
    }
}

pub fn solve_external(model: &IlpModel, ext: &ExternalSolver) -> Result<Solution, IlpError> {
    let dir = tempfile::tempdir()?;
    let model_path: PathBuf = dir.path().join("model.lp");
    let solution_path: PathBuf = dir.path().join("model.sol");
    std::fs::write(&model_path, export_lp(model))?;
    let command = ext
        .command
        .replace("{model}", &shell_quote(&model_path.to_string_lossy()))
        .replace("{solution}", &shell_quote(&solution_path.to_string_lossy()));
    let output = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .output()
        .map_err(|source| IlpError::Spawn { command: command.clone(), source })?;
    if !output.status.success() {
        return Err(IlpError::SolverFailed {
            command,
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    let text = std::fs::read_to_string(&solution_path).map_err(IlpError::SolutionMissing)?;
    parse_solution(model, &text)
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "'\\''"))
}

/// Exact maximization by search over robot subsets, largest first.
///
/// Robots left out keep every variable at zero. A chosen subset is routed by a
/// joint depth-first search over time steps that tracks the activity of every
/// `<=` row, with a memo of dead `(step, positions)` states.
pub fn solve_exhaustive(model: &IlpModel, limits: ExhaustiveLimits) -> Result<Solution, IlpError> {
    if model.robots > limits.max_robots || model.horizon > limits.max_horizon {
        return Err(IlpError::GuardExceeded {
            robots: model.robots,
            horizon: model.horizon,
            max_robots: limits.max_robots,
            max_horizon: limits.max_horizon,
        });
    }
    let search = Search::new(model);
    let n = model.robots;
    let alone: Vec<usize> = (0..n).filter(|&r| search.route(&[r]).is_some()).collect();
    for size in (0..=alone.len()).rev() {
        for subset in combinations(&alone, size) {
            if let Some(chosen) = search.route(&subset) {
                let mut values = vec![false; model.variables.len()];
                for (k, r) in subset.iter().enumerate() {
                    for &v in &chosen[k] {
                        values[v] = true;
                    }
                    values[model.objective[*r]] = true;
                }
                debug_assert_eq!(model.violated_row(&values), None);
                let objective_value = model.objective_value(&values);
                return Ok(Solution { values, objective_value });
            }
        }
    }
    unreachable!("the empty subset is always routable")
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

struct Search<'a> {
    model: &'a IlpModel,
    /// `(robot, step, vertex)` -> variables leaving that vertex.
    options: HashMap<(usize, usize, usize), Vec<usize>>,
    le_rows: Vec<Vec<usize>>,
    row_rhs: Vec<i32>,
}

impl<'a> Search<'a> {
    fn new(model: &'a IlpModel) -> Self {
        let mut options: HashMap<(usize, usize, usize), Vec<usize>> = HashMap::new();
        for (k, v) in model.variables.iter().enumerate() {
            if v.kind != VarKind::Virtual {
                options.entry((v.robot, v.step, v.from)).or_default().push(k);
            }
        }
        let mut le_rows = vec![Vec::new(); model.variables.len()];
        let mut row_rhs = Vec::new();
        for row in model.rows.iter().filter(|r| r.sense == Sense::Le) {
            let id = row_rhs.len();
            row_rhs.push(row.rhs);
            for &(v, c) in &row.terms {
                debug_assert_eq!(c, 1);
                le_rows[v].push(id);
            }
        }
        Search { model, options, le_rows, row_rhs }
    }

    /// Variables chosen per robot of `subset`, or `None` if the subset cannot be routed.
    fn route(&self, subset: &[usize]) -> Option<Vec<Vec<usize>>> {
        let mut state = JointState {
            positions: subset.iter().map(|&r| self.model.starts[r]).collect(),
            activity: vec![0; self.row_rhs.len()],
            chosen: vec![Vec::new(); subset.len()],
            dead: std::collections::HashSet::new(),
        };
        self.step(subset, 0, &mut state).then_some(state.chosen)
    }

    fn step(&self, subset: &[usize], t: usize, st: &mut JointState) -> bool {
        if t == self.model.horizon {
            return subset.iter().zip(&st.positions).all(|(&r, &p)| p == self.model.goals[r]);
        }
        if st.dead.contains(&(t, st.positions.clone())) {
            return false;
        }
        let before = st.positions.clone();
        if self.assign(subset, t, 0, &before, st) {
            return true;
        }
        st.dead.insert((t, before));
        false
    }

    fn assign(&self, subset: &[usize], t: usize, k: usize, before: &[usize], st: &mut JointState) -> bool {
        if k == subset.len() {
            let saved = std::mem::replace(&mut st.positions, before.to_vec());
            for (idx, chosen) in st.chosen.iter().enumerate() {
                st.positions[idx] = self.model.variables[*chosen.last().unwrap()].to;
            }
            if self.step(subset, t + 1, st) {
                return true;
            }
            st.positions = saved;
            return false;
        }
        let r = subset[k];
        let Some(opts) = self.options.get(&(r, t, before[k])) else {
            return false;
        };
        for &v in opts {
            let rows = &self.le_rows[v];
            if rows.iter().any(|&row| st.activity[row] + 1 > self.row_rhs[row]) {
                continue;
            }
            for &row in rows {
                st.activity[row] += 1;
            }
            st.chosen[k].push(v);
            if self.assign(subset, t, k + 1, before, st) {
                return true;
            }
            st.chosen[k].pop();
            for &row in rows {
                st.activity[row] -= 1;
            }
        }
        false
    }
}

struct JointState {
    positions: Vec<usize>,
    activity: Vec<i32>,
    chosen: Vec<Vec<usize>>,
    dead: std::collections::HashSet<(usize, Vec<usize>)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, build_workspace};
    use crate::plan::check_plan;
    use std::sync::Arc;

    fn grid() -> Arc<crate::geometry::TriGrid> {
        Arc::new(build_grid(&build_workspace(2, 3).unwrap()))
    }

    fn exhaustive() -> Backend {
        Backend::Exhaustive(ExhaustiveLimits::default())
    }

    #[test]
    fn rejects_zero_horizon() {
        let inst = DiscreteInstance::new(grid(), vec![0], vec![0]).unwrap();
        assert!(matches!(build_model(&inst, 0), Err(IlpError::HorizonTooSmall)));
    }

    #[test]
    fn variable_naming() {
        let v = IlpVariable { robot: 3, from: 5, to: 7, step: 2, kind: VarKind::Move };
        assert_eq!(v.name(), "x_3_5_7_2");
    }

    #[test]
    fn empty_model_export() {
        let inst = DiscreteInstance::new(grid(), vec![], vec![]).unwrap();
        let m = build_model(&inst, 2).unwrap();
        let lp = export_lp(&m);
        assert!(lp.contains("Maximize\n obj: 0\n"));
        assert!(m.rows.is_empty());
    }

    #[test]
    fn single_robot_shortest_path() {
        let g = grid();
        let d = g.distances_from(0);
        let far = (0..g.vertex_count()).max_by_key(|&v| (d[v], v)).unwrap();
        let inst = DiscreteInstance::new(g, vec![0], vec![far]).unwrap();
        let t = d[far];
        let m = build_model(&inst, t).unwrap();
        let sol = solve(&m, &exhaustive()).unwrap();
        assert_eq!(sol.objective_value, 1);
        let plan = decode(&m, &sol).unwrap();
        assert_eq!(plan.makespan(), t);
        check_plan(&inst, &plan).unwrap();
        let short = build_model(&inst, t - 1).unwrap();
        assert_eq!(solve(&short, &exhaustive()).unwrap().objective_value, 0);
    }

    #[test]
    fn head_on_exchange_is_forbidden() {
        let g = grid();
        let (a, b) = g.edges()[0];
        let inst = DiscreteInstance::new(g, vec![a, b], vec![b, a]).unwrap();
        let m = build_model(&inst, 1).unwrap();
        assert!(solve(&m, &exhaustive()).unwrap().objective_value < 2);
    }

    #[test]
    fn triangle_rotation_is_forbidden() {
        let g = grid();
        let [a, b, c] = g.triangles()[0];
        let inst = DiscreteInstance::new(g, vec![a, b], vec![b, c]).unwrap();
        let m = build_model(&inst, 1).unwrap();
        assert!(solve(&m, &exhaustive()).unwrap().objective_value < 2);
    }

    #[test]
    fn move_beside_stationary_robot() {
        let g = grid();
        let (a, b) = g.edges()[0];
        let c = g.apexes(a, b)[0];
        // both would need `c` at step 1 to finish on time
        let inst = DiscreteInstance::new(g.clone(), vec![a, b], vec![c, b]).unwrap();
        let m = build_model(&inst, 1).unwrap();
        let sol = solve(&m, &exhaustive()).unwrap();
        assert_eq!(sol.objective_value, 2);
        let plan = decode(&m, &sol).unwrap();
        assert_eq!(plan.steps[1], vec![c, b]);
    }

    #[test]
    fn all_at_goal_stays() {
        let g = grid();
        let inst = DiscreteInstance::new(g, vec![1, 5, 9], vec![1, 5, 9]).unwrap();
        for t in 1..4 {
            let m = build_model(&inst, t).unwrap();
            assert_eq!(solve(&m, &exhaustive()).unwrap().objective_value, 3);
        }
    }

    #[test]
    fn guard_is_enforced() {
        let g = grid();
        let inst = DiscreteInstance::new(g, (0..7).collect(), (0..7).collect()).unwrap();
        let m = build_model(&inst, 1).unwrap();
        assert!(matches!(solve(&m, &exhaustive()), Err(IlpError::GuardExceeded { .. })));
    }

    #[test]
    fn solution_round_trip() {
        let g = grid();
        let inst = DiscreteInstance::new(g, vec![0, 4], vec![4, 0]).unwrap();
        let m = build_model(&inst, 4).unwrap();
        let sol = solve(&m, &exhaustive()).unwrap();
        let text: String = m
            .variables
            .iter()
            .zip(&sol.values)
            .map(|(v, &x)| format!("{} {}\n", v.name(), if x { "0.9999999" } else { "1e-9" }))
            .collect();
        assert_eq!(parse_solution(&m, &text).unwrap(), sol);
        assert!(matches!(parse_solution(&m, "x_9_9_9_9 1\n"), Err(IlpError::UnknownVariable(_))));
        assert!(matches!(parse_solution(&m, "garbage\n"), Err(IlpError::SolutionParse { line: 1, .. })));
    }

    #[test]
    fn external_failures_are_reported() {
        let g = grid();
        let inst = DiscreteInstance::new(g, vec![0], vec![1]).unwrap();
        let m = build_model(&inst, 2).unwrap();
        let missing = ExternalSolver { command: "definitely-not-a-solver-xyz {model} {solution}".into() };
        assert!(matches!(solve_external(&m, &missing), Err(IlpError::SolverFailed { .. })));
        let silent = ExternalSolver { command: "true {model} {solution}".into() };
        assert!(matches!(solve_external(&m, &silent), Err(IlpError::SolutionMissing(_))));
    }
}
