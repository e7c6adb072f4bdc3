//! Line-oriented text formats for instances and plans.
//!
//! Every file starts with a header line naming the format and its version.
//! Blank lines and lines starting with `#` are ignored. Numbers are written in
//! the shortest form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use oldr::discretizer::ContinuousInstance;
use oldr::geometry::{build_workspace, Vec2};
use oldr::plan::DiscretePlan;
use oldr::validator::{ContinuousPlan, Phases};

pub const INSTANCE_HEADER: &str = "oldr-instance 1";
pub const PLAN_HEADER: &str = "oldr-plan 1";

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("expected header `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("robot ids must be 1..={n} in order, found {found} at position {pos}")]
    Ids { n: usize, found: usize, pos: usize },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::Line { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| FormatError::Line { line, msg: format!("cannot parse {what} from `{tok}`") })
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, expected: &str) -> Result<&'a str, FormatError> {
    let (_, first) = lines.next().ok_or(FormatError::Missing("header"))?;
    match first.strip_prefix(expected) {
        Some(rest) => Ok(rest.trim()),
        None => Err(FormatError::Header { expected: expected.to_string(), found: first.to_string() }),
    }
}

pub fn write_instance(inst: &ContinuousInstance) -> String {
    let mut out = format!("{INSTANCE_HEADER}\nworkspace {} {}\n", inst.workspace.n1, inst.workspace.n2);
    for (i, (s, g)) in inst.starts.iter().zip(&inst.goals).enumerate() {
        writeln!(out, "robot {} {} {} {} {}", i + 1, s.x, s.y, g.x, g.y).unwrap();
    }
    out
}

/// Parses an instance; separation is checked separately by the caller.
pub fn read_instance(text: &str) -> Result<ContinuousInstance, FormatError> {
    let mut lines = content_lines(text);
    header(&mut lines, INSTANCE_HEADER)?;
    let mut workspace = None;
    let (mut starts, mut goals) = (Vec::new(), Vec::new());
    for (ln, l) in lines {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("workspace") => {
                let n1: usize = field(ln, tok.next(), "n1")?;
                let n2: usize = field(ln, tok.next(), "n2")?;
                workspace = Some(build_workspace(n1, n2).map_err(|e| FormatError::Line { line: ln, msg: e.to_string() })?);
            }
            Some("robot") => {
                let id: usize = field(ln, tok.next(), "robot id")?;
                if id != starts.len() + 1 {
                    return Err(FormatError::Ids { n: starts.len() + 1, found: id, pos: starts.len() + 1 });
                }
                let v: Vec<f64> = (0..4).map(|k| field(ln, tok.next(), ["s_x", "s_y", "g_x", "g_y"][k])).collect::<Result<_, _>>()?;
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(FormatError::Line { line: ln, msg: "coordinates must be finite".into() });
                }
                starts.push(Vec2::new(v[0], v[1]));
                goals.push(Vec2::new(v[2], v[3]));
            }
            Some(other) => return Err(FormatError::Line { line: ln, msg: format!("unknown record `{other}`") }),
            None => unreachable!(),
        }
        if tok.next().is_some() {
            return Err(FormatError::Line { line: ln, msg: "trailing fields".into() });
        }
    }
    let workspace = workspace.ok_or(FormatError::Missing("workspace"))?;
    Ok(ContinuousInstance { workspace, starts, goals })
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlanFile {
    Discrete(DiscretePlan),
    Continuous(ContinuousPlan),
}

pub fn write_plan(plan: &PlanFile) -> String {
    match plan {
        PlanFile::Discrete(p) => {
            let n = p.steps.first().map_or(0, |c| c.len());
            let mut out = format!("{PLAN_HEADER} discrete\nrobots {n}\n");
            for (k, cfg) in p.steps.iter().enumerate() {
                write!(out, "step {k}").unwrap();
                for v in cfg {
                    write!(out, " {v}").unwrap();
                }
                out.push('\n');
            }
            out
        }
        PlanFile::Continuous(p) => {
            let mut out = format!("{PLAN_HEADER} continuous\nrobots {}\n", p.robot_count());
            writeln!(out, "makespan {}", p.makespan).unwrap();
            writeln!(out, "phases {} {} {}", p.phases.snap_in, p.phases.grid, p.phases.snap_out).unwrap();
            for (i, tr) in p.trajectories.iter().enumerate() {
                write!(out, "disc {}", i + 1).unwrap();
                for (t, q) in tr {
                    write!(out, " {t} {} {}", q.x, q.y).unwrap();
                }
                out.push('\n');
            }
            out
        }
    }
}

pub fn read_plan(text: &str) -> Result<PlanFile, FormatError> {
    let mut lines = content_lines(text);
    let mode = header(&mut lines, PLAN_HEADER)?.to_string();
    let (ln, l) = lines.next().ok_or(FormatError::Missing("robots"))?;
    let mut tok = l.split_whitespace();
    if tok.next() != Some("robots") {
        return Err(FormatError::Missing("robots"));
    }
    let n: usize = field(ln, tok.next(), "robot count")?;
    match mode.as_str() {
        "discrete" => {
            let mut steps = Vec::new();
            for (ln, l) in lines {
                let mut tok = l.split_whitespace();
                if tok.next() != Some("step") {
                    return Err(FormatError::Line { line: ln, msg: "expected `step`".into() });
                }
                let k: usize = field(ln, tok.next(), "step index")?;
                if k != steps.len() {
                    return Err(FormatError::Line { line: ln, msg: format!("step {k} out of order") });
                }
                let cfg: Vec<usize> = tok.map(|t| field(ln, Some(t), "vertex id")).collect::<Result<_, _>>()?;
                if cfg.len() != n {
                    return Err(FormatError::Line { line: ln, msg: format!("expected {n} vertices, found {}", cfg.len()) });
                }
                steps.push(cfg);
            }
            if steps.is_empty() {
                return Err(FormatError::Missing("step"));
            }
            Ok(PlanFile::Discrete(DiscretePlan { steps }))
        }
        "continuous" => {
            let mut makespan = None;
            let mut phases = None;
            let mut trajectories = Vec::new();
            for (ln, l) in lines {
                let mut tok = l.split_whitespace();
                match tok.next() {
                    Some("makespan") => makespan = Some(field::<f64>(ln, tok.next(), "makespan")?),
                    Some("phases") => {
                        phases = Some(Phases {
                            snap_in: field(ln, tok.next(), "snap-in duration")?,
                            grid: field(ln, tok.next(), "grid duration")?,
                            snap_out: field(ln, tok.next(), "snap-out duration")?,
                        })
                    }
                    Some("disc") => {
                        let id: usize = field(ln, tok.next(), "disc id")?;
                        if id != trajectories.len() + 1 {
                            return Err(FormatError::Ids { n, found: id, pos: trajectories.len() + 1 });
                        }
                        let nums: Vec<f64> = tok.map(|t| field(ln, Some(t), "breakpoint")).collect::<Result<_, _>>()?;
                        if nums.is_empty() || nums.len() % 3 != 0 {
                            return Err(FormatError::Line { line: ln, msg: "breakpoints come in (t, x, y) triples".into() });
                        }
                        let tr: Vec<(f64, Vec2)> = nums.chunks(3).map(|c| (c[0], Vec2::new(c[1], c[2]))).collect();
                        if tr.windows(2).any(|w| w[1].0 <= w[0].0) {
                            return Err(FormatError::Line { line: ln, msg: "breakpoint times must increase".into() });
                        }
                        trajectories.push(tr);
                    }
                    _ => return Err(FormatError::Line { line: ln, msg: "unknown record".into() }),
                }
            }
            if trajectories.len() != n {
                return Err(FormatError::Missing("disc"));
            }
            Ok(PlanFile::Continuous(ContinuousPlan {
                trajectories,
                makespan: makespan.ok_or(FormatError::Missing("makespan"))?,
                phases: phases.ok_or(FormatError::Missing("phases"))?,
            }))
        }
        other => Err(FormatError::Header { expected: format!("{PLAN_HEADER} discrete|continuous"), found: format!("{PLAN_HEADER} {other}") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_ids_and_headers() {
        let bad = "oldr-instance 1\nworkspace 3 3\nrobot 2 3 3 3 3\n";
        assert!(matches!(read_instance(bad), Err(FormatError::Ids { .. })));
        assert!(matches!(read_instance("nope\n"), Err(FormatError::Header { .. })));
        assert!(matches!(read_instance("oldr-instance 1\nrobot 1 3 3 3 3\n"), Err(FormatError::Missing("workspace"))));
        assert!(matches!(read_instance("oldr-instance 1\nworkspace 3 3\nrobot 1 3 x 3 3\n"), Err(FormatError::Line { line: 3, .. })));
    }

    #[test]
    fn comments_are_skipped() {
        let text = "# made by hand\noldr-instance 1\n\nworkspace 3 3\n# one robot\nrobot 1 3 3 5.5 4.25\n";
        let inst = read_instance(text).unwrap();
        assert_eq!(inst.goals[0], Vec2::new(5.5, 4.25));
    }
}
