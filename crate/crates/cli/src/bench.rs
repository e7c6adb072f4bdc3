//! Benchmark suites: seeded instances per robot count, one row per run, and a
//! per-configuration summary with mean runtime and aggregate optimality ratio.

use std::fmt::Write as _;

use oldr::discretizer::ContinuousInstance;
use oldr::geometry::Workspace;
use oldr::ilp_core::Backend;
use oldr::instance_gen::{dense_continuous, random_continuous};
use oldr::validator::optimality_metrics;

use crate::pipeline::{solve_instance, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    Random,
    Dense { strict: bool },
    /// Random starts with goals equal to starts.
    Identity,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub workspace: Workspace,
    pub counts: Vec<usize>,
    pub seeds: Vec<u64>,
    pub pattern: Pattern,
    pub methods: Vec<Method>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawRow {
    pub method: String,
    pub n: usize,
    pub seed: u64,
    /// `ok` or a one-line failure message.
    pub status: String,
    pub time_s: f64,
    pub makespan: usize,
    pub underestimate: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub n: usize,
    pub mean_time: f64,
    pub ratio: f64,
    pub failures: usize,
}

pub fn generate(ws: &Workspace, n: usize, pattern: Pattern, seed: u64) -> Result<ContinuousInstance, String> {
    let inst = match pattern {
        Pattern::Random => random_continuous(ws, n, seed),
        Pattern::Dense { strict } => dense_continuous(ws, Some(n), strict, seed),
        Pattern::Identity => random_continuous(ws, n, seed).map(|mut i| {
            i.goals = i.starts.clone();
            i
        }),
    };
    inst.map_err(|e| e.to_string())
}

pub fn run_bench(spec: &BenchSpec, backend: &Backend) -> Vec<RawRow> {
    let mut rows = Vec::new();
    for method in &spec.methods {
        for &n in &spec.counts {
            for &seed in &spec.seeds {
                let mut row = RawRow { method: method.to_string(), n, seed, status: "ok".into(), time_s: 0.0, makespan: 0, underestimate: 0 };
                match generate(&spec.workspace, n, spec.pattern, seed).map_err(|e| format!("gen: {e}")).and_then(|inst| {
                    solve_instance(&inst, *method, backend).map_err(|e| e.to_string())
                }) {
                    Ok(out) => {
                        row.time_s = out.wall_time.as_secs_f64();
                        row.makespan = out.makespan;
                        row.underestimate = out.underestimate;
                    }
                    Err(e) => row.status = e.lines().next().unwrap_or("error").replace('\t', " "),
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// One summary row per (method, n) in first-seen order; failed runs are excluded from means.
pub fn summarize(raw: &[RawRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for r in raw {
        if !keys.iter().any(|(m, n)| *m == r.method && *n == r.n) {
            keys.push((r.method.clone(), r.n));
        }
    }
    keys.into_iter()
        .map(|(method, n)| {
            let group: Vec<&RawRow> = raw.iter().filter(|r| r.method == method && r.n == n).collect();
            let ok: Vec<&&RawRow> = group.iter().filter(|r| r.status == "ok").collect();
            let mean_time = if ok.is_empty() { f64::NAN } else { ok.iter().map(|r| r.time_s).sum::<f64>() / ok.len() as f64 };
            let pairs: Vec<(usize, usize)> = ok.iter().map(|r| (r.makespan, r.underestimate)).collect();
            let ratio = if ok.is_empty() { f64::NAN } else { optimality_metrics(&pairs).aggregate };
            SummaryRow { method, n, mean_time, ratio, failures: group.len() - ok.len() }
        })
        .collect()
}

pub fn summary_tsv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("method\tn\tmean_time\tratio\tfailures\n");
    for r in rows {
        writeln!(out, "{}\t{}\t{:.6}\t{:.6}\t{}", r.method, r.n, r.mean_time, r.ratio, r.failures).unwrap();
    }
    out
}

pub fn raw_tsv(rows: &[RawRow]) -> String {
    let mut out = String::from("method\tn\tseed\tstatus\ttime_s\tmakespan\tunderestimate\n");
    for r in rows {
        writeln!(out, "{}\t{}\t{}\t{}\t{:.6}\t{}\t{}", r.method, r.n, r.seed, r.status, r.time_s, r.makespan, r.underestimate).unwrap();
    }
    out
}

/// Two stacked line plots (mean runtime, ratio) against robot count, one line per method.
pub fn plot_svg(rows: &[SummaryRow]) -> String {
    const W: f64 = 520.0;
    const PH: f64 = 220.0;
    const PAD: f64 = 50.0;
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    let mut methods: Vec<&str> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
    }
    let finite = |v: f64| if v.is_finite() { Some(v) } else { None };
    let n_max = rows.iter().map(|r| r.n).max().unwrap_or(1).max(1) as f64;
    let n_min = rows.iter().map(|r| r.n).min().unwrap_or(0) as f64;
    let mut out = format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{}">"#, 2.0 * PH + 2.0 * PAD);
    out.push('\n');
    let panels: [(&str, fn(&SummaryRow) -> f64); 2] = [("mean time (s)", |r| r.mean_time), ("optimality ratio", |r| r.ratio)];
    for (pi, (label, get)) in panels.iter().enumerate() {
        let top = PAD / 2.0 + pi as f64 * (PH + PAD);
        let vmax = rows.iter().filter_map(|r| finite(get(r))).fold(0.0, f64::max).max(1e-9);
        let px = |n: usize| PAD + (n as f64 - n_min) / (n_max - n_min).max(1.0) * (W - 2.0 * PAD);
        let py = |v: f64| top + PH - v / vmax * (PH - 20.0);
        writeln!(out, r#"<rect x="{PAD}" y="{top}" width="{}" height="{PH}" fill="none" stroke="black"/>"#, W - 2.0 * PAD).unwrap();
        writeln!(out, r#"<text x="{PAD}" y="{}" font-size="12">{label} (max {vmax:.3})</text>"#, top - 4.0).unwrap();
        for (mi, m) in methods.iter().enumerate() {
            let pts: Vec<String> = rows
                .iter()
                .filter(|r| r.method == *m)
                .filter_map(|r| finite(get(r)).map(|v| format!("{:.2},{:.2}", px(r.n), py(v))))
                .collect();
            let c = colors[mi % colors.len()];
            writeln!(out, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="2"/>"#, pts.join(" ")).unwrap();
            writeln!(out, r#"<text x="{}" y="{}" font-size="11" fill="{c}">{m}</text>"#, W - PAD + 4.0, top + 14.0 * (mi + 1) as f64).unwrap();
        }
        writeln!(out, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">robots</text>"#, W / 2.0, top + PH + 16.0).unwrap();
    }
    out.push_str("</svg>\n");
    out
}
