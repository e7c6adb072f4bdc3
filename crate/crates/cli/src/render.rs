//! SVG drawings of instances and plans. Output bytes depend only on the inputs.

use std::fmt::Write as _;

use thiserror::Error;

use oldr::discretizer::ContinuousInstance;
use oldr::geometry::{TriGrid, Vec2, RADIUS};

use crate::formats::PlanFile;

const SCALE: f64 = 30.0;
const MARGIN: f64 = 10.0;
const PALETTE: [&str; 10] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("plan has {plan} robots, instance has {instance}")]
    RobotCount { plan: usize, instance: usize },
    #[error("plan uses vertex {0}, grid has {1}")]
    VertexRange(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RenderMode {
    /// Discs at a time (continuous plans) or step index (discrete plans).
    At(f64),
    /// Start and goal discs with every trajectory drawn as a polyline.
    Trace,
}

struct Canvas {
    height: f64,
    out: String,
}

impl Canvas {
    fn x(&self, p: Vec2) -> f64 {
        MARGIN + p.x * SCALE
    }
    fn y(&self, p: Vec2) -> f64 {
        self.height - MARGIN - p.y * SCALE
    }
    fn line(&mut self, a: Vec2, b: Vec2, style: &str) {
        let (x1, y1, x2, y2) = (self.x(a), self.y(a), self.x(b), self.y(b));
        writeln!(self.out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#).unwrap();
    }
    fn disc(&mut self, c: Vec2, style: &str, label: Option<usize>) {
        let (cx, cy) = (self.x(c), self.y(c));
        writeln!(self.out, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" {style}/>"#, RADIUS * SCALE).unwrap();
        if let Some(l) = label {
            writeln!(self.out, r#"<text x="{cx:.2}" y="{:.2}" font-size="11" text-anchor="middle">{l}</text>"#, cy + 4.0).unwrap();
        }
    }
    fn polyline(&mut self, pts: &[Vec2], style: &str) {
        let coords: Vec<String> = pts.iter().map(|&p| format!("{:.2},{:.2}", self.x(p), self.y(p))).collect();
        writeln!(self.out, r#"<polyline points="{}" fill="none" {style}/>"#, coords.join(" ")).unwrap();
    }
}

pub fn render_svg(inst: &ContinuousInstance, grid: &TriGrid, plan: Option<&PlanFile>, mode: RenderMode) -> Result<String, RenderError> {
    let n = inst.robot_count();
    let ws = &inst.workspace;
    match plan {
        Some(PlanFile::Discrete(p)) => {
            let pn = p.steps.first().map_or(0, |c| c.len());
            if pn != n {
                return Err(RenderError::RobotCount { plan: pn, instance: n });
            }
            if let Some(&v) = p.steps.iter().flatten().find(|&&v| v >= grid.vertex_count()) {
                return Err(RenderError::VertexRange(v, grid.vertex_count()));
            }
        }
        Some(PlanFile::Continuous(p)) if p.robot_count() != n => {
            return Err(RenderError::RobotCount { plan: p.robot_count(), instance: n });
        }
        _ => {}
    }
    let (w, h) = (ws.width * SCALE + 2.0 * MARGIN, ws.height * SCALE + 2.0 * MARGIN);
    let mut c = Canvas { height: h, out: String::new() };
    writeln!(c.out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#).unwrap();
    writeln!(c.out, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="white" stroke="black" stroke-width="2"/>"#, ws.width * SCALE, ws.height * SCALE).unwrap();
    for &(a, b) in grid.edges() {
        c.line(grid.position(a), grid.position(b), r##"stroke="#cccccc" stroke-width="1""##);
    }
    let color = |i: usize| PALETTE[i % PALETTE.len()];
    let positions: Vec<Vec2> = match (plan, mode) {
        (_, RenderMode::Trace) | (None, _) => inst.starts.clone(),
        (Some(PlanFile::Discrete(p)), RenderMode::At(t)) => {
            let k = (t.max(0.0) as usize).min(p.steps.len() - 1);
            p.steps[k].iter().map(|&v| grid.position(v)).collect()
        }
        (Some(PlanFile::Continuous(p)), RenderMode::At(t)) => (0..n).map(|d| p.position(d, t)).collect(),
    };
    if mode == RenderMode::Trace {
        for i in 0..n {
            let pts: Vec<Vec2> = match plan {
                Some(PlanFile::Discrete(p)) => p.steps.iter().map(|cfg| grid.position(cfg[i])).collect(),
                Some(PlanFile::Continuous(p)) => p.trajectories[i].iter().map(|b| b.1).collect(),
                None => vec![inst.starts[i], inst.goals[i]],
            };
            c.polyline(&pts, &format!(r#"stroke="{}" stroke-width="2""#, color(i)));
        }
        for (i, &g) in inst.goals.iter().enumerate() {
            c.disc(g, &format!(r#"fill="none" stroke="{}" stroke-dasharray="4 3""#, color(i)), Some(i + 1));
        }
    }
    for (i, &p) in positions.iter().enumerate() {
        c.disc(p, &format!(r#"fill="{}" fill-opacity="0.45" stroke="{}""#, color(i), color(i)), Some(i + 1));
    }
    c.out.push_str("</svg>\n");
    Ok(c.out)
}
