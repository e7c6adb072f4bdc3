#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;

use oldr::geometry::{build_grid, build_workspace, TriGrid};
use oldr::ilp_core::{Backend, ExternalSolver};
use oldr::plan::{check_step, DiscreteInstance};

pub fn grid(n1: usize, n2: usize) -> Arc<TriGrid> {
    Arc::new(build_grid(&build_workspace(n1, n2).unwrap()))
}

/// Optimal makespan by breadth-first search over joint configurations.
pub fn joint_bfs_makespan(inst: &DiscreteInstance) -> usize {
    let g = &inst.grid;
    let n = inst.robot_count();
    let mut dist: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(inst.starts.clone(), 0);
    queue.push_back(inst.starts.clone());
    while let Some(cfg) = queue.pop_front() {
        let d = dist[&cfg];
        if cfg == inst.goals {
            return d;
        }
        let options: Vec<Vec<usize>> = cfg
            .iter()
            .map(|&v| std::iter::once(v).chain(g.neighbors(v).iter().copied()).collect())
            .collect();
        let mut idx = vec![0; n];
        loop {
            let next: Vec<usize> = (0..n).map(|r| options[r][idx[r]]).collect();
            if !dist.contains_key(&next) && check_step(g, &cfg, &next).is_ok() {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                idx[k] += 1;
                if idx[k] < options[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    panic!("goal configuration unreachable")
}

pub fn highs_script() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts/highs_solve.py")
}

/// External backend through the bundled HiGHS wrapper, when python and highspy are present.
pub fn highs_backend() -> Option<Backend> {
    let ok = std::process::Command::new("python3")
        .args(["-c", "import highspy"])
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false);
    ok.then(|| {
        Backend::External(ExternalSolver {
            command: format!("python3 {} {{model}} {{solution}}", highs_script().display()),
        })
    })
}
