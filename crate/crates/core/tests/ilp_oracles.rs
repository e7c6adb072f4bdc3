mod common;

use oldr::ilp_core::{build_model, build_model_with, sharp_angle_rows, solve, Backend, ExhaustiveLimits, ModelOptions};
use oldr::instance_gen::{random_discrete, rng};
use oldr::plan::check_plan;
use oldr::triilp_solver::{solve_split, solve_triilp, underestimated_makespan};
use rand::Rng;

fn exhaustive() -> Backend {
    Backend::Exhaustive(ExhaustiveLimits::default())
}

#[test]
fn triilp_matches_joint_bfs() {
    let g = common::grid(2, 3);
    let mut checked = 0;
    for seed in 0..60 {
        let n = 1 + (seed as usize % 3);
        let inst = random_discrete(g.clone(), n, seed).unwrap();
        let opt = common::joint_bfs_makespan(&inst);
        assert!(underestimated_makespan(&inst).unwrap() <= opt);
        if opt > ExhaustiveLimits::default().max_horizon {
            continue;
        }
        let (plan, rep) = solve_triilp(&inst, &exhaustive()).unwrap();
        check_plan(&inst, &plan).unwrap();
        assert_eq!(rep.makespan, opt, "seed {seed}");
        assert!(rep.optimality_ratio >= 1.0);
        checked += 1;
    }
    assert!(checked >= 50, "only {checked} instances checked");
}

#[test]
fn pruning_is_sound_and_objective_is_monotone() {
    let g = common::grid(2, 3);
    for seed in 0..25 {
        let inst = random_discrete(g.clone(), 2 + (seed as usize % 2), 100 + seed).unwrap();
        let mut last = 0;
        for t in 1..=5 {
            let pruned = build_model(&inst, t).unwrap();
            let full = build_model_with(&inst, t, ModelOptions { prune: false }).unwrap();
            assert!(pruned.variables.len() <= full.variables.len());
            let a = solve(&pruned, &exhaustive()).unwrap().objective_value;
            let b = solve(&full, &exhaustive()).unwrap().objective_value;
            assert_eq!(a, b, "seed {seed} horizon {t}");
            assert!(a >= last);
            last = a;
        }
    }
}

#[test]
fn triangle_rows_imply_sharp_angle_rows() {
    let g = common::grid(2, 3);
    let inst = random_discrete(g, 3, 5).unwrap();
    let model = build_model_with(&inst, 3, ModelOptions { prune: false }).unwrap();
    let angles = sharp_angle_rows(&model, &inst);
    let tri: Vec<_> = model.rows.iter().filter(|r| r.family == oldr::ilp_core::Family::Triangle).collect();
    let mut r = rng(17);
    let mut premise = 0;
    for _ in 0..10_000 {
        let p = r.random_range(0.0..0.02);
        let values: Vec<bool> = (0..model.variables.len()).map(|_| r.random_bool(p)).collect();
        if tri.iter().all(|row| row.holds(&values)) {
            premise += 1;
            assert!(angles.iter().all(|row| row.holds(&values)));
        }
    }
    assert!(premise > 1000, "premise held only {premise} times");
}

#[test]
fn all_constraint_families_present() {
    use oldr::ilp_core::Family::*;
    let g = common::grid(2, 3);
    let inst = random_discrete(g, 3, 8).unwrap();
    let m = build_model(&inst, 4).unwrap();
    for f in [Flow, Coupling, Vertex, Edge, Triangle] {
        assert!(m.family_count(f) > 0, "{f:?}");
    }
    for row in &m.rows {
        assert!(row.terms.iter().all(|&(v, _)| v < m.variables.len()));
    }
}

#[test]
fn split_plans_are_valid_and_not_better() {
    let g = common::grid(2, 3);
    for seed in 0..10 {
        let inst = random_discrete(g.clone(), 3, 300 + seed).unwrap();
        let (plan1, rep1) = solve_triilp(&inst, &exhaustive()).unwrap();
        check_plan(&inst, &plan1).unwrap();
        let (plan2, rep2) = solve_split(&inst, 2, &exhaustive()).unwrap();
        check_plan(&inst, &plan2).unwrap();
        assert!(rep2.makespan >= rep1.makespan);
        assert!(rep2.optimality_ratio >= rep1.optimality_ratio);
        assert_eq!(rep2.split_k, 2);
    }
}

#[test]
fn external_backend_agrees_with_exhaustive() {
    let Some(highs) = common::highs_backend() else {
        eprintln!("highspy not available; skipping");
        return;
    };
    let g = common::grid(2, 3);
    for seed in 0..10 {
        let inst = random_discrete(g.clone(), 2 + (seed as usize % 3), 500 + seed).unwrap();
        let t = underestimated_makespan(&inst).unwrap().max(1);
        for horizon in [t, t + 1] {
            let m = build_model(&inst, horizon).unwrap();
            let a = solve(&m, &exhaustive()).unwrap();
            let b = solve(&m, &highs).unwrap();
            assert_eq!(a.objective_value, b.objective_value, "seed {seed} horizon {horizon}");
            assert_eq!(m.violated_row(&b.values), None);
        }
    }
}
