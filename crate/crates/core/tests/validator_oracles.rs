mod common;

use oldr::discretizer::discretize;
use oldr::geometry::{build_workspace, min_linear_distance, Vec2};
use oldr::ilp_core::{Backend, ExhaustiveLimits};
use oldr::instance_gen::{random_continuous, rng};
use oldr::triilp_solver::solve_triilp;
use oldr::validator::{synthesize, validate};
use rand::Rng;

/// Dense sampling refined by ternary search (the distance is convex in time).
fn sampled_min(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> f64 {
    let d = |t: f64| (p0 + (p1 - p0) * t).dist(q0 + (q1 - q0) * t);
    let n = 2000;
    let best = (0..=n).min_by(|&a, &b| d(a as f64 / n as f64).total_cmp(&d(b as f64 / n as f64))).unwrap();
    let (mut lo, mut hi) = (((best as f64 - 1.0) / n as f64).max(0.0), ((best as f64 + 1.0) / n as f64).min(1.0));
    for _ in 0..100 {
        let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if d(m1) < d(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    d((lo + hi) / 2.0)
}

#[test]
fn segment_distance_matches_sampling() {
    let mut r = rng(3);
    let mut p = || Vec2::new(r.random_range(-5.0..5.0), r.random_range(-5.0..5.0));
    for _ in 0..2000 {
        let (a, b, c, d) = (p(), p(), p(), p());
        let exact = min_linear_distance(a, b, c, d);
        assert!((exact - sampled_min(a, b, c, d)).abs() < 1e-6);
    }
}

#[test]
fn triilp_plans_validate_with_exact_makespan() {
    let ws = build_workspace(3, 4).unwrap();
    let g = common::grid(3, 4);
    let backend = Backend::Exhaustive(ExhaustiveLimits::default());
    let mut checked = 0;
    for seed in 0..30 {
        let inst = random_continuous(&ws, 1 + seed as usize % 3, seed).unwrap();
        let Ok((d, s, t)) = discretize(&inst, g.clone()) else { continue };
        let Ok((plan, _)) = solve_triilp(&d, &backend) else { continue };
        let cp = synthesize(&g, &plan, &s, &t).unwrap();
        let expect = s.max_distance + plan.makespan() as f64 * 4.0 / 3f64.sqrt() + t.max_distance;
        assert!((cp.makespan - expect).abs() < 1e-9);
        for (r, tr) in cp.trajectories.iter().enumerate() {
            assert_eq!(tr[0].1, inst.starts[r]);
            assert_eq!(tr.last().unwrap().1, inst.goals[r]);
            assert!((tr.last().unwrap().0 - cp.makespan).abs() < 1e-9);
        }
        let rep = validate(&cp, &ws);
        assert!(rep.is_valid(), "seed {seed}: {rep:?}");
        checked += 1;
    }
    assert!(checked >= 20);
}
