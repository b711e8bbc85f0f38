//! Exactness of the transport layer: LP costs against the polytope-vertex
//! oracle on a fixed fixture set, metric structure at scale, and the
//! finite-difference speed surrogate.

use qflow_core::calculus::DensityField;
use qflow_core::heatflow::{FlowTrajectory, StepDiagnostics};
use qflow_core::space::MetricMeasureSpace;
use qflow_core::transport::{
    bruteforce_min_cost, metric_speed, verify_dual, wasserstein_p, ProbabilityVector,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn random_probability(space: &Arc<MetricMeasureSpace>, rng: &mut impl Rng) -> ProbabilityVector {
    let raw: Vec<f64> = (0..space.len()).map(|_| -rng.gen::<f64>().ln()).collect();
    let total: f64 = raw.iter().sum();
    ProbabilityVector::new(space.clone(), raw.iter().map(|x| x / total).collect()).unwrap()
}

/// Fixed fixture set: every pair drawn from a seeded generator on each space
/// with n <= 5, solved both ways.
#[test]
fn lp_cost_equals_polytope_vertex_minimum_on_fixture_set() {
    let spaces = vec![
        MetricMeasureSpace::path(2, 1.0, 1.0).unwrap(),
        MetricMeasureSpace::path(3, 0.5, 1.0).unwrap(),
        MetricMeasureSpace::path(4, 1.0, 2.0).unwrap(),
        MetricMeasureSpace::cycle(5, 1.0, 1.0).unwrap(),
        MetricMeasureSpace::path(5, 0.7, 1.0).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for space in spaces {
        for p in [1.5, 2.0, 2.5, 3.0] {
            for _ in 0..3 {
                let a = random_probability(&space, &mut rng);
                let b = random_probability(&space, &mut rng);
                let (_, plan) = wasserstein_p(&a, &b, p).unwrap();
                let brute = bruteforce_min_cost(&a, &b, p).unwrap();
                assert!(
                    (plan.cost - brute).abs() <= 1e-10 * (1.0 + brute),
                    "n = {}, p = {p}: {} vs {brute}",
                    space.len(),
                    plan.cost
                );
                let cert = verify_dual(&plan);
                assert!(cert.max_feasibility_violation <= 1e-9);
                assert!(cert.duality_gap.abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn metric_axioms_on_two_hundred_random_triples() {
    let spaces = [
        MetricMeasureSpace::cycle(12, 1.0, 1.0).unwrap(),
        MetricMeasureSpace::grid2d(3, 4, 0.8, 1.0).unwrap(),
        MetricMeasureSpace::path(11, 0.3, 1.0).unwrap(),
        MetricMeasureSpace::unit_interval(12).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for trial in 0..200 {
        let space = &spaces[trial % spaces.len()];
        let p = *[1.5, 2.0, 2.5, 3.0].choose(&mut rng).unwrap();
        let a = random_probability(space, &mut rng);
        let b = random_probability(space, &mut rng);
        let c = random_probability(space, &mut rng);
        let (ab, _) = wasserstein_p(&a, &b, p).unwrap();
        let (ba, _) = wasserstein_p(&b, &a, p).unwrap();
        let (ac, _) = wasserstein_p(&a, &c, p).unwrap();
        let (cb, _) = wasserstein_p(&c, &b, p).unwrap();
        assert!((ab - ba).abs() <= 1e-10, "symmetry, trial {trial}");
        assert!(ab <= ac + cb + 1e-9, "triangle, trial {trial}");
        let (aa, _) = wasserstein_p(&a, &a, p).unwrap();
        assert!(aa <= 1e-10);
    }
}

fn trajectory_of(states: Vec<DensityField>, times: Vec<f64>) -> FlowTrajectory {
    let diagnostics = times
        .iter()
        .map(|&t| StepDiagnostics {
            time: t,
            mass: 1.0,
            cheeger: 0.0,
            entropy: None,
            fisher: None,
            fisher_vertex: None,
            moment: None,
            moment_bound: None,
            dissipation_integral: None,
            residual: 0.0,
            wp_increment: None,
        })
        .collect();
    FlowTrajectory {
        times,
        states,
        diagnostics,
    }
}

#[test]
fn stationary_trajectory_has_zero_speed() {
    let s = MetricMeasureSpace::path(6, 1.0, 1.0).unwrap();
    let f = DensityField::from_fn(s, |i| 1.0 + i as f64 * 0.1).unwrap();
    let traj = trajectory_of(vec![f.clone(), f.clone(), f], vec![0.0, 0.1, 0.2]);
    for v in metric_speed(&traj, 2.5).unwrap() {
        assert_eq!(v, 0.0);
    }
}

#[test]
fn linear_interpolation_of_an_adjacent_transfer_moves_at_constant_speed() {
    // mu0 and mu1 differ by a mass transfer across one edge; the linear
    // interpolation traverses it at constant w_p speed
    let s = MetricMeasureSpace::path(4, 1.0, 1.0).unwrap();
    let w0 = [0.4, 0.1, 0.25, 0.25];
    let w1 = [0.1, 0.4, 0.25, 0.25];
    let subdivisions = 4usize;
    let mut states = Vec::new();
    let mut times = Vec::new();
    for k in 0..=subdivisions {
        let t = k as f64 / subdivisions as f64;
        let w: Vec<f64> = w0
            .iter()
            .zip(&w1)
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        let nu = ProbabilityVector::new(s.clone(), w).unwrap();
        states.push(nu.density());
        times.push(t);
    }
    let speeds = metric_speed(&trajectory_of(states, times), 2.5).unwrap();
    let mean = speeds.iter().sum::<f64>() / speeds.len() as f64;
    for v in &speeds {
        assert!(
            (v - mean).abs() <= 0.05 * mean,
            "speeds not constant to 5%: {speeds:?}"
        );
    }
}

#[test]
fn triangle_inequality_along_a_trajectory() {
    let s = MetricMeasureSpace::cycle(7, 1.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let states: Vec<DensityField> = (0..4)
        .map(|_| random_probability(&s, &mut rng).density())
        .collect();
    let times = vec![0.0, 0.1, 0.2, 0.3];
    let p = 2.5;
    let endpoints = (
        ProbabilityVector::from_density(&states[0]).unwrap(),
        ProbabilityVector::from_density(&states[3]).unwrap(),
    );
    let (direct, _) = wasserstein_p(&endpoints.0, &endpoints.1, p).unwrap();
    let speeds = metric_speed(&trajectory_of(states, times), p).unwrap();
    let total: f64 = speeds.iter().map(|v| v * 0.1).sum();
    assert!(direct <= total + 1e-9);
}

#[test]
fn large_problem_certificates_stay_tight() {
    // the n = 64 regime exercised by the flow comparison suites
    let s = MetricMeasureSpace::unit_interval(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for p in [1.5, 2.5] {
        let a = random_probability(&s, &mut rng);
        let b = random_probability(&s, &mut rng);
        let (d, plan) = wasserstein_p(&a, &b, p).unwrap();
        assert!(d.is_finite() && d > 0.0);
        let cert = verify_dual(&plan);
        assert!(cert.max_feasibility_violation <= 1e-9);
        assert!(cert.max_support_slack <= 1e-9);
        assert!(cert.duality_gap.abs() <= 1e-9);
        let n = s.len();
        for i in 0..n {
            let row: f64 = plan.pi[i].iter().sum();
            assert!((row - a.weights()[i]).abs() <= 1e-10);
        }
    }
}
