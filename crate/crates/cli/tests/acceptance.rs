//! Acceptance harness: one test per criterion, each printing a pass/fail
//! line with its runtime budget. Every tolerance is pinned in the suite
//! implementations; this file only selects fixtures and asserts outcomes.
//!
//! Criterion 8 (identification tau-sweep) is expected to fail on any fixed
//! graph: the discrete p-Wasserstein cost of moving mass across an edge is
//! linear in the mass, so the minimizing movement undershoots the heat flow
//! more as tau shrinks and the two trajectories do not approach each other
//! under tau-refinement alone. The check is asserted as stated anyway; the
//! suite report carries the measured values and the spatial-refinement
//! companion table.

use std::time::{Duration, Instant};

use qflow_cli::suites::{self, SuiteReport};

const SEED: u64 = 7;

fn run_criterion(
    number: usize,
    label: &str,
    budget: Duration,
    suite: fn(u64) -> SuiteReport,
) -> SuiteReport {
    let start = Instant::now();
    let report = suite(SEED);
    let elapsed = start.elapsed();
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] criterion {number} ({label}): {} checks in {elapsed:.2?} (budget {budget:?})",
        report.checks.len()
    );
    for check in &report.checks {
        if !check.passed {
            println!(
                "    [FAIL] {}: observed {:.6e} vs threshold {:.6e} ({})",
                check.name, check.observed, check.threshold, check.detail
            );
        }
    }
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its runtime budget: {elapsed:.2?} > {budget:?}"
    );
    report
}

fn assert_all(report: &SuiteReport) {
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| {
            format!(
                "{}: observed {:.6e} vs threshold {:.6e}",
                c.name, c.observed, c.threshold
            )
        })
        .collect();
    assert!(failed.is_empty(), "failed checks: {failed:#?}");
}

#[test]
fn criterion_01_exact_identity_suite() {
    let report = run_criterion(
        1,
        "exact q-Laplacian identities, 100 randomized graphs n <= 25",
        Duration::from_secs(5),
        suites::calculus_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_02_p_logarithm_suite() {
    let report = run_criterion(
        2,
        "p-exponential/p-logarithm toolkit",
        Duration::from_secs(1),
        suites::plog_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_03_heat_flow_structure() {
    let report = run_criterion(
        3,
        "heat flow mass/comparison/contraction/monotonicity",
        Duration::from_secs(60),
        suites::heatflow_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_04_dissipation_refinement() {
    let report = run_criterion(
        4,
        "dissipation identity defect halves with tau",
        Duration::from_secs(120),
        suites::dissipation_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_05_momentum_entropy_bounds() {
    let report = run_criterion(
        5,
        "momentum and Fisher-integral bounds",
        Duration::from_secs(60),
        suites::mass_preservation_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_06_transport_exactness() {
    let report = run_criterion(
        6,
        "exact transport vs polytope oracle, metric axioms",
        Duration::from_secs(30),
        suites::transport_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_07_kuwada_suite() {
    let report = run_criterion(
        7,
        "Kuwada ratios capped and nonincreasing under grid refinement",
        Duration::from_secs(300),
        suites::kuwada_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_08_identification_suite() {
    let report = run_criterion(
        8,
        "flow identification under tau-refinement, movement uniqueness",
        Duration::from_secs(600),
        suites::identify_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_09_slope_oracles() {
    let report = run_criterion(
        9,
        "slope search oracle below the vertex-slope bound",
        Duration::from_secs(120),
        suites::slope_suite,
    );
    assert_all(&report);
}

#[test]
fn criterion_10_convexity_witnesses() {
    let report = run_criterion(
        10,
        "midpoint convexity of the vertex Fisher functional",
        Duration::from_secs(30),
        suites::convexity_suite,
    );
    assert_all(&report);
}
