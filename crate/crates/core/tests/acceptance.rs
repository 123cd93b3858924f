//! Acceptance suite: one test per criterion, each printing a pass/fail line.

use schurcert::acceptance::{run, DEFAULT_SEED};

fn check(id: u32) {
    let report = run(id, DEFAULT_SEED);
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_tk_closed_form_and_bound() {
    check(1);
}

#[test]
fn criterion_02_tk_combination_lower_bound() {
    check(2);
}

#[test]
fn criterion_03_legendre_scaling_and_divergence() {
    check(3);
}

#[test]
fn criterion_04_legendre_lower_bound() {
    check(4);
}

#[test]
fn criterion_05_cartan_recovery() {
    check(5);
}

#[test]
fn criterion_06_construction_cases() {
    check(6);
}

#[test]
fn criterion_07_increment_paths() {
    check(7);
}

#[test]
fn criterion_08_factorization_examples() {
    check(8);
}

#[test]
fn criterion_09_estimator_soundness() {
    check(9);
}

#[test]
fn criterion_10_block_averaging() {
    check(10);
}

#[test]
fn criterion_11_certificate_pipeline() {
    check(11);
}
