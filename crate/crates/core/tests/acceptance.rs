//! One line per acceptance criterion: `PASS`/`FAIL`, measured values, time.
//! Checks run one at a time so their time budgets are not shared.

use std::sync::Mutex;

use mbr_core::selftest::{run_criterion, SuiteMode};

static SERIAL: Mutex<()> = Mutex::new(());

fn check(id: usize) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome = run_criterion(id, SuiteMode::Full);
    println!("{outcome}");
    eprintln!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_01_psi_plus_zero() {
    check(1);
}

#[test]
fn criterion_02_uk_fidelity_bound() {
    check(2);
}

#[test]
fn criterion_03_overlap_bracket() {
    check(3);
}

#[test]
fn criterion_04_gram_rank() {
    check(4);
}

#[test]
fn criterion_05_sparse_volume() {
    check(5);
}

#[test]
fn criterion_06_tfim_sweep() {
    check(6);
}

#[test]
fn criterion_07_finite_size_trend() {
    check(7);
}

#[test]
fn criterion_08_support_certification() {
    check(8);
}

#[test]
fn criterion_09_hadamard_coverage() {
    check(9);
}

#[test]
fn criterion_10_tomography_fidelity() {
    check(10);
}

#[test]
fn criterion_11_lcu_bounds() {
    check(11);
}

#[test]
fn criterion_12_reduce_and_chop() {
    check(12);
}
