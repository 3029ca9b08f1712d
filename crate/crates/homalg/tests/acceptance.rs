//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every tolerance here is exactness — all arithmetic is rational — and all
//! expected values are regenerated by internal oracles (PBW counts, word
//! counts, Künneth, classical tables), never hardcoded from measurements.

use homalg::check::{
    check_barcobar_unit, check_coext_equals_ext, check_ext_base_cohomology,
    check_koszul_acyclicity, check_loop_space_homology, check_simplicial_cross,
    check_spectral_sequences, check_structural_suites, check_t_equivalence_logic, CheckResult,
};

fn report(result: CheckResult) {
    let status = if result.passed { "PASS" } else { "FAIL" };
    println!("[{status}] {}: {}", result.name, result.details);
    assert!(result.passed, "{}: {}", result.name, result.details);
}

#[test]
fn criterion_1_koszul_acyclicity() {
    report(check_koszul_acyclicity().unwrap());
}

#[test]
fn criterion_2_barcobar_unit() {
    report(check_barcobar_unit().unwrap());
}

#[test]
fn criterion_3_loop_space_homology() {
    report(check_loop_space_homology().unwrap());
}

#[test]
fn criterion_4_ext_base_cohomology() {
    report(check_ext_base_cohomology().unwrap());
}

#[test]
fn criterion_5_coext_equals_ext() {
    report(check_coext_equals_ext(20).unwrap());
}

#[test]
fn criterion_6_spectral_sequence_reconciliation() {
    report(check_spectral_sequences(3).unwrap());
}

#[test]
fn criterion_7_t_equivalence_logic() {
    report(check_t_equivalence_logic(50).unwrap());
}

#[test]
fn criterion_8_simplicial_cross_check() {
    report(check_simplicial_cross().unwrap());
}

#[test]
fn criterion_9_structural_suites() {
    report(check_structural_suites().unwrap());
}
