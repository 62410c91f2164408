//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see
//! the table; the `collapse reproduce` subcommand prints the same checks.

use collapse_core::reproduce::{self, CriterionOutcome};

fn check(outcome: CriterionOutcome) {
    println!(
        "{} {}  {}  [{} ms]  {}",
        outcome.id,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.label,
        outcome.elapsed_ms,
        outcome.detail
    );
    assert!(outcome.passed, "{}: {}", outcome.label, outcome.detail);
}

#[test]
fn criterion_1_literal_lengths() {
    check(reproduce::criterion_1_literals());
}

#[test]
fn criterion_2_synchronizing_word_on_four_states() {
    check(reproduce::criterion_2_synchronizing());
}

#[test]
fn criterion_3_counterexample_images() {
    check(reproduce::criterion_3_counterexample());
}

#[test]
fn criterion_4_five_state_sweep() {
    check(reproduce::criterion_4_five_state_sweep());
}

#[test]
fn criterion_5_superstring_optima() {
    check(reproduce::criterion_5_superstring());
}

#[test]
fn criterion_6_collapsing_certificate() {
    check(reproduce::criterion_6_certificate());
}

#[test]
fn criteria_7_and_8_oracle_equivalence_and_deep_branches() {
    let (c7, rep4, rep5) = reproduce::criterion_7_oracle_equivalence();
    check(c7);
    check(reproduce::criterion_8_deep_branches(&rep4, &rep5));
}

#[test]
fn criterion_9_property_suites() {
    check(reproduce::criterion_9_property_suites());
}
