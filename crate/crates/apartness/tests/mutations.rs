//! The property battery must notice deliberately broken rules.

use apartness::selftest::{run, SelftestConfig};
use apartness_core::apartness::Mutation;

fn report(mutation: Mutation) -> apartness::selftest::Report {
    run(&SelftestConfig { count: 30, mutation, ..Default::default() })
}

#[test]
fn dropping_the_tau_premise_is_caught() {
    let r = report(Mutation::DropTauPremise);
    assert!(!r.passed());
    assert!(r.failures.iter().all(|f| f.suite == "lts"));
    // Every failure comes with a counterexample that still fails.
    assert!(r.failures.iter().all(|f| f.minimized.is_some()));
}

#[test]
fn checking_only_the_first_case_is_caught() {
    assert!(!report(Mutation::FirstCaseOnly).passed());
}

#[test]
fn unmutated_rules_pass() {
    assert!(report(Mutation::None).passed());
}
