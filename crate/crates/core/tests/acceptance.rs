//! The nine acceptance criteria, each at its stated tolerance. Every test
//! prints one PASS/FAIL line; run with `--nocapture` to see them.

use opschmidt::verify::{self, CriterionReport};
use opschmidt::DEFAULT_REL_TOL;

fn check(report: CriterionReport) {
    println!("{} [{:.0} ms]", report.line(), report.elapsed_ms);
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_1_catalog_reproduction() {
    check(verify::criterion_1(DEFAULT_REL_TOL));
}

#[test]
fn criterion_2_table_fidelity() {
    check(verify::criterion_2());
}

#[test]
fn criterion_3_impossibility_certificate() {
    check(verify::criterion_3());
}

#[test]
fn criterion_4_analytic_vs_oracle() {
    check(verify::criterion_4(DEFAULT_REL_TOL));
}

#[test]
fn criterion_5_qft_sweep() {
    check(verify::criterion_5(DEFAULT_REL_TOL));
}

#[test]
fn criterion_6_communication_bounds() {
    check(verify::criterion_6(DEFAULT_REL_TOL));
}

#[test]
fn criterion_7_biunimodularity() {
    check(verify::criterion_7(DEFAULT_REL_TOL));
}

#[test]
fn criterion_8_swap() {
    check(verify::criterion_8(DEFAULT_REL_TOL));
}

#[test]
fn criterion_9_determinant_gradient() {
    check(verify::criterion_9());
}
