//! The acceptance suite as an integration test target: one test per
//! criterion, each printing its pass/fail line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the report.

use rcch::selftest;

fn assert_criterion(r: selftest::CriterionResult) {
    println!("{}", r.line());
    assert!(r.passed, "{}: {}", r.name, r.detail);
}

#[test]
fn criterion_1_axiom_soundness() {
    assert_criterion(selftest::axiom_soundness());
}

#[test]
fn criterion_2_rs_transport() {
    assert_criterion(selftest::rs_transport_check());
}

#[test]
fn criterion_3_synthesis_roundtrip() {
    assert_criterion(selftest::synthesis_roundtrip());
}

#[test]
fn criterion_4_parity_characterization() {
    assert_criterion(selftest::parity_characterization());
}

#[test]
fn criterion_5_codec_roundtrip() {
    assert_criterion(selftest::codec_roundtrip());
}

#[test]
fn criterion_6_normal_forms() {
    assert_criterion(selftest::normal_forms());
}

#[test]
fn criterion_7_gray_code() {
    assert_criterion(selftest::gray_code_checks());
}

#[test]
fn criterion_8_sigma_ladders() {
    assert_criterion(selftest::sigma_checks());
}
