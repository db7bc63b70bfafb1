mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use common::*;
use fourier_multipliers::discrete::*;
use fourier_multipliers::quadrature::Finiteness;
use fourier_multipliers::report::Certificate;
use fourier_multipliers::sequence::{SequenceDescriptor, SequenceTail};

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

#[test]
fn delta_sequence_has_unit_variation() {
    let d = SequenceDescriptor::delta();
    let r = delta_l1(&d, &cfg());
    assert_eq!(r.value, delta_l1_oracle(&d, 10));
    assert_eq!(r.value, 1.0);
    assert_eq!(r.finiteness(), Finiteness::Finite);
}

#[test]
fn variation_matches_oracle() {
    for lambda in [SequenceDescriptor::hat(8), SequenceDescriptor::one_sided_geometric(0.5, 32).unwrap()] {
        let r = delta_l1(&lambda, &cfg());
        assert_close(r.value, delta_l1_oracle(&lambda, 200), 1e-9, "‖Δλ‖₁");
    }
    // nine steps of 1/9 on the right, eight on the left: Δλ(−1) = λ(−1) − λ(−2) skips λ(0)
    assert_close(delta_l1(&SequenceDescriptor::hat(8), &cfg()).value, 17.0 / 9.0, 1e-14, "hat");
}

#[test]
fn s_of_small_hat_matches_oracle() {
    let hat = SequenceDescriptor::hat(2);
    let r = s_functional_discrete(&hat, SMode::Verbatim, &cfg());
    assert_close(r.value, s_discrete_oracle(&hat, 40), 1e-14, "s of hat(2)");
    assert!(r.converged);
}

#[test]
fn s_of_truncated_harmonic_sequence_matches_oracle() {
    for n in [1u64 << 9, 1 << 10] {
        let lambda = SequenceDescriptor::one_sided_inverse_linear(n, true);
        let r = s_functional_discrete(&lambda, SMode::Verbatim, &cfg());
        let oracle = s_discrete_oracle(&lambda, 2 * n as i64 + 2);
        assert_close(r.value, oracle, 1e-10 * oracle, &format!("s at N = {n}"));
    }
}

#[test]
fn symmetrized_s_adds_the_reflection() {
    let lambda = SequenceDescriptor::one_sided_geometric(0.5, 12).unwrap();
    let sym = s_functional_discrete(&lambda, SMode::Symmetrized, &cfg()).value;
    let right = s_functional_discrete(&lambda, SMode::Verbatim, &cfg()).value;
    let left = s_functional_discrete(&lambda.reflected(), SMode::Verbatim, &cfg()).value;
    assert_close(sym, right + left, 1e-14, "s symmetrized");
}

#[test]
fn a_of_one_sided_geometric_is_a_logarithm() {
    // Σ r^k/k = −ln(1 − r)
    for r in [0.5, 0.3, 0.9] {
        let lambda = SequenceDescriptor::one_sided_geometric(r, 16).unwrap();
        let a = a_functional_discrete(&lambda, &cfg());
        let exact = -(1.0 - r).ln();
        assert_close(a.value, exact, 1e-9f64.max(a.error_estimate), &format!("a at r = {r}"));
        assert_close(a_discrete_oracle(&lambda, 2000), exact, 1e-12, "oracle");
    }
}

#[test]
fn single_block_aq_values() {
    let lambda = SequenceDescriptor::from_fn(4, SequenceTail::Zero, |k| if k.abs() == 3 { 1.0 } else { 0.0 }).unwrap();
    let two = aq_functional_discrete(&lambda, 2.0, InfMode::Printed, &cfg()).unwrap();
    assert_close(two.value, aq_discrete_oracle(&lambda, 2.0, 4), 1e-14, "a_2");
    assert_close(two.value, 2.0 * 2f64.sqrt(), 1e-14, "a_2");
}

#[test]
fn aq_of_inverse_linear_matches_oracle() {
    let lambda = SequenceDescriptor::inverse_linear(64, false);
    for q in [2.0, f64::INFINITY] {
        let r = aq_functional_discrete(&lambda, q, InfMode::Printed, &cfg()).unwrap();
        let oracle = aq_discrete_oracle(&lambda, q, 20);
        assert!(r.converged, "q = {q}: {r:?}");
        // the oracle leaves out blocks beyond 2²⁰, worth about 2⁻²⁰
        assert_close(r.value, oracle, r.error_estimate + 4e-6, &format!("a_q at q = {q}"));
    }
}

#[test]
fn aq_rejects_small_exponents() {
    assert!(aq_functional_discrete(&SequenceDescriptor::delta(), 1.0, InfMode::Printed, &cfg()).is_err());
}

#[test]
fn alternating_sequence_diverges() {
    let r = assemble_sequence_report(&SequenceDescriptor::alternating(16), &[2.0], &cfg()).unwrap();
    assert_eq!(r.finiteness_flags["delta_l1"], Finiteness::DivergedSuspected);
    assert_eq!(r.finiteness_flags["bv"], Finiteness::DivergedSuspected);
    assert_eq!(r.finiteness_flags["h"], Finiteness::DivergedSuspected);
    assert_eq!(r.h_certificate, Certificate::NotCertified);
    assert!(!r.vanishes_at_infinity);
}

#[test]
fn report_identities() {
    for lambda in [
        SequenceDescriptor::hat(8),
        SequenceDescriptor::one_sided_geometric(0.5, 32).unwrap(),
        SequenceDescriptor::inverse_linear(64, false),
    ] {
        let r = assemble_sequence_report(&lambda, &[1.0, 2.0, 4.0], &cfg()).unwrap();
        assert_eq!(r.bv_norm, r.m_norm + r.delta_l1);
        assert_eq!(r.h_norm, r.bv_norm + r.s_value + r.a_value);
        for (key, bvp) in &r.bvp_norms {
            assert_eq!(*bvp, r.m_norm + r.aq_values[key] + r.a_value, "bv_{key}");
        }
        assert_eq!(r.m_norm, 1.0);
    }
}

#[test]
fn constant_sequence_report() {
    let r = assemble_sequence_report(&SequenceDescriptor::constant(2.0), &[2.0], &cfg()).unwrap();
    assert_eq!((r.m_norm, r.delta_l1, r.s_value, r.a_value), (2.0, 0.0, 0.0, 0.0));
    assert_eq!(r.h_certificate, Certificate::Member);
    assert!(!r.series_pathway_ready());
}

fn finite_sequence() -> impl Strategy<Value = SequenceDescriptor> {
    (0u64..12).prop_flat_map(|n| {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 2 * n as usize + 1).prop_map(|v| {
            SequenceDescriptor::new(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect(), SequenceTail::Zero)
                .unwrap()
        })
    })
}

fn seminorms(lambda: &SequenceDescriptor) -> [f64; 5] {
    let c = cfg();
    [
        delta_l1(lambda, &c).value,
        s_functional_discrete(lambda, SMode::Verbatim, &c).value,
        a_functional_discrete(lambda, &c).value,
        aq_functional_discrete(lambda, 2.0, InfMode::Printed, &c).unwrap().value,
        aq_functional_discrete(lambda, f64::INFINITY, InfMode::Printed, &c).unwrap().value,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn seminorms_are_homogeneous(lambda in finite_sequence(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let c = Complex64::new(re, im);
        let base = seminorms(&lambda);
        let scaled = seminorms(&lambda.scaled(c));
        for (b, s) in base.iter().zip(&scaled) {
            prop_assert!((s - c.norm() * b).abs() <= 1e-12 * (1.0 + s.abs()), "{s} vs |c|·{b}");
        }
    }

    #[test]
    fn even_sequences_have_zero_a(half in prop::collection::vec(-2.0..2.0f64, 1..16)) {
        let n = half.len() as i64 - 1;
        let lambda = SequenceDescriptor::from_fn(n as u64, SequenceTail::Zero, |k| half[k.unsigned_abs() as usize]).unwrap();
        prop_assert_eq!(a_functional_discrete(&lambda, &cfg()).value, 0.0);
    }

    #[test]
    fn finitely_supported_sums_match_oracles(lambda in finite_sequence()) {
        let n = lambda.radius() as i64;
        let got = seminorms(&lambda);
        // every oracle range reaches past the support, where all terms vanish
        let expected = [
            delta_l1_oracle(&lambda, n + 2),
            s_discrete_oracle(&lambda, 2 * n + 4),
            a_discrete_oracle(&lambda, n + 2),
            aq_discrete_oracle(&lambda, 2.0, 6),
            aq_discrete_oracle(&lambda, f64::INFINITY, 6),
        ];
        for (g, e) in got.iter().zip(&expected) {
            prop_assert!((g - e).abs() <= 1e-12 * (1.0 + e.abs()), "{g} vs {e}");
        }
    }
}
