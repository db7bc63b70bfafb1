use std::f64::consts::LN_10;

use fourier_multipliers::harness::*;
use fourier_multipliers::quadrature::{Finiteness, QuadratureConfig};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn embedding_report_over_the_full_corpus() {
    let r = run_embedding_report(&full_corpus(), &[1.0, 2.0, 4.0], &cfg()).unwrap();
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    for e in &r.entries {
        assert!(e.expected_mismatches.is_empty(), "{}: {:?}", e.name, e.expected_mismatches);
    }
    let names: Vec<&str> = r.entries.iter().map(|e| e.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    assert!(r.passed());
}

#[test]
fn odd_step_is_bounded_but_outside_h() {
    let corpus: Vec<CorpusEntry> = continuous_corpus().into_iter().filter(|e| e.name == "odd_step").collect();
    let r = run_embedding_report(&corpus, &[2.0], &cfg()).unwrap();
    let flags = match &r.entries[0].norms {
        EntryNorms::Function(n) => &n.finiteness_flags,
        EntryNorms::Sequence(_) => unreachable!(),
    };
    assert_eq!(flags["cb"], Finiteness::Finite);
    assert_eq!(flags["h"], Finiteness::DivergedSuspected);
}

#[test]
fn embedding_report_is_deterministic() {
    let a = serde_json::to_string(&run_embedding_report(&full_corpus(), &[1.0, 2.0], &cfg()).unwrap()).unwrap();
    let b = serde_json::to_string(&run_embedding_report(&full_corpus(), &[1.0, 2.0], &cfg()).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn quasiconvexity_dominates_s() {
    let r = run_quasiconvexity_check(&quasiconvexity_corpus(), &cfg()).unwrap();
    assert!(r.rows.len() >= 4);
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    for row in &r.rows {
        assert!(row.holds, "{row:?}");
        assert!((row.ln3_bound - 3f64.ln() * row.quasiconvexity).abs() <= 1e-15 * row.ln3_bound.abs().max(1.0));
    }
    let linear = r.rows.iter().find(|r| r.name == "linear").expect("linear entry");
    assert_eq!(linear.quasiconvexity, 0.0);
}

#[test]
fn counterexample_numbers() {
    let r = run_counterexample(&cfg()).unwrap();
    assert!(r.passed);
    assert!(r.aq_finite);
    assert_eq!(r.aq.len(), 3);
    assert!(r.aq.iter().all(|a| a.finiteness == Finiteness::Finite && a.value.is_finite()));
    assert!(r.hilbert.max_error <= 1e-3, "{}", r.hilbert.max_error);
    assert_eq!(r.hilbert.points, 201);
    for g in &r.growth {
        assert!((g.increment / (2.0 * LN_10) - 1.0).abs() <= 0.05, "{g:?}");
    }
}
