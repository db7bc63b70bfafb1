//! Built-in corpora, embedding reports over the spaces of multipliers, the
//! quasiconvexity domination check and the `1/(1+x²)` counterexample.

use std::collections::BTreeMap;
use std::f64::consts::LN_10;

use rayon::prelude::*;
use serde::Serialize;

use crate::continuous::{
    aq_functional, assemble_norm_report, hilbert_l1_truncated, hilbert_transform, quasiconvexity_functional,
    s_functional_one_sided, NormReport,
};
use crate::discrete::{assemble_sequence_report, SequenceNormReport, SeriesConfig};
use crate::error::{Error, Result};
use crate::function::{Family, FunctionDescriptor};
use crate::quadrature::{Finiteness, IntegralResult, QuadratureConfig};
use crate::report::{exponent_key, SCHEMA_VERSION};
use crate::sequence::SequenceDescriptor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Paper,
    Derived,
    Trivial,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusDescriptor {
    Function(FunctionDescriptor),
    Sequence(SequenceDescriptor),
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub descriptor: CorpusDescriptor,
    /// Flags with a recorded oracle, keyed as in the norm reports.
    pub expected_flags: BTreeMap<String, Finiteness>,
    pub provenance: Provenance,
}

impl CorpusEntry {
    fn new(name: &str, descriptor: CorpusDescriptor, provenance: Provenance, expected: &[(&str, Finiteness)]) -> Self {
        CorpusEntry {
            name: name.to_string(),
            descriptor,
            expected_flags: expected.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            provenance,
        }
    }

    pub fn function(&self) -> Option<&FunctionDescriptor> {
        match &self.descriptor {
            CorpusDescriptor::Function(f) => Some(f),
            CorpusDescriptor::Sequence(_) => None,
        }
    }
}

/// Gaussians, the Poisson kernel, `e^{−|x|}`, a hat and `tanh`.
pub fn continuous_corpus() -> Vec<CorpusEntry> {
    use Finiteness::*;
    let f = |family: Family| CorpusDescriptor::Function(family.into());
    let smooth = [("cb", Finite), ("h", Finite), ("a", Finite)];
    vec![
        CorpusEntry::new("gaussian_0.5", f(Family::Gaussian { sigma: 0.5 }), Provenance::Derived, &smooth),
        CorpusEntry::new("gaussian_1", f(Family::Gaussian { sigma: 1.0 }), Provenance::Derived, &smooth),
        CorpusEntry::new("gaussian_2", f(Family::Gaussian { sigma: 2.0 }), Provenance::Derived, &smooth),
        CorpusEntry::new("poisson", f(Family::Poisson { scale: 1.0 }), Provenance::Paper, &smooth),
        CorpusEntry::new("exp_abs", f(Family::ExpAbs { rate: 1.0 }), Provenance::Derived, &smooth),
        CorpusEntry::new("hat_1", f(Family::Hat { width: 1.0 }), Provenance::Derived, &smooth),
        CorpusEntry::new(
            "odd_step",
            f(Family::OddStep { width: 1.0 }),
            Provenance::Derived,
            &[("cb", Finite), ("a", DivergedSuspected), ("h", DivergedSuspected)],
        ),
    ]
}

/// Delta, hat, one-sided geometric, `1/(|k|+1)` and an alternating window.
pub fn discrete_corpus() -> Vec<CorpusEntry> {
    use Finiteness::*;
    let s = CorpusDescriptor::Sequence;
    let member = [("bv", Finite), ("h", Finite)];
    vec![
        CorpusEntry::new("delta", s(SequenceDescriptor::delta()), Provenance::Trivial, &member),
        CorpusEntry::new("hat_8", s(SequenceDescriptor::hat(8)), Provenance::Derived, &member),
        CorpusEntry::new(
            "one_sided_geometric",
            s(SequenceDescriptor::one_sided_geometric(0.5, 32).expect("ratio below one")),
            Provenance::Derived,
            &member,
        ),
        CorpusEntry::new(
            "inverse_linear",
            s(SequenceDescriptor::inverse_linear(64, false)),
            Provenance::Derived,
            &[("delta_l1", Finite), ("a", Finite)],
        ),
        CorpusEntry::new(
            "alternating",
            s(SequenceDescriptor::alternating(16)),
            Provenance::Derived,
            &[("delta_l1", DivergedSuspected), ("bv", DivergedSuspected), ("h", DivergedSuspected)],
        ),
    ]
}

pub fn full_corpus() -> Vec<CorpusEntry> {
    let mut all = continuous_corpus();
    all.extend(discrete_corpus());
    all
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryNorms {
    Function(NormReport),
    Sequence(SequenceNormReport),
}

impl EntryNorms {
    fn flags(&self) -> &BTreeMap<String, Finiteness> {
        match self {
            EntryNorms::Function(r) => &r.finiteness_flags,
            EntryNorms::Sequence(r) => &r.finiteness_flags,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub provenance: Provenance,
    pub norms: EntryNorms,
    /// `(flag, expected, computed)` for every expected flag that was not reproduced.
    pub expected_mismatches: Vec<(String, Finiteness, Finiteness)>,
}

/// One row of the implication table: membership in `smaller` forces `larger`.
#[derive(Clone, Debug, Serialize)]
pub struct Implication {
    pub entry: String,
    pub smaller: String,
    pub larger: String,
    pub smaller_flag: Finiteness,
    pub larger_flag: Finiteness,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub schema_version: u32,
    pub p_list: Vec<f64>,
    pub entries: Vec<EntryReport>,
    pub implications: Vec<Implication>,
    pub violations: Vec<Implication>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.entries.iter().all(|e| e.expected_mismatches.is_empty())
    }
}

/// Pairs `(smaller, larger)` of flag names: the `ℬ_p` chain and `ℬ_p ⊂ ℋ`, or the
/// `bv_p` chain and `bv_p ⊂ h`.
fn chain(p_list: &[f64], block: &str, whole: &str) -> Vec<(String, String)> {
    let mut ps: Vec<f64> = p_list.to_vec();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let keys: Vec<String> = ps.iter().map(|&p| format!("{block}_{}", exponent_key(p))).collect();
    let mut pairs = Vec::new();
    for (i, small) in keys.iter().enumerate() {
        for large in &keys[i + 1..] {
            pairs.push((small.clone(), large.clone()));
        }
        pairs.push((small.clone(), whole.to_string()));
        pairs.push((small.clone(), "h".to_string()));
    }
    pairs
}

fn entry_norms(entry: &CorpusEntry, p_list: &[f64], cfg: &QuadratureConfig) -> Result<EntryReport> {
    let norms = match &entry.descriptor {
        CorpusDescriptor::Function(f) => EntryNorms::Function(assemble_norm_report(f, p_list, cfg)?),
        CorpusDescriptor::Sequence(s) => {
            EntryNorms::Sequence(assemble_sequence_report(s, p_list, &SeriesConfig::from(cfg))?)
        }
    };
    let flags = norms.flags();
    let expected_mismatches = entry
        .expected_flags
        .iter()
        .filter_map(|(k, want)| {
            let got = flags.get(k).copied().unwrap_or(Finiteness::NotConverged);
            (got != *want).then(|| (k.clone(), *want, got))
        })
        .collect();
    Ok(EntryReport { name: entry.name.clone(), provenance: entry.provenance, norms, expected_mismatches })
}

/// All norms of every entry and the implication tables. Entries run in parallel and
/// are reported in name order.
pub fn run_embedding_report(corpus: &[CorpusEntry], p_list: &[f64], cfg: &QuadratureConfig) -> Result<EmbeddingReport> {
    if corpus.is_empty() {
        return Err(Error::Precondition("the corpus is empty".into()));
    }
    cfg.validate()?;
    let mut names: Vec<&str> = corpus.iter().map(|e| e.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(format!("duplicate corpus entry `{}`", w[0])));
    }
    let mut entries = corpus.par_iter().map(|e| entry_norms(e, p_list, cfg)).collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.name.cmp(&b.name));

    let continuous = chain(p_list, "bp", "cb");
    let discrete = chain(p_list, "bvp", "bv");
    let mut implications = Vec::new();
    for e in &entries {
        let pairs = match e.norms {
            EntryNorms::Function(_) => &continuous,
            EntryNorms::Sequence(_) => &discrete,
        };
        let flags = e.norms.flags();
        for (small, large) in pairs {
            let sf = flags.get(small).copied().unwrap_or(Finiteness::NotConverged);
            let lf = flags.get(large).copied().unwrap_or(Finiteness::NotConverged);
            implications.push(Implication {
                entry: e.name.clone(),
                smaller: small.clone(),
                larger: large.clone(),
                smaller_flag: sf,
                larger_flag: lf,
                violated: sf == Finiteness::Finite && lf == Finiteness::DivergedSuspected,
            });
        }
    }
    let violations = implications.iter().filter(|i| i.violated).cloned().collect();
    Ok(EmbeddingReport { schema_version: SCHEMA_VERSION, p_list: p_list.to_vec(), entries, implications, violations })
}

/// Entries with second derivatives for the quasiconvexity check: the smooth part of the
/// continuous corpus plus a linear function.
pub fn quasiconvexity_corpus() -> Vec<CorpusEntry> {
    let mut entries: Vec<CorpusEntry> = continuous_corpus();
    entries.push(CorpusEntry::new(
        "linear",
        CorpusDescriptor::Function(Family::Linear { slope: 0.5, intercept: 1.0 }.into()),
        Provenance::Trivial,
        &[],
    ));
    entries
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiconvexityRow {
    pub name: String,
    /// `S_{λ'}` with the inner integral over `(0, u/2]`.
    pub s_value: f64,
    pub s_error: f64,
    pub quasiconvexity: f64,
    pub quasiconvexity_error: f64,
    pub ln3_bound: f64,
    /// `S / (ln 3 · Q)`, zero when both vanish.
    pub ratio: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiconvexityReport {
    pub schema_version: u32,
    pub rows: Vec<QuasiconvexityRow>,
    pub failures: Vec<String>,
}

/// `S_{λ'} ≤ ln 3 · ∫₀^∞ t|dλ'(t)|` up to the combined error estimates.
pub fn run_quasiconvexity_check(corpus: &[CorpusEntry], cfg: &QuadratureConfig) -> Result<QuasiconvexityReport> {
    cfg.validate()?;
    let functions: Vec<(&str, &FunctionDescriptor)> = corpus
        .iter()
        .filter_map(|e| e.function().map(|f| (e.name.as_str(), f)))
        .filter(|(_, f)| f.derivative_order_available() >= 2)
        .collect();
    if functions.is_empty() {
        return Err(Error::Precondition("no entry has a second derivative".into()));
    }
    let mut rows = functions
        .par_iter()
        .map(|&(name, f)| -> Result<QuasiconvexityRow> {
            let d = f.derivative()?;
            let s = s_functional_one_sided(&d, cfg)?;
            let q = quasiconvexity_functional(f, cfg)?;
            let ln3 = 3f64.ln();
            let bound = ln3 * q.value;
            let slack = s.error_estimate + ln3 * q.error_estimate + 1e-12 * (1.0 + bound);
            let ratio = if bound > 0.0 { s.value / bound } else if s.value == 0.0 { 0.0 } else { f64::INFINITY };
            Ok(QuasiconvexityRow {
                name: name.to_string(),
                s_value: s.value,
                s_error: s.error_estimate,
                quasiconvexity: q.value,
                quasiconvexity_error: q.error_estimate,
                ln3_bound: bound,
                ratio,
                holds: s.converged && q.converged && s.value <= bound + slack,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    let failures = rows.iter().filter(|r| !r.holds).map(|r| r.name.clone()).collect();
    Ok(QuasiconvexityReport { schema_version: SCHEMA_VERSION, rows, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct AqCheck {
    pub q: String,
    pub value: f64,
    pub error_estimate: f64,
    pub finiteness: Finiteness,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertCheck {
    pub points: usize,
    pub max_error: f64,
    pub worst_x: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthStep {
    pub from: f64,
    pub to: f64,
    pub increment: f64,
    /// `ln(1+to²) − ln(1+from²)`
    pub closed_form: f64,
    /// `|increment − 2 ln 10| / (2 ln 10)`
    pub deviation: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub schema_version: u32,
    pub aq: Vec<AqCheck>,
    pub aq_finite: bool,
    pub hilbert: HilbertCheck,
    /// `(R, ∫_{|x|≤R} |λ̃|)`
    pub truncated_l1: Vec<(f64, f64)>,
    pub growth: Vec<GrowthStep>,
    pub growth_holds: bool,
    pub passed: bool,
}

/// `λ = 1/(1+x²)`: `𝒜_q λ` is finite while `λ̃ = x/(1+x²)` is not integrable.
pub fn run_counterexample(cfg: &QuadratureConfig) -> Result<CounterexampleReport> {
    cfg.validate()?;
    let lambda = FunctionDescriptor::poisson();
    let aq = [2.0, 4.0, f64::INFINITY]
        .iter()
        .map(|&q| -> Result<AqCheck> {
            let r: IntegralResult<f64> = aq_functional(&lambda, q, cfg)?;
            Ok(AqCheck {
                q: if q.is_infinite() { "inf".into() } else { format!("{q}") },
                value: r.value,
                error_estimate: r.error_estimate,
                finiteness: r.finiteness(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aq_finite = aq.iter().all(|a| a.finiteness.is_finite());

    let xs: Vec<f64> = (0..=200).map(|i| -10.0 + 0.1 * i as f64).collect();
    let errors = xs
        .par_iter()
        .map(|&x| Ok((hilbert_transform(&lambda, x, cfg)?.value.re - x / (1.0 + x * x)).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let (worst, max_error) = errors.iter().copied().enumerate().fold((0, 0.0), |a, (i, e)| if e > a.1 { (i, e) } else { a });
    let tolerance = 1e-3;
    let hilbert = HilbertCheck { points: xs.len(), max_error, worst_x: xs[worst], tolerance, holds: max_error <= tolerance };

    let radii = [1e2, 1e3, 1e4];
    let truncated_l1 = radii
        .iter()
        .map(|&r| Ok((r, hilbert_l1_truncated(&lambda, r, cfg)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let step = 2.0 * LN_10;
    let growth: Vec<GrowthStep> = truncated_l1
        .windows(2)
        .map(|w| {
            let increment = w[1].1 - w[0].1;
            let deviation = (increment - step).abs() / step;
            GrowthStep {
                from: w[0].0,
                to: w[1].0,
                increment,
                closed_form: (1.0 + w[1].0 * w[1].0).ln() - (1.0 + w[0].0 * w[0].0).ln(),
                deviation,
                holds: deviation <= 0.05,
            }
        })
        .collect();
    let growth_holds = growth.iter().all(|g| g.holds);
    let passed = aq_finite && hilbert.holds && growth_holds;
    Ok(CounterexampleReport { schema_version: SCHEMA_VERSION, aq, aq_finite, hilbert, truncated_l1, growth, growth_holds, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_pairs() {
        let pairs = chain(&[2.0, 1.0, 2.0], "bp", "cb");
        let expected = [("bp_1", "bp_2"), ("bp_1", "cb"), ("bp_1", "h"), ("bp_2", "cb"), ("bp_2", "h")];
        assert_eq!(pairs.len(), expected.len());
        for ((s, l), (es, el)) in pairs.iter().zip(expected) {
            assert_eq!((s.as_str(), l.as_str()), (es, el));
        }
        assert!(chain(&[], "bvp", "bv").is_empty());
    }

    #[test]
    fn corpora_have_unique_names() {
        let mut names: Vec<String> = full_corpus().into_iter().map(|e| e.name).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
        assert!(quasiconvexity_corpus().iter().all(|e| e.function().is_some()));
    }

    #[test]
    fn empty_and_duplicate_corpora_are_refused() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(run_embedding_report(&[], &[2.0], &cfg), Err(Error::Precondition(_))));
        let delta = discrete_corpus().remove(0);
        let twice = [delta.clone(), delta];
        assert!(matches!(run_embedding_report(&twice, &[2.0], &cfg), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn delta_alone_passes() {
        let r = run_embedding_report(&discrete_corpus()[..1], &[1.0, 2.0], &QuadratureConfig::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.implications.len(), 5);
    }
}
