//! Sequence seminorms: `Δλ`, `bv`, the Boas–Telyakovskii sum `s_λ`, the odd-part sum
//! `a`, the dyadic block norms `a_q`, and the `h` and `bv_p` norms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{Finiteness, IntegralResult, QuadratureConfig};
use crate::report::{conjugate_exponent, exponent_key, Certificate, FlagMap, SCHEMA_VERSION};
use crate::sequence::SequenceDescriptor;

/// Truncation and tolerance settings for infinite sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesConfig {
    /// Terms summed before the tail is extrapolated (rounded up to a power of two).
    pub max_terms: u64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub divergence_slack: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { max_terms: 1 << 13, abs_tol: 1e-8, rel_tol: 1e-6, divergence_slack: 0.1 }
    }
}

impl From<&QuadratureConfig> for SeriesConfig {
    fn from(cfg: &QuadratureConfig) -> Self {
        SeriesConfig {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            divergence_slack: cfg.divergence_slack,
            ..SeriesConfig::default()
        }
    }
}

impl SeriesConfig {
    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }

    fn cutoff(&self) -> u64 {
        self.max_terms.max(64).next_power_of_two()
    }
}

/// `Δλ(k) = λ(k) − λ(k+1)` for `k ≥ 0` and `λ(k) − λ(k−1)` for `k < 0`.
pub fn delta(lambda: &SequenceDescriptor, k: i64) -> Complex64 {
    if k >= 0 {
        lambda.value(k) - lambda.value(k + 1)
    } else {
        lambda.value(k) - lambda.value(k - 1)
    }
}

/// `Δλ(0..len)` and `Δλ(−1), Δλ(−2), …` up to the same length.
struct DeltaTable {
    pos: Vec<Complex64>,
    neg: Vec<Complex64>,
}

impl DeltaTable {
    fn new(lambda: &SequenceDescriptor, len: u64) -> Self {
        let pos = (0..len as i64).into_par_iter().map(|k| delta(lambda, k)).collect();
        let neg = (1..=len as i64).into_par_iter().map(|k| delta(lambda, -k)).collect();
        DeltaTable { pos, neg }
    }

    fn at(&self, k: i64) -> Complex64 {
        if k >= 0 {
            self.pos[k as usize]
        } else {
            self.neg[(-k - 1) as usize]
        }
    }
}

/// Turns a partial sum of nonnegative terms and its last three dyadic blocks into a
/// result with an extrapolated tail. Block ratios persistently near or above one mean
/// the series is suspected to diverge.
pub(crate) fn extrapolate(partial: f64, blocks: [f64; 3], cfg: &SeriesConfig) -> IntegralResult<f64> {
    let [b1, b2, b3] = blocks;
    let mut out = IntegralResult::exact(partial);
    if b3 <= 1e-3 * cfg.abs_tol {
        out.error_estimate = b3;
        return out;
    }
    let threshold = (-cfg.divergence_slack).exp2();
    if b1 <= 0.0 || b2 <= 0.0 {
        out.converged = false;
        out.error_estimate = b3;
        out.tail_contribution_estimate = b3;
        return out;
    }
    let (r1, r2) = (b2 / b1, b3 / b2);
    if r1 >= threshold && r2 >= threshold {
        out.converged = false;
        out.diverged_suspected = true;
        out.tail_contribution_estimate = b3;
        out.error_estimate = f64::INFINITY;
        return out;
    }
    if r2 >= 1.0 {
        out.converged = false;
        out.error_estimate = b3;
        out.tail_contribution_estimate = b3;
        return out;
    }
    let tail = b3 * r2 / (1.0 - r2);
    let alternative = if r1 < 1.0 { b3 * r1 / (1.0 - r1) } else { 2.0 * tail + b3 };
    let uncertainty = (tail - alternative).abs();
    out.value = partial + tail;
    out.tail_contribution_estimate = tail;
    out.error_estimate = uncertainty;
    out.converged = uncertainty <= cfg.abs_tol.max(cfg.rel_tol * out.value.abs());
    out
}

/// `Σ_{m ≥ start} term(m)` for nonnegative terms. With `exact_end` the terms beyond it
/// are known to vanish and the sum is exact; otherwise the sum runs to the cutoff and
/// the tail is extrapolated from dyadic blocks. Summation order is fixed, so results
/// are reproducible bit for bit.
pub fn sum_series(
    term: impl Fn(u64) -> f64 + Sync,
    start: u64,
    exact_end: Option<u64>,
    cfg: &SeriesConfig,
) -> IntegralResult<f64> {
    if let Some(end) = exact_end {
        let terms: Vec<f64> = (start..=end.max(start)).into_par_iter().map(&term).collect();
        let mut out = IntegralResult::exact(terms.iter().sum());
        out.evaluations = terms.len();
        return out;
    }
    let m = cfg.cutoff();
    let terms: Vec<f64> = (start..m).into_par_iter().map(&term).collect();
    let at = |j: u64| terms[(j - start) as usize];
    let block = |lo: u64, hi: u64| (lo.max(start)..hi).map(at).sum::<f64>();
    let mut trace = Vec::new();
    let mut partial = 0.0;
    let mut lo = start;
    let mut hi = 1u64.max(start + 1).next_power_of_two();
    while lo < m {
        partial += block(lo, hi.min(m));
        trace.push((hi.min(m) as f64, partial));
        lo = hi;
        hi *= 2;
    }
    let blocks = [block(m / 8, m / 4), block(m / 4, m / 2), block(m / 2, m)];
    let mut out = extrapolate(partial, blocks, cfg);
    out.evaluations = terms.len();
    out.trace = trace;
    out
}

/// `Σ_{n ≥ 0} b_n` where `b_n` is a per-block quantity; the last three blocks drive the
/// tail. `blocks` holds every block up to the cutoff; `exact` means the rest vanish.
fn sum_blocks(blocks: &[f64], exact: bool, cfg: &SeriesConfig) -> IntegralResult<f64> {
    let partial: f64 = blocks.iter().sum();
    let mut out = if exact || blocks.len() < 3 {
        IntegralResult::exact(partial)
    } else {
        let n = blocks.len();
        extrapolate(partial, [blocks[n - 3], blocks[n - 2], blocks[n - 1]], cfg)
    };
    let mut running = 0.0;
    out.trace = blocks
        .iter()
        .enumerate()
        .map(|(n, b)| {
            running += b;
            ((1u64 << (n + 1)) as f64, running)
        })
        .collect();
    out.evaluations = blocks.len();
    out
}

/// `‖Δλ‖₁ = Σ_{k∈ℤ} |Δλ(k)|`.
pub fn delta_l1(lambda: &SequenceDescriptor, cfg: &SeriesConfig) -> IntegralResult<f64> {
    let table = DeltaTable::new(lambda, series_span(lambda, cfg) + 2);
    sum_series(
        |j| table.at(j as i64).norm() + table.at(-(j as i64) - 1).norm(),
        0,
        lambda.support_bound(),
        cfg,
    )
}

fn series_span(lambda: &SequenceDescriptor, cfg: &SeriesConfig) -> u64 {
    lambda.support_bound().map_or(cfg.cutoff(), |n| n + 1)
}

/// Which way `s_λ` is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SMode {
    /// `Σ_{m≥2} |Σ_{k=1}^{⌊m/2⌋} (Δλ(m−k) − Δλ(m+k))/k|`, which touches only
    /// nonnegative indices.
    #[default]
    Verbatim,
    /// The verbatim sum plus its mirror image over negative `m`.
    Symmetrized,
}

/// The Boas–Telyakovskii sum `s_λ`.
pub fn s_functional_discrete(lambda: &SequenceDescriptor, mode: SMode, cfg: &SeriesConfig) -> IntegralResult<f64> {
    let right = s_one_sided(lambda, cfg);
    match mode {
        SMode::Verbatim => right,
        SMode::Symmetrized => right.combine(s_one_sided(&lambda.reflected(), cfg)),
    }
}

fn s_one_sided(lambda: &SequenceDescriptor, cfg: &SeriesConfig) -> IntegralResult<f64> {
    let exact_end = lambda.support_bound().map(|n| 2 * n + 2);
    let last_m = exact_end.unwrap_or(cfg.cutoff());
    let table = DeltaTable::new(lambda, last_m + last_m / 2 + 2);
    let inner = |m: u64| {
        let m = m as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=m / 2 {
            acc += (table.at(m - k) - table.at(m + k)) / k as f64;
        }
        acc.norm()
    };
    sum_series(inner, 2, exact_end, cfg)
}

/// `a = Σ_{k≥1} |λ(k) − λ(−k)|/k`.
pub fn a_functional_discrete(lambda: &SequenceDescriptor, cfg: &SeriesConfig) -> IntegralResult<f64> {
    let k_end = lambda.support_bound();
    sum_series(
        |k| (lambda.value(k as i64) - lambda.value(-(k as i64))).norm() / k as f64,
        1,
        k_end.map(|n| n.max(1)),
        cfg,
    )
}

/// How the `q = ∞` block norm is weighted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfMode {
    /// `Σ_n max_{|k|∈I_n} |Δλ(k)|`
    #[default]
    Printed,
    /// `Σ_n 2ⁿ max_{|k|∈I_n} |Δλ(k)|`, the limit of `a_q` as `q → ∞`.
    LengthWeighted,
}

/// Dyadic block norm `a_q = Σ_n 2ⁿ (2⁻ⁿ Σ_{|k|∈I_n} |Δλ(k)|^q)^{1/q}` with
/// `I_n = [2ⁿ, 2ⁿ⁺¹)`; `q = ∞` follows `inf_mode`.
pub fn aq_functional_discrete(
    lambda: &SequenceDescriptor,
    q: f64,
    inf_mode: InfMode,
    cfg: &SeriesConfig,
) -> Result<IntegralResult<f64>> {
    if !(q > 1.0) {
        return Err(Error::InvalidParameter(format!("q must exceed 1, got {q}")));
    }
    let (n_blocks, exact) = match lambda.support_bound() {
        Some(0) => (0, true),
        Some(n) => (64 - n.leading_zeros() as usize, true),
        None => (cfg.cutoff().trailing_zeros() as usize, false),
    };
    let table = DeltaTable::new(lambda, 1u64 << n_blocks.max(1));
    let blocks: Vec<f64> = (0..n_blocks)
        .into_par_iter()
        .map(|n| {
            let (lo, hi) = (1i64 << n, 1i64 << (n + 1));
            let len = (1u64 << n) as f64;
            let mags = (lo..hi).flat_map(|k| [table.at(k).norm(), table.at(-k).norm()]);
            if q.is_infinite() {
                let max = mags.fold(0.0, f64::max);
                match inf_mode {
                    InfMode::Printed => max,
                    InfMode::LengthWeighted => len * max,
                }
            } else {
                let scale = (lo..hi)
                    .flat_map(|k| [table.at(k).norm(), table.at(-k).norm()])
                    .fold(0.0, f64::max);
                if scale == 0.0 {
                    return 0.0;
                }
                let mean = mags.map(|v| (v / scale).powf(q)).sum::<f64>() / len;
                len * scale * mean.powf(1.0 / q)
            }
        })
        .collect();
    Ok(sum_blocks(&blocks, exact, cfg))
}

/// `‖λ‖_m = sup_k |λ(k)|`. Every tail model is nonincreasing in magnitude, so the
/// window attains the supremum.
pub fn m_norm(lambda: &SequenceDescriptor) -> f64 {
    lambda.window().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Every sequence norm for one candidate, with verdicts and certificates.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceNormReport {
    pub schema_version: u32,
    pub m_norm: f64,
    pub delta_l1: f64,
    pub bv_norm: f64,
    pub s_value: f64,
    pub s_symmetrized: f64,
    pub a_value: f64,
    pub h_norm: f64,
    /// `a_q` keyed by `p`, with `1/p + 1/q = 1`.
    pub aq_values: BTreeMap<String, f64>,
    pub bvp_norms: BTreeMap<String, f64>,
    pub a_inf_length_weighted: f64,
    pub error_estimates: BTreeMap<String, f64>,
    pub finiteness_flags: FlagMap,
    pub vanishes_at_infinity: bool,
    pub h_certificate: Certificate,
    pub bv_certificate: Certificate,
    pub bvp_certificates: BTreeMap<String, Certificate>,
}

impl SequenceNormReport {
    /// Whether the decomposition of the series may be used: membership in `h` and a
    /// vanishing limit at infinity.
    pub fn series_pathway_ready(&self) -> bool {
        self.h_certificate == Certificate::Member && self.vanishes_at_infinity
    }
}

pub fn assemble_sequence_report(
    lambda: &SequenceDescriptor,
    p_list: &[f64],
    cfg: &SeriesConfig,
) -> Result<SequenceNormReport> {
    let exponents: Vec<(f64, f64)> =
        p_list.iter().map(|&p| conjugate_exponent(p).map(|q| (p, q))).collect::<Result<_>>()?;
    let m = m_norm(lambda);
    let dl = delta_l1(lambda, cfg);
    let s = s_functional_discrete(lambda, SMode::Verbatim, cfg);
    let s_sym = s_functional_discrete(lambda, SMode::Symmetrized, cfg);
    let a = a_functional_discrete(lambda, cfg);
    let a_inf_w = aq_functional_discrete(lambda, f64::INFINITY, InfMode::LengthWeighted, cfg)?;

    let mut flags = FlagMap::new();
    let mut errors = BTreeMap::new();
    for (name, r) in [("delta_l1", &dl), ("s", &s), ("s_symmetrized", &s_sym), ("a", &a), ("a_inf_length_weighted", &a_inf_w)] {
        flags.insert(name.to_string(), r.finiteness());
        errors.insert(name.to_string(), r.error_estimate);
    }
    let bv_flag = dl.finiteness();
    let h_flag = bv_flag.join(s.finiteness()).join(a.finiteness());
    flags.insert("bv".into(), bv_flag);
    flags.insert("h".into(), h_flag);

    let mut aq_values = BTreeMap::new();
    let mut bvp_norms = BTreeMap::new();
    let mut bvp_certificates = BTreeMap::new();
    for (p, q) in exponents {
        let key = exponent_key(p);
        let aq = aq_functional_discrete(lambda, q, InfMode::Printed, cfg)?;
        let flag = aq.finiteness().join(a.finiteness());
        flags.insert(format!("aq_{key}"), aq.finiteness());
        flags.insert(format!("bvp_{key}"), flag);
        errors.insert(format!("aq_{key}"), aq.error_estimate);
        bvp_norms.insert(key.clone(), m + aq.value + a.value);
        bvp_certificates.insert(key.clone(), Certificate::from_flags([&flag]));
        aq_values.insert(key, aq.value);
    }

    let bv_norm = m + dl.value;
    Ok(SequenceNormReport {
        schema_version: SCHEMA_VERSION,
        m_norm: m,
        delta_l1: dl.value,
        bv_norm,
        s_value: s.value,
        s_symmetrized: s_sym.value,
        a_value: a.value,
        h_norm: bv_norm + s.value + a.value,
        aq_values,
        bvp_norms,
        a_inf_length_weighted: a_inf_w.value,
        error_estimates: errors,
        finiteness_flags: flags,
        vanishes_at_infinity: lambda.vanishes_at_infinity(),
        h_certificate: Certificate::from_flags([&h_flag]),
        bv_certificate: Certificate::from_flags([&bv_flag]),
        bvp_certificates,
    })
}

/// Shorthand for the finiteness of a whole result.
pub fn flag(r: &IntegralResult<f64>) -> Finiteness {
    r.finiteness()
}
