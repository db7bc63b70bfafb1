//! Fourier series: the piecewise-linear extension `ℓ`, the decomposition
//! `Σ λ(k)e^{iky} = main + γ`, periodic functions on a uniform grid, and periodic
//! multipliers `ĝ(k) = λ(k)f̂(k)`.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::discrete::{assemble_sequence_report, delta, delta_l1, s_functional_discrete, SMode, SeriesConfig};
use crate::error::{Error, Result};
use crate::quadrature::{Finiteness, IntegralResult};
use crate::report::SCHEMA_VERSION;
use crate::sequence::{SequenceDescriptor, SequenceTail};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How `ℓ` is evaluated between integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllMode {
    /// The interpolant through `(k, λ(k))`.
    #[default]
    Canonical,
    /// `λ(k) + (k − x)Δλ(k)` on `[k−1, k]`, exactly as printed.
    Verbatim,
}

/// The piecewise-linear extension of `λ` to the real line.
pub fn ell(lambda: &SequenceDescriptor, x: f64, mode: EllMode) -> Result<Complex64> {
    if !lambda.vanishes_at_infinity() {
        return Err(Error::Precondition("the extension needs λ(k) → 0 as |k| → ∞".into()));
    }
    if !x.is_finite() {
        return Err(Error::Precondition(format!("argument must be finite, got {x}")));
    }
    Ok(match mode {
        EllMode::Canonical => {
            // Evaluated on |x| with the sign folded into the indices, so that
            // ℓ(−x) and ℓ(x) for an even sequence agree to the last bit.
            let sign = if x < 0.0 { -1 } else { 1 };
            let s = x.abs();
            let k0 = s.floor();
            let w = s - k0;
            let k0 = k0 as i64;
            let lo = lambda.value(sign * k0);
            if w == 0.0 {
                lo
            } else {
                lo * (1.0 - w) + lambda.value(sign * (k0 + 1)) * w
            }
        }
        EllMode::Verbatim => {
            let k = x.ceil();
            lambda.value(k as i64) + delta(lambda, k as i64) * (k - x)
        }
    })
}

/// Rotation `e^{iky}` advanced by multiplication and resynchronised every 64 steps.
fn modulated_sum(lambda: &SequenceDescriptor, y: f64, from: i64, to: i64) -> Complex64 {
    let step = Complex64::from_polar(1.0, y);
    let mut total = ZERO;
    let mut k = from;
    while k <= to {
        let block_end = (k + 63).min(to);
        let mut phase = Complex64::from_polar(1.0, k as f64 * y);
        for j in k..=block_end {
            total += lambda.value(j) * phase;
            phase *= step;
        }
        k = block_end + 1;
    }
    total
}

/// `Σ_k λ(k)e^{iky}`: exact for finitely supported and geometric tails, otherwise a
/// partial sum to `k_max` with a bound on the rest as the error estimate.
pub fn series_sum(lambda: &SequenceDescriptor, y: f64, k_max: u64) -> Result<IntegralResult<Complex64>> {
    if !y.is_finite() {
        return Err(Error::Precondition(format!("y must be finite, got {y}")));
    }
    if !lambda.absolutely_summable() {
        return Err(Error::Precondition("the tail of λ is not absolutely summable".into()));
    }
    let n = lambda.radius() as i64;
    let window = modulated_sum(lambda, y, -n, n);
    if lambda.is_finitely_supported() {
        return Ok(IntegralResult::exact(window));
    }
    match lambda.tail() {
        SequenceTail::Geometric { ratio } => {
            let right = Complex64::from_polar(ratio, y);
            let left = Complex64::from_polar(ratio, -y);
            let tail = lambda.value(n) * Complex64::from_polar(1.0, n as f64 * y) * right / (1.0 - right)
                + lambda.value(-n) * Complex64::from_polar(1.0, -(n as f64) * y) * left / (1.0 - left);
            Ok(IntegralResult::exact(window + tail))
        }
        SequenceTail::Power { exponent, .. } => {
            let k = (k_max as i64).max(n);
            let partial = window + modulated_sum(lambda, y, n + 1, k) + modulated_sum(lambda, y, -k, -n - 1);
            let edge = lambda.value(n).norm() + lambda.value(-n).norm();
            let bound = edge * ((n + 1) as f64).powf(exponent) * ((k + 1) as f64).powf(1.0 - exponent) / (exponent - 1.0);
            let mut out = IntegralResult::exact(partial);
            out.error_estimate = bound;
            out.tail_contribution_estimate = bound;
            Ok(out)
        }
        SequenceTail::Zero => Ok(IntegralResult::exact(window)),
    }
}

/// Settings shared by the series decomposition routines.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesOptions {
    pub k_max: u64,
    pub ell_mode: EllMode,
    /// Nodes of the graded `y`-grid on `[ε, π]`.
    pub y_points: usize,
    pub exclusion: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { k_max: 1 << 16, ell_mode: EllMode::Canonical, y_points: 4096, exclusion: 1e-4 }
    }
}

impl SeriesOptions {
    pub fn doubled(&self) -> Self {
        SeriesOptions { y_points: 2 * self.y_points, ..*self }
    }
}

/// `Σ λ(k)e^{iky} = main(y) + γ(y)` at one `y`, with
/// `main(y) = (i/y)(ℓ(π/2|y|) − ℓ(−π/2|y|))`.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesDecomposition {
    pub y: f64,
    pub series_value: Complex64,
    pub main_term: Complex64,
    pub gamma: Complex64,
    pub error_estimate: f64,
}

pub fn series_main_term(lambda: &SequenceDescriptor, y: f64, mode: EllMode) -> Result<Complex64> {
    let t = PI / (2.0 * y.abs());
    Ok(Complex64::new(0.0, 1.0 / y) * (ell(lambda, t, mode)? - ell(lambda, -t, mode)?))
}

pub fn theorem_b_decompose(lambda: &SequenceDescriptor, y: f64, opts: &SeriesOptions) -> Result<SeriesDecomposition> {
    if !(y != 0.0 && y.abs() <= PI) {
        return Err(Error::Precondition(format!("the decomposition needs 0 < |y| ≤ π, got {y}")));
    }
    let series = series_sum(lambda, y, opts.k_max)?;
    let main = series_main_term(lambda, y, opts.ell_mode)?;
    Ok(SeriesDecomposition {
        y,
        series_value: series.value,
        main_term: main,
        gamma: series.value - main,
        error_estimate: series.error_estimate,
    })
}

/// Decompositions at the given `y`, in input order.
pub fn series_decomposition_trace(
    lambda: &SequenceDescriptor,
    ys: &[f64],
    opts: &SeriesOptions,
) -> Result<Vec<SeriesDecomposition>> {
    ys.par_iter().map(|&y| theorem_b_decompose(lambda, y, opts)).collect()
}

/// CSV with columns `y, series_re, series_im, main_re, main_im, gamma_re, gamma_im`.
pub fn write_series_decomposition_csv(rows: &[SeriesDecomposition], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["y", "series_re", "series_im", "main_re", "main_im", "gamma_re", "gamma_im"])?;
    for r in rows {
        w.write_record(
            [r.y, r.series_value.re, r.series_value.im, r.main_term.re, r.main_term.im, r.gamma.re, r.gamma.im]
                .map(|v| format!("{v:e}")),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `y_j = ε + (π − ε)(j/M)²` for `j = 0..=M`; every other node forms the half grid.
fn graded_grid(points: usize, eps: f64) -> Vec<f64> {
    let m = points.max(4);
    (0..=m).map(|j| eps + (PI - eps) * (j as f64 / m as f64).powi(2)).collect()
}

fn trapezoid(ys: &[f64], values: &[f64], stride: usize) -> f64 {
    let idx: Vec<usize> = (0..ys.len()).step_by(stride).collect();
    idx.windows(2).map(|w| 0.5 * (ys[w[1]] - ys[w[0]]) * (values[w[0]] + values[w[1]])).sum()
}

/// `∫_{ε≤|y|≤π} |h(y)| dy` on the graded grid, with `|T_M − T_{M/2}|/3` as the error
/// estimate and the largest pointwise error bound integrated alongside.
fn integrate_on_torus<F>(h: F, real_symmetric: bool, opts: &SeriesOptions) -> Result<IntegralResult<f64>>
where
    F: Fn(f64) -> Result<(f64, f64)> + Sync,
{
    let ys = graded_grid(opts.y_points, opts.exclusion);
    let sides: &[f64] = if real_symmetric { &[1.0] } else { &[1.0, -1.0] };
    let mut total = IntegralResult::zero();
    for &sign in sides {
        let samples = ys.par_iter().map(|&y| h(sign * y)).collect::<Result<Vec<_>>>()?;
        let values: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let errors: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let fine = trapezoid(&ys, &values, 1);
        let coarse = trapezoid(&ys, &values, 2);
        let mut r = IntegralResult::exact(fine);
        r.error_estimate = (fine - coarse).abs() / 3.0 + trapezoid(&ys, &errors, 1);
        total = total.combine(r);
    }
    Ok(if real_symmetric { total.scaled(2.0) } else { total })
}

/// `∫_𝕋 |γ|` against `‖Δλ‖₁ + s_λ`.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesRemainderNorm {
    pub schema_version: u32,
    pub gamma_l1: f64,
    pub gamma_error: f64,
    /// Bound on `∫_{|y|<ε} |γ|`, included in `gamma_error`.
    pub excluded_mass: f64,
    pub delta_l1: f64,
    pub s_value: f64,
    pub bound_rhs: f64,
    pub theta_hat: f64,
    pub y_points: usize,
    pub finiteness: Finiteness,
}

fn abs_sum_bound(lambda: &SequenceDescriptor, k_max: u64) -> Result<f64> {
    let n = lambda.radius() as i64;
    let window: f64 = lambda.window().iter().map(|v| v.norm()).sum();
    if lambda.is_finitely_supported() {
        return Ok(window);
    }
    let edge = lambda.value(n).norm() + lambda.value(-n).norm();
    Ok(match lambda.tail() {
        SequenceTail::Geometric { ratio } => window + edge * ratio.abs() / (1.0 - ratio.abs()),
        SequenceTail::Power { exponent, .. } => {
            let k = (k_max as i64).max(n);
            let partial: f64 = (n + 1..=k).map(|j| lambda.value(j).norm() + lambda.value(-j).norm()).sum();
            window + partial + edge * ((n + 1) as f64).powf(exponent) * ((k + 1) as f64).powf(1.0 - exponent) / (exponent - 1.0)
        }
        SequenceTail::Zero => window,
    })
}

pub fn theorem_b_remainder_norm(lambda: &SequenceDescriptor, opts: &SeriesOptions) -> Result<SeriesRemainderNorm> {
    let gamma = |y: f64| -> Result<(f64, f64)> {
        let d = theorem_b_decompose(lambda, y, opts)?;
        Ok((d.gamma.norm(), d.error_estimate))
    };
    let total = integrate_on_torus(gamma, lambda.is_real(), opts)?;
    let eps = opts.exclusion;
    let mut main_peak: f64 = 0.0;
    for y in [0.25 * eps, 0.5 * eps, eps] {
        for s in [y, -y] {
            main_peak = main_peak.max(series_main_term(lambda, s, opts.ell_mode)?.norm());
        }
    }
    let excluded = 2.0 * eps * (abs_sum_bound(lambda, opts.k_max)? + main_peak);
    let cfg = SeriesConfig::default();
    let dl = delta_l1(lambda, &cfg);
    let s = s_functional_discrete(lambda, SMode::Verbatim, &cfg);
    let rhs = dl.value + s.value;
    Ok(SeriesRemainderNorm {
        schema_version: SCHEMA_VERSION,
        gamma_l1: total.value,
        gamma_error: total.error_estimate + excluded,
        excluded_mass: excluded,
        delta_l1: dl.value,
        s_value: s.value,
        bound_rhs: rhs,
        theta_hat: if rhs > 0.0 { total.value / rhs } else { 0.0 },
        y_points: opts.y_points,
        finiteness: dl.finiteness().join(s.finiteness()),
    })
}

/// `∫_𝕋 |Σ λ(k)e^{iky}| dy`, the norm of the function whose coefficients are `λ`.
pub fn synthesized_l1(lambda: &SequenceDescriptor, opts: &SeriesOptions) -> Result<IntegralResult<f64>> {
    let series = |y: f64| -> Result<(f64, f64)> {
        let r = series_sum(lambda, y, opts.k_max)?;
        Ok((r.value.norm(), r.error_estimate))
    };
    let mut out = integrate_on_torus(series, lambda.is_real(), opts)?;
    out.error_estimate += 2.0 * opts.exclusion * abs_sum_bound(lambda, opts.k_max)?;
    Ok(out)
}

/// Values of a `2π`-periodic function at `x_j = −π + 2π(j+1)/n`, `j = 0..n`, so the
/// grid covers `(−π, π]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicFunction {
    values: Vec<Complex64>,
}

#[derive(Deserialize)]
struct PeriodicRow {
    x: f64,
    re: f64,
    im: f64,
}

impl PeriodicFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("periodic grids need 2^J ≥ 64 points, got {n}")));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidGrid("periodic values must be finite".into()));
        }
        Ok(PeriodicFunction { values })
    }

    pub fn from_fn(points: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..points).map(|j| f(node(j, points))).collect();
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.len()).map(|j| node(j, self.len())).collect()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nyquist(&self) -> i64 {
        self.len() as i64 / 2
    }

    /// `∫_𝕋 |f|` by the trapezoid rule.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * 2.0 * PI / self.len() as f64
    }

    /// Coefficients for `k = −n/2 + 1, …, n/2`.
    pub fn coefficients(&self) -> Vec<(i64, Complex64)> {
        let n = self.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let h = 2.0 * PI / n as f64;
        let half = n as i64 / 2;
        (-half + 1..=half)
            .map(|k| {
                let bin = k.rem_euclid(n as i64) as usize;
                (k, buf[bin] * phase_correction(k, h) / n as f64)
            })
            .collect()
    }

    /// Inverse of [`PeriodicFunction::coefficients`]: `f(x_j) = Σ_k c(k)e^{ikx_j}`.
    pub fn synthesize(points: usize, coefficient: impl Fn(i64) -> Complex64) -> Result<Self> {
        if points < 64 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("periodic grids need 2^J ≥ 64 points, got {points}")));
        }
        let h = 2.0 * PI / points as f64;
        let half = points as i64 / 2;
        let mut buf = vec![ZERO; points];
        for k in -half + 1..=half {
            buf[k.rem_euclid(points as i64) as usize] = coefficient(k) / phase_correction(k, h);
        }
        FftPlanner::new().plan_fft_inverse(points).process(&mut buf);
        Self::new(buf)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "re", "im"])?;
        for (x, v) in self.grid().iter().zip(&self.values) {
            w.write_record([format!("{x:e}"), format!("{:e}", v.re), format!("{:e}", v.im)])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads rows `x, re, im` on the uniform grid of `(−π, π]`.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut rows: Vec<PeriodicRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
        rows.sort_by(|a, b| a.x.total_cmp(&b.x));
        let n = rows.len();
        let h = 2.0 * PI / n.max(1) as f64;
        if let Some((j, r)) = rows.iter().enumerate().find(|(j, r)| (r.x - node(*j, n)).abs() > 1e-9 * h.max(1.0)) {
            return Err(Error::InvalidGrid(format!("row {j} has x = {} but the uniform grid expects {}", r.x, node(j, n))));
        }
        Self::new(rows.into_iter().map(|r| Complex64::new(r.re, r.im)).collect())
    }
}

fn node(j: usize, n: usize) -> f64 {
    -PI + 2.0 * PI * (j + 1) as f64 / n as f64
}

/// `e^{−ikx_j} = e^{−2πijk/n}·e^{ik(π − h)}`.
fn phase_correction(k: i64, h: f64) -> Complex64 {
    Complex64::from_polar(1.0, k as f64 * (PI - h))
}

/// `f̂(k) = (1/2π)∫_𝕋 f(x)e^{−ikx} dx` by the discrete transform.
pub fn fourier_coefficients(f: &PeriodicFunction, k: i64) -> Result<Complex64> {
    let nyquist = f.nyquist();
    if k.abs() > nyquist {
        return Err(Error::Nyquist { k, nyquist });
    }
    let total: Complex64 = f
        .grid()
        .iter()
        .zip(f.values())
        .map(|(&x, v)| v * Complex64::from_polar(1.0, -(k as f64) * x))
        .sum();
    Ok(total / f.len() as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicApplication {
    pub schema_version: u32,
    pub g: PeriodicFunction,
    /// `max_k |λ(k)f̂(k) − ĝ(k)|` with `ĝ` recomputed from `g`.
    pub identity_error: f64,
}

/// The value used at frequency `k` of the grid. The Nyquist bin carries both `±n/2`
/// and takes their mean.
fn multiplier_value(lambda: &SequenceDescriptor, k: i64, nyquist: i64) -> Complex64 {
    if k == nyquist {
        (lambda.value(k) + lambda.value(-k)) * 0.5
    } else {
        lambda.value(k)
    }
}

/// `g` with `ĝ(k) = λ(k)f̂(k)` at every frequency of the grid.
pub fn multiplier_apply_periodic(lambda: &SequenceDescriptor, f: &PeriodicFunction) -> Result<PeriodicApplication> {
    let nyquist = f.nyquist();
    let n = lambda.radius() as i64;
    if n > nyquist {
        let beyond = (nyquist + 1..=n).find(|&k| lambda.value(k) != ZERO || lambda.value(-k) != ZERO);
        if let Some(k) = beyond {
            return Err(Error::Nyquist { k, nyquist });
        }
    }
    let coeffs = f.coefficients();
    let g = PeriodicFunction::synthesize(f.len(), |k| {
        let idx = (k + nyquist - 1) as usize;
        multiplier_value(lambda, k, nyquist) * coeffs[idx].1
    })?;
    let check = g.coefficients();
    let identity_error = coeffs
        .iter()
        .zip(&check)
        .map(|((k, c), (_, d))| (multiplier_value(lambda, *k, nyquist) * c - d).norm())
        .fold(0.0, f64::max);
    Ok(PeriodicApplication { schema_version: SCHEMA_VERSION, g, identity_error })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicOperatorNormEstimate {
    pub schema_version: u32,
    pub estimate: f64,
    pub ratios: Vec<f64>,
    pub h_norm: f64,
    pub ratio_to_h: f64,
}

/// `max_f ‖g‖_L / ‖f‖_L` over the corpus, with its ratio to `‖λ‖_h`.
pub fn periodic_operator_norm_estimate(
    lambda: &SequenceDescriptor,
    corpus: &[PeriodicFunction],
) -> Result<PeriodicOperatorNormEstimate> {
    if corpus.is_empty() {
        return Err(Error::InvalidParameter("the corpus must not be empty".into()));
    }
    let mut ratios = Vec::with_capacity(corpus.len());
    for f in corpus {
        let norm = f.l1_norm();
        if norm > 0.0 {
            ratios.push(multiplier_apply_periodic(lambda, f)?.g.l1_norm() / norm);
        }
    }
    let estimate = ratios.iter().copied().fold(0.0, f64::max);
    let h_norm = assemble_sequence_report(lambda, &[], &SeriesConfig::default())?.h_norm;
    Ok(PeriodicOperatorNormEstimate {
        schema_version: SCHEMA_VERSION,
        estimate,
        ratios,
        h_norm,
        ratio_to_h: if h_norm > 0.0 { estimate / h_norm } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ell_nodes_and_midpoints() {
        let hat = SequenceDescriptor::hat(1);
        assert_eq!(ell(&hat, 0.5, EllMode::Canonical).unwrap(), c(0.75));
        let inv = SequenceDescriptor::inverse_linear(8, true);
        assert!((ell(&inv, 1.5, EllMode::Canonical).unwrap() - c(5.0 / 12.0)).norm() < 1e-15);
        for k in -8..=8 {
            assert_eq!(ell(&inv, k as f64, EllMode::Canonical).unwrap(), inv.value(k));
        }
    }

    #[test]
    fn verbatim_ell_misses_left_node() {
        let inv = SequenceDescriptor::inverse_linear(8, true);
        // on [1, 2] with k = 2: λ(2) + (2 − 1)(λ(2) − λ(3)) ≠ λ(1)
        let v = ell(&inv, 1.0 + 1e-12, EllMode::Verbatim).unwrap();
        assert!((v - c(1.0 / 3.0 + 1.0 / 3.0 - 0.25)).norm() < 1e-9);
    }

    #[test]
    fn hat_series() {
        let hat = SequenceDescriptor::hat(1);
        for y in [0.3, 1.0, PI] {
            let s = series_sum(&hat, y, 0).unwrap().value;
            assert!((s - c(1.0 + y.cos())).norm() < 1e-14);
        }
    }

    #[test]
    fn geometric_tail_is_closed_form() {
        let g = SequenceDescriptor::new(vec![c(0.0), c(1.0), c(0.5)], SequenceTail::Geometric { ratio: 0.5 }).unwrap();
        let y = 0.7;
        let exact = 1.0 / (1.0 - Complex64::from_polar(0.5, y));
        assert!((series_sum(&g, y, 0).unwrap().value - exact).norm() < 1e-14);
    }

    #[test]
    fn even_hat_has_zero_main_term() {
        let hat = SequenceDescriptor::hat(8);
        for y in [0.01, 0.2, 1.3, PI] {
            assert_eq!(series_main_term(&hat, y, EllMode::Canonical).unwrap(), ZERO);
        }
    }

    #[test]
    fn coefficients_of_exponential() {
        let f = PeriodicFunction::from_fn(64, |x| Complex64::from_polar(1.0, 3.0 * x)).unwrap();
        for (k, v) in f.coefficients() {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert!((v - c(expect)).norm() < 1e-12, "k={k}: {v}");
        }
        assert!((fourier_coefficients(&f, 3).unwrap() - c(1.0)).norm() < 1e-12);
        assert!(matches!(fourier_coefficients(&f, 33), Err(Error::Nyquist { .. })));
    }

    #[test]
    fn synthesis_round_trip() {
        let f = PeriodicFunction::from_fn(128, |x| c((2.0 * x).sin().exp())).unwrap();
        let coeffs = f.coefficients();
        let back = PeriodicFunction::synthesize(128, |k| coeffs[(k + 63) as usize].1).unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_multiplier_projects_to_mean() {
        let f = PeriodicFunction::from_fn(64, |x| c(1.0 + x.cos())).unwrap();
        let app = multiplier_apply_periodic(&SequenceDescriptor::delta(), &f).unwrap();
        for v in app.g.values() {
            assert!((v - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn window_beyond_nyquist_is_refused() {
        let f = PeriodicFunction::from_fn(64, |_| c(1.0)).unwrap();
        assert!(matches!(
            multiplier_apply_periodic(&SequenceDescriptor::hat(40), &f),
            Err(Error::Nyquist { k: 33, nyquist: 32 })
        ));
    }
}
