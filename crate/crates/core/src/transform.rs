//! Fourier transforms on ℝ, the asymptotic decomposition `λ̂ = main + γ`, the
//! integrability criterion, and multipliers `f ↦ (λ f̂)^∨` built as `l·f + λ₁ ∗ f`.
//!
//! The transform convention is `f̂(x) = ∫ f(t) e^{−ixt} dt`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::continuous::{a_functional, deriv_l1, l1_norm, s_functional, sup_norm, Nested};
use crate::error::{Error, Result};
use crate::function::{FunctionDescriptor, Parity, SampledFunction, SampledTail, Side};
use crate::quadrature::{
    improper, integrate_from_origin, integrate_points, integrate_with_breakpoints, Finiteness, IntegralResult,
    QuadratureConfig, Tolerance,
};
use crate::report::SCHEMA_VERSION;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MAX_PERIOD_POINTS: usize = 4096;

/// `∫₀¹ e^{−iθs} ds` and `∫₀¹ s e^{−iθs} ds`.
fn segment_moments(theta: f64) -> (Complex64, Complex64) {
    if theta.abs() < 0.25 {
        let z = Complex64::new(0.0, -theta);
        let (mut e0, mut e1) = (ZERO, ZERO);
        let mut power = Complex64::new(1.0, 0.0);
        let mut factorial = 1.0;
        for n in 0..18 {
            e0 += power / (factorial * (n + 1) as f64);
            e1 += power / (factorial * (n + 2) as f64);
            power *= z;
            factorial *= (n + 1) as f64;
        }
        (e0, e1)
    } else {
        let i = Complex64::i();
        let e = Complex64::from_polar(1.0, -theta);
        let e0 = (1.0 - e) / (i * theta);
        let e1 = (e * (1.0 + i * theta) - 1.0) / (theta * theta);
        (e0, e1)
    }
}

/// Exact transform of the piecewise-linear interpolant.
fn sampled_transform(s: &SampledFunction, x: f64) -> Result<Complex64> {
    let grid = s.grid();
    let values = s.values();
    let n = grid.len();
    if s.tail() != SampledTail::Zero {
        let far = [grid[0] - 1.0 - grid[0].abs(), grid[n - 1] + 1.0 + grid[n - 1].abs()];
        if far.iter().any(|&t| s.eval(t) != ZERO) {
            return Err(Error::Precondition(
                "the transform of a sampled function needs a tail vanishing at infinity".into(),
            ));
        }
    }
    let mut total = ZERO;
    for i in 0..n - 1 {
        let (a, h) = (grid[i], grid[i + 1] - grid[i]);
        let (e0, e1) = segment_moments(x * h);
        total += Complex64::from_polar(h, -x * a) * (values[i] * (e0 - e1) + values[i + 1] * e1);
    }
    Ok(total)
}

/// Radius beyond which `f` is numerically negligible, capped at `R`. The second
/// component says whether the part beyond the radius can be dropped.
fn effective_radius(f: &FunctionDescriptor, cfg: &QuadratureConfig) -> (f64, bool) {
    if let Some(s) = f.compact_support() {
        return (s, true);
    }
    let r = cfg.truncation_radius;
    let threshold = 1e-3 * cfg.abs_tol;
    let mut t = 2.0 * r;
    let mut last_large = None;
    while t > 0.5 {
        let m = f.value(t).norm().max(f.value(-t).norm()) * t;
        if m > threshold {
            last_large = Some(t);
            break;
        }
        t /= 1.02;
    }
    match last_large {
        None => (1.0, true),
        Some(t) if t * 1.05 < r => ((t * 1.05).max(1.0), true),
        Some(_) => (r, false),
    }
}

fn numeric_transform(f: &FunctionDescriptor, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<Complex64>> {
    let (radius, negligible) = effective_radius(f, cfg);
    if radius == 0.0 {
        return Ok(IntegralResult::zero());
    }
    let g = |t: f64| f.value(t) * Complex64::from_polar(1.0, -x * t);
    let mut points: Vec<f64> = vec![-radius, 0.0, radius];
    points.extend(f.kinks().into_iter().filter(|k| k.abs() < radius));
    if x.abs() > 1.0 {
        let period = 2.0 * PI / x.abs();
        let count = (radius / period).ceil() as usize;
        let stride = count.div_ceil(MAX_PERIOD_POINTS).max(1);
        let step = period * stride as f64;
        let mut p = step;
        while p < radius {
            points.push(p);
            points.push(-p);
            p += step;
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let tol = cfg.inner();
    let budget = cfg.max_subdivisions + points.len();
    let core = integrate_points(&g, &points, tol, budget)?;
    if negligible {
        return Ok(core);
    }
    Ok(core.combine(transform_tails(f, x, radius, &g, cfg)?))
}

/// `∫_{|t|>T} f(t) e^{−ixt} dt`: two integration-by-parts terms when `|x|T` is large,
/// otherwise quadrature on the half-lines.
fn transform_tails<G>(
    f: &FunctionDescriptor,
    x: f64,
    radius: f64,
    g: &G,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<Complex64>>
where
    G: Fn(f64) -> Complex64,
{
    if x.abs() * radius >= 8.0 {
        let h = 1e-4 * radius;
        let slope = |t: f64| match f.derivative() {
            Ok(d) if f.derivative_order_available() >= 1 => d.value(t),
            _ => (f.value(t + h) - f.value(t - h)) / (2.0 * h),
        };
        let ix = Complex64::new(0.0, x);
        let phase = Complex64::from_polar(1.0, -x * radius);
        let first = phase * f.value(radius) / ix - phase.conj() * f.value(-radius) / ix;
        let second = phase * slope(radius) / (ix * ix) - phase.conj() * slope(-radius) / (ix * ix);
        let mut out = IntegralResult::exact(first + second);
        out.error_estimate = second.norm();
        out.tail_contribution_estimate = (first + second).norm();
        return Ok(out);
    }
    let tol = cfg.inner();
    let right = improper(g, radius, &[], tol, cfg)?;
    let left = improper(&|s: f64| g(-s), radius, &[], tol, cfg)?;
    let mut out = right.combine(left);
    out.tail_contribution_estimate = out.value.norm();
    Ok(out)
}

/// Parts whose transform is evaluated without quadrature; the rest of a sum is
/// integrated jointly since its terms need not decay separately.
fn exactly_transformable(f: &FunctionDescriptor) -> bool {
    match f {
        FunctionDescriptor::Sampled(_) => true,
        FunctionDescriptor::Scaled { inner, .. } | FunctionDescriptor::Shifted { inner, .. } => exactly_transformable(inner),
        FunctionDescriptor::Sum(parts) => parts.iter().all(exactly_transformable),
        _ => false,
    }
}

/// `f̂(x)`. Sampled descriptors use exact per-segment integrals of the interpolant;
/// closed forms use quadrature with breakpoints locked to the period `2π/|x|`.
pub fn fourier_transform(f: &FunctionDescriptor, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<Complex64>> {
    if !x.is_finite() {
        return Err(Error::Precondition(format!("frequency must be finite, got {x}")));
    }
    match f {
        FunctionDescriptor::Sampled(s) => Ok(IntegralResult::exact(sampled_transform(s, x)?)),
        FunctionDescriptor::Scaled { factor, inner } => {
            let mut r = fourier_transform(inner, x, cfg)?;
            r.value *= *factor;
            r.error_estimate *= factor.norm();
            r.tail_contribution_estimate *= factor.norm();
            Ok(r)
        }
        FunctionDescriptor::Sum(parts) => {
            let (exact, rest): (Vec<_>, Vec<_>) = parts.iter().partition(|p| exactly_transformable(p));
            let mut total = match rest.len() {
                0 => IntegralResult::zero(),
                1 => fourier_transform(rest[0], x, cfg)?,
                _ => numeric_transform(&FunctionDescriptor::Sum(rest.into_iter().cloned().collect()), x, cfg)?,
            };
            for p in exact {
                total = total.combine(fourier_transform(p, x, cfg)?);
            }
            Ok(total)
        }
        FunctionDescriptor::Shifted { offset, inner } => {
            let mut r = fourier_transform(inner, x, cfg)?;
            r.value *= Complex64::from_polar(1.0, -x * offset);
            Ok(r)
        }
        _ => numeric_transform(f, x, cfg),
    }
}

/// Means of `λ` over `[R/2, R]` and `[−R, −R/2]`.
pub fn limits_at_infinity(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<(Complex64, Complex64)> {
    let r = cfg.truncation_radius;
    let kinks = lambda.kinks();
    let mean = |lo: f64, hi: f64| -> Result<Complex64> {
        let res = integrate_with_breakpoints(|t: f64| lambda.value(t), lo, hi, &kinks, cfg.inner(), cfg)?;
        Ok(res.value / (hi - lo))
    };
    Ok((mean(0.5 * r, r)?, mean(-r, -0.5 * r)?))
}

fn sign_function() -> FunctionDescriptor {
    FunctionDescriptor::Reflected {
        side: Side::Positive,
        parity: Parity::Odd,
        inner: Box::new(FunctionDescriptor::constant(1.0)),
    }
}

/// `λ̂(x)` for `x ≠ 0` when `λ` has limits `l₊`, `l₋` at `±∞`: with
/// `λ₀ = λ − (l₊+l₋)/2 − (l₊−l₋)/2·sgn`, `λ̂(x) = λ̂₀(x) − i(l₊−l₋)/x`.
pub fn fourier_transform_with_limits(
    lambda: &FunctionDescriptor,
    x: f64,
    limits: (Complex64, Complex64),
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<Complex64>> {
    let (lp, lm) = limits;
    if lp.norm().max(lm.norm()) <= cfg.decay_tolerance {
        return fourier_transform(lambda, x, cfg);
    }
    if x == 0.0 {
        return Err(Error::Precondition("the transform of a function with nonzero limits is singular at 0".into()));
    }
    let mean = (lp + lm) * 0.5;
    let jump = (lp - lm) * 0.5;
    let reduced = lambda
        .clone()
        .plus(FunctionDescriptor::constant(1.0).scaled(-mean))
        .plus(sign_function().scaled(-jump));
    let mut r = fourier_transform(&reduced, x, cfg)?;
    r.value += Complex64::new(0.0, -1.0) * (lp - lm) / x;
    Ok(r)
}

fn check_decay(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<()> {
    let r = cfg.truncation_radius;
    let (hi, lo) = (lambda.value(r).norm(), lambda.value(-r).norm());
    if hi.max(lo) > cfg.decay_tolerance {
        return Err(Error::Precondition(format!(
            "`{}` does not vanish at infinity: |λ(R)| = {hi:e}, |λ(−R)| = {lo:e}",
            lambda.name()
        )));
    }
    Ok(())
}

/// `λ̂(x) = main(x) + γ(x)` at one frequency, with `main(x) = (i/x)(λ(π/2|x|) − λ(−π/2|x|))`.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticDecomposition {
    pub x: f64,
    pub full: Complex64,
    pub main: Complex64,
    pub gamma: Complex64,
    pub error_estimate: f64,
}

pub fn main_term(lambda: &FunctionDescriptor, x: f64) -> Complex64 {
    if x == 0.0 {
        return ZERO;
    }
    let t = PI / (2.0 * x.abs());
    Complex64::new(0.0, 1.0 / x) * (lambda.value(t) - lambda.value(-t))
}

pub fn theorem_a_decompose(
    lambda: &FunctionDescriptor,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<AsymptoticDecomposition> {
    check_decay(lambda, cfg)?;
    if x == 0.0 {
        return Err(Error::Precondition("the decomposition is defined for x ≠ 0".into()));
    }
    let full = fourier_transform(lambda, x, cfg)?;
    let main = main_term(lambda, x);
    Ok(AsymptoticDecomposition { x, full: full.value, main, gamma: full.value - main, error_estimate: full.error_estimate })
}

/// Decompositions on a frequency grid, in grid order.
pub fn decomposition_trace(
    lambda: &FunctionDescriptor,
    xs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<AsymptoticDecomposition>> {
    xs.par_iter().map(|&x| theorem_a_decompose(lambda, x, cfg)).collect()
}

/// CSV with columns `x, full_re, full_im, main_re, main_im, gamma_re, gamma_im`.
pub fn write_decomposition_csv(rows: &[AsymptoticDecomposition], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "full_re", "full_im", "main_re", "main_im", "gamma_re", "gamma_im"])?;
    for r in rows {
        w.write_record(
            [r.x, r.full.re, r.full.im, r.main.re, r.main.im, r.gamma.re, r.gamma.im].map(|v| format!("{v:e}")),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `‖γ‖_L` against `‖λ'‖_L + S_{λ'}`.
#[derive(Clone, Debug, Serialize)]
pub struct RemainderNorm {
    pub schema_version: u32,
    pub function: String,
    pub gamma_l1: f64,
    pub gamma_error: f64,
    /// Bound on `∫_{|x|<ε} |γ|`, included in `gamma_error`.
    pub excluded_mass: f64,
    pub deriv_l1: f64,
    pub s_value: f64,
    pub bound_rhs: f64,
    pub theta_hat: f64,
    pub finiteness: Finiteness,
}

pub fn theorem_a_remainder_norm(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<RemainderNorm> {
    check_decay(lambda, cfg)?;
    let eps = cfg.singularity_exclusion;
    let gamma = |x: f64| -> Result<IntegralResult<f64>> {
        let full = fourier_transform(lambda, x, cfg)?;
        let g = (full.value - main_term(lambda, x)).norm();
        Ok(IntegralResult { value: g, ..full.map_value(|v| v.norm()) })
    };
    let side = |sign: f64| -> Result<IntegralResult<f64>> {
        let nested = Nested::default();
        let integrand = |x: f64| nested.eval(gamma(sign * x));
        let outer = improper(&integrand, eps, &[], cfg.outer(), cfg);
        nested.finish(outer)
    };
    let total = side(1.0)?.combine(side(-1.0)?);
    let excluded = {
        let probes = [0.25, 0.5, 1.0].map(|s| s * eps);
        let peak = probes
            .iter()
            .flat_map(|&x| [x, -x])
            .map(|x| gamma(x).map(|r| r.value))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        2.0 * eps * peak.max(l1_norm(lambda, cfg)?.value)
    };
    let d = lambda.derivative()?;
    let dl = l1_norm(&d, cfg)?;
    let s = s_functional(&d, cfg)?;
    let rhs = dl.value + s.value;
    let finiteness = total.finiteness().join(dl.finiteness()).join(s.finiteness());
    Ok(RemainderNorm {
        schema_version: SCHEMA_VERSION,
        function: lambda.name(),
        gamma_l1: total.value,
        gamma_error: total.error_estimate + excluded,
        excluded_mass: excluded,
        deriv_l1: dl.value,
        s_value: s.value,
        bound_rhs: rhs,
        theta_hat: if rhs > 0.0 { total.value / rhs } else { 0.0 },
        finiteness,
    })
}

/// Two routes to `λ̂ ∈ L¹`: the direct integral `∫|λ̂|`, and the sufficient condition
/// that `‖λ'‖_L`, `S_{λ'}` and `𝒜` are all finite.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrabilityVerdict {
    pub schema_version: u32,
    pub function: String,
    pub direct_value: f64,
    pub direct_verdict: Finiteness,
    pub criterion_a: f64,
    pub criterion_verdict: Finiteness,
    pub agree: bool,
    pub numerical_inconsistency: bool,
    /// Dyadic partial integrals of `∫|λ̂|`, towards the origin then towards infinity.
    pub direct_trace: Vec<(f64, f64)>,
    pub criterion_trace: Vec<(f64, f64)>,
}

pub fn integrability_criterion(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegrabilityVerdict> {
    cfg.validate()?;
    let limits = limits_at_infinity(lambda, cfg)?;
    let magnitude = |x: f64| -> Result<IntegralResult<f64>> {
        Ok(fourier_transform_with_limits(lambda, x, limits, cfg)?.map_value(|v| v.norm()))
    };
    let tol = Tolerance { abs: 0.25 * cfg.outer_abs_tol, rel: cfg.outer_rel_tol };
    let mut pieces = Vec::new();
    for sign in [1.0, -1.0] {
        let near = Nested::default();
        let outer = integrate_from_origin(&|x: f64| near.eval(magnitude(sign * x)), 1.0, &[], tol, cfg);
        pieces.push(near.finish(outer)?);
        let far = Nested::default();
        let outer = improper(&|x: f64| far.eval(magnitude(sign * x)), 1.0, &[], tol, cfg);
        pieces.push(far.finish(outer)?);
    }
    let mut direct_trace: Vec<(f64, f64)> = pieces[0].trace.iter().map(|&(s, v)| (1.0 / s, v)).collect();
    direct_trace.extend(pieces[1].trace.iter().copied());
    let direct = pieces.into_iter().reduce(|a, b| a.combine(b)).expect("four pieces");

    let d = lambda.derivative()?;
    let dl = deriv_l1(lambda, cfg)?;
    let s = s_functional(&d, cfg)?;
    let a = a_functional(lambda, cfg)?;
    let criterion = dl.finiteness().join(s.finiteness()).join(a.finiteness());
    let direct_verdict = direct.finiteness();
    let agree = direct_verdict == criterion;
    Ok(IntegrabilityVerdict {
        schema_version: SCHEMA_VERSION,
        function: lambda.name(),
        direct_value: direct.value,
        direct_verdict,
        criterion_a: a.value,
        criterion_verdict: criterion,
        agree,
        numerical_inconsistency: !agree && direct_verdict.is_conclusive() && criterion.is_conclusive(),
        direct_trace,
        criterion_trace: a.trace,
    })
}

/// Uniform grid on which `λ₁` and the test functions are sampled, and the frequency
/// window of the identity check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MultiplierGrid {
    pub step: f64,
    pub radius: f64,
    pub frequency_radius: f64,
    pub frequency_points: usize,
}

impl Default for MultiplierGrid {
    fn default() -> Self {
        MultiplierGrid { step: 2f64.powi(-7), radius: 64.0, frequency_radius: 10.0, frequency_points: 201 }
    }
}

impl MultiplierGrid {
    fn half_count(&self) -> usize {
        (self.radius / self.step).round() as usize
    }

    pub fn nodes(&self) -> Vec<f64> {
        let m = self.half_count() as i64;
        (-m..=m).map(|j| j as f64 * self.step).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.frequency_points.max(2);
        (0..n).map(|i| -self.frequency_radius + 2.0 * self.frequency_radius * i as f64 / (n - 1) as f64).collect()
    }
}

/// The multiplier `λ = l + λ̂₁` ready to be applied: `l` is the common limit at `±∞`
/// and `λ₁(t) = λ̂₀(−t)/2π` with `λ₀ = λ − l`, sampled on the grid.
#[derive(Clone, Debug, Serialize)]
pub struct Multiplier {
    pub lambda: FunctionDescriptor,
    pub limit_l: Complex64,
    pub limit_residual: f64,
    pub lambda0: FunctionDescriptor,
    pub lambda1: SampledFunction,
    /// Estimate of `∫_{|t|>radius} |λ₁|`, the part of `λ₁` the grid cannot see.
    pub lambda1_tail_mass: f64,
    pub grid: MultiplierGrid,
    pub sup_norm: f64,
}

fn tail_mass(lambda1: &SampledFunction, grid: &MultiplierGrid) -> f64 {
    let r = grid.radius;
    let at = |t: f64| lambda1.eval(t).norm() + lambda1.eval(-t).norm();
    let (outer, inner) = (at(r), at(0.5 * r));
    if outer <= f64::MIN_POSITIVE {
        return 0.0;
    }
    let peak = lambda1.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if outer.max(inner) <= 1e-12 * peak {
        // roundoff floor: no decay rate to read off
        return outer.max(inner) * r;
    }
    let decay = (inner / outer).log2();
    if decay > 1.0 {
        outer * r / (decay - 1.0)
    } else {
        f64::INFINITY
    }
}

impl Multiplier {
    pub fn new(lambda: &FunctionDescriptor, grid: MultiplierGrid, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        if !(grid.step > 0.0 && grid.radius > grid.step) {
            return Err(Error::InvalidGrid(format!("bad multiplier grid: step {}, radius {}", grid.step, grid.radius)));
        }
        let sup = sup_norm(lambda, cfg);
        let (lp, lm) = limits_at_infinity(lambda, cfg)?;
        let residual = (lp - lm).norm();
        if residual > 1e-4 * (1.0 + sup) {
            return Err(Error::Precondition(format!("limits at ±∞ disagree: l₊ = {lp}, l₋ = {lm}")));
        }
        let limit = (lp + lm) * 0.5;
        let lambda0 = if limit == ZERO {
            lambda.clone()
        } else {
            lambda.clone().plus(FunctionDescriptor::constant(1.0).scaled(-limit))
        };
        check_decay(&lambda0, cfg)?;
        let nodes = grid.nodes();
        let values = nodes
            .par_iter()
            .map(|&t| fourier_transform(&lambda0, -t, cfg).map(|r| r.value / (2.0 * PI)))
            .collect::<Result<Vec<_>>>()?;
        let lambda1 = SampledFunction::new(nodes, values, SampledTail::Zero)?;
        Ok(Multiplier {
            lambda: lambda.clone(),
            limit_l: limit,
            limit_residual: residual,
            lambda0,
            lambda1_tail_mass: tail_mass(&lambda1, &grid),
            lambda1,
            grid,
            sup_norm: sup,
        })
    }

    /// `g = l·f + λ₁ ∗ f`, the convolution taken by FFT with trapezoid weights.
    pub fn apply(&self, f: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<MultiplierApplication> {
        let nodes = self.lambda1.grid();
        let m = self.grid.half_count();
        let n = nodes.len();
        let h = self.grid.step;
        let samples: Vec<Complex64> = nodes.iter().map(|&t| f.value(t)).collect();
        let size = (2 * n - 1).next_power_of_two();
        let mut a = vec![ZERO; size];
        let mut b = vec![ZERO; size];
        a[..n].copy_from_slice(self.lambda1.values());
        for (j, v) in samples.iter().enumerate() {
            let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            b[j] = v * (w * h);
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        forward.process(&mut a);
        forward.process(&mut b);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        inverse.process(&mut a);
        let scale = 1.0 / size as f64;
        let conv: Vec<Complex64> = (0..n).map(|k| a[k + m] * scale).collect();
        let conv = SampledFunction::new(nodes.to_vec(), conv, SampledTail::Zero)?;

        let output_samples: Vec<Complex64> =
            samples.iter().zip(conv.values()).map(|(s, c)| self.limit_l * s + c).collect();
        let g = if self.limit_l == ZERO {
            FunctionDescriptor::Sampled(conv.clone())
        } else {
            FunctionDescriptor::Sum(vec![f.clone().scaled(self.limit_l), FunctionDescriptor::Sampled(conv.clone())])
        };

        let f_l1 = l1_norm(f, cfg)?.value;
        let errors = self
            .grid
            .frequencies()
            .par_iter()
            .map(|&x| -> Result<f64> {
                let fx = fourier_transform(f, x, cfg)?.value;
                let gx = self.limit_l * fx + sampled_transform(&conv, x)?;
                Ok((self.lambda.value(x) * fx - gx).norm())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiplierApplication {
            schema_version: SCHEMA_VERSION,
            limit_l: self.limit_l,
            g,
            identity_error: errors.into_iter().fold(0.0, f64::max),
            identity_threshold: 1e-3 * self.sup_norm * f_l1,
            lambda1_tail_mass: self.lambda1_tail_mass,
            input_l1: f_l1,
            input_l1_grid: trapezoid_l1(&samples, h),
            output_l1_grid: trapezoid_l1(&output_samples, h),
        })
    }
}

fn trapezoid_l1(values: &[Complex64], h: f64) -> f64 {
    let n = values.len();
    values
        .iter()
        .enumerate()
        .map(|(j, v)| if j == 0 || j == n - 1 { 0.5 * v.norm() } else { v.norm() })
        .sum::<f64>()
        * h
}

/// `Λf` and the check of `(Λf)^ = λ f̂` on the frequency window. `λ₀` and `λ₁` live
/// on the [`Multiplier`] that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplierApplication {
    pub schema_version: u32,
    pub limit_l: Complex64,
    /// `l·f` plus the sampled convolution.
    pub g: FunctionDescriptor,
    /// `max |λ(x) f̂(x) − ĝ(x)|` over the frequency window.
    pub identity_error: f64,
    /// `10⁻³ ‖λ‖_B ‖f‖_L`.
    pub identity_threshold: f64,
    pub lambda1_tail_mass: f64,
    pub input_l1: f64,
    pub input_l1_grid: f64,
    pub output_l1_grid: f64,
}

pub fn multiplier_apply(
    lambda: &FunctionDescriptor,
    f: &FunctionDescriptor,
    cfg: &QuadratureConfig,
) -> Result<MultiplierApplication> {
    Multiplier::new(lambda, MultiplierGrid::default(), cfg)?.apply(f, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct OperatorNormEstimate {
    pub schema_version: u32,
    pub function: String,
    /// `max_f ‖g‖_L / ‖f‖_L` over the corpus.
    pub estimate: f64,
    pub ratios: Vec<(String, f64)>,
    pub h_norm: f64,
    pub ratio_to_h: f64,
}

/// Lower bound on the operator norm of the multiplier, by trapezoid norms on the grid.
pub fn operator_norm_estimate(
    lambda: &FunctionDescriptor,
    corpus: &[FunctionDescriptor],
    cfg: &QuadratureConfig,
) -> Result<OperatorNormEstimate> {
    let grid = MultiplierGrid::default();
    let multiplier = Multiplier::new(lambda, grid, cfg)?;
    let mut ratios = Vec::new();
    for f in corpus {
        let app = multiplier.apply(f, cfg)?;
        if app.input_l1_grid > 0.0 {
            ratios.push((f.name(), app.output_l1_grid / app.input_l1_grid));
        }
    }
    let estimate = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let report = crate::continuous::assemble_norm_report(lambda, &[], cfg)?;
    Ok(OperatorNormEstimate {
        schema_version: SCHEMA_VERSION,
        function: lambda.name(),
        estimate,
        ratios,
        h_norm: report.h_norm,
        ratio_to_h: if report.h_norm > 0.0 { estimate / report.h_norm } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Family;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn moments_match_across_branches() {
        for theta in [0.2499, 0.2501] {
            let (a0, a1) = segment_moments(theta);
            let z = Complex64::new(0.0, -theta);
            let e0 = (z.exp() - 1.0) / z;
            let e1 = (z.exp() * (z - 1.0) + 1.0) / (z * z);
            assert!((a0 - e0).norm() < 1e-14 && (a1 - e1).norm() < 1e-14);
        }
    }

    #[test]
    fn gaussian_transform() {
        let g = FunctionDescriptor::gaussian(1.0);
        for x in [0.0, 0.7, 3.0, 12.5] {
            let exact = PI.sqrt() * (-x * x / 4.0f64).exp();
            let r = fourier_transform(&g, x, &cfg()).unwrap();
            assert!((r.value.re - exact).abs() < 1e-8 && r.value.im.abs() < 1e-9, "x={x}: {}", r.value);
        }
    }

    #[test]
    fn poisson_transform_uses_tails() {
        let p = FunctionDescriptor::poisson();
        for x in [0.0, 0.5, 2.0] {
            let r = fourier_transform(&p, x, &cfg()).unwrap();
            let exact = PI * (-x.abs()).exp();
            assert!((r.value - exact).norm() < 1e-6, "x={x}: {} vs {exact}", r.value);
        }
    }

    #[test]
    fn hat_transform_is_fejer() {
        let hat: FunctionDescriptor = Family::Hat { width: 1.0 }.into();
        let x = 2.3f64;
        let exact = (2.0 * (x / 2.0).sin() / x).powi(2);
        let r = fourier_transform(&hat, x, &cfg()).unwrap();
        assert!((r.value.re - exact).abs() < 1e-9);
    }

    #[test]
    fn sampled_transform_of_hat_is_exact() {
        let s = SampledFunction::new(
            vec![-1.0, 0.0, 1.0],
            vec![ZERO, Complex64::new(1.0, 0.0), ZERO],
            SampledTail::Zero,
        )
        .unwrap();
        let x = 5.0f64;
        let exact = (2.0 * (x / 2.0).sin() / x).powi(2);
        assert!((sampled_transform(&s, x).unwrap().re - exact).abs() < 1e-14);
    }

    #[test]
    fn odd_step_transform_by_limits() {
        let step: FunctionDescriptor = Family::OddStep { width: 1.0 }.into();
        let limits = limits_at_infinity(&step, &cfg()).unwrap();
        let x = 1.5f64;
        let exact = -PI / (PI * x / 2.0).sinh();
        let r = fourier_transform_with_limits(&step, x, limits, &cfg()).unwrap();
        assert!((r.value - Complex64::new(0.0, exact)).norm() < 1e-6, "{}", r.value);
    }

    #[test]
    fn decomposition_identity_is_exact() {
        let g: FunctionDescriptor = Family::OddGaussian { sigma: 1.0 }.into();
        let d = theorem_a_decompose(&g, 2.0, &cfg()).unwrap();
        assert_eq!(d.full - d.main - d.gamma, ZERO);
    }

    #[test]
    fn constant_multiplier_reproduces_input() {
        let one = FunctionDescriptor::constant(1.0);
        let f = FunctionDescriptor::gaussian(1.0);
        let app = multiplier_apply(&one, &f, &cfg()).unwrap();
        for t in [-3.0, 0.0, 0.4, 2.0] {
            assert!((app.g.value(t) - f.value(t)).norm() < 1e-12);
        }
        assert!(app.identity_error <= app.identity_threshold);
    }
}
