//! Seminorms and space norms for functions on ℝ: `‖·‖_B`, `ℬ`, `S_f`, `𝒜`, `ℋ`,
//! `𝒜_q`, `ℬ_p`, quasiconvexity, the Hilbert transform, `ReH` and `H_s`.

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::function::odd_continuation;
use crate::function::{FunctionDescriptor, Side};
use crate::quadrature::{
    improper, integrate_excluding_start, integrate_real_line, integrate_with_breakpoints, principal_value_with,
    Finiteness, IntegralResult, QuadratureConfig, Tolerance, Tracked,
};
use crate::report::{conjugate_exponent, exponent_key, Certificate, FlagMap, SCHEMA_VERSION};

/// Collects failures and non-convergence of inner integrals evaluated inside an outer
/// quadrature. The outer integrand carries each inner value with its error, so one
/// pass integrates both.
#[derive(Default)]
pub(crate) struct Nested {
    failure: RefCell<Option<Error>>,
    unconverged: Cell<bool>,
}

impl Nested {
    pub(crate) fn eval(&self, inner: Result<IntegralResult<f64>>) -> Tracked {
        match inner {
            Ok(r) => {
                if !r.converged {
                    self.unconverged.set(true);
                }
                Tracked { value: r.value, error: r.error_estimate }
            }
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                Tracked::default()
            }
        }
    }

    pub(crate) fn finish(self, outer: Result<IntegralResult<Tracked>>) -> Result<IntegralResult<f64>> {
        if let Some(e) = self.failure.into_inner() {
            return Err(e);
        }
        let outer = outer?;
        let inner_error = outer.value.error.abs();
        let mut out = outer.map_value(|v| v.value);
        out.error_estimate += inner_error;
        out.converged &= !self.unconverged.get();
        Ok(out)
    }
}

fn positive(points: &[f64]) -> Vec<f64> {
    points.iter().copied().filter(|p| *p > 0.0).collect()
}

/// `sup_t |λ(t)|` from a uniform grid of `2^level + 1` nodes on `[−R, R]`, geometric
/// nodes near the origin and beyond `R`, the kinks, and golden-section refinement of
/// the best local maxima. Grids are nested across levels, so the estimate never
/// decreases under refinement.
pub fn sup_norm_with_level(lambda: &FunctionDescriptor, cfg: &QuadratureConfig, level: u32) -> f64 {
    let r = cfg.truncation_radius;
    let n = 1usize << level;
    let mut nodes: Vec<f64> = (0..=n).map(|j| -r + 2.0 * r * j as f64 / n as f64).collect();
    for j in -20..=12 {
        let p = 2f64.powi(j);
        if p < r {
            nodes.extend([p, -p]);
        }
        nodes.extend([r * 2f64.powi(j + 21), -r * 2f64.powi(j + 21)]);
    }
    nodes.extend(lambda.kinks());
    nodes.push(0.0);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mag = |x: f64| lambda.value(x).norm();
    let values: Vec<f64> = nodes.iter().map(|&x| mag(x)).collect();
    let mut best = values.iter().copied().fold(0.0, f64::max);

    let mut peaks: Vec<usize> = (1..nodes.len() - 1)
        .filter(|&i| values[i] >= values[i - 1] && values[i] >= values[i + 1] && values[i] > 0.0)
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    for &i in peaks.iter().take(8) {
        best = best.max(golden_max(&mag, nodes[i - 1], nodes[i + 1]));
    }
    best
}

/// `‖λ‖_B` at the default refinement level.
pub fn sup_norm(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> f64 {
    sup_norm_with_level(lambda, cfg, 14)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.max(fd);
    for _ in 0..80 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
    }
    best
}

/// `∫_ℝ |λ'|`.
pub fn deriv_l1(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    let d = lambda.derivative()?;
    l1_norm(&d, cfg)
}

/// `‖f‖_L = ∫_ℝ |f|`.
pub fn l1_norm(f: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    integrate_real_line(&|t: f64| f.value(t).norm(), &f.kinks(), cfg.inner(), cfg)
}

/// The inner integral of `S_g` at `u`: `∫_{|t|≤u/2} (g(u−t) − g(u+t))/t dt`, computed as
/// twice the integral over `(0, u/2]`. The integrand tends to `−2g'(u)` at `t = 0`.
pub fn s_inner(
    g: &FunctionDescriptor,
    dg: Option<&FunctionDescriptor>,
    u: f64,
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<Complex64>> {
    if u <= 0.0 {
        return Ok(IntegralResult::zero());
    }
    let kinks = g.kinks();
    let at_kink = kinks.iter().any(|k| (k - u).abs() <= cfg.singularity_exclusion);
    let limit = match dg {
        Some(d) if !at_kink => Some(d.value(u) * -2.0),
        _ => None,
    };
    let breaks: Vec<f64> = kinks.iter().map(|k| (u - k).abs()).filter(|t| *t < 0.5 * u).collect();
    let half = Tolerance { abs: 0.5 * tol.abs, rel: tol.rel };
    let r = integrate_excluding_start(
        |t: f64| (g.value(u - t) - g.value(u + t)) / t,
        0.0,
        0.5 * u,
        limit,
        &breaks,
        half,
        cfg,
    )?;
    Ok(r.scaled(2.0))
}

/// `S_g = ∫₀^∞ |∫_{|t|≤u/2} (g(u−t) − g(u+t))/t dt| du`.
pub fn s_functional(g: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    let dg = (g.derivative_order_available() >= 1).then(|| g.derivative()).transpose()?;
    let kinks = positive(&g.kinks());
    let outer_breaks: Vec<f64> = kinks.iter().flat_map(|&k| [k, 2.0 * k / 3.0, 2.0 * k]).collect();
    let nested = Nested::default();
    let integrand = |u: f64| nested.eval(s_inner(g, dg.as_ref(), u, cfg.inner(), cfg).map(|r| r.map_value(|v| v.norm())));
    let outer = improper(&integrand, 0.0, &outer_breaks, cfg.outer(), cfg);
    nested.finish(outer)
}

/// The half of `S_g` whose inner integral runs over `(0, u/2]` only; by evenness of
/// the inner integrand it is exactly `S_g / 2`.
pub fn s_functional_one_sided(g: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    Ok(s_functional(g, cfg)?.scaled(0.5))
}

/// `𝒜 = ∫₀^∞ |λ(t) − λ(−t)|/t dt`. Inside `(0, ε)` the integrand is replaced by its
/// limit `|2λ'(0)|` when the derivative exists there.
pub fn a_functional(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    let eps = cfg.singularity_exclusion;
    let smooth_at_zero = lambda.derivative_order_available() >= 1 && !lambda.kinks().contains(&0.0);
    let odd = |t: f64| (lambda.value(t) - lambda.value(-t)).norm() / t;
    let limit = if smooth_at_zero { (lambda.derivative()?.value(0.0) * 2.0).norm() } else { odd(0.5 * eps) };
    let integrand = |t: f64| if t < eps { limit } else { odd(t) };
    let mut breaks: Vec<f64> = lambda.kinks().iter().map(|k| k.abs()).filter(|k| *k > 0.0).collect();
    breaks.push(eps);
    improper(&integrand, 0.0, &breaks, cfg.inner(), cfg)
}

/// Supremum of `|g|` over `[lo, hi]` from 65 nodes, the kinks inside, and a
/// golden-section refinement around the best node.
fn block_sup(g: &FunctionDescriptor, lo: f64, hi: f64, kinks: &[f64]) -> f64 {
    let mag = |t: f64| g.value(t).norm();
    let mut nodes: Vec<f64> = (0..=64).map(|j| lo + (hi - lo) * j as f64 / 64.0).collect();
    nodes.extend(kinks.iter().copied().filter(|k| *k > lo && *k < hi));
    nodes.sort_by(f64::total_cmp);
    let values: Vec<f64> = nodes.iter().map(|&t| mag(t)).collect();
    let (i, best) = values.iter().copied().enumerate().fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let a = nodes[i.saturating_sub(1)];
    let b = nodes[(i + 1).min(nodes.len() - 1)];
    if b > a {
        best.max(golden_max(&mag, a, b))
    } else {
        best
    }
}

/// `𝒜_q g = ∫₀^∞ (1/u ∫_{u≤|t|≤2u} |g(t)|^q dt)^{1/q} du` for `q ∈ (1, ∞)`, and
/// `∫₀^∞ sup_{u≤|t|≤2u} |g(t)| du` for `q = ∞`.
pub fn aq_functional(g: &FunctionDescriptor, q: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    if !(q > 1.0) {
        return Err(Error::InvalidParameter(format!("q must exceed 1, got {q}")));
    }
    let kinks = g.kinks();
    let abs_kinks: Vec<f64> = kinks.iter().map(|k| k.abs()).filter(|k| *k > 0.0).collect();
    let outer_breaks: Vec<f64> = abs_kinks.iter().flat_map(|&k| [k, 0.5 * k]).collect();
    if q.is_infinite() {
        let integrand = |u: f64| {
            if u <= 0.0 {
                return g.value(0.0).norm();
            }
            block_sup(g, u, 2.0 * u, &kinks).max(block_sup(g, -2.0 * u, -u, &kinks))
        };
        return improper(&integrand, 0.0, &outer_breaks, cfg.outer(), cfg);
    }
    let nested = Nested::default();
    let inner = |u: f64| -> Result<IntegralResult<f64>> {
        if u <= 0.0 {
            return Ok(IntegralResult::exact(2f64.powf(1.0 / q) * g.value(0.0).norm()));
        }
        let power = |t: f64| g.value(t).norm().powf(q) + g.value(-t).norm().powf(q);
        let breaks: Vec<f64> = abs_kinks.iter().copied().filter(|k| *k > u && *k < 2.0 * u).collect();
        let r = integrate_with_breakpoints(power, u, 2.0 * u, &breaks, cfg.inner(), cfg)?;
        let mean = (r.value / u).max(0.0);
        let value = mean.powf(1.0 / q);
        let slope = if mean > 0.0 { value / (q * mean * u) } else { 0.0 };
        Ok(IntegralResult {
            value,
            error_estimate: slope * r.error_estimate,
            ..IntegralResult::exact(value)
        }
        .with_convergence(r.converged))
    };
    let integrand = |u: f64| nested.eval(inner(u));
    let outer = improper(&integrand, 0.0, &outer_breaks, cfg.outer(), cfg);
    nested.finish(outer)
}

trait WithConvergence {
    fn with_convergence(self, converged: bool) -> Self;
}

impl WithConvergence for IntegralResult<f64> {
    fn with_convergence(mut self, converged: bool) -> Self {
        self.converged = converged;
        self
    }
}

/// Quasiconvexity `∫₀^∞ t|dλ'(t)|`: the absolutely continuous part `∫ t|λ''|` plus
/// `κ·|jump of λ'|` at every positive kink `κ`. Sampled functions use the Stieltjes
/// sum `Σ t_i |λ'(t_{i+1}) − λ'(t_i)|` over the nonnegative grid nodes.
pub fn quasiconvexity_functional(lambda: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    if let FunctionDescriptor::Sampled(s) = lambda {
        let d = s.derivative();
        let grid = d.grid();
        let mut total = 0.0;
        for i in 0..grid.len() - 1 {
            if grid[i] >= 0.0 {
                total += grid[i] * (d.eval(grid[i + 1]) - d.eval(grid[i])).norm();
            }
        }
        let last = grid[grid.len() - 1];
        if last > 0.0 {
            total += last * (d.eval(last * 2.0 + 1.0) - d.eval(last)).norm();
        }
        return Ok(IntegralResult::exact(total));
    }
    if lambda.derivative_order_available() < 2 {
        return Err(Error::Precondition(format!(
            "quasiconvexity of `{}` needs a second derivative",
            lambda.name()
        )));
    }
    let d1 = lambda.derivative()?;
    let d2 = d1.derivative()?;
    let kinks = positive(&lambda.kinks());
    let mut out = improper(&|t: f64| t * d2.value(t).norm(), 0.0, &kinks, cfg.inner(), cfg)?;
    for k in kinks {
        let h = 1e-9 * k.max(1.0);
        out.value += k * (d1.value(k + h) - d1.value(k - h)).norm();
    }
    Ok(out)
}

/// `f̃(x) = (1/π) PV ∫_ℝ f(t)/(x−t) dt`.
pub fn hilbert_transform(f: &FunctionDescriptor, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<Complex64>> {
    hilbert_transform_with(&|t: f64| f.value(t), &f.kinks(), x, cfg.inner(), cfg)
}

/// Hilbert transform of an arbitrary integrand.
pub fn hilbert_transform_with<F>(
    f: &F,
    kinks: &[f64],
    x: f64,
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    if !x.is_finite() {
        return Err(Error::Precondition(format!("evaluation point must be finite, got {x}")));
    }
    let scaled = Tolerance { abs: PI * tol.abs, rel: tol.rel };
    let r = principal_value_with(
        &|t: f64| f(t) / (x - t),
        x,
        f64::NEG_INFINITY,
        f64::INFINITY,
        kinks,
        scaled,
        cfg,
    )?;
    Ok(r.scaled(1.0 / PI))
}

/// `‖f‖_H = ‖f‖_L + ‖f̃‖_L`.
#[derive(Clone, Debug, Serialize)]
pub struct ReHNorm {
    pub l1: IntegralResult<f64>,
    pub hilbert_l1: IntegralResult<f64>,
    pub total: IntegralResult<f64>,
}

impl ReHNorm {
    pub fn finiteness(&self) -> Finiteness {
        self.total.finiteness()
    }
}

pub fn reh_norm(f: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<ReHNorm> {
    let l1 = l1_norm(f, cfg)?;
    let hilbert_l1 = hilbert_l1_norm(f, cfg)?;
    let total = l1.clone().combine(hilbert_l1.clone());
    Ok(ReHNorm { l1, hilbert_l1, total })
}

/// `‖f̃‖_L` from Hilbert-transform values on a grid. Each side of the origin is cut
/// into shells `[R/2^(k+1), R/2^k]` plus `[0, R/2^K]`; every shell is refined by
/// trapezoid doubling until two levels agree, and the pointwise errors of the
/// transform are integrated alongside. The last three shells drive the tail.
pub fn hilbert_l1_norm(f: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    let tol = cfg.outer();
    let series = crate::discrete::SeriesConfig {
        abs_tol: tol.abs,
        rel_tol: tol.rel,
        divergence_slack: cfg.divergence_slack,
        ..Default::default()
    };
    let mut out = IntegralResult::zero();
    for (total, values) in hilbert_shells(f, cfg.truncation_radius, cfg)? {
        let n = values.len();
        let mut tail = crate::discrete::extrapolate(total.value, [values[n - 3], values[n - 2], values[n - 1]], &series);
        tail.error_estimate += total.error_estimate;
        tail.converged &= total.converged;
        tail.evaluations = total.evaluations;
        out = out.combine(tail);
    }
    out.converged &= out.error_estimate <= tol.target(out.value);
    Ok(out)
}

/// `∫_{|x|≤radius} |f̃|` on the same shells, without a tail.
pub fn hilbert_l1_truncated(f: &FunctionDescriptor, radius: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    let tol = cfg.outer();
    let mut out = IntegralResult::zero();
    for (total, _) in hilbert_shells(f, radius, cfg)? {
        out = out.combine(total);
    }
    out.converged &= out.error_estimate <= tol.target(out.value);
    Ok(out)
}

/// Per side of the origin: the integral of `|f̃|` over `[0, r]` and the shell values
/// in increasing order of distance.
fn hilbert_shells(f: &FunctionDescriptor, r: f64, cfg: &QuadratureConfig) -> Result<Vec<(IntegralResult<f64>, Vec<f64>)>> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    let tol = cfg.outer();
    let kinks = f.kinks();
    let shells_below = ((r * 64.0).log2().ceil() as i32).max(3);
    let mut edges = vec![0.0];
    edges.extend((0..=shells_below).rev().map(|k| r * 2f64.powi(-k)));
    let point = |x: f64, pt: Tolerance| -> Result<(f64, f64)> {
        let h = hilbert_transform_with(&|t: f64| f.value(t), &kinks, x, pt, cfg)?;
        Ok((h.value.norm(), h.error_estimate))
    };
    let sides = [1.0, -1.0];
    let shells: Vec<(f64, f64, f64)> =
        sides.iter().flat_map(|&s| edges.windows(2).map(move |w| (s, w[0], w[1]))).collect();
    // a coarse pass sizes the pointwise tolerance and each shell's share of the target
    let mut estimate = 0.0;
    for &(sign, lo, hi) in &shells {
        estimate += Shell::start(&|x: f64| point(sign * x, tol), lo, hi)?.value();
    }
    let target = tol.target(estimate);
    let pointwise = Tolerance { abs: target / (8.0 * r), rel: 0.25 * tol.rel };
    let share = 0.5 * target / shells.len() as f64;
    let mut coarse = Vec::with_capacity(shells.len());
    for &(sign, lo, hi) in &shells {
        coarse.push(Shell::start(&|x: f64| point(sign * x, pointwise), lo, hi)?);
    }
    let mut out = Vec::with_capacity(2);
    for &sign in &sides {
        let per_side = edges.len() - 1;
        let mut values = Vec::with_capacity(per_side);
        let mut total = IntegralResult::<f64>::zero();
        for shell in coarse.drain(..per_side) {
            let r = shell.refine(&|x: f64| point(sign * x, pointwise), share)?;
            values.push(r.value);
            total = total.combine(r);
        }
        out.push((total, values));
    }
    Ok(out)
}

/// Trapezoid sums on one shell, refined by doubling.
struct Shell {
    lo: f64,
    hi: f64,
    values: Vec<(f64, f64)>,
    previous: f64,
}

impl Shell {
    fn eval(g: &(impl Fn(f64) -> Result<(f64, f64)> + Sync), xs: Vec<f64>) -> Result<Vec<(f64, f64)>> {
        xs.into_par_iter().map(g).collect()
    }

    fn start(g: &(impl Fn(f64) -> Result<(f64, f64)> + Sync), lo: f64, hi: f64) -> Result<Self> {
        let n = 16;
        let values = Self::eval(g, (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())?;
        let mut shell = Shell { lo, hi, values, previous: f64::NAN };
        shell.double(g)?;
        Ok(shell)
    }

    fn n(&self) -> usize {
        self.values.len() - 1
    }

    fn sums(&self) -> (f64, f64) {
        let n = self.n();
        let h = (self.hi - self.lo) / n as f64;
        let inner: f64 = self.values[1..n].iter().map(|v| v.0).sum();
        let err: f64 = self.values.iter().map(|v| v.1).sum::<f64>() * h;
        (h * (0.5 * (self.values[0].0 + self.values[n].0) + inner), err)
    }

    fn value(&self) -> f64 {
        self.sums().0
    }

    fn double(&mut self, g: &(impl Fn(f64) -> Result<(f64, f64)> + Sync)) -> Result<()> {
        self.previous = self.value();
        let n = self.n();
        let (lo, hi) = (self.lo, self.hi);
        let mids = Self::eval(g, (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect())?;
        let mut merged = Vec::with_capacity(2 * n + 1);
        for i in 0..n {
            merged.push(self.values[i]);
            merged.push(mids[i]);
        }
        merged.push(self.values[n]);
        self.values = merged;
        Ok(())
    }

    fn refine(mut self, g: &(impl Fn(f64) -> Result<(f64, f64)> + Sync), budget: f64) -> Result<IntegralResult<f64>> {
        loop {
            let (fine, point_err) = self.sums();
            let err = (fine - self.previous).abs() / 3.0;
            if err <= budget || self.n() >= 1 << 14 {
                let mut out = IntegralResult::exact(fine);
                out.error_estimate = err + point_err;
                out.converged = err <= budget;
                out.evaluations = self.n() + 1;
                return Ok(out);
            }
            self.double(g)?;
        }
    }
}

/// Both characterisations of `H_s`: the odd continuations lie in `ReH`, and
/// `‖f‖_L + S_f < ∞`. Only finiteness verdicts are compared.
#[derive(Clone, Debug, Serialize)]
pub struct HsReport {
    pub schema_version: u32,
    pub reh_plus: ReHNorm,
    pub reh_minus: ReHNorm,
    pub l1: IntegralResult<f64>,
    pub s_f: IntegralResult<f64>,
    pub reh_verdict: Finiteness,
    pub s_verdict: Finiteness,
    pub member: Certificate,
    /// Both verdicts conclusive and different.
    pub numerical_inconsistency: bool,
}

pub fn hs_membership(f: &FunctionDescriptor, cfg: &QuadratureConfig) -> Result<HsReport> {
    let reh_plus = reh_norm(&odd_continuation(f, Side::Positive), cfg)?;
    let reh_minus = reh_norm(&odd_continuation(f, Side::Negative), cfg)?;
    let l1 = l1_norm(f, cfg)?;
    let s_f = s_functional(f, cfg)?;
    let reh_verdict = reh_plus.finiteness().join(reh_minus.finiteness());
    let s_verdict = l1.finiteness().join(s_f.finiteness());
    let numerical_inconsistency = reh_verdict.is_conclusive() && s_verdict.is_conclusive() && reh_verdict != s_verdict;
    let member = if numerical_inconsistency {
        Certificate::Inconclusive
    } else {
        Certificate::from_flags([&reh_verdict, &s_verdict])
    };
    Ok(HsReport {
        schema_version: SCHEMA_VERSION,
        reh_plus,
        reh_minus,
        l1,
        s_f,
        reh_verdict,
        s_verdict,
        member,
        numerical_inconsistency,
    })
}

/// Every seminorm and space norm for one candidate multiplier.
#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub schema_version: u32,
    pub function: String,
    pub sup_norm: f64,
    pub deriv_l1: f64,
    pub cb_norm: f64,
    pub s_value: f64,
    pub a_value: f64,
    pub h_norm: f64,
    /// `𝒜_q(λ')` keyed by `p`, with `1/p + 1/q = 1`.
    pub aq_values: BTreeMap<String, f64>,
    pub bp_norms: BTreeMap<String, f64>,
    pub quasiconvexity: Option<f64>,
    pub error_estimates: BTreeMap<String, f64>,
    pub finiteness_flags: FlagMap,
    pub h_certificate: Certificate,
    pub cb_certificate: Certificate,
    pub bp_certificates: BTreeMap<String, Certificate>,
}

pub fn assemble_norm_report(
    lambda: &FunctionDescriptor,
    p_list: &[f64],
    cfg: &QuadratureConfig,
) -> Result<NormReport> {
    cfg.validate()?;
    let exponents: Vec<(f64, f64)> =
        p_list.iter().map(|&p| conjugate_exponent(p).map(|q| (p, q))).collect::<Result<_>>()?;
    let d = lambda.derivative()?;
    let sup = sup_norm(lambda, cfg);
    let dl = l1_norm(&d, cfg)?;
    let s = s_functional(&d, cfg)?;
    let a = a_functional(lambda, cfg)?;
    let quasi = match lambda {
        FunctionDescriptor::Sampled(_) => Some(quasiconvexity_functional(lambda, cfg)?),
        _ if lambda.derivative_order_available() >= 2 => Some(quasiconvexity_functional(lambda, cfg)?),
        _ => None,
    };

    let mut flags = FlagMap::new();
    let mut errors = BTreeMap::new();
    for (name, r) in [("deriv_l1", &dl), ("s", &s), ("a", &a)] {
        flags.insert(name.to_string(), r.finiteness());
        errors.insert(name.to_string(), r.error_estimate);
    }
    if let Some(q) = &quasi {
        flags.insert("quasiconvexity".into(), q.finiteness());
        errors.insert("quasiconvexity".into(), q.error_estimate);
    }
    let cb_flag = dl.finiteness();
    let h_flag = cb_flag.join(s.finiteness()).join(a.finiteness());
    flags.insert("cb".into(), cb_flag);
    flags.insert("h".into(), h_flag);

    let mut aq_values = BTreeMap::new();
    let mut bp_norms = BTreeMap::new();
    let mut bp_certificates = BTreeMap::new();
    for (p, q) in exponents {
        let key = exponent_key(p);
        let aq = aq_functional(&d, q, cfg)?;
        let flag = aq.finiteness().join(a.finiteness());
        flags.insert(format!("aq_{key}"), aq.finiteness());
        flags.insert(format!("bp_{key}"), flag);
        errors.insert(format!("aq_{key}"), aq.error_estimate);
        bp_norms.insert(key.clone(), sup + aq.value + a.value);
        bp_certificates.insert(key.clone(), Certificate::from_flags([&flag]));
        aq_values.insert(key, aq.value);
    }
    let cb_norm = sup + dl.value;
    Ok(NormReport {
        schema_version: SCHEMA_VERSION,
        function: lambda.name(),
        sup_norm: sup,
        deriv_l1: dl.value,
        cb_norm,
        s_value: s.value,
        a_value: a.value,
        h_norm: cb_norm + s.value + a.value,
        aq_values,
        bp_norms,
        quasiconvexity: quasi.map(|q| q.value),
        error_estimates: errors,
        finiteness_flags: flags,
        h_certificate: Certificate::from_flags([&h_flag]),
        cb_certificate: Certificate::from_flags([&cb_flag]),
        bp_certificates,
    })
}
