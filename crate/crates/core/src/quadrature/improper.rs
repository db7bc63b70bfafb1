//! Integrals over half-lines and the real line: adaptive quadrature up to the
//! truncation radius `R`, plus a tail extrapolated from blocks just below `R`.
//!
//! The same blocks drive divergence detection: for an integrand behaving like
//! `t^p`, consecutive dyadic blocks have ratio `2^(p+1)`, so a ratio that fails to
//! drop below `2^(-slack)` on two consecutive blocks is reported as
//! `diverged_suspected`.

use super::adaptive::{adaptive_segments, partition};
use super::config::{QuadratureConfig, TailMode, Tolerance};
use super::value::{IntegralResult, QuadValue};
use crate::error::Result;

fn effective_radius(a: f64, cfg: &QuadratureConfig) -> f64 {
    let r = cfg.truncation_radius;
    if a > 0.0 && r < 16.0 * a {
        16.0 * a
    } else {
        r
    }
}

fn dyadic_points(a: f64, r: f64) -> impl Iterator<Item = f64> {
    let top = r.log2().ceil() as i32;
    (-8..=top).flat_map(|j| {
        let p = 2f64.powi(j);
        [p, -p]
    })
    .filter(move |p| *p > a && *p < r)
}

/// `∫_a^∞ g` with mandatory `breakpoints`.
pub fn improper<V, F>(
    g: &F,
    a: f64,
    breakpoints: &[f64],
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let r = effective_radius(a, cfg);
    let markers = [r / 8.0, r / 4.0, r / 2.0, 0.75 * r, 0.875 * r];
    let points = partition(
        a,
        r,
        breakpoints
            .iter()
            .copied()
            .chain(dyadic_points(a, r))
            .chain(markers),
    );
    let run = adaptive_segments(g, &points, tol, cfg.max_subdivisions)?;

    let b0 = run.block(r / 8.0, r / 4.0);
    let b1 = run.block(r / 4.0, r / 2.0);
    let b2 = run.block(r / 2.0, r);
    let (m0, m1, m2) = (b0.magnitude(), b1.magnitude(), b2.magnitude());
    let threshold = 2f64.powf(-cfg.divergence_slack);
    let negligible = m2 <= 1e-2 * tol.abs || m2 == 0.0;
    let diverged = !negligible && m2 >= threshold * m1 && m1 >= threshold * m0;

    let partial = run.total();
    let (tail, uncertainty) = if negligible {
        (V::default(), m2)
    } else if diverged {
        (V::default(), f64::INFINITY)
    } else {
        match cfg.tail_estimate_mode {
            TailMode::Zero => (V::default(), 0.0),
            TailMode::PowerFit => {
                let extrapolate = |ratio: f64| b2 * (ratio / (1.0 - ratio));
                if m1 > 0.0 && m2 < m1 {
                    let tail = extrapolate(m2 / m1);
                    let alt = if m0 > 0.0 && m1 < m0 { extrapolate(m1 / m0) } else { tail * 2.0 };
                    (tail, (tail - alt).magnitude())
                } else {
                    (V::default(), f64::INFINITY)
                }
            }
            TailMode::Geometric => {
                let c1 = run.block(0.75 * r, 0.875 * r);
                let c2 = run.block(0.875 * r, r);
                let (n1, n2) = (c1.magnitude(), c2.magnitude());
                if n2 == 0.0 {
                    (V::default(), 0.0)
                } else if n1 > 0.0 && n2 < n1 {
                    let ratio = n2 / n1;
                    let tail = c2 * (ratio / (1.0 - ratio));
                    (tail, tail.magnitude())
                } else {
                    (V::default(), f64::INFINITY)
                }
            }
        }
    };

    let value = partial + tail;
    let trace = if diverged || cfg.tail_estimate_mode != TailMode::Zero {
        cumulative_trace(&run.segments, a, r)
    } else {
        Vec::new()
    };
    let converged = run.converged && !diverged && uncertainty <= tol.target(value.magnitude());
    Ok(IntegralResult {
        value,
        error_estimate: run.error() + if uncertainty.is_finite() { uncertainty } else { 0.0 },
        converged,
        tail_contribution_estimate: tail.magnitude(),
        diverged_suspected: diverged,
        subdivisions: run.subdivisions,
        evaluations: run.evaluations,
        trace,
    })
}

fn cumulative_trace<V: QuadValue>(segments: &[super::adaptive::Segment<V>], a: f64, r: f64) -> Vec<(f64, f64)> {
    let mut ordered: Vec<_> = segments.to_vec();
    ordered.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut out = Vec::new();
    let mut acc = V::default();
    let mut next = 1.0f64.max(2f64.powf(a.max(1.0).log2().ceil()));
    for s in ordered {
        acc = acc + s.value;
        while s.b >= next && next <= r {
            out.push((next, acc.magnitude()));
            next *= 2.0;
        }
    }
    if out.last().map(|p| p.0) != Some(r) {
        out.push((r, acc.magnitude()));
    }
    out
}

/// `∫_{-∞}^b g`.
pub fn improper_lower<V, F>(
    g: &F,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let mirrored: Vec<f64> = breakpoints.iter().map(|p| -p).collect();
    improper(&|s: f64| g(-s), -b, &mirrored, tol, cfg)
}

/// `∫_ℝ g`, split at the origin.
pub fn integrate_real_line<V, F>(
    g: &F,
    breakpoints: &[f64],
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let half = Tolerance { abs: 0.5 * tol.abs, rel: tol.rel };
    let left = improper_lower(g, 0.0, breakpoints, half, cfg)?;
    let right = improper(g, 0.0, breakpoints, half, cfg)?;
    Ok(left.combine(right))
}

/// `∫_0^b g` for integrands that may blow up at the origin, via `x = b / s`. The
/// dyadic tail analysis then runs on blocks shrinking towards zero.
pub fn integrate_from_origin<V, F>(
    g: &F,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let mapped: Vec<f64> = breakpoints
        .iter()
        .filter(|p| **p > 0.0 && **p < b)
        .map(|p| b / p)
        .collect();
    improper(&|s: f64| g(b / s) * (b / (s * s)), 1.0, &mapped, tol, cfg)
}

/// `∫_a^∞ g` with the inner tolerances of `cfg`.
pub fn integrate_improper<V, F>(g: F, a: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    improper(&g, a, &[], cfg.inner(), cfg)
}
