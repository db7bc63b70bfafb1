use std::cell::Cell;

use super::adaptive::integrate_with_breakpoints;
use super::config::{QuadratureConfig, Tolerance};
use super::improper::{improper, improper_lower};
use super::value::{IntegralResult, QuadValue};
use crate::error::{Error, Result};

/// Cauchy principal value of `∫_a^b g` where `g` has a simple pole at `pole`.
///
/// A window `[pole − δ, pole + δ]` is folded onto `(0, δ]` as `g(pole+s) + g(pole−s)`,
/// which cancels the odd pole part exactly; the rest is integrated normally. Infinite
/// `a` or `b` are allowed. The cancellation roundoff near `s = 0` is added to the
/// error estimate.
pub fn principal_value<V, F>(g: F, pole: f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    principal_value_with(&g, pole, a, b, &[], cfg.inner(), cfg)
}

pub fn principal_value_with<V, F>(
    g: &F,
    pole: f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(pole.is_finite() && a < pole && pole < b) {
        return Err(Error::Precondition(format!(
            "pole {pole} must lie strictly inside ({a}, {b})"
        )));
    }
    let delta = (pole - a).min(b - pole).min(1f64.max(0.5 * pole.abs()));
    let largest = Cell::new(0.0f64);
    let nearest = Cell::new(delta);
    let folded = |s: f64| {
        let up = g(pole + s);
        let down = g(pole - s);
        largest.set(largest.get().max(s * (up.magnitude() + down.magnitude())));
        nearest.set(nearest.get().min(s));
        up + down
    };
    let folded_breaks: Vec<f64> = breakpoints.iter().map(|k| (k - pole).abs()).collect();
    let piece_tol = Tolerance { abs: tol.abs / 3.0, rel: tol.rel };
    let mut out = integrate_with_breakpoints(folded, 0.0, delta, &folded_breaks, piece_tol, cfg)?;
    let roundoff = 4.0 * f64::EPSILON * largest.get() * (1.0 + (delta / nearest.get()).ln());
    out.error_estimate += roundoff;

    let left_end = pole - delta;
    let left = if a.is_finite() {
        integrate_with_breakpoints(g, a, left_end, breakpoints, piece_tol, cfg)?
    } else {
        improper_lower(g, left_end, breakpoints, piece_tol, cfg)?
    };
    let right_start = pole + delta;
    let right = if b.is_finite() {
        integrate_with_breakpoints(g, right_start, b, breakpoints, piece_tol, cfg)?
    } else {
        improper(g, right_start, breakpoints, piece_tol, cfg)?
    };
    Ok(out.combine(left).combine(right))
}
