use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::config::{QuadratureConfig, Tolerance};
use super::gauss_kronrod::qk15;
use super::value::{IntegralResult, QuadValue};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Segment<V> {
    pub a: f64,
    pub b: f64,
    pub value: V,
    pub error: f64,
}

pub(crate) struct Adaptive<V> {
    pub segments: Vec<Segment<V>>,
    pub converged: bool,
    pub subdivisions: usize,
    pub evaluations: usize,
}

impl<V: QuadValue> Adaptive<V> {
    pub fn total(&self) -> V {
        self.segments.iter().fold(V::default(), |acc, s| acc + s.value)
    }

    pub fn error(&self) -> f64 {
        self.segments.iter().map(|s| s.error).sum()
    }

    /// Sum of the segments lying inside `[lo, hi]`; exact when both are breakpoints.
    pub fn block(&self, lo: f64, hi: f64) -> V {
        self.segments
            .iter()
            .filter(|s| s.a >= lo && s.b <= hi)
            .fold(V::default(), |acc, s| acc + s.value)
    }

    pub fn into_result(self) -> IntegralResult<V> {
        IntegralResult {
            value: self.total(),
            error_estimate: self.error(),
            converged: self.converged,
            tail_contribution_estimate: 0.0,
            diverged_suspected: false,
            subdivisions: self.subdivisions,
            evaluations: self.evaluations,
            trace: Vec::new(),
        }
    }
}

struct Pending {
    error: f64,
    index: usize,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.index.cmp(&self.index))
    }
}

/// Sorts, deduplicates and clips breakpoints to `[a, b]`.
pub(crate) fn partition(a: f64, b: f64, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut points: Vec<f64> = extra
        .into_iter()
        .filter(|p| p.is_finite() && *p > a && *p < b)
        .collect();
    points.push(a);
    points.push(b);
    points.sort_by(f64::total_cmp);
    let scale = a.abs().max(b.abs()).max(1.0);
    points.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * scale);
    points
}

fn evaluate<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> Result<Segment<V>> {
    let out = qk15(f, a, b);
    if !out.finite {
        return Err(Error::NonFiniteIntegrand { at: 0.5 * (a + b) });
    }
    Ok(Segment { a, b, value: out.value, error: out.error })
}

/// Globally adaptive bisection over the intervals delimited by `points` (ascending).
pub(crate) fn adaptive_segments<V, F>(
    f: &F,
    points: &[f64],
    tol: Tolerance,
    max_subdivisions: usize,
) -> Result<Adaptive<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let mut segments = Vec::with_capacity(points.len() + 2 * max_subdivisions.min(4096));
    for w in points.windows(2) {
        if w[1] > w[0] {
            segments.push(evaluate(f, w[0], w[1])?);
        }
    }
    let mut evaluations = 15 * segments.len();
    let mut heap: BinaryHeap<Pending> = segments
        .iter()
        .enumerate()
        .map(|(index, s)| Pending { error: s.error, index })
        .collect();
    let mut total = segments.iter().fold(V::default(), |acc, s| acc + s.value);
    let mut error: f64 = segments.iter().map(|s| s.error).sum();
    let mut subdivisions = 0;

    let converged = loop {
        if error <= tol.target(total.magnitude()) {
            break true;
        }
        if subdivisions >= max_subdivisions {
            break false;
        }
        let Some(Pending { index, .. }) = heap.pop() else {
            break false;
        };
        let seg = segments[index];
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) || (seg.b - seg.a) <= 64.0 * f64::EPSILON * mid.abs() {
            // Too narrow to split further in floating point; keep its error.
            continue;
        }
        let left = evaluate(f, seg.a, mid)?;
        let right = evaluate(f, mid, seg.b)?;
        evaluations += 30;
        subdivisions += 1;
        total = total - seg.value + left.value + right.value;
        error += left.error + right.error - seg.error;
        segments[index] = left;
        heap.push(Pending { error: left.error, index });
        segments.push(right);
        heap.push(Pending { error: right.error, index: segments.len() - 1 });
    };

    let mut out = Adaptive { segments, converged, subdivisions, evaluations };
    // The running sums drift; judge convergence on the recomputed totals.
    if !out.converged && out.error() <= tol.target(out.total().magnitude()) {
        out.converged = true;
    }
    Ok(out)
}

/// Adaptive integral over `[points[0], points[last]]` with the interior points as
/// mandatory breakpoints.
pub fn integrate_points<V, F>(
    f: &F,
    points: &[f64],
    tol: Tolerance,
    max_subdivisions: usize,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if points.len() < 2 {
        return Ok(IntegralResult::zero());
    }
    Ok(adaptive_segments(f, points, tol, max_subdivisions)?.into_result())
}

/// `∫_a^b g` by adaptive Gauss-Kronrod bisection. Endpoints are never evaluated, so
/// integrable endpoint singularities are handled by refinement alone.
pub fn integrate_adaptive<V, F>(g: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Precondition(format!("need finite a < b, got [{a}, {b}]")));
    }
    integrate_points(&g, &[a, b], cfg.inner(), cfg.max_subdivisions)
}

/// Like [`integrate_adaptive`] but with interior breakpoints (kinks, jumps) supplied.
pub fn integrate_with_breakpoints<V, F>(
    g: F,
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
    if a >= b {
        return Ok(IntegralResult::zero());
    }
    let points = partition(a, b, breakpoints.iter().copied());
    integrate_points(&g, &points, tol, cfg.max_subdivisions)
}

/// `∫_a^b g` where `g` has a removable singularity at `a`: the first `ε` is replaced by
/// `ε · limit` when the limit is known, else by a one-point midpoint rule.
pub fn integrate_excluding_start<V, F>(
    g: F,
    a: f64,
    b: f64,
    limit: Option<V>,
    breakpoints: &[f64],
    tol: Tolerance,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if a >= b {
        return Ok(IntegralResult::zero());
    }
    let eps = cfg.singularity_exclusion.min(0.25 * (b - a));
    let head = limit.unwrap_or_else(|| g(a + 0.5 * eps)) * eps;
    if !head.is_finite_value() {
        return Err(Error::NonFiniteIntegrand { at: a + 0.5 * eps });
    }
    let body = integrate_with_breakpoints(g, a + eps, b, breakpoints, tol, cfg)?;
    Ok(IntegralResult::exact(head).combine(body))
}
