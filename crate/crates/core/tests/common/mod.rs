//! Brute-force oracles: midpoint sums and direct loops that share no code with the
//! library beyond pointwise evaluation.
#![allow(dead_code)]

use num_complex::Complex64;

use fourier_multipliers::sequence::SequenceDescriptor;

/// Midpoint rule with `n` cells.
pub fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

pub fn midpoint_c(f: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<Complex64>() * h
}

/// `∫_0^U |2∫_0^{u/2} (g(u−t) − g(u+t))/t dt| du` on a midpoint lattice of spacing
/// `du` and `dt`.
pub fn s_oracle(g: impl Fn(f64) -> f64, u_max: f64, du: f64, dt: f64) -> f64 {
    let nu = (u_max / du).round() as usize;
    (0..nu)
        .map(|i| {
            let u = (i as f64 + 0.5) * du;
            let nt = ((0.5 * u / dt).ceil() as usize).max(1);
            let inner = midpoint(|t| (g(u - t) - g(u + t)) / t, 0.0, 0.5 * u, nt);
            (2.0 * inner).abs()
        })
        .sum::<f64>()
        * du
}

/// `∫_0^L |λ(t) − λ(−t)|/t dt` by the midpoint rule.
pub fn a_oracle(lambda: impl Fn(f64) -> f64, l: f64, n: usize) -> f64 {
    midpoint(|t| (lambda(t) - lambda(-t)).abs() / t, 0.0, l, n)
}

/// `∫_0^U (1/u ∫_{u≤|t|≤2u} |g|^q)^{1/q} du` by nested midpoint sums.
pub fn aq_oracle(g: impl Fn(f64) -> f64, q: f64, u_max: f64, n_outer: usize, n_inner: usize) -> f64 {
    midpoint(
        |u| {
            let inner = midpoint(|t| g(t).abs().powf(q) + g(-t).abs().powf(q), u, 2.0 * u, n_inner);
            (inner / u).powf(1.0 / q)
        },
        0.0,
        u_max,
        n_outer,
    )
}

/// `∫_0^U sup_{u≤|t|≤2u} |g| du` with the supremum taken over `n_inner` nodes.
pub fn a_inf_oracle(g: impl Fn(f64) -> f64, u_max: f64, n_outer: usize, n_inner: usize) -> f64 {
    midpoint(
        |u| {
            (0..=n_inner)
                .map(|j| u + u * j as f64 / n_inner as f64)
                .map(|t| g(t).abs().max(g(-t).abs()))
                .fold(0.0, f64::max)
        },
        0.0,
        u_max,
        n_outer,
    )
}

/// Second derivative by a central difference of step `h`.
pub fn second_difference(f: &impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
}

/// `(1/π) ∫_{δ≤s≤L} (f(x−s) − f(x+s))/s ds`, the principal value with a `δ`-hole.
pub fn pv_oracle(f: impl Fn(f64) -> f64, x: f64, delta: f64, l: f64, n: usize) -> f64 {
    midpoint(|s| (f(x - s) - f(x + s)) / s, delta, l, n) / std::f64::consts::PI
}

/// `∫_{−L}^{L} f(t) e^{−ixt} dt` by the midpoint rule.
pub fn transform_oracle(f: impl Fn(f64) -> f64, x: f64, l: f64, n: usize) -> Complex64 {
    midpoint_c(|t| f(t) * Complex64::from_polar(1.0, -x * t), -l, l, n)
}

/// `∫_a^b (α + βt) e^{−ixt} dt` from the antiderivative, for `x ≠ 0`.
pub fn linear_segment_transform(a: f64, b: f64, fa: f64, fb: f64, x: f64) -> Complex64 {
    let beta = (fb - fa) / (b - a);
    let alpha = fa - beta * a;
    let i = Complex64::new(0.0, 1.0);
    let prim = |t: f64| {
        let e = Complex64::from_polar(1.0, -x * t);
        e * (alpha / (-i * x) + beta * (t / (-i * x) + 1.0 / (x * x)))
    };
    prim(b) - prim(a)
}

/// The transform of the piecewise-linear interpolant of `(t_j, f_j)`.
pub fn piecewise_linear_transform(ts: &[f64], fs: &[f64], x: f64) -> Complex64 {
    ts.windows(2)
        .zip(fs.windows(2))
        .map(|(t, f)| linear_segment_transform(t[0], t[1], f[0], f[1], x))
        .sum()
}

/// `λ(k) − λ(k+1)` for `k ≥ 0`, `λ(k) − λ(k−1)` for `k < 0`, straight from the values.
pub fn delta_oracle(lambda: &SequenceDescriptor, k: i64) -> Complex64 {
    let next = if k >= 0 { k + 1 } else { k - 1 };
    lambda.value(k) - lambda.value(next)
}

pub fn delta_l1_oracle(lambda: &SequenceDescriptor, k_max: i64) -> f64 {
    (-k_max..=k_max).map(|k| delta_oracle(lambda, k).norm()).sum()
}

/// `Σ_{m=2}^{M} |Σ_{k=1}^{⌊m/2⌋} (Δλ(m−k) − Δλ(m+k))/k|`
pub fn s_discrete_oracle(lambda: &SequenceDescriptor, m_max: i64) -> f64 {
    (2..=m_max)
        .map(|m| {
            (1..=m / 2)
                .map(|k| (delta_oracle(lambda, m - k) - delta_oracle(lambda, m + k)) / k as f64)
                .sum::<Complex64>()
                .norm()
        })
        .sum()
}

pub fn a_discrete_oracle(lambda: &SequenceDescriptor, k_max: i64) -> f64 {
    (1..=k_max).map(|k| (lambda.value(k) - lambda.value(-k)).norm() / k as f64).sum()
}

/// `Σ_{n<N} 2ⁿ (2⁻ⁿ Σ_{|k|∈[2ⁿ,2ⁿ⁺¹)} |Δλ(k)|^q)^{1/q}`; `q = ∞` takes the block maximum.
pub fn aq_discrete_oracle(lambda: &SequenceDescriptor, q: f64, blocks: u32) -> f64 {
    (0..blocks)
        .map(|n| {
            let (lo, hi) = (1i64 << n, 1i64 << (n + 1));
            let mags: Vec<f64> = (lo..hi)
                .flat_map(|k| [delta_oracle(lambda, k).norm(), delta_oracle(lambda, -k).norm()])
                .collect();
            if q.is_infinite() {
                mags.into_iter().fold(0.0, f64::max)
            } else {
                let len = (hi - lo) as f64;
                len * (mags.iter().map(|v| v.powf(q)).sum::<f64>() / len).powf(1.0 / q)
            }
        })
        .sum()
}

/// `Σ_{|k|≤K} λ(k) e^{iky}`
pub fn series_oracle(lambda: &SequenceDescriptor, y: f64, k_max: i64) -> Complex64 {
    (-k_max..=k_max).map(|k| lambda.value(k) * Complex64::from_polar(1.0, k as f64 * y)).sum()
}

/// `(1/2π) Σ_j ∫_{x_j}^{x_{j+1}} f e^{−ikx}` for the piecewise-linear interpolant of
/// samples on a periodic grid (the wrap-around segment included).
pub fn periodic_segment_coefficient(xs: &[f64], fs: &[f64], k: i64) -> Complex64 {
    let n = xs.len();
    let period = 2.0 * std::f64::consts::PI;
    let total: Complex64 = (0..n)
        .map(|j| {
            let (a, fa) = (xs[j], fs[j]);
            let (b, fb) = if j + 1 < n { (xs[j + 1], fs[j + 1]) } else { (xs[0] + period, fs[0]) };
            if k == 0 {
                Complex64::new(0.5 * (fa + fb) * (b - a), 0.0)
            } else {
                linear_segment_transform(a, b, fa, fb, k as f64)
            }
        })
        .sum();
    total / period
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: got {actual}, expected {expected} (tolerance {tol}, off by {:e})",
        (actual - expected).abs()
    );
}
