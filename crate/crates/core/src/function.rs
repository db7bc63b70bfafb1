//! Functions on the real line: closed-form families with analytic derivatives,
//! piecewise-linear samples, and a few combinators.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named closed-form families. Every family is real-valued.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `exp(-x²/σ²)`
    Gaussian { sigma: f64 },
    /// `x·exp(-x²/σ²)`
    OddGaussian { sigma: f64 },
    /// `1/(1 + (x/a)²)`
    Poisson { scale: f64 },
    /// `exp(-c|x|)`
    ExpAbs { rate: f64 },
    /// `max(0, 1 - |x|/w)`
    Hat { width: f64 },
    /// `tanh(x/w)`, a smoothed odd step.
    OddStep { width: f64 },
    /// `(sin(x/2)/(x/2))²·cos(c·x)`; its transform is supported in `[c−1, c+1] ∪ [−c−1, −c+1]`.
    Fejer { carrier: f64 },
    Constant { value: f64 },
    Linear { slope: f64, intercept: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian { .. } => "gaussian",
            Family::OddGaussian { .. } => "odd_gaussian",
            Family::Poisson { .. } => "poisson",
            Family::ExpAbs { .. } => "exp_abs",
            Family::Hat { .. } => "hat",
            Family::OddStep { .. } => "odd_step",
            Family::Fejer { .. } => "fejer",
            Family::Constant { .. } => "constant",
            Family::Linear { .. } => "linear",
        }
    }

    /// Builds a family from its name and a parameter map; missing parameters take
    /// their conventional defaults (unit scale).
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
        let allowed: &[&str] = match name {
            "gaussian" | "odd_gaussian" => &["sigma"],
            "poisson" => &["scale"],
            "exp_abs" => &["rate"],
            "hat" | "odd_step" => &["width"],
            "fejer" => &["carrier"],
            "constant" => &["value"],
            "linear" => &["slope", "intercept"],
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!("`{bad}` is not a parameter of `{name}`")));
        }
        let family = match name {
            "gaussian" => Family::Gaussian { sigma: get("sigma", 1.0) },
            "odd_gaussian" => Family::OddGaussian { sigma: get("sigma", 1.0) },
            "poisson" => Family::Poisson { scale: get("scale", 1.0) },
            "exp_abs" => Family::ExpAbs { rate: get("rate", 1.0) },
            "hat" => Family::Hat { width: get("width", 1.0) },
            "odd_step" => Family::OddStep { width: get("width", 1.0) },
            "fejer" => Family::Fejer { carrier: get("carrier", 0.0) },
            "constant" => Family::Constant { value: get("value", 1.0) },
            _ => Family::Linear { slope: get("slope", 1.0), intercept: get("intercept", 0.0) },
        };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<()> {
        let (label, p) = match *self {
            Family::Gaussian { sigma } | Family::OddGaussian { sigma } => ("sigma", sigma),
            Family::Poisson { scale } => ("scale", scale),
            Family::ExpAbs { rate } => ("rate", rate),
            Family::Hat { width } | Family::OddStep { width } => ("width", width),
            Family::Constant { value } => return finite("value", value),
            Family::Fejer { carrier } => return finite("carrier", carrier),
            Family::Linear { slope, intercept } => {
                finite("slope", slope)?;
                return finite("intercept", intercept);
            }
        };
        if p.is_finite() && p > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{label} must be positive, got {p}")))
        }
    }

    /// Highest derivative order with an analytic formula. Derivatives of kinked
    /// families hold almost everywhere; the jumps sit at [`Family::kinks`].
    pub fn max_order(&self) -> u8 {
        match self {
            Family::Fejer { .. } => 0,
            _ => 2,
        }
    }

    /// Points where the family (or one of its available derivatives) is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match *self {
            Family::ExpAbs { .. } => vec![0.0],
            Family::Hat { width } => vec![-width, 0.0, width],
            _ => Vec::new(),
        }
    }

    /// The `order`-th derivative at `x`. One-sided jumps take the value 0 at the jump
    /// for odd derivatives (the average of the two sides).
    pub fn eval(&self, order: u8, x: f64) -> f64 {
        let sign = if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 };
        match (*self, order) {
            (Family::Gaussian { sigma }, k) => {
                let s2 = sigma * sigma;
                let e = (-x * x / s2).exp();
                match k {
                    0 => e,
                    1 => -2.0 * x / s2 * e,
                    _ => (4.0 * x * x / (s2 * s2) - 2.0 / s2) * e,
                }
            }
            (Family::OddGaussian { sigma }, k) => {
                let s2 = sigma * sigma;
                let e = (-x * x / s2).exp();
                match k {
                    0 => x * e,
                    1 => (1.0 - 2.0 * x * x / s2) * e,
                    _ => (4.0 * x * x * x / (s2 * s2) - 6.0 * x / s2) * e,
                }
            }
            (Family::Poisson { scale }, k) => {
                let u = x / scale;
                let d = 1.0 + u * u;
                match k {
                    0 => 1.0 / d,
                    1 => -2.0 * u / (scale * d * d),
                    _ => (6.0 * u * u - 2.0) / (scale * scale * d * d * d),
                }
            }
            (Family::ExpAbs { rate }, k) => {
                let e = (-rate * x.abs()).exp();
                match k {
                    0 => e,
                    1 => -rate * sign * e,
                    _ => rate * rate * e,
                }
            }
            (Family::Hat { width }, k) => {
                let inside = x.abs() < width;
                match k {
                    0 => (1.0 - x.abs() / width).max(0.0),
                    1 if inside => -sign / width,
                    _ => 0.0,
                }
            }
            (Family::Fejer { carrier }, _) => {
                let h = 0.5 * x;
                let sinc = if h.abs() < 1e-4 { 1.0 - h * h / 6.0 } else { h.sin() / h };
                sinc * sinc * (carrier * x).cos()
            }
            (Family::OddStep { width }, k) => {
                let th = (x / width).tanh();
                let sech2 = 1.0 - th * th;
                match k {
                    0 => th,
                    1 => sech2 / width,
                    _ => -2.0 * th * sech2 / (width * width),
                }
            }
            (Family::Constant { value }, k) => {
                if k == 0 {
                    value
                } else {
                    0.0
                }
            }
            (Family::Linear { slope, intercept }, k) => match k {
                0 => slope * x + intercept,
                1 => slope,
                _ => 0.0,
            },
        }
    }
}

fn finite(label: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{label} must be finite")))
    }
}

/// Behaviour of a sampled function outside its grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampledTail {
    #[default]
    Zero,
    /// Hold the boundary values.
    Constant,
    /// Continue the boundary segments linearly.
    Linear,
}

/// Piecewise-linear interpolant of complex samples on a strictly ascending grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<Complex64>,
    tail: SampledTail,
}

#[derive(Deserialize)]
struct SampleRow {
    x: f64,
    re: f64,
    im: f64,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>, tail: SampledTail) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidGrid("a sampled function needs at least two nodes".into()));
        }
        if grid.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.iter().any(|x| !x.is_finite()) || values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidGrid("grid and values must be finite".into()));
        }
        if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!("grid not strictly ascending at {} -> {}", w[0], w[1])));
        }
        Ok(SampledFunction { grid, values, tail })
    }

    /// Samples `f` at the given nodes.
    pub fn from_fn(grid: Vec<f64>, tail: SampledTail, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values, tail)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tail(&self) -> SampledTail {
        self.tail
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.grid.len();
        let (first, last) = (self.grid[0], self.grid[n - 1]);
        if x < first || x > last {
            let (i, j, edge) = if x < first { (0, 1, 0) } else { (n - 2, n - 1, n - 1) };
            return match self.tail {
                SampledTail::Zero => Complex64::new(0.0, 0.0),
                SampledTail::Constant => self.values[edge],
                SampledTail::Linear => self.interpolate(i, j, x),
            };
        }
        let idx = self.grid.partition_point(|g| *g <= x);
        if idx >= n {
            return self.values[n - 1];
        }
        self.interpolate(idx - 1, idx, x)
    }

    fn interpolate(&self, i: usize, j: usize, x: f64) -> Complex64 {
        let (x0, x1) = (self.grid[i], self.grid[j]);
        let w = (x - x0) / (x1 - x0);
        self.values[i] * (1.0 - w) + self.values[j] * w
    }

    /// Central differences at interior nodes, one-sided at the ends.
    pub fn derivative(&self) -> SampledFunction {
        let n = self.grid.len();
        let g = &self.grid;
        let v = &self.values;
        let slope = |i: usize, j: usize| (v[j] - v[i]) / (g[j] - g[i]);
        let values = (0..n)
            .map(|i| match i {
                0 => slope(0, 1),
                _ if i == n - 1 => slope(n - 2, n - 1),
                _ => slope(i - 1, i + 1),
            })
            .collect();
        let tail = match self.tail {
            SampledTail::Zero | SampledTail::Constant => SampledTail::Zero,
            SampledTail::Linear => SampledTail::Constant,
        };
        SampledFunction { grid: self.grid.clone(), values, tail }
    }

    /// Reads columns `x, re, im`.
    pub fn read_csv(reader: impl Read, tail: SampledTail) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for row in rdr.deserialize() {
            let row: SampleRow = row?;
            grid.push(row.x);
            values.push(Complex64::new(row.re, row.im));
        }
        Self::new(grid, values, tail)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "re", "im"])?;
        for (x, v) in self.grid.iter().zip(&self.values) {
            w.write_record([x.to_string(), v.re.to_string(), v.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Which half-line an odd or even continuation starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
}

/// A function on ℝ.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionDescriptor {
    /// The `order`-th derivative of a closed-form family.
    ClosedForm { family: Family, order: u8 },
    Sampled(SampledFunction),
    Scaled { factor: Complex64, inner: Box<FunctionDescriptor> },
    Sum(Vec<FunctionDescriptor>),
    /// `x ↦ inner(x − offset)`
    Shifted { offset: f64, inner: Box<FunctionDescriptor> },
    /// Continuation of the part of `inner` on `side` to the whole line with the given
    /// parity. The odd continuation vanishes at the origin.
    Reflected { side: Side, parity: Parity, inner: Box<FunctionDescriptor> },
}

impl From<Family> for FunctionDescriptor {
    fn from(family: Family) -> Self {
        FunctionDescriptor::ClosedForm { family, order: 0 }
    }
}

impl From<SampledFunction> for FunctionDescriptor {
    fn from(s: SampledFunction) -> Self {
        FunctionDescriptor::Sampled(s)
    }
}

impl FunctionDescriptor {
    pub fn gaussian(sigma: f64) -> Self {
        Family::Gaussian { sigma }.into()
    }

    pub fn poisson() -> Self {
        Family::Poisson { scale: 1.0 }.into()
    }

    pub fn exp_abs() -> Self {
        Family::ExpAbs { rate: 1.0 }.into()
    }

    pub fn constant(value: f64) -> Self {
        Family::Constant { value }.into()
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn scaled(self, factor: impl Into<Complex64>) -> Self {
        FunctionDescriptor::Scaled { factor: factor.into(), inner: Box::new(self) }
    }

    pub fn shifted(self, offset: f64) -> Self {
        FunctionDescriptor::Shifted { offset, inner: Box::new(self) }
    }

    pub fn plus(self, other: FunctionDescriptor) -> Self {
        match self {
            FunctionDescriptor::Sum(mut parts) => {
                parts.push(other);
                FunctionDescriptor::Sum(parts)
            }
            first => FunctionDescriptor::Sum(vec![first, other]),
        }
    }

    /// Short human-readable label used in diagnostics.
    pub fn name(&self) -> String {
        match self {
            FunctionDescriptor::ClosedForm { family, order: 0 } => family.name().to_string(),
            FunctionDescriptor::ClosedForm { family, order } => format!("{}^({order})", family.name()),
            FunctionDescriptor::Sampled(_) => "sampled".to_string(),
            FunctionDescriptor::Scaled { inner, .. } => format!("scaled({})", inner.name()),
            FunctionDescriptor::Sum(parts) => {
                parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("+")
            }
            FunctionDescriptor::Shifted { inner, .. } => format!("shifted({})", inner.name()),
            FunctionDescriptor::Reflected { parity, side, inner } => {
                format!("{parity:?}_{side:?}({})", inner.name()).to_lowercase()
            }
        }
    }

    /// Value at `x` without the finiteness check of [`evaluate`].
    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            FunctionDescriptor::ClosedForm { family, order } => Complex64::new(family.eval(*order, x), 0.0),
            FunctionDescriptor::Sampled(s) => s.eval(x),
            FunctionDescriptor::Scaled { factor, inner } => *factor * inner.value(x),
            FunctionDescriptor::Sum(parts) => parts.iter().map(|p| p.value(x)).sum(),
            FunctionDescriptor::Shifted { offset, inner } => inner.value(x - offset),
            FunctionDescriptor::Reflected { side, parity, inner } => {
                let on_side = match side {
                    Side::Positive => x > 0.0,
                    Side::Negative => x < 0.0,
                };
                if on_side {
                    inner.value(x)
                } else if x == 0.0 {
                    match parity {
                        Parity::Odd => Complex64::new(0.0, 0.0),
                        Parity::Even => inner.value(0.0),
                    }
                } else {
                    match parity {
                        Parity::Odd => -inner.value(-x),
                        Parity::Even => inner.value(-x),
                    }
                }
            }
        }
    }

    pub fn real_value(&self, x: f64) -> f64 {
        self.value(x).re
    }

    /// Derivative orders still available (analytic for closed forms; sampled
    /// functions fall back to finite differences).
    pub fn derivative_order_available(&self) -> u8 {
        match self {
            FunctionDescriptor::ClosedForm { family, order } => family.max_order().saturating_sub(*order),
            FunctionDescriptor::Sampled(_) => 2,
            FunctionDescriptor::Scaled { inner, .. }
            | FunctionDescriptor::Shifted { inner, .. }
            | FunctionDescriptor::Reflected { inner, .. } => inner.derivative_order_available(),
            FunctionDescriptor::Sum(parts) => {
                parts.iter().map(|p| p.derivative_order_available()).min().unwrap_or(2)
            }
        }
    }

    /// The derivative as a new descriptor.
    pub fn derivative(&self) -> Result<FunctionDescriptor> {
        Ok(match self {
            FunctionDescriptor::ClosedForm { family, order } => {
                if *order >= family.max_order() {
                    return Err(Error::Precondition(format!(
                        "`{}` has no analytic derivative of order {}",
                        family.name(),
                        order + 1
                    )));
                }
                FunctionDescriptor::ClosedForm { family: *family, order: order + 1 }
            }
            FunctionDescriptor::Sampled(s) => FunctionDescriptor::Sampled(s.derivative()),
            FunctionDescriptor::Scaled { factor, inner } => {
                FunctionDescriptor::Scaled { factor: *factor, inner: Box::new(inner.derivative()?) }
            }
            FunctionDescriptor::Sum(parts) => {
                FunctionDescriptor::Sum(parts.iter().map(|p| p.derivative()).collect::<Result<_>>()?)
            }
            FunctionDescriptor::Shifted { offset, inner } => {
                FunctionDescriptor::Shifted { offset: *offset, inner: Box::new(inner.derivative()?) }
            }
            FunctionDescriptor::Reflected { side, parity, inner } => FunctionDescriptor::Reflected {
                side: *side,
                parity: match parity {
                    Parity::Odd => Parity::Even,
                    Parity::Even => Parity::Odd,
                },
                inner: Box::new(inner.derivative()?),
            },
        })
    }

    /// Points where the function or its derivatives may fail to be smooth; used as
    /// quadrature breakpoints.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = match self {
            FunctionDescriptor::ClosedForm { family, .. } => family.kinks(),
            FunctionDescriptor::Sampled(s) => {
                let g = s.grid();
                if g.len() <= 256 {
                    g.to_vec()
                } else {
                    vec![g[0], g[g.len() - 1]]
                }
            }
            FunctionDescriptor::Scaled { inner, .. } => inner.kinks(),
            FunctionDescriptor::Sum(parts) => parts.iter().flat_map(|p| p.kinks()).collect(),
            FunctionDescriptor::Shifted { offset, inner } => inner.kinks().into_iter().map(|k| k + offset).collect(),
            FunctionDescriptor::Reflected { side, inner, .. } => {
                let kept: Vec<f64> = inner
                    .kinks()
                    .into_iter()
                    .filter(|k| match side {
                        Side::Positive => *k > 0.0,
                        Side::Negative => *k < 0.0,
                    })
                    .collect();
                let mut all: Vec<f64> = kept.iter().flat_map(|k| [*k, -*k]).collect();
                all.push(0.0);
                all
            }
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Whether the descriptor is real-valued by construction.
    pub fn is_real(&self) -> bool {
        match self {
            FunctionDescriptor::ClosedForm { .. } => true,
            FunctionDescriptor::Sampled(s) => s.values().iter().all(|v| v.im == 0.0),
            FunctionDescriptor::Scaled { factor, inner } => factor.im == 0.0 && inner.is_real(),
            FunctionDescriptor::Sum(parts) => parts.iter().all(|p| p.is_real()),
            FunctionDescriptor::Shifted { inner, .. } | FunctionDescriptor::Reflected { inner, .. } => inner.is_real(),
        }
    }

    /// Radius beyond which the descriptor is identically zero, if it has one.
    pub fn compact_support(&self) -> Option<f64> {
        match self {
            FunctionDescriptor::ClosedForm { family, .. } => match family {
                Family::Hat { width } => Some(*width),
                Family::Constant { value } if *value == 0.0 => Some(0.0),
                _ => None,
            },
            FunctionDescriptor::Sampled(s) => match s.tail() {
                SampledTail::Zero => Some(s.grid()[0].abs().max(s.grid()[s.grid().len() - 1].abs())),
                _ => None,
            },
            FunctionDescriptor::Scaled { factor, inner } => {
                if *factor == Complex64::new(0.0, 0.0) {
                    Some(0.0)
                } else {
                    inner.compact_support()
                }
            }
            FunctionDescriptor::Sum(parts) => parts
                .iter()
                .map(|p| p.compact_support())
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r))),
            FunctionDescriptor::Shifted { offset, inner } => inner.compact_support().map(|r| r + offset.abs()),
            FunctionDescriptor::Reflected { inner, .. } => inner.compact_support(),
        }
    }
}

/// Checked evaluation: a non-finite value from a closed form is a domain error.
pub fn evaluate(f: &FunctionDescriptor, x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::Precondition(format!("evaluation point must be finite, got {x}")));
    }
    let v = f.value(x);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain { family: f.name(), x })
    }
}

/// The odd continuation `f₊` (from `[0, ∞)`) or `f₋` (from `(−∞, 0]`).
pub fn odd_continuation(f: &FunctionDescriptor, side: Side) -> FunctionDescriptor {
    FunctionDescriptor::Reflected { side, parity: Parity::Odd, inner: Box::new(f.clone()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(evaluate(&FunctionDescriptor::gaussian(1.0), 0.0).unwrap(), c(1.0));
        assert_eq!(evaluate(&FunctionDescriptor::poisson(), 1.0).unwrap(), c(0.5));
    }

    #[test]
    fn sampled_interpolation_and_tail() {
        let s = SampledFunction::new(vec![0.0, 2.0], vec![c(0.0), c(4.0)], SampledTail::Zero).unwrap();
        let f = FunctionDescriptor::from(s.clone());
        assert_eq!(evaluate(&f, 1.0).unwrap(), c(2.0));
        assert_eq!(f.value(3.0), c(0.0));
        let lin = SampledFunction::new(s.grid().to_vec(), s.values().to_vec(), SampledTail::Linear).unwrap();
        assert_eq!(lin.eval(3.0), c(6.0));
        let held = SampledFunction::new(s.grid().to_vec(), s.values().to_vec(), SampledTail::Constant).unwrap();
        assert_eq!(held.eval(-1.0), c(0.0));
        assert_eq!(held.eval(9.0), c(4.0));
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(SampledFunction::new(vec![0.0], vec![c(1.0)], SampledTail::Zero).is_err());
        assert!(SampledFunction::new(vec![0.0, 0.0], vec![c(1.0), c(1.0)], SampledTail::Zero).is_err());
        assert!(SampledFunction::new(vec![1.0, 0.0], vec![c(1.0), c(1.0)], SampledTail::Zero).is_err());
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![c(1.0)], SampledTail::Zero).is_err());
    }

    #[test]
    fn domain_error_names_family() {
        let f = FunctionDescriptor::constant(f64::MAX).scaled(10.0);
        match evaluate(&f, 0.5) {
            Err(Error::Domain { family, x }) => {
                assert!(family.contains("constant"));
                assert_eq!(x, 0.5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let families = [
            Family::Gaussian { sigma: 0.7 },
            Family::OddGaussian { sigma: 1.3 },
            Family::Poisson { scale: 2.0 },
            Family::OddStep { width: 0.5 },
            Family::ExpAbs { rate: 1.5 },
        ];
        let h = 1e-5;
        for fam in families {
            for &x in &[-1.7, -0.3, 0.4, 2.2] {
                for order in 0..2u8 {
                    let numeric = (fam.eval(order, x + h) - fam.eval(order, x - h)) / (2.0 * h);
                    let exact = fam.eval(order + 1, x);
                    assert!((numeric - exact).abs() < 1e-6, "{fam:?} order {order} at {x}");
                }
            }
        }
    }

    #[test]
    fn odd_continuation_by_definition() {
        let f = FunctionDescriptor::gaussian(1.0);
        let plus = odd_continuation(&f, Side::Positive);
        assert!((plus.real_value(-2.0) + (-4.0f64).exp()).abs() < 1e-15);
        assert_eq!(plus.real_value(0.0), 0.0);
        assert_eq!(plus.real_value(1.0), f.real_value(1.0));
        assert_eq!(plus.real_value(-1.0), -f.real_value(1.0));
        let minus = odd_continuation(&f, Side::Negative);
        assert_eq!(minus.real_value(1.0), -f.real_value(-1.0));

        // an odd function is its own odd continuation from either side
        let odd = FunctionDescriptor::from(Family::OddGaussian { sigma: 1.0 });
        let (p, m) = (odd_continuation(&odd, Side::Positive), odd_continuation(&odd, Side::Negative));
        for &x in &[-2.0, -0.5, 0.3, 1.9] {
            assert_eq!(p.real_value(x), odd.real_value(x));
            assert_eq!(m.real_value(x), odd.real_value(x));
        }
    }

    #[test]
    fn family_parsing() {
        let mut params = BTreeMap::new();
        params.insert("sigma".to_string(), 2.0);
        assert_eq!(Family::from_name("gaussian", &params).unwrap(), Family::Gaussian { sigma: 2.0 });
        assert!(Family::from_name("poisson", &params).is_err());
        assert!(Family::from_name("nope", &BTreeMap::new()).is_err());
        params.insert("sigma".to_string(), -1.0);
        assert!(Family::from_name("gaussian", &params).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let s = SampledFunction::new(vec![-1.0, 0.0, 1.5], vec![c(1.0), Complex64::new(0.5, -2.0), c(0.0)], SampledTail::Zero)
            .unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = SampledFunction::read_csv(buf.as_slice(), SampledTail::Zero).unwrap();
        assert_eq!(back, s);
    }
}
