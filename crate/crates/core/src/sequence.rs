//! Two-sided sequences `λ(k)`, `k ∈ ℤ`: explicit values on `[−N, N]` and a tail model
//! beyond.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Continuation of a sequence beyond its window. Each side continues from its own
/// boundary value, so the model agrees with the window at `|k| = N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum SequenceTail {
    #[default]
    Zero,
    /// `λ(±k) = λ(±N)·ratio^(k−N)`
    Geometric { ratio: f64 },
    /// `λ(±k) = λ(±N)·((k+1)/(N+1))^(−exponent)`, with an extra `(−1)^(k−N)` when
    /// `alternating`.
    Power { exponent: f64, alternating: bool },
}

impl SequenceTail {
    fn validate(&self) -> Result<()> {
        match *self {
            SequenceTail::Zero => Ok(()),
            SequenceTail::Geometric { ratio } if ratio.is_finite() && ratio.abs() <= 1.0 => Ok(()),
            SequenceTail::Power { exponent, .. } if exponent.is_finite() && exponent >= 0.0 => Ok(()),
            other => Err(Error::InvalidParameter(format!("unbounded tail model {other:?}"))),
        }
    }

    fn factor(&self, n: u64, k: u64) -> f64 {
        match *self {
            SequenceTail::Zero => 0.0,
            SequenceTail::Geometric { ratio } => ratio.powf((k - n) as f64),
            SequenceTail::Power { exponent, alternating } => {
                let base = ((k + 1) as f64 / (n + 1) as f64).powf(-exponent);
                if alternating && (k - n) % 2 == 1 {
                    -base
                } else {
                    base
                }
            }
        }
    }

    /// Whether the model tends to zero (or is identically zero).
    pub fn vanishes_at_infinity(&self) -> bool {
        match *self {
            SequenceTail::Zero => true,
            SequenceTail::Geometric { ratio } => ratio.abs() < 1.0,
            SequenceTail::Power { exponent, .. } => exponent > 0.0,
        }
    }

    /// Whether `Σ|λ(k)|` over the tail is finite.
    pub fn absolutely_summable(&self) -> bool {
        match *self {
            SequenceTail::Zero => true,
            SequenceTail::Geometric { ratio } => ratio.abs() < 1.0,
            SequenceTail::Power { exponent, .. } => exponent > 1.0,
        }
    }
}

/// A two-sided sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceDescriptor {
    radius: u64,
    values: Vec<Complex64>,
    tail: SequenceTail,
}

#[derive(Deserialize)]
struct SequenceRow {
    k: i64,
    re: f64,
    im: f64,
}

impl SequenceDescriptor {
    /// `values[j]` is `λ(j − N)`; there must be `2N + 1` of them.
    pub fn new(values: Vec<Complex64>, tail: SequenceTail) -> Result<Self> {
        if values.len() % 2 == 0 {
            return Err(Error::InvalidGrid(format!(
                "a window [−N, N] holds an odd number of values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidGrid("sequence values must be finite".into()));
        }
        tail.validate()?;
        Ok(SequenceDescriptor { radius: (values.len() / 2) as u64, values, tail })
    }

    /// Real values `λ(k) = f(k)` on `[−N, N]`.
    pub fn from_fn(radius: u64, tail: SequenceTail, f: impl Fn(i64) -> f64) -> Result<Self> {
        let n = radius as i64;
        Self::new((-n..=n).map(|k| Complex64::new(f(k), 0.0)).collect(), tail)
    }

    /// A named family: `delta`, `hat` (`radius`), `fejer` (`n`), `one_sided_geometric`
    /// (`ratio`, `radius`), `inverse_linear` (`radius`, `truncate`), `alternating`
    /// (`radius`) or `constant` (`value`).
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "delta" => &[],
            "hat" | "alternating" => &["radius"],
            "fejer" => &["n"],
            "one_sided_geometric" => &["ratio", "radius"],
            "inverse_linear" => &["radius", "truncate"],
            "constant" => &["value"],
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!("`{bad}` is not a parameter of `{name}`")));
        }
        let count = |key: &str, default: u64| -> Result<u64> {
            match params.get(key) {
                None => Ok(default),
                Some(&v) if v >= 0.0 && v.fract() == 0.0 && v <= 1e7 => Ok(v as u64),
                Some(&v) => Err(Error::InvalidParameter(format!("{key} must be a nonnegative integer, got {v}"))),
            }
        };
        Ok(match name {
            "delta" => Self::delta(),
            "hat" => Self::hat(count("radius", 8)?),
            "alternating" => Self::alternating(count("radius", 16)?),
            "fejer" => Self::fejer(count("n", 8)?)?,
            "one_sided_geometric" => {
                let ratio = params.get("ratio").copied().unwrap_or(0.5);
                if !(ratio.abs() < 1.0) {
                    return Err(Error::InvalidParameter(format!("ratio must lie in (−1, 1), got {ratio}")));
                }
                Self::one_sided_geometric(ratio, count("radius", 32)?)?
            }
            "inverse_linear" => Self::inverse_linear(count("radius", 64)?, count("truncate", 0)? != 0),
            _ => {
                let c = params.get("value").copied().unwrap_or(1.0);
                if !c.is_finite() {
                    return Err(Error::InvalidParameter(format!("value must be finite, got {c}")));
                }
                Self::constant(c)
            }
        })
    }

    pub fn zero() -> Self {
        SequenceDescriptor { radius: 0, values: vec![Complex64::new(0.0, 0.0)], tail: SequenceTail::Zero }
    }

    /// `λ(0) = 1`, zero elsewhere.
    pub fn delta() -> Self {
        SequenceDescriptor { radius: 0, values: vec![Complex64::new(1.0, 0.0)], tail: SequenceTail::Zero }
    }

    /// `λ ≡ c`.
    pub fn constant(c: f64) -> Self {
        SequenceDescriptor {
            radius: 0,
            values: vec![Complex64::new(c, 0.0)],
            tail: SequenceTail::Power { exponent: 0.0, alternating: false },
        }
    }

    /// `λ(k) = max(0, 1 − |k|/(N+1))`; nonzero exactly on `|k| ≤ N`.
    pub fn hat(radius: u64) -> Self {
        let w = (radius + 1) as f64;
        Self::from_fn(radius, SequenceTail::Zero, |k| 1.0 - k.unsigned_abs() as f64 / w).expect("finite")
    }

    /// The Fejér weights `max(0, 1 − |k|/n)` for `n ≥ 1`.
    pub fn fejer(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("Fejér order must be at least 1".into()));
        }
        Ok(Self::hat(n - 1))
    }

    /// `λ(k) = ratio^k` for `k ≥ 0`, zero for `k < 0`; the window is `[−N, N]` and the
    /// geometric tail continues it exactly.
    pub fn one_sided_geometric(ratio: f64, radius: u64) -> Result<Self> {
        Self::from_fn(radius, SequenceTail::Geometric { ratio }, |k| if k >= 0 { ratio.powi(k as i32) } else { 0.0 })
    }

    /// `λ(k) = 1/(|k|+1)`; the power tail continues it exactly, the zero tail truncates.
    pub fn inverse_linear(radius: u64, truncate: bool) -> Self {
        let tail = if truncate {
            SequenceTail::Zero
        } else {
            SequenceTail::Power { exponent: 1.0, alternating: false }
        };
        Self::from_fn(radius, tail, |k| 1.0 / (k.unsigned_abs() as f64 + 1.0)).expect("finite")
    }

    /// `λ(k) = 1/(k+1)` for `k ≥ 0`, zero for `k < 0`.
    pub fn one_sided_inverse_linear(radius: u64, truncate: bool) -> Self {
        let tail = if truncate {
            SequenceTail::Zero
        } else {
            SequenceTail::Power { exponent: 1.0, alternating: false }
        };
        Self::from_fn(radius, tail, |k| if k >= 0 { 1.0 / (k as f64 + 1.0) } else { 0.0 }).expect("finite")
    }

    /// `λ(k) = (−1)^k` everywhere.
    pub fn alternating(radius: u64) -> Self {
        Self::from_fn(radius, SequenceTail::Power { exponent: 0.0, alternating: true }, |k| {
            if k.rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .expect("finite")
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn tail(&self) -> SequenceTail {
        self.tail
    }

    /// Values on the window, `λ(−N), …, λ(N)`.
    pub fn window(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, k: i64) -> Complex64 {
        let n = self.radius;
        let a = k.unsigned_abs();
        if a <= n {
            return self.values[(k + n as i64) as usize];
        }
        let edge = if k > 0 { self.values[self.values.len() - 1] } else { self.values[0] };
        edge * self.tail.factor(n, a)
    }

    /// The sequence on a side is identically zero beyond the window.
    pub fn is_finitely_supported(&self) -> bool {
        self.tail == SequenceTail::Zero
            || (self.values[0] == Complex64::new(0.0, 0.0) && self.values[self.values.len() - 1] == Complex64::new(0.0, 0.0))
    }

    /// `lim_{|k|→∞} λ(k) = 0` under the tail model.
    pub fn vanishes_at_infinity(&self) -> bool {
        self.is_finitely_supported() || self.tail.vanishes_at_infinity()
    }

    pub fn absolutely_summable(&self) -> bool {
        self.is_finitely_supported() || self.tail.absolutely_summable()
    }

    /// Beyond this index every value is zero, if such an index exists.
    pub fn support_bound(&self) -> Option<u64> {
        self.is_finitely_supported().then_some(self.radius)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        SequenceDescriptor { radius: self.radius, values: self.values.iter().map(|v| v * c).collect(), tail: self.tail }
    }

    /// `k ↦ λ(−k)`.
    pub fn reflected(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        SequenceDescriptor { radius: self.radius, values, tail: self.tail }
    }

    /// Reads rows `k, re, im` covering every `k ∈ [−N, N]` exactly once.
    pub fn read_csv(reader: impl Read, tail: SequenceTail) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut rows: Vec<SequenceRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
        rows.sort_by_key(|r| r.k);
        let n = rows.len() as i64 / 2;
        let covers = rows.len() % 2 == 1 && rows.iter().enumerate().all(|(j, r)| r.k == j as i64 - n);
        if !covers {
            return Err(Error::InvalidGrid("sequence rows must cover k = −N..=N exactly once".into()));
        }
        Self::new(rows.into_iter().map(|r| Complex64::new(r.re, r.im)).collect(), tail)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["k", "re", "im"])?;
        let n = self.radius as i64;
        for (j, v) in self.values.iter().enumerate() {
            w.write_record([(j as i64 - n).to_string(), v.re.to_string(), v.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
