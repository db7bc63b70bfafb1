use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

/// Scalar types the quadrature routines can accumulate.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn magnitude(self) -> f64;

    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }

    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// A value carried together with the error of the inner integral that produced it.
/// Only the value enters magnitudes, so the tail analysis of an outer integral sees
/// the integrand and not the accumulated inner errors.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Tracked {
    pub value: f64,
    pub error: f64,
}

impl Add for Tracked {
    type Output = Tracked;
    fn add(self, o: Tracked) -> Tracked {
        Tracked { value: self.value + o.value, error: self.error + o.error }
    }
}

impl Sub for Tracked {
    type Output = Tracked;
    fn sub(self, o: Tracked) -> Tracked {
        Tracked { value: self.value - o.value, error: self.error - o.error }
    }
}

impl Mul<f64> for Tracked {
    type Output = Tracked;
    fn mul(self, k: f64) -> Tracked {
        Tracked { value: self.value * k, error: self.error * k }
    }
}

impl QuadValue for Tracked {
    fn magnitude(self) -> f64 {
        self.value.abs()
    }

    fn is_finite_value(self) -> bool {
        self.value.is_finite() && self.error.is_finite()
    }
}

/// Three-valued finiteness verdict attached to every improper quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Finiteness {
    Finite,
    DivergedSuspected,
    NotConverged,
}

impl Finiteness {
    pub fn is_finite(self) -> bool {
        self == Finiteness::Finite
    }

    pub fn is_conclusive(self) -> bool {
        self != Finiteness::NotConverged
    }

    /// Verdict of a quantity built from several components: any divergence wins,
    /// otherwise any non-convergence.
    pub fn join(self, other: Finiteness) -> Finiteness {
        use Finiteness::*;
        match (self, other) {
            (DivergedSuspected, _) | (_, DivergedSuspected) => DivergedSuspected,
            (NotConverged, _) | (_, NotConverged) => NotConverged,
            _ => Finite,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Finiteness::Finite => "finite",
            Finiteness::DivergedSuspected => "diverged_suspected",
            Finiteness::NotConverged => "not_converged",
        }
    }
}

impl std::fmt::Display for Finiteness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a quadrature. `error_estimate` bounds the discretisation error under the
/// local Gauss-Kronrod error model; the tail of an improper integral is reported apart.
#[derive(Clone, Debug, Serialize)]
pub struct IntegralResult<V> {
    pub value: V,
    pub error_estimate: f64,
    pub converged: bool,
    pub tail_contribution_estimate: f64,
    pub diverged_suspected: bool,
    pub subdivisions: usize,
    pub evaluations: usize,
    /// Dyadic partial integrals `(upper limit, |partial|)`, filled by the improper routines.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<(f64, f64)>,
}

impl<V: QuadValue> IntegralResult<V> {
    pub fn exact(value: V) -> Self {
        IntegralResult {
            value,
            error_estimate: 0.0,
            converged: true,
            tail_contribution_estimate: 0.0,
            diverged_suspected: false,
            subdivisions: 0,
            evaluations: 0,
            trace: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::exact(V::default())
    }

    /// Sum of two independent pieces of one integral.
    pub fn combine(mut self, other: IntegralResult<V>) -> Self {
        self.value = self.value + other.value;
        self.error_estimate += other.error_estimate;
        self.converged &= other.converged;
        self.tail_contribution_estimate += other.tail_contribution_estimate;
        self.diverged_suspected |= other.diverged_suspected;
        self.subdivisions += other.subdivisions;
        self.evaluations += other.evaluations;
        if self.trace.is_empty() {
            self.trace = other.trace;
        }
        self
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.value = self.value * factor;
        self.error_estimate *= factor.abs();
        self.tail_contribution_estimate *= factor.abs();
        for point in &mut self.trace {
            point.1 *= factor.abs();
        }
        self
    }

    pub fn map_value<W: QuadValue>(self, f: impl FnOnce(V) -> W) -> IntegralResult<W> {
        IntegralResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            converged: self.converged,
            tail_contribution_estimate: self.tail_contribution_estimate,
            diverged_suspected: self.diverged_suspected,
            subdivisions: self.subdivisions,
            evaluations: self.evaluations,
            trace: self.trace,
        }
    }

    pub fn finiteness(&self) -> Finiteness {
        if self.diverged_suspected {
            Finiteness::DivergedSuspected
        } else if !self.converged {
            Finiteness::NotConverged
        } else {
            Finiteness::Finite
        }
    }
}
