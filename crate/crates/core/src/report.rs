//! Pieces shared by the norm reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::Finiteness;

/// Version of the JSON layout of every report.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of a membership test assembled from finiteness verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Member,
    NotCertified,
    Inconclusive,
}

impl Certificate {
    /// Every component finite gives `Member`, any suspected divergence gives
    /// `NotCertified`, and anything else is `Inconclusive`.
    pub fn from_flags<'a>(flags: impl IntoIterator<Item = &'a Finiteness>) -> Certificate {
        let mut joined = Finiteness::Finite;
        for f in flags {
            joined = joined.join(*f);
        }
        match joined {
            Finiteness::Finite => Certificate::Member,
            Finiteness::DivergedSuspected => Certificate::NotCertified,
            Finiteness::NotConverged => Certificate::Inconclusive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Member => "member",
            Certificate::NotCertified => "not_certified",
            Certificate::Inconclusive => "inconclusive",
        }
    }
}

/// Conjugate exponent `q` with `1/p + 1/q = 1`; `p = 1` gives `q = ∞`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameter(format!("exponent p must lie in [1, ∞), got {p}")));
    }
    Ok(if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) })
}

/// Map key used for an exponent.
pub fn exponent_key(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

pub(crate) type FlagMap = BTreeMap<String, Finiteness>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_rules() {
        use Finiteness::*;
        assert_eq!(Certificate::from_flags(&[Finite, Finite]), Certificate::Member);
        assert_eq!(Certificate::from_flags(&[Finite, NotConverged]), Certificate::Inconclusive);
        assert_eq!(Certificate::from_flags(&[NotConverged, DivergedSuspected]), Certificate::NotCertified);
        assert_eq!(Certificate::from_flags(&[]), Certificate::Member);
    }

    #[test]
    fn exponents() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
        assert_eq!(conjugate_exponent(4.0).unwrap(), 4.0 / 3.0);
        assert!(conjugate_exponent(1.0).unwrap().is_infinite());
        assert!(conjugate_exponent(0.5).is_err());
        assert_eq!(exponent_key(2.0), "2");
        assert_eq!(exponent_key(1.5), "1.5");
    }
}
