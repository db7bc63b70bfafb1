//! Adaptive, improper and principal-value quadrature.

mod adaptive;
mod config;
mod gauss_kronrod;
mod improper;
mod principal_value;
mod value;

pub use adaptive::{integrate_adaptive, integrate_excluding_start, integrate_points, integrate_with_breakpoints};
pub use config::{QuadratureConfig, TailMode, Tolerance};
pub use improper::{improper, improper_lower, integrate_from_origin, integrate_improper, integrate_real_line};
pub use principal_value::{principal_value, principal_value_with};
pub(crate) use value::Tracked;
pub use value::{Finiteness, IntegralResult, QuadValue};
