pub mod error;
pub mod function;
pub mod sequence;
pub mod quadrature;
pub mod report;
pub mod discrete;
pub mod continuous;
pub mod transform;
pub mod periodic;
pub mod harness;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/descriptors.md")]
    mod descriptors {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/continuous-norms.md")]
    mod continuous_norms {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/sequence-norms.md")]
    mod sequence_norms {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
