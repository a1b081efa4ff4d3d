//! Exact computations with truncated Ore extensions: twisting maps, twisted
//! tensor products, compatible modules and twisted product resolutions.

pub mod algebra;
pub mod error;
pub mod family;
pub mod field;
pub mod homology;
pub mod matrix;
pub mod modules;
pub mod operator;
pub mod pipeline;
pub mod report;
pub mod shuffle;
pub mod twist;

/// The Ore family `F_p[x]/(x^p)`, `δ(x) = α x^t` under its command-line name.
pub mod example4 {
    pub use crate::family::*;
}

pub use error::{CoreError, Result};
pub use field::{FieldSpec, Scalar};
pub use report::{Report, Verdict, Witness};
