//! Root geometry of probability generating functions, and numerical
//! verification of the variance and anti-concentration bounds that follow
//! from a zero-free sector around the positive real axis.
//!
//! The crate is `no_std` and needs only `alloc`.  Everything here is a pure
//! function of its inputs; Monte Carlo routines take an explicit seed.
//!
//! Typical flow:
//!
//! ```
//! use zerofree_core::{Distribution, AnalyzedPgf, bounds};
//!
//! let d = Distribution::new(&[0.25, 0.5, 0.25]).unwrap();
//! let a = AnalyzedPgf::from_distribution(d).unwrap();
//! assert!((a.geometry.delta - core::f64::consts::PI).abs() < 1e-9);
//! let shapes = bounds::bound_shapes(&a.geometry);
//! assert!(shapes.basic > 0.0);
//! ```
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod bounds;
pub mod cumulants;
pub mod dist;
mod error;
pub mod generators;
pub mod harmonic;
pub mod mellin;
pub mod quad;
pub mod roots;
pub mod special;
pub mod sum;

pub use num_complex::Complex64;

pub use dist::{AnalysisConfig, Distribution, Moments};
pub use error::{Error, Result};
pub use roots::{AnalyzedPgf, RootSet, SectorGeometry};

/// Outcome of a single numerical check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The hypotheses of the check did not hold for the given inputs.
    Skipped,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Outcome::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skipped => "skipped",
        }
    }
}
