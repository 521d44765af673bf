//! Computational free probability on truncated moment data.
//!
//! The crate works with distributions through finitely many moments or
//! free cumulants, carried either as exact rationals or as floats.  On
//! top of the series kernel it provides the moment/cumulant calculus, a
//! catalog of named laws, the S-transform pipeline (including the
//! half-power transforms of symmetric measures), free additive and
//! multiplicative convolutions, the Bercovici-Pata bijection, the
//! symmetric/positive correspondence for free Levy data, finite-order
//! classification tests, and random-matrix Monte Carlo cross-checks.
//! The `freeconv` binary exposes all of it on the command line.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod freeconv;
pub mod measures;
pub mod quad;
pub mod rmt;
pub mod scalar;
pub mod series;
pub mod transforms;

pub use error::{Error, Result};
pub use scalar::{Coeff, Scalar};

/// Exact/float series used throughout the pipelines.
pub type Series = series::TruncatedSeries<Scalar>;
/// Pure-float series for callers that never need exactness.
pub type SeriesF64 = series::TruncatedSeries<f64>;
/// Series with an optional `z^(-1/2)` prefactor (symmetric S-transforms).
pub type SymSeries = series::HalfSeries<Scalar>;
