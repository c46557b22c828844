//! Evaluation and verification of basic hypergeometric (q-) series.
//!
//! The crate has four layers:
//!
//! - [`qcore`]: exact complex rationals, arbitrary-precision complex balls,
//!   and q-shifted factorials `(x;q)_n` of any integer or infinite order.
//! - [`series`]: unilateral `r+1phi_s` and bilateral `r psi_s` series with
//!   termination detection, convergence checks, rigorous truncation bounds,
//!   and the `k -> -k` / `k -> -k-1` reindexing transforms.
//! - [`identities`]: a catalog of 21 q-series transformation and summation
//!   identities stored as evaluable two-sided expressions, plus the limiting
//!   and series-folding consistency checks used in their derivations.
//! - [`verifier`]: seeded sampling of admissible parameters, precision-ladder
//!   evaluation and report assembly.
//!
//! Everything numeric is generic over [`Scalar`], with two concrete backends:
//! [`ExactValue`] (exact complex rationals, residuals come out exactly zero
//! on terminating identities) and [`BallValue`] (complex midpoint at P bits
//! plus a rigorous absolute error radius).

pub mod error;
pub mod qcore;

pub use error::{Error, Result};
pub use qcore::{qfac_ratio, qpoch, qpoch_inf, PochOrder, Scalar};

/// Exact backend: complex numbers with rational components.
pub type ExactValue = qcore::CRat;

/// Ball backend: arbitrary-precision complex midpoint with error radius.
pub type BallValue = qcore::Ball;

/// Magnitude bound used for radii, tolerances and tail bounds.
pub type Magnitude = qcore::Mag;
