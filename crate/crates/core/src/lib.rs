//! Divergence-based two-sample testing on finite alphabets.
//!
//! Given two i.i.d. samples over a `k`-letter alphabet, the divergence test
//! accepts the null hypothesis (both samples share one distribution) when the
//! divergence between their empirical types falls below a threshold. This
//! crate provides the machinery to study that test numerically:
//!
//! - [`simplex`]: probability vectors, empirical types, type enumeration, and
//!   reproducible i.i.d. sampling,
//! - [`divergence`]: a registry of divergences together with their local
//!   quadratic structure and invariance detection,
//! - [`genchisq`]: chi-square and generalized chi-square tail probabilities,
//!   quantiles, and sampling,
//! - [`exact`]: the exact finite-sample law of the test statistic and exact
//!   type-I/type-II error probabilities by type-pair enumeration,
//! - [`montecarlo`]: simulation-based error estimates and threshold
//!   calibration with block-reproducible random streams,
//! - [`asymptotics`]: closed-form first- and second-order predictions for the
//!   type-II error exponent and the supporting optimization primitives.
//!
//! All probability accumulation runs in natural-log domain: type-II error
//! probabilities decay exponentially in the sample size and underflow in
//! linear space long before the regimes of interest.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the command
//! line live in the companion `divtest` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod divergence;
pub mod error;
pub mod exact;
pub mod genchisq;
pub mod logsum;
pub mod montecarlo;
pub mod simplex;
pub mod stream;

pub use divergence::Divergence;
pub use error::{Error, Result};
pub use simplex::{Distribution, TypeDistribution};
