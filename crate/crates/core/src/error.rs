//! Crate-wide error type.

use alloc::string::String;

/// Errors produced by the statistical and numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two distributions or types were expected over the same alphabet.
    #[error("alphabet size mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    /// A weight or probability vector failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),
    /// A sample contained a symbol index outside `0..k`.
    #[error("symbol index {index} out of range for alphabet size {k}")]
    SymbolOutOfRange { index: u32, k: usize },
    /// A parameter violated its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    /// An operation required a strictly positive distribution.
    #[error("distribution has zero entries but an interior point is required")]
    NotInterior,
    /// A finite-difference perturbation left the simplex interior.
    #[error("finite-difference step {step} exits the simplex interior")]
    StepExitsInterior { step: f64 },
    /// A matrix expected to be positive definite was not.
    #[error("matrix is not positive definite (min eigenvalue {min_eig})")]
    NotPositiveDefinite { min_eig: f64 },
    /// Type-pair enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {required} pairs > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    /// Monte Carlo tail resolution guard `trials * eps >= 50` violated.
    #[error("tail resolution guard violated: trials*eps = {0} < 50")]
    ResolutionGuard(f64),
    /// The first argument is not absolutely continuous w.r.t. the second.
    #[error("absolute continuity violated at symbol {0}")]
    NotAbsolutelyContinuous(usize),
    /// The two distributions have disjoint supports.
    #[error("supports are disjoint")]
    DisjointSupport,
    /// An optimization problem degenerated (objective identically zero).
    #[error("degenerate problem: {0}")]
    Degenerate(&'static str),
    /// Integer rounding of a nearby pair left the nonnegative orthant or the
    /// target ellipsoid; the sample size is too small for the construction.
    #[error("type rounding failed: {0}")]
    RoundingFailed(&'static str),
    /// A divergence specification string failed to parse.
    #[error("cannot parse divergence spec {0:?}")]
    ParseDivergence(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
