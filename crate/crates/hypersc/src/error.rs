//! Error taxonomy shared by the whole crate.
//!
//! The solvers never regularize or silently recover: a degenerate Hessian or
//! a violated per-step guarantee is a bug (in the caller's model or in ours)
//! and surfaces as an error carrying enough context to replay.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched dimensions, mismatched curvatures, or an argument that
    /// violates a documented precondition.
    #[error("usage: {0}")]
    Usage(String),

    /// A point failed validation (off the hyperboloid sheet, wrong sheet,
    /// non-finite coordinates).
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// A vector failed the tangency check at its base point.
    #[error("invalid tangent: {0}")]
    InvalidTangent(String),

    /// The queried point is outside the field's open domain.
    #[error("outside domain: {0}")]
    OutsideDomain(String),

    /// A Hessian that the theory requires to be positive definite was not.
    #[error("degenerate Hessian: {0}")]
    DegenerateHessian(String),

    /// An iteration cap was exceeded.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// A per-step guarantee that the theory certifies was observed to fail.
    #[error("certified invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
