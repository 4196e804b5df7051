//! Error types shared across the crate.

use thiserror::Error;

/// Anything that can go wrong when building models or running protocols.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A Pauli factor references a site outside the chain.
    #[error("site {site} out of range for a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    /// Structurally invalid input (bad geometry, malformed operator, ...).
    #[error("invalid input: {0}")]
    Structural(String),

    /// A quantity that must be real came out with a large imaginary part.
    #[error("numerical consistency failure in {context}: imaginary residue {residual:e}")]
    NumericalConsistency { context: String, residual: f64 },

    /// Asked to condition on a measurement outcome of (near-)zero probability.
    #[error("measurement outcome has probability {probability:e}, below threshold")]
    ImpossibleOutcome { probability: f64 },

    /// The optimal rotation angle is undefined because xi = eta = 0.
    #[error("rotation angle undefined: xi and eta are both zero")]
    UndefinedAngle,

    /// The model leaves the requested site untouched by every term.
    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    /// The iterative eigensolver did not converge.
    #[error("eigensolver failed to converge after {iterations} iterations")]
    SolverFailure { iterations: usize },

    /// Request exceeds what the dense numerical paths can handle.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// Division by a quantity that must be strictly positive.
    #[error("domain error: {0}")]
    DivisionDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
