use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Channel parameters violate their invariants.
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// An input distribution violates its invariants.
    #[error("invalid input distribution: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature did not settle within the refinement budget.
    #[error(
        "quadrature did not converge after {refinements} refinements \
         (last two estimates {previous} and {last})"
    )]
    Convergence {
        refinements: u32,
        previous: f64,
        last: f64,
    },

    /// A broadcast split could not be evaluated.
    #[error("split k1 = {k1}, k2 = {k2}: {source}")]
    AtSplit {
        k1: usize,
        k2: usize,
        #[source]
        source: Box<Error>,
    },

    /// A quantity that is positive by construction was found not to be.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
