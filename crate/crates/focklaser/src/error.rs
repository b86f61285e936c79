use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Laguerre recurrence overflowed at n={n}, x={x}")]
    Overflow { n: usize, x: f64 },

    #[error("D_n at n={n}, g={g} cannot be resolved to {requested:e} (error bound {bound:e})")]
    Precision { n: usize, g: f64, requested: f64, bound: f64 },

    /// Fock truncation too small for the displacement in play.
    #[error("n_fock={n_fock} violates the support rule for g={g} (need at least {required})")]
    SupportRule { n_fock: usize, g: f64, required: usize },

    #[error("{lost:e} of the probability sits outside the resolved truncation")]
    TruncationLoss { lost: f64 },

    #[error("no anharmonic gap found below n={ceiling}")]
    NoCriticalNumber { ceiling: usize },

    #[error("tail mass {mass:e} at n_max={n_max} exceeds 1e-8")]
    TailMass { n_max: usize, mass: f64 },

    #[error("ODE step size underflow at t={t:e}")]
    StepSize { t: f64 },

    #[error("singular coherence block: {0}")]
    SingularBlock(String),

    #[error("estimated memory {needed} bytes exceeds budget {budget} bytes")]
    MemoryBudget { needed: usize, budget: usize },

    #[error("iterative solve did not converge: {0}")]
    NonConvergence(String),

    /// The steady state is not unique.
    #[error("degenerate null space: second singular value is {spread:e} of the largest")]
    DegenerateNullSpace { spread: f64 },

    #[error("steady state failed validation: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
