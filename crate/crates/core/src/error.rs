use crate::C64;

/// Error type shared by all modules.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Construction parameters violate a type invariant.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Spectral parameter too close to a pole of the construction.
    #[error("spectral parameter {u} is within {guard:e} of the pole at {pole}")]
    NearPole { u: C64, pole: C64, guard: f64 },

    /// Site or state index out of range.
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// A denominator of the form ε_j ± ε_k or v_k² − ε_l² vanished.
    #[error("singular configuration at root {index}: {reason}")]
    SingularRoots { index: usize, reason: String },

    /// ψφ = −1: the square root √(ψφ+1) sits on its branch point.
    #[error("branch point: psi*phi = -1")]
    BranchPoint,

    /// Linear system too ill-conditioned to trust.
    #[error("linear system ill-conditioned (cond = {cond:.3e})")]
    IllConditioned { cond: f64 },

    /// Iterative solver failed to converge.
    #[error("no convergence after {iters} iterations (last residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },

    /// Continuation step fell below the minimum step size.
    #[error("continuation stalled at gamma = {last_gamma} (step below {min_step:e})")]
    ContinuationStalled { last_gamma: f64, min_step: f64 },

    /// Matrix fails a structural requirement (shape, hermiticity, ...).
    #[error("matrix requirement violated: {0}")]
    Matrix(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
