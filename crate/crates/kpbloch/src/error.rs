//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong across the wave solver, operator assembly,
/// eigensolvers and parameter scans.
#[derive(Debug, Error)]
pub enum Error {
    /// Newton iteration on the wave equations exceeded its iteration cap.
    #[error("wave solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// Requested amplitude is outside the range where the solver is trusted.
    #[error("amplitude {a} is outside the supported range |a| <= {max}")]
    InvalidAmplitude { a: f64, max: f64 },

    /// A retained Fourier mode makes the antiderivative symbol 1/(n + gamma)
    /// blow up, so the operator cannot be assembled on this basis.
    #[error("singular symbol: mode {mode} with gamma = {gamma} hits n + gamma = 0")]
    SingularSymbol { mode: i64, gamma: f64 },

    /// A matrix handed to the Hermitian eigensolver is not Hermitian.
    #[error("matrix is not Hermitian (deviation {deviation:.3e} exceeds {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    /// The dense eigensolver failed, or a computed pair violated the
    /// residual bound it is contracted to satisfy.
    #[error("eigensolver failure: {0}")]
    NoConvergence(String),

    /// A bisection bracket does not straddle a sign change.
    #[error("no sign change over the bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    /// An instability bubble was expected inside the search window but no
    /// unstable grid point was found.
    #[error("no instability bubble found near ell^2 = {center_ell_sq:.6e} (window half-width {half_window:.3e})")]
    BubbleNotFound { center_ell_sq: f64, half_window: f64 },

    /// A parameter is outside its documented domain.
    #[error("parameter {name} = {value} is out of range: {requirement}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// Two reports that must describe the same operator were computed at
    /// different Bloch parameters.
    #[error("reports were computed at different Bloch parameters")]
    ParamMismatch,

    /// Reading or writing a file failed.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
