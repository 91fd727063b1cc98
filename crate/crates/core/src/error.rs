use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis dimension overflows usize for cutoffs (n_r <= {cutoff_r}, n_l <= {cutoff_l})")]
    DimensionOverflow { cutoff_r: usize, cutoff_l: usize },

    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error(
        "coherent amplitude |z|^2 = {mean_number} needs cutoff_l >= {required_cutoff} \
         (current cutoff_l = {cutoff_l})"
    )]
    CoherentTail {
        mean_number: f64,
        cutoff_l: usize,
        required_cutoff: usize,
    },

    #[error("state is not normalized (|psi|^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("n_l = 0 is the uncoupled singlet |0>|up>; it has no two-dimensional subspace")]
    Singlet,

    #[error(
        "series spans {span} but at least {required} (10 periods of {period}) is required"
    )]
    SeriesTooShort { span: f64, required: f64, period: f64 },

    #[error("xi*n_l = {xi_n} lies outside the convergence disc xi*n_l < 1/4")]
    OutsideConvergence { xi_n: f64 },

    #[error("max_order = {0} exceeds the supported maximum of 12")]
    OrderTooLarge(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
