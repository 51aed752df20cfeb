//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by construction, validation, and numerics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operator dimensions do not match: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("site index {site} out of range 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("{n} spins exceeds the dense-storage cap of {max} (dim 2^{max})")]
    TooManySpins { n: usize, max: usize },

    #[error("matrix is not Hermitian: max |H - H'| = {0:.3e}")]
    NotHermitian(f64),

    #[error("matrix is not unitary: max |U'U - I| = {0:.3e}")]
    NotUnitary(f64),

    #[error("state norm {0} is not 1 within 1e-12")]
    NotNormalized(f64),

    #[error("invalid spin network: {0}")]
    InvalidNetwork(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("subspace is not invariant: coupling to complement {0:.3e} exceeds {1:.3e}")]
    SubspaceNotInvariant(f64, f64),

    #[error("scan step {dt:.3e} too coarse; need dt <= {max_dt:.3e} to resolve the fast frequency")]
    ScanStepTooCoarse { dt: f64, max_dt: f64 },

    #[error("no admissible routing integer m1 below bound {0} (irrational G/J ratio?)")]
    NoAdmissibleRoutingTime(u64),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("numeric invariant violated: {0}")]
    NumericFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
