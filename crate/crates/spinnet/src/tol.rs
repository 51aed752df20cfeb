//! Numerical tolerances used across the crate, with their rationale.
//!
//! All propagators are produced by Hermitian eigendecomposition, so unitarity
//! holds to a small multiple of machine epsilon; the thresholds below leave a
//! few orders of headroom over accumulated rounding without masking real bugs.

/// Hermiticity of constructed Hamiltonians, max elementwise |H - H†|.
pub const HERMITICITY: f64 = 1e-12;

/// Unitarity of propagators, max elementwise |U†U - I|.
pub const UNITARITY: f64 = 1e-10;

/// 2-norm of pure states.
pub const STATE_NORM: f64 = 1e-12;

/// Allowed coupling of an "invariant" subspace to its complement.
pub const SUBSPACE_LEAKAGE: f64 = 1e-10;

/// Residual below which a phase-matching condition counts as satisfied (rad).
///
/// Far below any physical detuning of interest, far above f64 noise.
pub const CONDITION_RESIDUAL: f64 = 1e-9;

/// Inputs to gate fidelity must be unitary to this tolerance.
pub const GATE_FIDELITY_UNITARITY: f64 = 1e-8;
