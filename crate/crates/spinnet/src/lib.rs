//! Spin-1/2 network dynamics on small, dense Hilbert spaces: filtered
//! Hamiltonian engineering of star topologies, resonant state transport in
//! chains, field-switched routers, modular block composition, transport in
//! arbitrary network topologies, and logical-qubit CNOT synthesis by
//! stochastic search.
//!
//! # Conventions
//!
//! - ħ = 1; couplings and Zeeman frequencies are angular (rad/s), times in
//!   seconds.
//! - Spin-1/2 operators: s^z = diag(+1/2, -1/2); the basis state |0⟩ on a
//!   site is the m = +1/2 eigenstate; S^± = S^x ± iS^y.
//! - Site 1 is the leftmost (most significant) tensor factor, so the basis
//!   index of |b_1 b_2 … b_n⟩ is the bit string read as a binary number.
//! - Pure-state fidelity is |⟨a|b⟩| (the trace measure specialized to pure
//!   states); gate fidelity is |Tr(U†V)|/d. Both ignore global phase.
//! - Storage is dense; [`hamiltonian::MAX_SPINS`] caps the spin count at 14.

pub mod chain;
pub mod error;
pub mod evolution;
pub mod filtered_star;
pub mod hamiltonian;
pub mod modular;
pub mod network;
pub mod operator;
pub mod router;
pub mod state;
pub mod synthesis;
#[cfg(test)]
pub(crate) mod testutil;
pub mod tol;

pub use error::{Error, Result};
pub use network::SpinNetwork;
pub use operator::{commutator, gate_fidelity, Operator};
pub use state::{state_fidelity, PureState, Qubit};
