//! Dense spin-1/2 many-body operators, the pairing Hamiltonian, the
//! open Richardson-Gaudin conserved family, and exact diagonalization.
//!
//! # Basis convention
//!
//! Physical basis states are indexed by integers `b ∈ [0, 2^L)`. Site `j`
//! (1-based) lives on bit `j−1`, so site 1 is the least-significant bit. A
//! *clear* bit is spin-up (S^z = +1/2), a *set* bit is spin-down; `b = 0` is
//! the all-up state. This puts the single-site operators in their standard
//! matrix form — `S^z = diag(1/2, −1/2)`, `S^+ = [[0,1],[0,0]]` — with the
//! first basis vector spin-up, and embedding is O(1) bit arithmetic.

mod conserved;
mod hamiltonian;
mod ops;
mod params;
mod quasiclassical;
mod spectrum;

pub use conserved::{gauge_transform, tau_general, tau_star, tau_star_general};
pub use hamiltonian::{hamiltonian, total_sz};
pub use ops::{site_operator, OpBuilder, SpinOp};
pub use params::ModelParams;
pub use quasiclassical::quasiclassical_check;
pub use spectrum::{exact_spectrum, SpectrumResult};
