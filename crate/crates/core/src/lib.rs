//! Integrable p+ip pairing model coupled to a particle-exchanging environment.
//!
//! The model is a spin-1/2 pairing Hamiltonian
//!
//! ```text
//! H = Σ_k z_k² S_k^z − G Σ_{k≠j} z_k z_j S_k^+ S_j^− + Γ Σ_k z_k (S_k^+ + S_k^−)
//! ```
//!
//! whose Γ-term exchanges Cooper pairs with the environment and breaks u(1)
//! symmetry. Integrability comes from the boundary (double-row) inverse
//! scattering construction with a non-diagonal reflection matrix; the
//! quasi-classical limit of the double-row transfer matrix yields a commuting
//! family of open, rational Richardson-Gaudin operators τ_j* whose weighted sum
//! reproduces H.
//!
//! The crate is organised around that derivation chain:
//!
//! * [`algebra`] — R-matrix, reflection K-matrices, Lax operators, double-row
//!   transfer matrix, and numerical certification of the algebraic identities
//!   (Yang-Baxter, reflection equations, RLL, transfer-matrix commutativity).
//! * [`manybody`] — dense 2^L operator construction, Hamiltonian and conserved
//!   operators, exact diagonalization, and the quasi-classical limit check
//!   linking the transfer matrix to the conserved family.
//! * [`bethe`] — transfer-matrix eigenvalues, Bethe ansatz equations (full and
//!   quasi-classical), root solvers (linear reconstruction, Newton, homotopy
//!   continuation, Heine-Stieltjes), the energy formula, and full-spectrum
//!   matching against exact diagonalization.
//! * [`linalg`] — the small dense complex kernel the rest builds on
//!   (Hermitian Jacobi eigensolver, Hessenberg-QR eigenvalues, LU, least
//!   squares, polynomial utilities).
//!
//! Everything is dense and desk-scale by design: chain lengths are capped
//! (default 12) so full-spectrum validation stays tractable. All constructions
//! are pure functions of their inputs and safe to share across threads.

pub mod algebra;
pub mod bethe;
pub mod linalg;
pub mod manybody;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix used for all operators.
pub type CMat = ndarray::Array2<C64>;

/// Default cap on the chain length for dense many-body work (2^12 = 4096).
pub const DEFAULT_LENGTH_CAP: usize = 12;

/// Guard radius around spectral-parameter poles.
pub const POLE_GUARD: f64 = 1e-8;
