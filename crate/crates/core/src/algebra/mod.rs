//! Boundary inverse-scattering building blocks as explicit complex matrices.
//!
//! The rational (XXX) R-matrix, the left/right reflection K-matrices, the
//! spin-1/2 Lax operator, and the double-row transfer matrix
//!
//! ```text
//! t(u) = tr_a[ K⁺_a(u) L_{aL}(u−ε_L)…L_{a1}(u−ε_1) K⁻_a(u) L_{a1}(u+ε_1)…L_{aL}(u+ε_L) ]
//! ```
//!
//! are built in their shifted (post variable-change) form; the pre-shift
//! K-matrices appear only inside the reflection-equation residual checks.
//! All defining identities (Yang-Baxter, both reflection equations, RLL, the
//! Lax inversion identity, transfer-matrix commutativity) are certified
//! numerically by [`structure_report`].

mod kmatrix;
mod lax;
mod rmatrix;
mod report;
mod transfer;

pub use kmatrix::{
    k_minus, k_minus_preshift, k_plus, k_plus_preshift, reflection_minus_residual,
    reflection_plus_residual,
};
pub use lax::{lax, lax_inverse_residual, rll_residual};
pub use rmatrix::{permutation, r_matrix, ybe_residual};
pub use report::{structure_report, ReportOptions, ResidualRow, StructureReport};
pub use transfer::{transfer_commutator_residual, transfer_matrix, transfer_transpose_residual};

use crate::{C64, Error, Result};

/// Chain data: length, inhomogeneities ε_j, and the quasi-classical
/// parameter η.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    inhomogeneities: Vec<C64>,
    eta: C64,
}

impl ChainSpec {
    /// Validates ε_j ≠ 0 and ε_j ≠ ±ε_k for j ≠ k (the denominators of the
    /// conserved operators must not vanish). η = 0 is allowed here; the
    /// full-η constructions reject it at use.
    pub fn new(inhomogeneities: Vec<C64>, eta: C64) -> Result<Self> {
        if inhomogeneities.is_empty() {
            return Err(Error::invalid("chain needs at least one site"));
        }
        let scale = inhomogeneities.iter().map(|e| e.norm()).fold(0.0, f64::max);
        for (i, e) in inhomogeneities.iter().enumerate() {
            if e.norm() < 1e-12 * scale.max(1.0) {
                return Err(Error::invalid(format!("epsilon_{} must be nonzero", i + 1)));
            }
        }
        for i in 0..inhomogeneities.len() {
            for j in i + 1..inhomogeneities.len() {
                let a = inhomogeneities[i];
                let b = inhomogeneities[j];
                if (a - b).norm() < 1e-12 * scale || (a + b).norm() < 1e-12 * scale {
                    return Err(Error::invalid(format!(
                        "epsilon_{} = ±epsilon_{} makes the construction singular",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(ChainSpec { inhomogeneities, eta })
    }

    pub fn length(&self) -> usize {
        self.inhomogeneities.len()
    }

    pub fn inhomogeneities(&self) -> &[C64] {
        &self.inhomogeneities
    }

    pub fn eta(&self) -> C64 {
        self.eta
    }

    /// Same inhomogeneities at a different η.
    pub fn with_eta(&self, eta: C64) -> ChainSpec {
        ChainSpec { inhomogeneities: self.inhomogeneities.clone(), eta }
    }

    /// Poles of the transfer matrix in the spectral parameter: {0, ±ε_j}.
    pub fn transfer_poles(&self) -> Vec<C64> {
        let mut poles = vec![C64::new(0.0, 0.0)];
        for &e in &self.inhomogeneities {
            poles.push(e);
            poles.push(-e);
        }
        poles
    }
}

/// The six K-matrix parameters (ξ±, ψ±, φ±).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParams {
    pub xi_minus: C64,
    pub psi_minus: C64,
    pub phi_minus: C64,
    pub xi_plus: C64,
    pub psi_plus: C64,
    pub phi_plus: C64,
}

/// η-expansion coefficients of the boundary parameters:
///
/// ```text
/// ξ⁺ = ξ + ηα,  ψ⁺ = ψ + ηγ,  φ⁺ = φ + ηλ,
/// ξ⁻ = −ξ + ηβ, ψ⁻ = ψ + ηδ,  φ⁻ = φ + ημ.
/// ```
///
/// This parametrization makes K⁺(u)K⁻(u) → (u²(1+ψφ) − ξ²)·I as η → 0, the
/// condition for the quasi-classical limit to exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaExpansion {
    pub xi: C64,
    pub psi: C64,
    pub phi: C64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
    pub lambda: C64,
    pub mu: C64,
}

impl EtaExpansion {
    /// The induced boundary parameters at a given η.
    pub fn boundary_at(&self, eta: C64) -> BoundaryParams {
        BoundaryParams {
            xi_minus: -self.xi + eta * self.beta,
            psi_minus: self.psi + eta * self.delta,
            phi_minus: self.phi + eta * self.mu,
            xi_plus: self.xi + eta * self.alpha,
            psi_plus: self.psi + eta * self.gamma,
            phi_plus: self.phi + eta * self.lambda,
        }
    }

    /// √(ψφ+1) on the principal branch; errors at the branch point.
    pub fn sqrt_psi_phi(&self) -> Result<C64> {
        let arg = self.psi * self.phi + C64::new(1.0, 0.0);
        if arg.norm() < 1e-14 {
            return Err(Error::BranchPoint);
        }
        Ok(arg.sqrt())
    }
}
