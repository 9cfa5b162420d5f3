//! Bethe-ansatz machinery: transfer-matrix eigenvalues, the Bethe ansatz
//! equations in their full and quasi-classical forms, root solvers, the
//! energy formula, and full-spectrum matching against exact diagonalization.
//!
//! Every in-scope formula depends on the squared roots v_i² only, so the
//! squared roots are the canonical unknowns; individual signs of v_i are
//! never needed. The inverse form y_i = v_i⁻² is kept alongside because the
//! physical energy formula and the Γ → 0 degeneration (roots escaping to
//! infinity, y → 0) are naturally expressed in it.

mod continuation;
mod energy;
mod equations;
mod full_eta;
mod heine_stieltjes;
mod matching;
mod newton;
mod reconstruction;

pub use continuation::{continuation_solve, ContinuationPoint, ContinuationTrack};
pub use energy::{energy_from_roots, energy_lambda_sum};
pub use equations::{
    bae_residual, bae_residual_general, bae_residual_sector, bae_residual_y,
    qc_conserved_eigenvalue, qc_conserved_eigenvalue_general,
};
pub use full_eta::{
    bae_full_residual, lambda_full, lambda_residue_at_inhomogeneity, solve_full_bae_l1,
};
pub use heine_stieltjes::{heine_stieltjes_solve, van_vleck_from_q};
pub use matching::{spectrum_match, MatchOptions, MatchSummary, SpectrumMatchReport, StateRecord};
pub use newton::{newton_refine, BaeForm};
pub use reconstruction::{roots_from_conserved, roots_from_conserved_sector};

use crate::linalg::poly;
use crate::{C64, Error, Result};

/// Threshold below which |y| is treated as a root at infinity (in v).
pub const Y_INFINITY_THRESHOLD: f64 = 1e-10;

/// Threshold flagging near-collisions among squared roots.
pub const ROOT_COLLISION_THRESHOLD: f64 = 1e-9;

/// Provenance of a root set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootSource {
    Reconstruction,
    Newton,
    Continuation,
    HeineStieltjes,
}

/// One eigenstate's Bethe roots.
///
/// Stores the canonical squared roots {v_i²} together with the derived
/// inverse form y_i = v_i⁻². Roots at infinity (|y| below
/// [`Y_INFINITY_THRESHOLD`]) carry an explicit flag; their squared entry is
/// `inf` and every consumer either skips them (closed-model sector formulas)
/// or rejects them (the v-form residual).
#[derive(Debug, Clone)]
pub struct BetheRoots {
    squared: Vec<C64>,
    y: Vec<C64>,
    at_infinity: Vec<bool>,
    residual_norm: f64,
    source: RootSource,
}

impl BetheRoots {
    pub fn from_squared(squared: Vec<C64>, source: RootSource) -> Self {
        let y: Vec<C64> = squared
            .iter()
            .map(|&s| {
                if s.is_finite() && s.norm() > 0.0 {
                    1.0 / s
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        let at_infinity = y.iter().map(|v| v.norm() < Y_INFINITY_THRESHOLD).collect();
        BetheRoots { squared, y, at_infinity, residual_norm: f64::NAN, source }
    }

    pub fn from_y(y: Vec<C64>, source: RootSource) -> Self {
        let squared: Vec<C64> = y
            .iter()
            .map(|&v| {
                if v.norm() >= Y_INFINITY_THRESHOLD {
                    1.0 / v
                } else {
                    C64::new(f64::INFINITY, 0.0)
                }
            })
            .collect();
        let at_infinity: Vec<bool> =
            y.iter().map(|v| v.norm() < Y_INFINITY_THRESHOLD).collect();
        BetheRoots { squared, y, at_infinity, residual_norm: f64::NAN, source }
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual_norm = residual;
        self
    }

    pub fn len(&self) -> usize {
        self.squared.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squared.is_empty()
    }

    /// Canonical squared roots; entries flagged at infinity hold `inf`.
    pub fn squared(&self) -> &[C64] {
        &self.squared
    }

    /// Inverse form y_i = v_i⁻² (0 for roots at infinity).
    pub fn y(&self) -> &[C64] {
        &self.y
    }

    pub fn at_infinity(&self) -> &[bool] {
        &self.at_infinity
    }

    pub fn any_at_infinity(&self) -> bool {
        self.at_infinity.iter().any(|&f| f)
    }

    /// Squared roots excluding the ones at infinity.
    pub fn finite_squared(&self) -> Vec<C64> {
        self.squared
            .iter()
            .zip(&self.at_infinity)
            .filter(|(_, &inf)| !inf)
            .map(|(&s, _)| s)
            .collect()
    }

    /// Max-norm of the BAE residuals recorded by the producing solver
    /// (NaN when never evaluated).
    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    pub fn source(&self) -> RootSource {
        self.source
    }

    /// Pairs of roots closer than the collision threshold (relative to the
    /// root scale).
    pub fn near_collisions(&self) -> Vec<(usize, usize)> {
        let scale = self
            .squared
            .iter()
            .filter(|s| s.is_finite())
            .map(|s| s.norm())
            .fold(1.0f64, f64::max);
        let mut out = vec![];
        for i in 0..self.squared.len() {
            for k in i + 1..self.squared.len() {
                if self.at_infinity[i] || self.at_infinity[k] {
                    continue;
                }
                if (self.squared[i] - self.squared[k]).norm() < ROOT_COLLISION_THRESHOLD * scale {
                    out.push((i, k));
                }
            }
        }
        out
    }

    /// Root/inhomogeneity proximity pairs (v_i² ≈ ε_l²), flagged not fatal.
    pub fn near_epsilon_squared(&self, epsilon_squared: &[C64]) -> Vec<(usize, usize)> {
        let scale = epsilon_squared.iter().map(|e| e.norm()).fold(1.0f64, f64::max);
        let mut out = vec![];
        for (i, &s) in self.squared.iter().enumerate() {
            if self.at_infinity[i] {
                continue;
            }
            for (l, &e) in epsilon_squared.iter().enumerate() {
                if (s - e).norm() < ROOT_COLLISION_THRESHOLD * scale {
                    out.push((i, l));
                }
            }
        }
        out
    }
}

/// Monic root polynomial Q(x) = ∏_i (x − v_i²), ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct QPolynomial {
    coeffs: Vec<C64>,
}

impl QPolynomial {
    /// Builds from ascending coefficients; the leading one must be 1.
    pub fn from_coeffs(coeffs: Vec<C64>) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if (lead - C64::new(1.0, 0.0)).norm() < 1e-12 => {
                Ok(QPolynomial { coeffs })
            }
            _ => Err(Error::invalid("Q polynomial must be monic")),
        }
    }

    pub fn from_roots(roots: &[C64]) -> Self {
        QPolynomial { coeffs: poly::from_roots(roots) }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, x: C64) -> C64 {
        poly::eval(&self.coeffs, x)
    }

    pub fn eval_derivative(&self, x: C64) -> C64 {
        poly::eval(&poly::derivative(&self.coeffs), x)
    }

    /// Companion-matrix roots with one Newton polish each.
    pub fn roots(&self) -> Result<Vec<C64>> {
        poly::roots(&self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_flags_and_finite_views() {
        let roots = BetheRoots::from_y(
            vec![C64::new(0.5, 0.1), C64::new(0.0, 0.0), C64::new(-0.25, 0.0)],
            RootSource::Continuation,
        );
        assert_eq!(roots.at_infinity(), &[false, true, false]);
        assert!(roots.any_at_infinity());
        assert_eq!(roots.finite_squared().len(), 2);
        assert!(roots.squared()[1].re.is_infinite());
    }

    #[test]
    fn q_polynomial_roundtrips_roots() {
        let roots = vec![C64::new(1.5, 0.0), C64::new(-0.4, 0.8), C64::new(-0.4, -0.8)];
        let q = QPolynomial::from_roots(&roots);
        assert_eq!(q.degree(), 3);
        let mut got = q.roots().unwrap();
        let key = |z: &C64| (z.re, z.im);
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        let mut want = roots.clone();
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-10);
        }
        // Monic invariant.
        assert!(QPolynomial::from_coeffs(vec![C64::new(2.0, 0.0), C64::new(2.0, 0.0)]).is_err());
    }

    #[test]
    fn collision_flags() {
        let roots = BetheRoots::from_squared(
            vec![C64::new(1.0, 0.0), C64::new(1.0 + 1e-11, 0.0), C64::new(3.0, 0.0)],
            RootSource::Newton,
        );
        assert_eq!(roots.near_collisions(), vec![(0, 1)]);
    }
}
