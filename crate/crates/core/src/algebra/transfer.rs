use super::kmatrix::{k_minus, k_plus};
use super::lax::{lax_blocks, LaxBlocks};
use super::{BoundaryParams, ChainSpec};
use crate::linalg::{commutator_residual, matmul, rel_fro_diff};
use crate::{C64, CMat, Error, Result, POLE_GUARD};
use ndarray::Array2;

const ZERO: C64 = C64::new(0.0, 0.0);

fn scalar_blocks(k: &CMat, dim: usize) -> LaxBlocks {
    let mk = |a: usize, b: usize| {
        let mut m = Array2::from_elem((dim, dim), ZERO);
        for i in 0..dim {
            m[(i, i)] = k[(a, b)];
        }
        m
    };
    LaxBlocks { b: [[mk(0, 0), mk(0, 1)], [mk(1, 0), mk(1, 1)]] }
}

fn block_mul(a: &LaxBlocks, b: &LaxBlocks) -> LaxBlocks {
    let entry = |i: usize, j: usize| {
        &matmul(&a.b[i][0], &b.b[0][j]) + &matmul(&a.b[i][1], &b.b[1][j])
    };
    LaxBlocks { b: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
}

/// The double-row transfer matrix
///
/// ```text
/// t(u) = tr_a[ K⁺_a(u) L_{aL}(u−ε_L)…L_{a1}(u−ε_1) K⁻_a(u) L_{a1}(u+ε_1)…L_{aL}(u+ε_L) ]
/// ```
///
/// as a dense 2^L × 2^L matrix. The auxiliary trace is taken at the end of a
/// 2×2 block-matrix product, so memory stays at four physical-space blocks.
pub fn transfer_matrix(u: C64, chain: &ChainSpec, bp: &BoundaryParams) -> Result<CMat> {
    if chain.eta().norm() == 0.0 {
        return Err(Error::invalid("transfer matrix requires eta != 0"));
    }
    for pole in chain.transfer_poles() {
        if (u - pole).norm() < POLE_GUARD {
            return Err(Error::NearPole { u, pole, guard: POLE_GUARD });
        }
    }
    let l = chain.length();
    let dim = 1usize << l;
    let eps = chain.inhomogeneities();

    let mut acc = scalar_blocks(&k_plus(u, bp, chain.eta()), dim);
    for j in (1..=l).rev() {
        acc = block_mul(&acc, &lax_blocks(u - eps[j - 1], j, chain)?);
    }
    acc = block_mul(&acc, &scalar_blocks(&k_minus(u, bp, chain.eta()), dim));
    for j in 1..=l {
        acc = block_mul(&acc, &lax_blocks(u + eps[j - 1], j, chain)?);
    }
    Ok(&acc.b[0][0] + &acc.b[1][1])
}

/// Relative commutator residual ‖[t(u), t(v)]‖ / (‖t(u)‖‖t(v)‖).
pub fn transfer_commutator_residual(
    u: C64,
    v: C64,
    chain: &ChainSpec,
    bp: &BoundaryParams,
) -> Result<f64> {
    let tu = transfer_matrix(u, chain, bp)?;
    let tv = transfer_matrix(v, chain, bp)?;
    Ok(commutator_residual(&tu, &tv))
}

/// Relative residual of the transpose identity
/// t(u, ε⃗) = t(u, −ε⃗)ᵀ |_{ψ± ↔ φ±}.
pub fn transfer_transpose_residual(u: C64, chain: &ChainSpec, bp: &BoundaryParams) -> Result<f64> {
    let plain = transfer_matrix(u, chain, bp)?;
    let negated: Vec<C64> = chain.inhomogeneities().iter().map(|&e| -e).collect();
    let neg_chain = ChainSpec::new(negated, chain.eta())?;
    let swapped = BoundaryParams {
        psi_minus: bp.phi_minus,
        phi_minus: bp.psi_minus,
        psi_plus: bp.phi_plus,
        phi_plus: bp.psi_plus,
        ..*bp
    };
    let other = transfer_matrix(u, &neg_chain, &swapped)?;
    Ok(rel_fro_diff(&plain, &other.t().to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(eps: &[f64], eta: f64) -> ChainSpec {
        let e: Vec<C64> = eps.iter().map(|&x| C64::new(x, 0.0)).collect();
        ChainSpec::new(e, C64::new(eta, 0.0)).unwrap()
    }

    fn generic_bp() -> BoundaryParams {
        BoundaryParams {
            xi_minus: C64::new(0.45, 0.0),
            psi_minus: C64::new(0.27, 0.0),
            phi_minus: C64::new(-0.38, 0.0),
            xi_plus: C64::new(0.61, 0.0),
            psi_plus: C64::new(-0.19, 0.0),
            phi_plus: C64::new(0.33, 0.0),
        }
    }

    #[test]
    fn transfer_matrices_commute_at_l4() {
        let ch = chain(&[1.0, 1.45, 1.9, 2.55], 0.1);
        let bp = generic_bp();
        let r = transfer_commutator_residual(C64::new(0.37, 0.0), C64::new(-1.21, 0.0), &ch, &bp)
            .unwrap();
        assert!(r < 1e-11, "[t(u), t(v)] residual {r:e}");
    }

    #[test]
    fn transpose_identity_at_l2() {
        let ch = chain(&[0.9, 1.6], 0.22);
        let bp = generic_bp();
        for u in [C64::new(0.41, 0.0), C64::new(-0.83, 0.3), C64::new(2.2, -0.1)] {
            let r = transfer_transpose_residual(u, &ch, &bp).unwrap();
            assert!(r < 1e-12, "transpose identity residual {r:e} at u={u}");
        }
    }

    #[test]
    fn single_site_diagonal_boundary_matches_closed_form() {
        // With ψ± = φ± = 0 at L = 1 the transfer matrix is diagonal, and the
        // two diagonal entries have an explicit closed form.
        let ch = chain(&[1.3], 0.17);
        let bp = BoundaryParams {
            xi_minus: C64::new(0.53, 0.0),
            psi_minus: ZERO,
            phi_minus: ZERO,
            xi_plus: C64::new(0.71, 0.0),
            psi_plus: ZERO,
            phi_plus: ZERO,
        };
        let eta = ch.eta();
        let eps = C64::new(1.3, 0.0);
        for u in [C64::new(0.4, 0.0), C64::new(-0.9, 0.25), C64::new(1.8, 0.0)] {
            let t = transfer_matrix(u, &ch, &bp).unwrap();
            assert!(t[(0, 1)].norm() < 1e-14);
            assert!(t[(1, 0)].norm() < 1e-14);
            let w1 = u - eps;
            let w2 = u + eps;
            let kpa = bp.xi_plus + u + 0.5 * eta;
            let kpd = bp.xi_plus - u - 0.5 * eta;
            let kma = bp.xi_minus + u - 0.5 * eta;
            let kmd = bp.xi_minus - u + 0.5 * eta;
            let up = kpa * kma * (1.0 + 0.5 * eta / w1) * (1.0 + 0.5 * eta / w2)
                + kpd * kma * eta * eta / (w1 * w2)
                + kpd * kmd * (1.0 - 0.5 * eta / w1) * (1.0 - 0.5 * eta / w2);
            let down = kpa * (kma * (1.0 - 0.5 * eta / w1) * (1.0 - 0.5 * eta / w2)
                + kmd * eta * eta / (w1 * w2))
                + kpd * kmd * (1.0 + 0.5 * eta / w1) * (1.0 + 0.5 * eta / w2);
            assert!((t[(0, 0)] - up).norm() < 1e-13, "up entry at u={u}");
            assert!((t[(1, 1)] - down).norm() < 1e-13, "down entry at u={u}");
        }
    }

    #[test]
    fn poles_and_eta_zero_are_rejected() {
        let ch = chain(&[1.0, 1.5], 0.2);
        let bp = generic_bp();
        assert!(transfer_matrix(C64::new(1.0, 0.0), &ch, &bp).is_err());
        assert!(transfer_matrix(C64::new(-1.5, 0.0), &ch, &bp).is_err());
        assert!(transfer_matrix(ZERO, &ch, &bp).is_err());
        let flat = chain(&[1.0, 1.5], 0.0);
        assert!(transfer_matrix(C64::new(0.3, 0.0), &flat, &bp).is_err());
    }
}
