use super::rmatrix::r_matrix;
use super::ChainSpec;
use crate::linalg::{kron, matmul, rel_fro_diff};
use crate::manybody::{site_operator, SpinOp};
use crate::{C64, CMat, Error, Result, POLE_GUARD};
use ndarray::Array2;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// The Lax operator as a 2×2 auxiliary-space block matrix of 2^L
/// many-body operators:
///
/// ```text
/// L_{aj}(u) = I + (η/u) [ S_j^z  S_j^− ]
///                       [ S_j^+ −S_j^z ]
/// ```
pub(crate) struct LaxBlocks {
    pub b: [[CMat; 2]; 2],
}

pub(crate) fn lax_blocks(u: C64, site: usize, chain: &ChainSpec) -> Result<LaxBlocks> {
    let l = chain.length();
    if site == 0 || site > l {
        return Err(Error::IndexOutOfRange { index: site, len: l });
    }
    if u.norm() < POLE_GUARD {
        return Err(Error::NearPole { u, pole: ZERO, guard: POLE_GUARD });
    }
    let f = chain.eta() / u;
    let dim = 1usize << l;
    let sz = site_operator(SpinOp::Z, site, l)?;
    let sp = site_operator(SpinOp::Plus, site, l)?;
    let sm = site_operator(SpinOp::Minus, site, l)?;
    let mut b00 = sz.mapv(|x| f * x);
    let mut b11 = sz.mapv(|x| -f * x);
    for i in 0..dim {
        b00[(i, i)] += ONE;
        b11[(i, i)] += ONE;
    }
    Ok(LaxBlocks {
        b: [
            [b00, sm.mapv(|x| f * x)],
            [sp.mapv(|x| f * x), b11],
        ],
    })
}

/// Assembles 2×2 auxiliary blocks into the full matrix on auxiliary ⊗
/// physical space (dimension 2·2^L, auxiliary index most significant).
pub(crate) fn blocks_to_matrix(blocks: &LaxBlocks) -> CMat {
    let dim = blocks.b[0][0].nrows();
    let mut out = Array2::from_elem((2 * dim, 2 * dim), ZERO);
    for a in 0..2 {
        for b in 0..2 {
            let block = &blocks.b[a][b];
            for i in 0..dim {
                for k in 0..dim {
                    out[(a * dim + i, b * dim + k)] = block[(i, k)];
                }
            }
        }
    }
    out
}

/// The Lax operator embedded on auxiliary ⊗ physical space (dim 2·2^L).
pub fn lax(u: C64, site: usize, chain: &ChainSpec) -> Result<CMat> {
    Ok(blocks_to_matrix(&lax_blocks(u, site, chain)?))
}

/// Relative residual of the inversion identity
/// L(u) L(η−u) = (1 + η² (3/4) / (u(η−u))) · I for spin 1/2.
pub fn lax_inverse_residual(u: C64, site: usize, chain: &ChainSpec) -> Result<f64> {
    let eta = chain.eta();
    let product = matmul(&lax(u, site, chain)?, &lax(eta - u, site, chain)?);
    let scalar = ONE + eta * eta * C64::new(0.75, 0.0) / (u * (eta - u));
    let dim = product.nrows();
    let want = crate::linalg::eye(dim).mapv(|x| scalar * x);
    Ok(rel_fro_diff(&product, &want))
}

/// Embeds a Lax block matrix acting on one of two auxiliary slots into the
/// space V_a ⊗ V_b ⊗ H (dimension 4·2^L); slot 0 is the most significant.
fn embed_on_aux_slot(blocks: &LaxBlocks, slot: usize) -> CMat {
    let dim = blocks.b[0][0].nrows();
    let mut out = Array2::from_elem((4 * dim, 4 * dim), ZERO);
    for aa in 0..2usize {
        for bb in 0..2usize {
            for aa2 in 0..2usize {
                for bb2 in 0..2usize {
                    // Identity on the untouched slot.
                    let (act, act2, spect, spect2) = if slot == 0 {
                        (aa, aa2, bb, bb2)
                    } else {
                        (bb, bb2, aa, aa2)
                    };
                    if spect != spect2 {
                        continue;
                    }
                    let block = &blocks.b[act][act2];
                    let row_base = (aa * 2 + bb) * dim;
                    let col_base = (aa2 * 2 + bb2) * dim;
                    for i in 0..dim {
                        for k in 0..dim {
                            out[(row_base + i, col_base + k)] = block[(i, k)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Relative residual of the RLL relation
/// R_ab(u−v) L_aj(u) L_bj(v) = L_bj(v) L_aj(u) R_ab(u−v) on V_a ⊗ V_b ⊗ H.
pub fn rll_residual(u: C64, v: C64, site: usize, chain: &ChainSpec) -> Result<f64> {
    let dim = 1usize << chain.length();
    let r = kron(&r_matrix(u - v, chain.eta()), &crate::linalg::eye(dim));
    let la = embed_on_aux_slot(&lax_blocks(u, site, chain)?, 0);
    let lb = embed_on_aux_slot(&lax_blocks(v, site, chain)?, 1);
    let lhs = matmul(&matmul(&r, &la), &lb);
    let rhs = matmul(&matmul(&lb, &la), &r);
    Ok(rel_fro_diff(&lhs, &rhs))
}
