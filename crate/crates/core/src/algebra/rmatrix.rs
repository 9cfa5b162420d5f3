use crate::linalg::{matmul, rel_fro_diff};
use crate::{C64, CMat};
use ndarray::Array2;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Permutation operator P on C² ⊗ C².
pub fn permutation() -> CMat {
    let mut p = Array2::from_elem((4, 4), ZERO);
    // P |i,j⟩ = |j,i⟩, index = 2i + j.
    p[(0, 0)] = C64::new(1.0, 0.0);
    p[(2, 1)] = C64::new(1.0, 0.0);
    p[(1, 2)] = C64::new(1.0, 0.0);
    p[(3, 3)] = C64::new(1.0, 0.0);
    p
}

/// Rational XXX R-matrix R(u) = u·I + η·P:
///
/// ```text
/// | u+η  0   0   0  |
/// |  0   u   η   0  |
/// |  0   η   u   0  |
/// |  0   0   0  u+η |
/// ```
pub fn r_matrix(u: C64, eta: C64) -> CMat {
    let mut r = Array2::from_elem((4, 4), ZERO);
    r[(0, 0)] = u + eta;
    r[(1, 1)] = u;
    r[(2, 2)] = u;
    r[(3, 3)] = u + eta;
    r[(1, 2)] = eta;
    r[(2, 1)] = eta;
    r
}

/// Embeds a two-site operator on slots (p, q) of an n-fold tensor product of
/// C², slot 0 most significant. Used for the triple-space Yang-Baxter check.
pub(crate) fn embed_pair(op: &CMat, n_slots: usize, p: usize, q: usize) -> CMat {
    assert!(p < q && q < n_slots);
    let dim = 1usize << n_slots;
    let bit = |index: usize, slot: usize| (index >> (n_slots - 1 - slot)) & 1;
    let mut out = Array2::from_elem((dim, dim), ZERO);
    for row in 0..dim {
        let rp = bit(row, p);
        let rq = bit(row, q);
        for col in 0..dim {
            let masked_row = row & !(1 << (n_slots - 1 - p)) & !(1 << (n_slots - 1 - q));
            let masked_col = col & !(1 << (n_slots - 1 - p)) & !(1 << (n_slots - 1 - q));
            if masked_row != masked_col {
                continue;
            }
            let cp = bit(col, p);
            let cq = bit(col, q);
            out[(row, col)] = op[(rp * 2 + rq, cp * 2 + cq)];
        }
    }
    out
}

/// Relative residual of the Yang-Baxter equation
/// R₁₂(u−v) R₁₃(u) R₂₃(v) = R₂₃(v) R₁₃(u) R₁₂(u−v) on (C²)⊗³.
pub fn ybe_residual(u: C64, v: C64, eta: C64) -> f64 {
    ybe_residual_with(u, v, eta, None)
}

/// Same with an optional perturbation of one R₁₂ entry (fault injection for
/// the verification report).
pub(crate) fn ybe_residual_with(u: C64, v: C64, eta: C64, corrupt: Option<f64>) -> f64 {
    let mut r12 = r_matrix(u - v, eta);
    if let Some(size) = corrupt {
        r12[(0, 0)] += C64::new(size, 0.0);
    }
    let r13 = r_matrix(u, eta);
    let r23 = r_matrix(v, eta);
    let e12 = embed_pair(&r12, 3, 0, 1);
    let e13 = embed_pair(&r13, 3, 0, 2);
    let e23 = embed_pair(&r23, 3, 1, 2);
    let lhs = matmul(&matmul(&e12, &e13), &e23);
    let rhs = matmul(&matmul(&e23, &e13), &e12);
    rel_fro_diff(&lhs, &rhs)
}
