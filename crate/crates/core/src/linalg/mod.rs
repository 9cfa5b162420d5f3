//! Small dense complex linear-algebra kernel.
//!
//! Everything here is sized for desk-scale work (matrices up to a few
//! thousand on a side, polynomials up to degree ~12). The eigensolvers are
//! hand-rolled: a cyclic Jacobi method for Hermitian matrices and a
//! Hessenberg + shifted-QR iteration for general complex matrices, which is
//! all the companion-matrix root extraction and joint-diagonalization work
//! needs.

mod eig;
mod eigh;
mod lsq;
mod lu;
pub mod poly;

pub use eig::{eig_values, eig_vectors};
pub use eigh::eigh;
pub use lsq::lstsq;
pub use lu::{cond_inf, solve, Lu};

use crate::{C64, CMat};
use ndarray::Array2;

/// Complex matrix product.
///
/// Large products are split into four real GEMMs (ndarray's f64 path is
/// SIMD-blocked); small ones go through ndarray's generic complex kernel.
/// Matrices with exactly zero imaginary part skip the null GEMMs entirely.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    if n < 48 || b.ncols() < 48 {
        return a.dot(b);
    }
    let a_real = is_real(a);
    let b_real = is_real(b);
    let ar = a.mapv(|z| z.re);
    let br = b.mapv(|z| z.re);
    if a_real && b_real {
        let cr = ar.dot(&br);
        return cr.mapv(|x| C64::new(x, 0.0));
    }
    let ai = a.mapv(|z| z.im);
    let bi = b.mapv(|z| z.im);
    let mut cr = ar.dot(&br);
    let mut ci = ar.dot(&bi);
    if !a_real {
        cr = cr - ai.dot(&bi);
        ci = ci + ai.dot(&br);
    }
    Array2::from_shape_fn(cr.dim(), |(i, j)| C64::new(cr[(i, j)], ci[(i, j)]))
}

fn is_real(a: &CMat) -> bool {
    a.iter().all(|z| z.im == 0.0)
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Relative Frobenius distance ‖a − b‖ / max(‖a‖, ‖b‖), 0 for two zeros.
pub fn rel_fro_diff(a: &CMat, b: &CMat) -> f64 {
    let scale = fro_norm(a).max(fro_norm(b));
    if scale == 0.0 {
        return 0.0;
    }
    fro_norm(&(a - b)) / scale
}

/// Commutator residual ‖ab − ba‖ / (‖a‖‖b‖).
pub fn commutator_residual(a: &CMat, b: &CMat) -> f64 {
    let scale = fro_norm(a) * fro_norm(b);
    if scale == 0.0 {
        return 0.0;
    }
    let ab = matmul(a, b);
    let ba = matmul(b, a);
    fro_norm(&(&ab - &ba)) / scale
}

/// Complex identity matrix.
pub fn eye(n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Kronecker product (used for the small auxiliary-space embeddings).
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (am, an) = a.dim();
    let (bm, bn) = b.dim();
    Array2::from_shape_fn((am * bm, an * bn), |(i, j)| {
        a[(i / bm, j / bn)] * b[(i % bm, j % bn)]
    })
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

/// Max-norm distance of a matrix from Hermitian, relative to its norm.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let scale = fro_norm(a).max(1e-300);
    fro_norm(&(a - &dagger(a))) / scale
}
