use crate::{C64, CMat, Error, Result};
use ndarray::Array2;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvector columns. Jacobi is slower than tridiagonalization but its
/// eigenvectors are orthonormal to machine precision even across tight
/// eigenvalue clusters, which the joint-diagonalization refinement relies on.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Matrix(format!("eigh needs a square matrix, got {:?}", a.dim())));
    }
    let defect = crate::linalg::hermiticity_defect(a);
    if defect > 1e-10 {
        return Err(Error::Matrix(format!(
            "eigh input is not Hermitian (relative defect {defect:.3e})"
        )));
    }
    if n == 0 {
        return Ok((vec![], Array2::from_elem((0, 0), C64::new(0.0, 0.0))));
    }

    let mut m = a.clone();
    // Symmetrize away the representable part of the defect.
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = crate::linalg::eye(n);
    let norm = crate::linalg::fro_norm(&m).max(1e-300);
    let tol = 1e-14 * norm;

    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let alpha = apq / mag; // phase
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J[p,p] = c·α, J[p,q] = s·α, J[q,p] = −s, J[q,q] = c
                let jpp = alpha * c;
                let jpq = alpha * s;

                for i in 0..n {
                    let aip = m[(i, p)];
                    let aiq = m[(i, q)];
                    m[(i, p)] = aip * jpp - aiq * s;
                    m[(i, q)] = aip * jpq + aiq * c;
                }
                for i in 0..n {
                    let api = m[(p, i)];
                    let aqi = m[(q, i)];
                    m[(p, i)] = api * jpp.conj() - aqi * s;
                    m[(q, i)] = api * jpq.conj() + aqi * c;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * jpp - viq * s;
                    v[(i, q)] = vip * jpq + viq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_col)] = v[(i, old_col)];
        }
    }
    Ok((eigenvalues, vectors))
}
