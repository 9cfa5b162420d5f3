use crate::{C64, CMat, Error, Result};
use ndarray::Array2;

/// LU factorization with partial pivoting of a square complex matrix.
pub struct Lu {
    lu: CMat,
    piv: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &CMat) -> Result<Lu> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Matrix(format!("LU needs a square matrix, got {:?}", a.dim())));
        }
        let mut lu = a.clone();
        let mut piv = Vec::with_capacity(n);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let m = lu[(i, k)].norm();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Matrix("singular matrix in LU factorization".into()));
            }
            piv.push(p);
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let delta = factor * lu[(k, j)];
                    lu[(i, j)] -= delta;
                }
            }
        }
        Ok(Lu { lu, piv })
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.nrows();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        // The stored multipliers include the effect of later row swaps, so
        // every swap must hit the right-hand side before substitution starts.
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        for k in 0..n {
            for i in k + 1..n {
                let delta = self.lu[(i, k)] * x[k];
                x[i] -= delta;
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                let delta = self.lu[(k, j)] * x[j];
                x[k] -= delta;
            }
            x[k] /= self.lu[(k, k)];
        }
        x
    }

    pub fn inverse(&self) -> CMat {
        let n = self.lu.nrows();
        let mut inv = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve_vec(&e);
            e[j] = C64::new(0.0, 0.0);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Solve a x = b for a single right-hand side.
pub fn solve(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    Ok(Lu::factor(a)?.solve_vec(b))
}

fn inf_norm(a: &CMat) -> f64 {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Infinity-norm condition number via the explicit inverse (fine at these sizes).
pub fn cond_inf(a: &CMat) -> f64 {
    match Lu::factor(a) {
        Ok(lu) => inf_norm(a) * inf_norm(&lu.inverse()),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eye, matmul, rel_fro_diff};
    use ndarray::Array2;

    fn test_matrix(n: usize) -> CMat {
        // Deliberately NOT diagonally dominant so partial pivoting actually
        // permutes rows.
        Array2::from_shape_fn((n, n), |(i, j)| {
            C64::new(
                ((3 * i + 5 * j + 1) % 7) as f64 - 3.0 + if (i + j) % 3 == 0 { 6.0 } else { 0.0 },
                ((i * j + 2) % 5) as f64 - 2.0,
            )
        })
    }

    #[test]
    fn solve_then_multiply_roundtrips() {
        let a = test_matrix(9);
        let b: Vec<C64> = (0..9).map(|i| C64::new(i as f64 - 4.0, 0.5 * i as f64)).collect();
        let x = solve(&a, &b).unwrap();
        for i in 0..9 {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..9 {
                acc += a[(i, j)] * x[j];
            }
            assert!((acc - b[i]).norm() < 1e-11);
        }
    }

    #[test]
    fn inverse_is_two_sided() {
        let a = test_matrix(7);
        let inv = Lu::factor(&a).unwrap().inverse();
        assert!(rel_fro_diff(&matmul(&a, &inv), &eye(7)) < 1e-12);
        assert!(rel_fro_diff(&matmul(&inv, &a), &eye(7)) < 1e-12);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut a = test_matrix(4);
        for j in 0..4 {
            a[(2, j)] = a[(1, j)];
        }
        assert!(cond_inf(&a) > 1e14);
    }
}
