use crate::{C64, CMat, Error, Result};

/// Least-squares solution of an overdetermined complex system by Householder
/// QR. Returns the minimizer of ‖a x − b‖₂ for a with full column rank.
pub fn lstsq(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    let (m, n) = a.dim();
    if b.len() != m {
        return Err(Error::Matrix(format!("lstsq rhs length {} vs {} rows", b.len(), m)));
    }
    if m < n {
        return Err(Error::Matrix(format!("lstsq needs m ≥ n, got {m} × {n}")));
    }
    let mut r = a.clone();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let mut sigma = 0.0;
        for i in k..m {
            sigma += r[(i, k)].norm_sqr();
        }
        let sigma = sigma.sqrt();
        if sigma < 1e-300 {
            return Err(Error::Matrix("rank-deficient least-squares system".into()));
        }
        let x0 = r[(k, k)];
        let alpha = if x0.norm() == 0.0 {
            C64::new(-sigma, 0.0)
        } else {
            -(x0 / x0.norm()) * sigma
        };
        let mut v = vec![C64::new(0.0, 0.0); m];
        v[k] = x0 - alpha;
        for i in k + 1..m {
            v[i] = r[(i, k)];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            continue;
        }
        for j in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in k..m {
                dot += v[i].conj() * r[(i, j)];
            }
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                let delta = f * v[i];
                r[(i, j)] -= delta;
            }
        }
        let mut dot = C64::new(0.0, 0.0);
        for i in k..m {
            dot += v[i].conj() * rhs[i];
        }
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            let delta = f * v[i];
            rhs[i] -= delta;
        }
    }
    // Back substitution on the upper-triangular n×n block.
    let mut x = vec![C64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        for j in k + 1..n {
            acc -= r[(k, j)] * x[j];
        }
        let pivot = r[(k, k)];
        if pivot.norm() < 1e-300 {
            return Err(Error::Matrix("rank-deficient least-squares system".into()));
        }
        x[k] = acc / pivot;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn consistent_overdetermined_system_is_solved_exactly() {
        let m = 7;
        let n = 3;
        let a = Array2::from_shape_fn((m, n), |(i, j)| {
            C64::new((i + 1) as f64 + 0.3 * j as f64, ((i * j) % 3) as f64 * 0.4)
        });
        let x_true = vec![C64::new(1.5, -0.5), C64::new(-2.0, 0.25), C64::new(0.75, 1.0)];
        let b: Vec<C64> = (0..m)
            .map(|i| (0..n).map(|j| a[(i, j)] * x_true[j]).sum())
            .collect();
        let x = lstsq(&a, &b).unwrap();
        for (g, w) in x.iter().zip(x_true.iter()) {
            assert!((g - w).norm() < 1e-11);
        }
    }

    #[test]
    fn residual_is_orthogonal_to_column_space() {
        let m = 6;
        let n = 2;
        let a = Array2::from_shape_fn((m, n), |(i, j)| {
            C64::new((2 * i + j + 1) as f64 % 5.0, (i as f64 - j as f64) * 0.2)
        });
        let b: Vec<C64> = (0..m).map(|i| C64::new(i as f64 - 2.5, 0.7)).collect();
        let x = lstsq(&a, &b).unwrap();
        let resid: Vec<C64> = (0..m)
            .map(|i| b[i] - (0..n).map(|j| a[(i, j)] * x[j]).sum::<C64>())
            .collect();
        for j in 0..n {
            let dot: C64 = (0..m).map(|i| a[(i, j)].conj() * resid[i]).sum();
            assert!(dot.norm() < 1e-11, "column {j} not orthogonal: {dot}");
        }
    }
}
