use crate::{C64, CMat, Error, Result};
use ndarray::Array2;

/// Eigenvalues of a general complex matrix: balancing, Householder
/// Hessenberg reduction, then explicitly shifted QR with Wilkinson shifts.
///
/// Sized for the small matrices this crate diagonalizes (companion matrices
/// of degree ≤ 12, few-site transfer matrices); no eigenvector accumulation.
pub fn eig_values(a: &CMat) -> Result<Vec<C64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Matrix(format!("eig needs a square matrix, got {:?}", a.dim())));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    qr_eigenvalues(h)
}

/// Right eigenvectors by inverse iteration at the given (already computed)
/// eigenvalues. Columns are normalized to unit length.
pub fn eig_vectors(a: &CMat, eigenvalues: &[C64]) -> Result<CMat> {
    let n = a.nrows();
    let scale = crate::linalg::fro_norm(a).max(1e-300);
    let mut vecs = Array2::from_elem((n, eigenvalues.len()), C64::new(0.0, 0.0));
    for (col, &lambda) in eigenvalues.iter().enumerate() {
        // Tiny diagonal shift keeps the solve nonsingular at an exact eigenvalue.
        let shift = lambda + C64::new(1e-12 * scale, 1e-13 * scale);
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= shift;
        }
        let lu = crate::linalg::Lu::factor(&shifted)?;
        let mut x: Vec<C64> = (0..n)
            .map(|i| C64::new(1.0 + (i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        for _ in 0..3 {
            let y = lu.solve_vec(&x);
            let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            x = y.iter().map(|z| z / norm).collect();
        }
        for i in 0..n {
            vecs[(i, col)] = x[i];
        }
    }
    Ok(vecs)
}

/// Parlett-Reinsch style balancing with radix-2 scaling.
fn balance(a: &mut CMat) {
    let n = a.nrows();
    let radix = 2.0f64;
    for _ in 0..32 {
        let mut converged = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let mut cc = c;
            let s = c + r;
            while cc < r / radix {
                f *= radix;
                cc *= radix * radix;
            }
            while cc > r * radix {
                f /= radix;
                cc /= radix * radix;
            }
            if (cc + r / f) < 0.95 * s && f != 1.0 {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

fn hessenberg(a: &mut CMat) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        let mut sigma = 0.0;
        for i in k + 1..n {
            sigma += a[(i, k)].norm_sqr();
        }
        if sigma.sqrt() < 1e-300 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0.norm() == 0.0 {
            C64::new(-sigma.sqrt(), 0.0)
        } else {
            -(x0 / x0.norm()) * sigma.sqrt()
        };
        let mut v: Vec<C64> = vec![C64::new(0.0, 0.0); n];
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[(i, k)];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            continue;
        }
        // A ← (I − 2vvᴴ/‖v‖²) A (I − 2vvᴴ/‖v‖²)
        for j in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in k + 1..n {
                dot += v[i].conj() * a[(i, j)];
            }
            let f = 2.0 * dot / vnorm2;
            for i in k + 1..n {
                let delta = f * v[i];
                a[(i, j)] -= delta;
            }
        }
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for j in k + 1..n {
                dot += a[(i, j)] * v[j];
            }
            let f = 2.0 * dot / vnorm2;
            for j in k + 1..n {
                let delta = f * v[j].conj();
                a[(i, j)] -= delta;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

fn eig_2x2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let mut l1 = 0.5 * (tr + disc);
    let mut l2 = 0.5 * (tr - disc);
    // Evaluate the smaller root from the product to dodge cancellation.
    if l1.norm() >= l2.norm() && l1.norm() > 0.0 {
        l2 = det / l1;
    } else if l2.norm() > 0.0 {
        l1 = det / l2;
    }
    (l1, l2)
}

fn qr_eigenvalues(mut h: CMat) -> Result<Vec<C64>> {
    let n = h.nrows();
    let zero = C64::new(0.0, 0.0);
    let mut eigenvalues = vec![zero; n];
    let mut hi = n - 1;
    let mut iters = 0usize;
    let eps = f64::EPSILON;

    loop {
        // Find the top of the unreduced block ending at hi, zeroing any
        // negligible subdiagonal encountered on the way up.
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(lo, lo - 1)].norm() <= eps * s {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eigenvalues[hi] = h[(hi, hi)];
            if hi == 0 {
                return Ok(eigenvalues);
            }
            hi -= 1;
            iters = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig_2x2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigenvalues[lo] = l1;
            eigenvalues[hi] = l2;
            if lo == 0 {
                return Ok(eigenvalues);
            }
            hi = lo - 1;
            iters = 0;
            continue;
        }

        iters += 1;
        if iters > 60 * n {
            return Err(Error::NoConvergence {
                iters,
                residual: h[(hi, hi - 1)].norm(),
            });
        }
        let mu = if iters % 12 == 0 {
            // Exceptional shift to break rare symmetric stalls.
            h[(hi, hi)] + C64::new(1.5 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let (l1, l2) =
                eig_2x2(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            if (l1 - h[(hi, hi)]).norm() <= (l2 - h[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };

        // Explicit shifted QR step restricted to the active window:
        // H ← Q ᴴ (H − μI) Q + μI with Q from Givens elimination of the
        // subdiagonal. Off-window coupling blocks never feed back into the
        // window's eigenvalues, so they are left untouched.
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let x = h[(i, i)];
            let y = h[(i + 1, i)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (C64::new(1.0, 0.0), zero)
            } else {
                (x.conj() / r, y.conj() / r)
            };
            rotations.push((c, s));
            for j in i..=hi {
                let top = h[(i, j)];
                let bot = h[(i + 1, j)];
                h[(i, j)] = c * top + s * bot;
                h[(i + 1, j)] = -s.conj() * top + c.conj() * bot;
            }
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let i = lo + idx;
            let rmax = (i + 1).min(hi);
            for r in lo..=rmax {
                let left = h[(r, i)];
                let right = h[(r, i + 1)];
                h[(r, i)] = c.conj() * left + s.conj() * right;
                h[(r, i + 1)] = -s * left + c * right;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
}
