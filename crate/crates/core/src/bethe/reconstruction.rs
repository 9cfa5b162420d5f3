use super::equations::{bae_residual, bae_residual_sector, epsilon_squared};
use super::{BetheRoots, QPolynomial, RootSource};
use crate::linalg::{cond_inf, lstsq, Lu};
use crate::manybody::ModelParams;
use crate::{C64, Error, Result};
use ndarray::Array2;

const COND_CAP: f64 = 1e12;

/// Recovers the monic root polynomial Q from conserved-operator eigenvalues.
///
/// The eigenvalue formula gives Σ_i 1/(ε_j² − v_i²) = T_j with
///
/// ```text
/// T_j = [Σ_{k≠j} ε_j²/(ε_j²−ε_k²) − α − λ_j*] / (2ε_j²),
/// ```
///
/// and since Σ_i 1/(x − v_i²) = Q′(x)/Q(x), the L conditions
/// Q′(ε_j²) = T_j Q(ε_j²) are linear in the L unknown non-leading
/// coefficients of monic Q. Roots are then extracted via the companion
/// matrix and the BAE residual of the result is recorded.
pub fn roots_from_conserved(lambda_star: &[C64], params: &ModelParams) -> Result<BetheRoots> {
    let l = params.length();
    if lambda_star.len() != l {
        return Err(Error::invalid(format!(
            "expected {l} conserved eigenvalues, got {}",
            lambda_star.len()
        )));
    }
    if lambda_star.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("conserved eigenvalues must be finite"));
    }
    let targets = log_derivative_targets(lambda_star, params);
    let eps2 = epsilon_squared(params);

    // Row j: Σ_m c_m (m ε_j^{2(m−1)} − T_j ε_j^{2m}) = T_j ε_j^{2L} − L ε_j^{2(L−1)}.
    let mut a = Array2::from_elem((l, l), C64::new(0.0, 0.0));
    let mut b = vec![C64::new(0.0, 0.0); l];
    for j in 0..l {
        let x = eps2[j];
        let t = targets[j];
        let mut xp = C64::new(1.0, 0.0); // x^m
        let mut xpm1 = C64::new(0.0, 0.0); // m·x^{m−1}
        for m in 0..l {
            a[(j, m)] = xpm1 - t * xp;
            xpm1 = (m as f64 + 1.0) * xp;
            xp *= x;
        }
        // xp = x^L, xpm1 = L·x^{L−1} after the loop.
        b[j] = t * xp - xpm1;
    }
    let cond = cond_inf(&a);
    if !cond.is_finite() || cond > COND_CAP {
        return Err(Error::IllConditioned { cond });
    }
    let coeffs = Lu::factor(&a)?.solve_vec(&b);
    let mut q = coeffs;
    q.push(C64::new(1.0, 0.0));
    let qpoly = QPolynomial::from_coeffs(q)?;
    let squared = qpoly.roots()?;
    let roots = BetheRoots::from_squared(squared, RootSource::Reconstruction);
    let residual = match bae_residual(&roots, params) {
        Ok(r) => r.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    Ok(roots.with_residual(residual))
}

/// Sector-resolved reconstruction for the closed model (γλ = 0): a monic Q
/// of degree M < L is fit to the L conditions by least squares (the system
/// is consistent exactly when the state carries M finite roots).
pub fn roots_from_conserved_sector(
    lambda_star: &[C64],
    params: &ModelParams,
    m_roots: usize,
) -> Result<BetheRoots> {
    let l = params.length();
    if lambda_star.len() != l {
        return Err(Error::invalid(format!(
            "expected {l} conserved eigenvalues, got {}",
            lambda_star.len()
        )));
    }
    if m_roots > l {
        return Err(Error::invalid("sector root count exceeds chain length"));
    }
    let eps2 = epsilon_squared(params);
    let targets = log_derivative_targets(lambda_star, params);
    if m_roots == 0 {
        let roots = BetheRoots::from_y(vec![], RootSource::Reconstruction);
        return Ok(roots.with_residual(0.0));
    }
    let mut a = Array2::from_elem((l, m_roots), C64::new(0.0, 0.0));
    let mut b = vec![C64::new(0.0, 0.0); l];
    for j in 0..l {
        let x = eps2[j];
        let t = targets[j];
        let mut xp = C64::new(1.0, 0.0);
        let mut xpm1 = C64::new(0.0, 0.0);
        for m in 0..m_roots {
            a[(j, m)] = xpm1 - t * xp;
            xpm1 = (m as f64 + 1.0) * xp;
            xp *= x;
        }
        b[j] = t * xp - xpm1;
    }
    let coeffs = lstsq(&a, &b)?;
    let mut q = coeffs;
    q.push(C64::new(1.0, 0.0));
    let qpoly = QPolynomial::from_coeffs(q)?;
    let finite = qpoly.roots()?;
    let residual = match bae_residual_sector(&finite, params) {
        Ok(r) => r.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    // Pad with roots at infinity up to length L.
    let mut y: Vec<C64> = finite.iter().map(|&s| 1.0 / s).collect();
    y.resize(l, C64::new(0.0, 0.0));
    Ok(BetheRoots::from_y(y, RootSource::Reconstruction).with_residual(residual))
}

fn log_derivative_targets(lambda_star: &[C64], params: &ModelParams) -> Vec<C64> {
    let eps2 = epsilon_squared(params);
    let alpha = C64::new(params.alpha(), 0.0);
    (0..params.length())
        .map(|j| {
            let ej = eps2[j];
            let mut acc = -alpha - lambda_star[j];
            for (k, &e) in eps2.iter().enumerate() {
                if k != j {
                    acc += ej / (ej - e);
                }
            }
            acc / (2.0 * ej)
        })
        .collect()
}
