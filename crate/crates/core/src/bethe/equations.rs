use super::BetheRoots;
use crate::algebra::{ChainSpec, EtaExpansion};
use crate::manybody::ModelParams;
use crate::{C64, CMat, Error, Result};
use ndarray::Array2;

const ONE: C64 = C64::new(1.0, 0.0);

fn check_squared_roots(squared: &[C64], eps2: &[C64]) -> Result<()> {
    let scale = squared.iter().map(|s| s.norm()).fold(1.0f64, f64::max);
    for (k, &s) in squared.iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::SingularRoots { index: k, reason: "root at infinity".into() });
        }
        if s.norm() < 1e-13 * scale {
            return Err(Error::SingularRoots { index: k, reason: "v_k^2 = 0".into() });
        }
        for (i, &si) in squared.iter().enumerate().skip(k + 1) {
            if (s - si).norm() < 1e-13 * scale {
                return Err(Error::SingularRoots {
                    index: i,
                    reason: format!("v_{}^2 collides with v_{}^2", i + 1, k + 1),
                });
            }
        }
        for (l, &e) in eps2.iter().enumerate() {
            if (s - e).norm() < 1e-13 * scale.max(e.norm()) {
                return Err(Error::SingularRoots {
                    index: k,
                    reason: format!("v_{}^2 = epsilon_{}^2", k + 1, l + 1),
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn epsilon_squared(params: &ModelParams) -> Vec<C64> {
    params.epsilons().iter().map(|&e| C64::new(e * e, 0.0)).collect()
}

/// Residuals of the quasi-classical BAE in the squared-root variables:
///
/// ```text
/// (α+1)/v_k² + Σ_{i≠k} 2/(v_k²−v_i²) − Σ_l 1/(v_k²−ε_l²)
///   − (γλ / 4v_k²) ∏_l (v_k²−ε_l²) / ∏_{i≠k} (v_k²−v_i²)
/// ```
pub fn bae_residual(roots: &BetheRoots, params: &ModelParams) -> Result<Vec<C64>> {
    let eps2 = epsilon_squared(params);
    let s = roots.squared();
    check_squared_roots(s, &eps2)?;
    let alpha = C64::new(params.alpha(), 0.0);
    let gl = C64::new(params.gamma_lambda(), 0.0);
    Ok(residual_v_inner(s, &eps2, alpha, gl))
}

pub(crate) fn residual_v_inner(s: &[C64], eps2: &[C64], alpha: C64, gamma_lambda: C64) -> Vec<C64> {
    let n = s.len();
    (0..n)
        .map(|k| {
            let sk = s[k];
            let mut r = (alpha + ONE) / sk;
            for (i, &si) in s.iter().enumerate() {
                if i != k {
                    r += 2.0 / (sk - si);
                }
            }
            for &e in eps2 {
                r -= ONE / (sk - e);
            }
            if gamma_lambda.norm() > 0.0 {
                let mut prod = ONE;
                for &e in eps2 {
                    prod *= sk - e;
                }
                for (i, &si) in s.iter().enumerate() {
                    if i != k {
                        prod /= sk - si;
                    }
                }
                r -= gamma_lambda / (4.0 * sk) * prod;
            }
            r
        })
        .collect()
}

/// Analytic Jacobian of [`bae_residual`] with respect to the squared roots.
pub(crate) fn jacobian_v_inner(s: &[C64], eps2: &[C64], alpha: C64, gamma_lambda: C64) -> CMat {
    let n = s.len();
    let mut j = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n {
        let sk = s[k];
        let mut prod = ONE;
        for &e in eps2 {
            prod *= sk - e;
        }
        for (i, &si) in s.iter().enumerate() {
            if i != k {
                prod /= sk - si;
            }
        }
        let t = gamma_lambda / (4.0 * sk) * prod;
        let mut diag = -(alpha + ONE) / (sk * sk);
        for &e in eps2 {
            diag += ONE / ((sk - e) * (sk - e));
        }
        let mut logder = -ONE / sk;
        for &e in eps2 {
            logder += ONE / (sk - e);
        }
        for (i, &si) in s.iter().enumerate() {
            if i != k {
                diag -= 2.0 / ((sk - si) * (sk - si));
                logder -= ONE / (sk - si);
                j[(k, i)] = 2.0 / ((sk - si) * (sk - si)) - t / (sk - si);
            }
        }
        j[(k, k)] = diag - t * logder;
    }
    j
}

/// Residuals of the BAE in the inverse variables y_k = v_k⁻², z_l = ε_l⁻¹:
///
/// ```text
/// 1 + G⁻¹ + Σ_{i≠k} 2y_i/(y_i−y_k) + Σ_l z_l²/(y_k−z_l²)
///   + (Γ²/G² y_k) ∏_l (1−y_k z_l⁻²) / ∏_{i≠k} (1−y_k y_i⁻¹)
/// ```
///
/// The zero set coincides with [`bae_residual`]: the two residuals differ by
/// the factor v_k².
pub fn bae_residual_y(y: &[C64], params: &ModelParams) -> Result<Vec<C64>> {
    let scale = y.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
    for (k, &yk) in y.iter().enumerate() {
        if yk.norm() < 1e-13 * scale {
            return Err(Error::SingularRoots { index: k, reason: "y_k = 0".into() });
        }
        for (i, &yi) in y.iter().enumerate().skip(k + 1) {
            if (yk - yi).norm() < 1e-13 * scale {
                return Err(Error::SingularRoots {
                    index: i,
                    reason: format!("y_{} collides with y_{}", i + 1, k + 1),
                });
            }
        }
    }
    let z2: Vec<C64> = params.z().iter().map(|&z| C64::new(z * z, 0.0)).collect();
    for (k, &yk) in y.iter().enumerate() {
        for &z in &z2 {
            if (yk - z).norm() < 1e-13 * scale.max(z.norm()) {
                return Err(Error::SingularRoots { index: k, reason: "y_k = z_l^2".into() });
            }
        }
    }
    Ok(residual_y_inner(y, &z2, params.g(), params.gamma()))
}

pub(crate) fn residual_y_inner(y: &[C64], z2: &[C64], g: f64, big_gamma: f64) -> Vec<C64> {
    let n = y.len();
    let w = C64::new(big_gamma * big_gamma / (g * g), 0.0);
    (0..n)
        .map(|k| {
            let yk = y[k];
            let mut r = C64::new(1.0 + 1.0 / g, 0.0);
            for (i, &yi) in y.iter().enumerate() {
                if i != k {
                    r += 2.0 * yi / (yi - yk);
                }
            }
            for &z in z2 {
                r += z / (yk - z);
            }
            if w.norm() > 0.0 {
                let mut prod = ONE;
                for &z in z2 {
                    prod *= ONE - yk / z;
                }
                for (i, &yi) in y.iter().enumerate() {
                    if i != k {
                        prod /= ONE - yk / yi;
                    }
                }
                r += w / yk * prod;
            }
            r
        })
        .collect()
}

/// Analytic Jacobian of [`bae_residual_y`].
pub(crate) fn jacobian_y_inner(y: &[C64], z2: &[C64], g: f64, big_gamma: f64) -> CMat {
    let n = y.len();
    let w = C64::new(big_gamma * big_gamma / (g * g), 0.0);
    let mut j = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n {
        let yk = y[k];
        let mut prod = ONE;
        for &z in z2 {
            prod *= ONE - yk / z;
        }
        for (i, &yi) in y.iter().enumerate() {
            if i != k {
                prod /= ONE - yk / yi;
            }
        }
        let wk = w / yk * prod;
        let mut diag = C64::new(0.0, 0.0);
        for &z in z2 {
            diag -= z / ((yk - z) * (yk - z));
        }
        let mut dlog = -ONE / yk;
        for &z in z2 {
            dlog += (-ONE / z) / (ONE - yk / z);
        }
        for (i, &yi) in y.iter().enumerate() {
            if i != k {
                diag += 2.0 * yi / ((yi - yk) * (yi - yk));
                dlog += (ONE / yi) / (ONE - yk / yi);
                let mut od = -2.0 * yk / ((yi - yk) * (yi - yk));
                od -= wk * yk / (yi * (yi - yk));
                j[(k, i)] = od;
            }
        }
        j[(k, k)] = diag + wk * dlog;
    }
    j
}

/// Closed-model (γλ = 0) sector residuals: M finite roots against all L
/// levels, with no inhomogeneous term.
pub fn bae_residual_sector(squared: &[C64], params: &ModelParams) -> Result<Vec<C64>> {
    let eps2 = epsilon_squared(params);
    check_squared_roots(squared, &eps2)?;
    let alpha = C64::new(params.alpha(), 0.0);
    Ok(residual_v_inner(squared, &eps2, alpha, C64::new(0.0, 0.0)))
}

/// Residuals of the nine-parameter quasi-classical BAE, normalized by 1/v_k²
/// so that the reduced case β = ψ = φ = δ = μ = ξ = 0 reproduces
/// [`bae_residual`] identically (not merely up to a factor):
///
/// ```text
/// A/v_k² + ((ψφ+1) − ξ²/v_k²)(Σ_{i≠k} 2/(v_k²−v_i²) − Σ_l 1/(v_k²−ε_l²))
///   − (B/4v_k²) ∏_l (v_k²−ε_l²) / ∏_{i≠k} (v_k²−v_i²)
/// ```
///
/// with A = (α+β)√(ψφ+1) + (ψφ+1) − ξ((λ−μ)ψ+(γ−δ)φ)/(2√(ψφ+1)) and
/// B = (γ−δ)(λ−μ) − ((λ−μ)ψ+(γ−δ)φ)²/(4(ψφ+1)).
pub fn bae_residual_general(
    roots: &BetheRoots,
    chain: &ChainSpec,
    ep: &EtaExpansion,
) -> Result<Vec<C64>> {
    let eps2: Vec<C64> = chain.inhomogeneities().iter().map(|&e| e * e).collect();
    let s = roots.squared();
    check_squared_roots(s, &eps2)?;
    let (a_const, b_const, psiphi1) = general_constants(ep)?;
    Ok(residual_general_inner(s, &eps2, a_const, b_const, psiphi1, ep.xi))
}

pub(crate) fn general_constants(ep: &EtaExpansion) -> Result<(C64, C64, C64)> {
    let sq = ep.sqrt_psi_phi()?;
    let psiphi1 = ep.psi * ep.phi + ONE;
    let cross = (ep.lambda - ep.mu) * ep.psi + (ep.gamma - ep.delta) * ep.phi;
    let a_const = (ep.alpha + ep.beta) * sq + psiphi1 - ep.xi * cross / (2.0 * sq);
    let b_const = (ep.gamma - ep.delta) * (ep.lambda - ep.mu) - cross * cross / (4.0 * psiphi1);
    Ok((a_const, b_const, psiphi1))
}

pub(crate) fn residual_general_inner(
    s: &[C64],
    eps2: &[C64],
    a_const: C64,
    b_const: C64,
    psiphi1: C64,
    xi: C64,
) -> Vec<C64> {
    let n = s.len();
    (0..n)
        .map(|k| {
            let sk = s[k];
            let mut sums = C64::new(0.0, 0.0);
            for (i, &si) in s.iter().enumerate() {
                if i != k {
                    sums += 2.0 / (sk - si);
                }
            }
            for &e in eps2 {
                sums -= ONE / (sk - e);
            }
            let mut prod = ONE;
            for &e in eps2 {
                prod *= sk - e;
            }
            for (i, &si) in s.iter().enumerate() {
                if i != k {
                    prod /= sk - si;
                }
            }
            a_const / sk + (psiphi1 - xi * xi / sk) * sums - b_const / (4.0 * sk) * prod
        })
        .collect()
}

/// Analytic Jacobian of [`bae_residual_general`].
pub(crate) fn jacobian_general_inner(
    s: &[C64],
    eps2: &[C64],
    a_const: C64,
    b_const: C64,
    psiphi1: C64,
    xi: C64,
) -> CMat {
    let n = s.len();
    let mut j = Array2::from_elem((n, n), C64::new(0.0, 0.0));
    for k in 0..n {
        let sk = s[k];
        let ck = psiphi1 - xi * xi / sk;
        let mut sums = C64::new(0.0, 0.0);
        let mut sums_deriv = C64::new(0.0, 0.0);
        let mut prod = ONE;
        let mut logder = -ONE / sk;
        for &e in eps2 {
            sums -= ONE / (sk - e);
            sums_deriv += ONE / ((sk - e) * (sk - e));
            prod *= sk - e;
            logder += ONE / (sk - e);
        }
        for (i, &si) in s.iter().enumerate() {
            if i != k {
                sums += 2.0 / (sk - si);
                sums_deriv -= 2.0 / ((sk - si) * (sk - si));
                prod /= sk - si;
                logder -= ONE / (sk - si);
            }
        }
        let t = b_const / (4.0 * sk) * prod;
        for (i, &si) in s.iter().enumerate() {
            if i != k {
                j[(k, i)] = ck * 2.0 / ((sk - si) * (sk - si)) - t / (sk - si);
            }
        }
        j[(k, k)] =
            -a_const / (sk * sk) + (xi * xi / (sk * sk)) * sums + ck * sums_deriv - t * logder;
    }
    j
}

/// Eigenvalue of the reduced conserved operator τ_j* at a root set:
///
/// ```text
/// λ_j* = Σ_{k≠j} ε_j²/(ε_j²−ε_k²) − Σ_i 2ε_j²/(ε_j²−v_i²) − α
/// ```
///
/// Roots at infinity contribute nothing to the middle sum.
pub fn qc_conserved_eigenvalue(
    j: usize,
    roots: &BetheRoots,
    params: &ModelParams,
) -> Result<C64> {
    let l = params.length();
    if j == 0 || j > l {
        return Err(Error::IndexOutOfRange { index: j, len: l });
    }
    let eps2 = epsilon_squared(params);
    let ej = eps2[j - 1];
    let mut acc = -C64::new(params.alpha(), 0.0);
    for (k, &e) in eps2.iter().enumerate() {
        if k != j - 1 {
            acc += ej / (ej - e);
        }
    }
    for (i, &s) in roots.squared().iter().enumerate() {
        if roots.at_infinity()[i] {
            continue;
        }
        let denom = ej - s;
        if denom.norm() < 1e-13 * ej.norm().max(s.norm()) {
            return Err(Error::SingularRoots {
                index: i,
                reason: format!("v_{}^2 = epsilon_{}^2", i + 1, j),
            });
        }
        acc -= 2.0 * ej / denom;
    }
    Ok(acc)
}

/// Eigenvalue of the nine-parameter conserved operator τ_j at a root set:
///
/// ```text
/// λ_j = (ε_j²(ψφ+1) − ξ²)/ε_j · (Σ_{k≠j} ε_j²/(ε_j²−ε_k²) − Σ_i 2ε_j²/(ε_j²−v_i²) + 3/4)
///       − ε_j(ψφ+1) − (α+β)ε_j√(ψφ+1) + ξε_j((λ−μ)ψ+(γ−δ)φ)/(2√(ψφ+1))
/// ```
pub fn qc_conserved_eigenvalue_general(
    j: usize,
    roots: &BetheRoots,
    chain: &ChainSpec,
    ep: &EtaExpansion,
) -> Result<C64> {
    let l = chain.length();
    if j == 0 || j > l {
        return Err(Error::IndexOutOfRange { index: j, len: l });
    }
    let sq = ep.sqrt_psi_phi()?;
    let psiphi1 = ep.psi * ep.phi + ONE;
    let eps = chain.inhomogeneities();
    let ej = eps[j - 1];
    let ej2 = ej * ej;
    let mut sums = C64::new(0.75, 0.0);
    for (k, &e) in eps.iter().enumerate() {
        if k != j - 1 {
            sums += ej2 / (ej2 - e * e);
        }
    }
    for (i, &s) in roots.squared().iter().enumerate() {
        if roots.at_infinity()[i] {
            continue;
        }
        let denom = ej2 - s;
        if denom.norm() < 1e-13 * ej2.norm().max(s.norm()) {
            return Err(Error::SingularRoots {
                index: i,
                reason: format!("v_{}^2 = epsilon_{}^2", i + 1, j),
            });
        }
        sums -= 2.0 * ej2 / denom;
    }
    let cross = (ep.lambda - ep.mu) * ep.psi + (ep.gamma - ep.delta) * ep.phi;
    Ok((ej2 * psiphi1 - ep.xi * ep.xi) / ej * sums - ej * psiphi1
        - (ep.alpha + ep.beta) * ej * sq
        + ep.xi * ej * cross / (2.0 * sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::RootSource;

    fn params() -> ModelParams {
        ModelParams::new(vec![1.0, 1.35, 1.8], 0.8, 0.3).unwrap()
    }

    #[test]
    fn single_level_closed_model_root_is_exact() {
        // ℒ=1, Γ=0: v² = ε²(α+1)/α solves the BAE and gives λ₁* = α.
        let p = ModelParams::new(vec![1.3], 0.8, 0.0).unwrap();
        let alpha = p.alpha();
        let e2 = (1.0f64 / 1.3).powi(2);
        let s = C64::new(e2 * (alpha + 1.0) / alpha, 0.0);
        let roots = BetheRoots::from_squared(vec![s], RootSource::Newton);
        let r = bae_residual(&roots, &p).unwrap();
        assert!(r[0].norm() < 1e-13, "residual {:e}", r[0].norm());
        let lam = qc_conserved_eigenvalue(1, &roots, &p).unwrap();
        assert!((lam - C64::new(alpha, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn v_and_y_residuals_differ_by_v_squared() {
        let p = params();
        let s = vec![C64::new(0.31, 0.12), C64::new(0.95, -0.2), C64::new(2.4, 0.05)];
        let roots = BetheRoots::from_squared(s.clone(), RootSource::Newton);
        let rv = bae_residual(&roots, &p).unwrap();
        let y: Vec<C64> = s.iter().map(|&x| 1.0 / x).collect();
        let ry = bae_residual_y(&y, &p).unwrap();
        for k in 0..3 {
            let want = ry[k] / s[k];
            assert!((rv[k] - want).norm() < 1e-12 * ry[k].norm().max(1.0), "k={k}");
        }
    }

    #[test]
    fn general_residual_reduces_to_diagonal_form() {
        let p = params();
        let chain = p.chain(C64::new(0.05, 0.0)).unwrap();
        let ep = p.eta_expansion(); // β=ψ=φ=δ=μ=ξ=0
        let s = vec![C64::new(0.4, 0.3), C64::new(1.2, -0.4), C64::new(3.1, 0.2)];
        let roots = BetheRoots::from_squared(s, RootSource::Newton);
        let general = bae_residual_general(&roots, &chain, &ep).unwrap();
        let reduced = bae_residual(&roots, &p).unwrap();
        for k in 0..3 {
            assert!(
                (general[k] - reduced[k]).norm() < 1e-12 * reduced[k].norm().max(1.0),
                "k={k}: {} vs {}",
                general[k],
                reduced[k]
            );
        }
    }

    #[test]
    fn matched_gamma_delta_kills_inhomogeneous_term() {
        // γ=δ and λ=μ zero the inhomogeneous prefactor B.
        let ep = EtaExpansion {
            xi: C64::new(0.2, 0.0),
            psi: C64::new(0.3, 0.0),
            phi: C64::new(0.25, 0.0),
            alpha: C64::new(0.7, 0.0),
            beta: C64::new(0.1, 0.0),
            gamma: C64::new(0.4, 0.0),
            delta: C64::new(0.4, 0.0),
            lambda: C64::new(-0.3, 0.0),
            mu: C64::new(-0.3, 0.0),
        };
        let (_, b_const, _) = general_constants(&ep).unwrap();
        assert!(b_const.norm() < 1e-15);
        // And the ((λ−μ)ψ + (γ−δ)φ) cross term vanishes with it.
        let cross = (ep.lambda - ep.mu) * ep.psi + (ep.gamma - ep.delta) * ep.phi;
        assert!(cross.norm() < 1e-15);
    }

    #[test]
    fn root_perturbation_is_visible_in_the_residual() {
        let p = ModelParams::new(vec![1.0, 1.5], 0.9, 0.25).unwrap();
        // Solve numerically first via reconstruction machinery elsewhere;
        // here simply check sensitivity: perturbing any root of a
        // near-solution by 1e-3 moves some residual above 1e-5.
        let s = vec![C64::new(0.52, 0.0), C64::new(4.6, 0.0)];
        let base = BetheRoots::from_squared(s.clone(), RootSource::Newton);
        let r0 = bae_residual(&base, &p).unwrap();
        let mut s2 = s;
        s2[0] += C64::new(1e-3, 0.0);
        let bumped = BetheRoots::from_squared(s2, RootSource::Newton);
        let r1 = bae_residual(&bumped, &p).unwrap();
        let d: f64 = r0
            .iter()
            .zip(&r1)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(d > 1e-5, "perturbation moved residual by only {d:e}");
    }

    #[test]
    fn singular_inputs_are_rejected_with_index() {
        let p = params();
        let zero_root = BetheRoots::from_squared(
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0)],
            RootSource::Newton,
        );
        assert!(matches!(
            bae_residual(&zero_root, &p),
            Err(Error::SingularRoots { .. })
        ));
        let y_zero = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0)];
        assert!(bae_residual_y(&y_zero, &p).is_err());
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let p = params();
        let eps2 = epsilon_squared(&p);
        let alpha = C64::new(p.alpha(), 0.0);
        let gl = C64::new(p.gamma_lambda(), 0.0);
        let s = vec![C64::new(0.37, 0.21), C64::new(1.15, -0.33), C64::new(2.9, 0.4)];
        let j = jacobian_v_inner(&s, &eps2, alpha, gl);
        let h = 1e-7;
        for col in 0..3 {
            let mut sp = s.clone();
            sp[col] += C64::new(h, 0.0);
            let rp = residual_v_inner(&sp, &eps2, alpha, gl);
            let r0 = residual_v_inner(&s, &eps2, alpha, gl);
            for row in 0..3 {
                let fd = (rp[row] - r0[row]) / h;
                assert!(
                    (j[(row, col)] - fd).norm() < 1e-5 * (1.0 + fd.norm()),
                    "v-form J[{row},{col}] {} vs fd {}",
                    j[(row, col)],
                    fd
                );
            }
        }
        // y-form
        let z2: Vec<C64> = p.z().iter().map(|&z| C64::new(z * z, 0.0)).collect();
        let y: Vec<C64> = s.iter().map(|&x| 1.0 / x).collect();
        let jy = jacobian_y_inner(&y, &z2, p.g(), p.gamma());
        for col in 0..3 {
            let mut yp = y.clone();
            yp[col] += C64::new(h, 0.0);
            let rp = residual_y_inner(&yp, &z2, p.g(), p.gamma());
            let r0 = residual_y_inner(&y, &z2, p.g(), p.gamma());
            for row in 0..3 {
                let fd = (rp[row] - r0[row]) / h;
                assert!(
                    (jy[(row, col)] - fd).norm() < 1e-5 * (1.0 + fd.norm()),
                    "y-form J[{row},{col}]"
                );
            }
        }
        // general form
        let ep = EtaExpansion {
            xi: C64::new(0.17, 0.0),
            psi: C64::new(0.23, 0.0),
            phi: C64::new(-0.14, 0.0),
            alpha: C64::new(0.61, 0.0),
            beta: C64::new(0.08, 0.0),
            gamma: C64::new(0.33, 0.0),
            delta: C64::new(-0.21, 0.0),
            lambda: C64::new(0.27, 0.0),
            mu: C64::new(0.19, 0.0),
        };
        let (a_c, b_c, pp1) = general_constants(&ep).unwrap();
        let jg = jacobian_general_inner(&s, &eps2, a_c, b_c, pp1, ep.xi);
        for col in 0..3 {
            let mut sp = s.clone();
            sp[col] += C64::new(h, 0.0);
            let rp = residual_general_inner(&sp, &eps2, a_c, b_c, pp1, ep.xi);
            let r0 = residual_general_inner(&s, &eps2, a_c, b_c, pp1, ep.xi);
            for row in 0..3 {
                let fd = (rp[row] - r0[row]) / h;
                assert!(
                    (jg[(row, col)] - fd).norm() < 1e-5 * (1.0 + fd.norm()),
                    "general J[{row},{col}]"
                );
            }
        }
    }
}
