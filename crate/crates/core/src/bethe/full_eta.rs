use super::BetheRoots;
use crate::algebra::{BoundaryParams, ChainSpec};
use crate::{C64, Error, Result, POLE_GUARD};

const ONE: C64 = C64::new(1.0, 0.0);

struct BoundaryScalars {
    m: C64,      // √(ψ⁻φ⁻+1)
    p: C64,      // √(ψ⁺φ⁺+1)
    c: C64,      // 2(h₁⁰·h₂⁰ − 1)
    xi_m: C64,   // ξ⁻/√(ψ⁻φ⁻+1)
    xi_p: C64,   // ξ⁺/√(ψ⁺φ⁺+1)
}

fn boundary_scalars(bp: &BoundaryParams) -> Result<BoundaryScalars> {
    let m2 = bp.psi_minus * bp.phi_minus + ONE;
    let p2 = bp.psi_plus * bp.phi_plus + ONE;
    if m2.norm() < 1e-14 || p2.norm() < 1e-14 {
        return Err(Error::BranchPoint);
    }
    let m = m2.sqrt();
    let p = p2.sqrt();
    let c = 2.0
        * ((0.5 * (bp.psi_minus * bp.phi_plus + bp.phi_minus * bp.psi_plus) + ONE) / (m * p)
            - ONE);
    Ok(BoundaryScalars { m, p, c, xi_m: bp.xi_minus / m, xi_p: bp.xi_plus / p })
}

/// The full-η transfer-matrix eigenvalue Λ(u) at a root set {v_i²}:
///
/// ```text
/// Λ(u) = √(ψ⁻φ⁻+1) √(ψ⁺φ⁺+1) [ a(u) ∏_i ((u+η)²−v_i²)/(u²−v_i²)
///        + d(u) ∏_i ((u−η)²−v_i²)/(u²−v_i²)
///        + c (u²−η²/4) ∏_i ((u+ε_i)²−η²/4)((u−ε_i)²−η²/4) / ((u²−ε_i²)(u²−v_i²)) ]
/// ```
///
/// with the dressed vacuum factors
///
/// ```text
/// a(u) = (2u−η)/(2u) (u+ξ⁻/√(ψ⁻φ⁻+1)+η/2)(u+ξ⁺/√(ψ⁺φ⁺+1)+η/2)
///        ∏_l (u−ε_l−η/2)(u+ε_l−η/2)/((u−ε_l)(u+ε_l)),
/// d(u) = (2u+η)/(2u) (u−ξ⁻/√(ψ⁻φ⁻+1)−η/2)(u−ξ⁺/√(ψ⁺φ⁺+1)−η/2)
///        ∏_l (u−ε_l+η/2)(u+ε_l+η/2)/((u−ε_l)(u+ε_l)).
/// ```
pub fn lambda_full(
    u: C64,
    roots: &BetheRoots,
    chain: &ChainSpec,
    bp: &BoundaryParams,
) -> Result<C64> {
    let eta = chain.eta();
    if eta.norm() == 0.0 {
        return Err(Error::invalid("lambda_full requires eta != 0"));
    }
    let eps = chain.inhomogeneities();
    for pole in chain.transfer_poles() {
        if (u - pole).norm() < POLE_GUARD {
            return Err(Error::NearPole { u, pole, guard: POLE_GUARD });
        }
    }
    for (i, &s) in roots.squared().iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::SingularRoots { index: i, reason: "root at infinity".into() });
        }
        if (u * u - s).norm() < POLE_GUARD {
            return Err(Error::NearPole { u, pole: s.sqrt(), guard: POLE_GUARD });
        }
    }
    let sc = boundary_scalars(bp)?;
    let half = 0.5 * eta;

    let mut a = (2.0 * u - eta) / (2.0 * u) * (u + sc.xi_m + half) * (u + sc.xi_p + half);
    let mut d = (2.0 * u + eta) / (2.0 * u) * (u - sc.xi_m - half) * (u - sc.xi_p - half);
    for &e in eps {
        a *= (u - e - half) * (u + e - half) / ((u - e) * (u + e));
        d *= (u - e + half) * (u + e + half) / ((u - e) * (u + e));
    }

    let up = u + eta;
    let um = u - eta;
    let mut qa = ONE;
    let mut qd = ONE;
    for &s in roots.squared() {
        qa *= (up * up - s) / (u * u - s);
        qd *= (um * um - s) / (u * u - s);
    }

    let mut cterm = sc.c * (u * u - 0.25 * eta * eta);
    for (idx, &e) in eps.iter().enumerate() {
        let s = roots.squared()[idx];
        cterm *= ((u + e) * (u + e) - 0.25 * eta * eta) * ((u - e) * (u - e) - 0.25 * eta * eta)
            / ((u * u - e * e) * (u * u - s));
    }

    Ok(sc.m * sc.p * (a * qa + d * qd + cterm))
}

/// Residue of Λ(u) at the inhomogeneity pole u = ε_j; used to extract
/// conserved-operator eigenvalues in the quasi-classical limit without any
/// numerical differentiation.
pub fn lambda_residue_at_inhomogeneity(
    j: usize,
    roots: &BetheRoots,
    chain: &ChainSpec,
    bp: &BoundaryParams,
) -> Result<C64> {
    let l = chain.length();
    if j == 0 || j > l {
        return Err(Error::IndexOutOfRange { index: j, len: l });
    }
    let eta = chain.eta();
    if eta.norm() == 0.0 {
        return Err(Error::invalid("residue extraction requires eta != 0"));
    }
    let sc = boundary_scalars(bp)?;
    let eps = chain.inhomogeneities();
    let ej = eps[j - 1];
    let half = 0.5 * eta;
    let u = ej;

    // ã(ε_j), d̃(ε_j): the vacuum factors with the denominator ∏(u²−ε_l²)
    // stripped; the residue divides by d/du of the stripped factor,
    // 2ε_j ∏_{l≠j}(ε_j²−ε_l²).
    let mut atilde =
        (2.0 * u - eta) / (2.0 * u) * (u + sc.xi_m + half) * (u + sc.xi_p + half);
    let mut dtilde =
        (2.0 * u + eta) / (2.0 * u) * (u - sc.xi_m - half) * (u - sc.xi_p - half);
    for &e in eps {
        atilde *= (u - e - half) * (u + e - half);
        dtilde *= (u - e + half) * (u + e + half);
    }
    let mut denom = 2.0 * ej;
    for (l_idx, &e) in eps.iter().enumerate() {
        if l_idx != j - 1 {
            denom *= ej * ej - e * e;
        }
    }

    let up = u + eta;
    let um = u - eta;
    let mut qa = ONE;
    let mut qd = ONE;
    for &s in roots.squared() {
        if !s.is_finite() {
            return Err(Error::invalid("residue extraction needs finite roots"));
        }
        qa *= (up * up - s) / (u * u - s);
        qd *= (um * um - s) / (u * u - s);
    }

    // c-term residue: only the i = j factor's 1/(u²−ε_j²) is singular.
    let mut cres = sc.c * (u * u - 0.25 * eta * eta) / denom;
    for (idx, &e) in eps.iter().enumerate() {
        let s = roots.squared()[idx];
        cres *= ((u + e) * (u + e) - 0.25 * eta * eta)
            * ((u - e) * (u - e) - 0.25 * eta * eta)
            / (u * u - s);
        if idx != j - 1 {
            cres /= u * u - e * e;
        }
    }

    Ok(sc.m * sc.p * ((atilde * qa + dtilde * qd) / denom + cres))
}

/// Residuals of the full-η Bethe ansatz equations, one per root v_k:
///
/// ```text
/// (2η/v_k)(v_k m + ξ⁻ + ηm/2)(v_k p + ξ⁺ + ηp/2)
///     ∏_l 1/((v_k−ε_l+η/2)(v_k+ε_l+η/2)) ∏_{i≠k}(v_k−v_i+η)(v_k+v_i+η)
/// − (2η/v_k)(v_k m − ξ⁻ − ηm/2)(v_k p − ξ⁺ − ηp/2)
///     ∏_l 1/((v_k−ε_l−η/2)(v_k+ε_l−η/2)) ∏_{i≠k}(v_k−v_i−η)(v_k+v_i−η)
/// + (ψ⁻φ⁺ + φ⁻ψ⁺) + 2 − 2 m p
/// ```
///
/// with m = √(ψ⁻φ⁻+1), p = √(ψ⁺φ⁺+1). The expression is invariant under
/// v_k → −v_k, so only squared roots matter.
pub fn bae_full_residual(v: &[C64], chain: &ChainSpec, bp: &BoundaryParams) -> Result<Vec<C64>> {
    let eta = chain.eta();
    if eta.norm() == 0.0 {
        return Err(Error::invalid("full BAE requires eta != 0"));
    }
    let sc = boundary_scalars(bp)?;
    let eps = chain.inhomogeneities();
    let scale = v.iter().map(|x| x.norm()).fold(1.0f64, f64::max);
    for (k, &vk) in v.iter().enumerate() {
        if vk.norm() < 1e-13 * scale {
            return Err(Error::SingularRoots { index: k, reason: "v_k = 0".into() });
        }
        for (i, &vi) in v.iter().enumerate().skip(k + 1) {
            if (vk - vi).norm() < 1e-13 * scale || (vk + vi).norm() < 1e-13 * scale {
                return Err(Error::SingularRoots {
                    index: i,
                    reason: format!("v_{} = ±v_{}", i + 1, k + 1),
                });
            }
        }
    }
    let half = 0.5 * eta;
    let cc = bp.psi_minus * bp.phi_plus + bp.phi_minus * bp.psi_plus + 2.0 * ONE
        - 2.0 * sc.m * sc.p;
    Ok(v.iter()
        .enumerate()
        .map(|(k, &vk)| {
            let mut t1 = (2.0 * eta / vk)
                * (vk * sc.m + bp.xi_minus + half * sc.m)
                * (vk * sc.p + bp.xi_plus + half * sc.p);
            let mut t2 = -(2.0 * eta / vk)
                * (vk * sc.m - bp.xi_minus - half * sc.m)
                * (vk * sc.p - bp.xi_plus - half * sc.p);
            for &e in eps {
                t1 /= (vk - e + half) * (vk + e + half);
                t2 /= (vk - e - half) * (vk + e - half);
            }
            for (i, &vi) in v.iter().enumerate() {
                if i != k {
                    t1 *= (vk - vi + eta) * (vk + vi + eta);
                    t2 *= (vk - vi - eta) * (vk + vi - eta);
                }
            }
            t1 + t2 + cc
        })
        .collect())
}

/// Exact solutions of the full-η BAE at L = 1 as squared roots. The single
/// equation is a quadratic in v² (degree drops to one when both K-matrices
/// are diagonal, reflecting the state whose root escapes to infinity).
pub fn solve_full_bae_l1(chain: &ChainSpec, bp: &BoundaryParams) -> Result<Vec<C64>> {
    if chain.length() != 1 {
        return Err(Error::invalid("closed-form full BAE solver is L = 1 only"));
    }
    let eta = chain.eta();
    if eta.norm() == 0.0 {
        return Err(Error::invalid("full BAE requires eta != 0"));
    }
    let sc = boundary_scalars(bp)?;
    let e = chain.inhomogeneities()[0];
    let a_lin = bp.xi_minus + 0.5 * eta * sc.m;
    let b_lin = bp.xi_plus + 0.5 * eta * sc.p;
    let cc = bp.psi_minus * bp.phi_plus + bp.phi_minus * bp.psi_plus + 2.0 * ONE
        - 2.0 * sc.m * sc.p;
    let ebar = 0.25 * eta * eta - e * e;
    let mb_pa = sc.m * b_lin + sc.p * a_lin;
    let mp = sc.m * sc.p;
    // c̃ s² + [4η(mB+pA) − 4η²mp + c̃(2Ē−η²)] s + [4η(mB+pA)Ē − 4η²AB + c̃Ē²] = 0
    let c2 = cc;
    let c1 = 4.0 * eta * mb_pa - 4.0 * eta * eta * mp + cc * (2.0 * ebar - eta * eta);
    let c0 = 4.0 * eta * mb_pa * ebar - 4.0 * eta * eta * a_lin * b_lin + cc * ebar * ebar;
    if c2.norm() < 1e-13 * (c1.norm() + c0.norm()).max(1.0) {
        if c1.norm() == 0.0 {
            return Err(Error::invalid("degenerate single-site full BAE"));
        }
        return Ok(vec![-c0 / c1]);
    }
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    let s1 = (-c1 + disc) / (2.0 * c2);
    let s2 = (-c1 - disc) / (2.0 * c2);
    // Use the product form for the smaller root to avoid cancellation.
    let (s1, s2) = if s1.norm() >= s2.norm() && s1.norm() > 0.0 {
        (s1, c0 / (c2 * s1))
    } else if s2.norm() > 0.0 {
        (c0 / (c2 * s2), s2)
    } else {
        (s1, s2)
    };
    Ok(vec![s1, s2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::transfer_matrix;
    use crate::bethe::RootSource;
    use crate::manybody::ModelParams;

    fn diagonal_minus_bp(p: &ModelParams, eta: C64) -> BoundaryParams {
        p.eta_expansion().boundary_at(eta)
    }

    #[test]
    fn l1_roots_zero_the_full_residual() {
        let p = ModelParams::new(vec![1.3], 0.8, 0.3).unwrap();
        let eta = C64::new(0.4, 0.0);
        let chain = p.chain(eta).unwrap();
        let bp = diagonal_minus_bp(&p, eta);
        let sols = solve_full_bae_l1(&chain, &bp).unwrap();
        assert_eq!(sols.len(), 2);
        for s in sols {
            let v = s.sqrt();
            let r = bae_full_residual(&[v], &chain, &bp).unwrap();
            assert!(r[0].norm() < 1e-11, "residual {:e}", r[0].norm());
            // Invariance under v → −v.
            let r2 = bae_full_residual(&[-v], &chain, &bp).unwrap();
            assert!((r[0] - r2[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn lambda_matches_transfer_matrix_eigenvalue_at_l1() {
        // Diagonal K⁻ (ψ⁻=φ⁻=0), non-diagonal K⁺; Λ(u) at a solved root must
        // be an eigenvalue of t(u). The transfer matrix is built from Lax
        // operators and K-matrices, Λ from the dressed eigenvalue formula —
        // completely independent code paths.
        let p = ModelParams::new(vec![1.3], 0.8, 0.3).unwrap();
        let eta = C64::new(0.5, 0.0);
        let chain = p.chain(eta).unwrap();
        let bp = diagonal_minus_bp(&p, eta);
        let sols = solve_full_bae_l1(&chain, &bp).unwrap();
        for &s in &sols {
            let roots = BetheRoots::from_squared(vec![s], RootSource::Newton);
            for u in [
                C64::new(0.33, 0.0),
                C64::new(-0.91, 0.0),
                C64::new(1.27, 0.4),
                C64::new(0.08, -0.6),
                C64::new(2.4, 0.0),
            ] {
                let lam = lambda_full(u, &roots, &chain, &bp).unwrap();
                let t = transfer_matrix(u, &chain, &bp).unwrap();
                // 2×2 eigenvalues in closed form.
                let tr = t[(0, 0)] + t[(1, 1)];
                let det = t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)];
                let disc = (tr * tr - 4.0 * det).sqrt();
                let e1 = 0.5 * (tr + disc);
                let e2 = 0.5 * (tr - disc);
                let dist = (lam - e1).norm().min((lam - e2).norm());
                assert!(
                    dist < 1e-9 * lam.norm().max(1.0),
                    "u={u}: Λ={lam} vs eigenvalues {e1}, {e2}"
                );
            }
        }
    }

    #[test]
    fn residue_formula_matches_numerical_limit() {
        let p = ModelParams::new(vec![1.3], 0.8, 0.3).unwrap();
        let eta = C64::new(0.3, 0.0);
        let chain = p.chain(eta).unwrap();
        let bp = diagonal_minus_bp(&p, eta);
        let sols = solve_full_bae_l1(&chain, &bp).unwrap();
        let roots = BetheRoots::from_squared(vec![sols[0]], RootSource::Newton);
        let ej = chain.inhomogeneities()[0];
        let analytic = lambda_residue_at_inhomogeneity(1, &roots, &chain, &bp).unwrap();
        // Two-point numerical residue.
        let r1 = C64::new(1e-5, 0.0);
        let r2 = C64::new(5e-6, 0.0);
        let g1 = r1 * lambda_full(ej + r1, &roots, &chain, &bp).unwrap();
        let g2 = r2 * lambda_full(ej + r2, &roots, &chain, &bp).unwrap();
        let numeric = (g2 * r1 - g1 * r2) / (r1 - r2);
        assert!(
            (analytic - numeric).norm() < 1e-8 * analytic.norm().max(1.0),
            "{analytic} vs {numeric}"
        );
    }

    #[test]
    fn equal_boundary_vectors_kill_the_inhomogeneous_term() {
        // ψ± = ψ, φ± = φ (same vectors) gives c = 0.
        let bp = BoundaryParams {
            xi_minus: C64::new(0.3, 0.0),
            psi_minus: C64::new(0.25, 0.0),
            phi_minus: C64::new(-0.4, 0.0),
            xi_plus: C64::new(0.7, 0.0),
            psi_plus: C64::new(0.25, 0.0),
            phi_plus: C64::new(-0.4, 0.0),
        };
        let sc = boundary_scalars(&bp).unwrap();
        assert!(sc.c.norm() < 1e-14);
    }

    #[test]
    fn lambda_parity_probe() {
        // Λ(u) vs Λ(−u): probed numerically (not asserted as an identity) —
        // record that the two agree for the diagonal-K⁻ family at L=1, which
        // is what the construction suggests.
        let p = ModelParams::new(vec![1.3], 0.8, 0.3).unwrap();
        let eta = C64::new(0.5, 0.0);
        let chain = p.chain(eta).unwrap();
        let bp = diagonal_minus_bp(&p, eta);
        let sols = solve_full_bae_l1(&chain, &bp).unwrap();
        let roots = BetheRoots::from_squared(vec![sols[0]], RootSource::Newton);
        let mut max_asym: f64 = 0.0;
        for u in [C64::new(0.41, 0.1), C64::new(1.9, -0.3)] {
            let a = lambda_full(u, &roots, &chain, &bp).unwrap();
            let b = lambda_full(-u, &roots, &chain, &bp).unwrap();
            max_asym = max_asym.max((a - b).norm() / a.norm().max(1.0));
        }
        // Report-style assertion: just require the probe to have run and the
        // asymmetry to be finite; the observed value is printed for the log.
        println!("lambda parity asymmetry (probe): {max_asym:e}");
        assert!(max_asym.is_finite());
    }
}
