use super::rmatrix::{permutation, r_matrix};
use super::BoundaryParams;
use crate::linalg::{kron, matmul, rel_fro_diff};
use crate::{C64, CMat};
use ndarray::array;

/// Right reflection matrix in the shifted convention:
/// K⁻(u) = [[ξ⁻+u−η/2, ψ⁻(u−η/2)], [φ⁻(u−η/2), ξ⁻−u+η/2]].
pub fn k_minus(u: C64, bp: &BoundaryParams, eta: C64) -> CMat {
    let w = u - 0.5 * eta;
    array![
        [bp.xi_minus + w, bp.psi_minus * w],
        [bp.phi_minus * w, bp.xi_minus - w]
    ]
}

/// Left reflection matrix in the shifted convention:
/// K⁺(u) = [[ξ⁺+u+η/2, ψ⁺(u+η/2)], [φ⁺(u+η/2), ξ⁺−u−η/2]].
pub fn k_plus(u: C64, bp: &BoundaryParams, eta: C64) -> CMat {
    let w = u + 0.5 * eta;
    array![
        [bp.xi_plus + w, bp.psi_plus * w],
        [bp.phi_plus * w, bp.xi_plus - w]
    ]
}

/// Pre-shift K⁻(u) = [[ξ⁻+u, ψ⁻u], [φ⁻u, ξ⁻−u]]; this is the form entering
/// the reflection equation.
pub fn k_minus_preshift(u: C64, bp: &BoundaryParams) -> CMat {
    array![
        [bp.xi_minus + u, bp.psi_minus * u],
        [bp.phi_minus * u, bp.xi_minus - u]
    ]
}

/// Pre-shift K⁺(u) = −K⁻(−u−η)|_{ξ⁻↦−ξ⁺, ψ⁻↦ψ⁺, φ⁻↦φ⁺}, which satisfies the
/// dual reflection equation by construction.
pub fn k_plus_preshift(u: C64, bp: &BoundaryParams, eta: C64) -> CMat {
    let w = u + eta;
    array![
        [bp.xi_plus + w, bp.psi_plus * w],
        [bp.phi_plus * w, bp.xi_plus - w]
    ]
}

fn r21(w: C64, eta: C64) -> CMat {
    let p = permutation();
    matmul(&matmul(&p, &r_matrix(w, eta)), &p)
}

/// Relative residual of the reflection equation
/// R₁₂(u−v) K₁⁻(u) R₂₁(u+v) K₂⁻(v) = K₂⁻(v) R₁₂(u+v) K₁⁻(u) R₂₁(u−v)
/// with the pre-shift K⁻.
pub fn reflection_minus_residual(u: C64, v: C64, bp: &BoundaryParams, eta: C64) -> f64 {
    let id2 = crate::linalg::eye(2);
    let k1 = kron(&k_minus_preshift(u, bp), &id2);
    let k2 = kron(&id2, &k_minus_preshift(v, bp));
    let lhs = matmul(
        &matmul(&matmul(&r_matrix(u - v, eta), &k1), &r21(u + v, eta)),
        &k2,
    );
    let rhs = matmul(
        &matmul(&matmul(&k2, &r_matrix(u + v, eta)), &k1),
        &r21(u - v, eta),
    );
    rel_fro_diff(&lhs, &rhs)
}

/// Relative residual of the dual reflection equation
/// R₁₂(v−u) K₁⁺(u) R₂₁(−u−v−2η) K₂⁺(v) = K₂⁺(v) R₁₂(−u−v−2η) K₁⁺(u) R₂₁(v−u)
/// with the pre-shift K⁺.
pub fn reflection_plus_residual(u: C64, v: C64, bp: &BoundaryParams, eta: C64) -> f64 {
    let id2 = crate::linalg::eye(2);
    let k1 = kron(&k_plus_preshift(u, bp, eta), &id2);
    let k2 = kron(&id2, &k_plus_preshift(v, bp, eta));
    let w = -u - v - 2.0 * eta;
    let lhs = matmul(&matmul(&matmul(&r_matrix(v - u, eta), &k1), &r21(w, eta)), &k2);
    let rhs = matmul(&matmul(&matmul(&k2, &r_matrix(w, eta)), &k1), &r21(v - u, eta));
    rel_fro_diff(&lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro_norm;
    use rand::{Rng, SeedableRng};

    fn generic_bp() -> BoundaryParams {
        BoundaryParams {
            xi_minus: C64::new(0.45, 0.0),
            psi_minus: C64::new(0.27, 0.0),
            phi_minus: C64::new(-0.38, 0.0),
            xi_plus: C64::new(0.61, 0.0),
            psi_plus: C64::new(-0.19, 0.0),
            phi_plus: C64::new(0.33, 0.0),
        }
    }

    #[test]
    fn k_minus_is_diagonal_at_half_eta() {
        let bp = generic_bp();
        let eta = C64::new(0.3, 0.0);
        let k = k_minus(0.5 * eta, &bp, eta);
        let want = crate::linalg::eye(2).mapv(|x| bp.xi_minus * x);
        assert!(fro_norm(&(&k - &want)) < 1e-15);
    }

    #[test]
    fn k_plus_is_diagonal_at_minus_half_eta() {
        let bp = generic_bp();
        let eta = C64::new(0.3, 0.0);
        let k = k_plus(-0.5 * eta, &bp, eta);
        let want = crate::linalg::eye(2).mapv(|x| bp.xi_plus * x);
        assert!(fro_norm(&(&k - &want)) < 1e-15);
    }

    #[test]
    fn diagonal_boundary_gives_diagonal_k() {
        let mut bp = generic_bp();
        bp.psi_minus = C64::new(0.0, 0.0);
        bp.phi_minus = C64::new(0.0, 0.0);
        for t in [-1.3f64, 0.2, 0.9, 2.4] {
            let k = k_minus(C64::new(t, 0.0), &bp, C64::new(0.17, 0.0));
            assert_eq!(k[(0, 1)], C64::new(0.0, 0.0));
            assert_eq!(k[(1, 0)], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn k_plus_is_reflected_k_minus_with_substituted_parameters() {
        // K⁺(u) = −K⁻(−u−η)|_{ξ⁻↦−ξ⁺, ψ⁻↦ψ⁺, φ⁻↦φ⁺} (pre-shift forms).
        let bp = generic_bp();
        let eta = C64::new(0.23, 0.0);
        let substituted = BoundaryParams {
            xi_minus: -bp.xi_plus,
            psi_minus: bp.psi_plus,
            phi_minus: bp.phi_plus,
            ..bp
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let u = C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-0.5..0.5));
            let plus = k_plus_preshift(u, &bp, eta);
            let reflected = k_minus_preshift(-u - eta, &substituted).mapv(|x| -x);
            assert!(rel_fro_diff(&plus, &reflected) < 1e-15);
        }
    }

    #[test]
    fn reflection_equations_hold() {
        let bp = generic_bp();
        // Stated sample point plus a handful of random ones.
        let r = reflection_minus_residual(
            C64::new(0.4, 0.0),
            C64::new(1.1, 0.0),
            &bp,
            C64::new(0.3, 0.0),
        );
        assert!(r < 1e-12, "reflection- residual {r:e}");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let u = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.4..0.4));
            let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.4..0.4));
            let eta = C64::new(rng.gen_range(0.05..0.5), rng.gen_range(-0.2..0.2));
            let rm = reflection_minus_residual(u, v, &bp, eta);
            let rp = reflection_plus_residual(u, v, &bp, eta);
            assert!(rm < 1e-12, "reflection- residual {rm:e}");
            assert!(rp < 1e-12, "reflection+ residual {rp:e}");
        }
    }
}
