use super::{ModelParams, OpBuilder, SpinOp};
use crate::algebra::{ChainSpec, EtaExpansion};
use crate::{C64, CMat, Error, Result};

const ONE: C64 = C64::new(1.0, 0.0);

/// The nine-parameter conserved operator τ_j of the open, rational
/// Richardson-Gaudin family, built term for term from the quasi-classical
/// expansion of the double-row transfer matrix around u = ε_j.
pub fn tau_general(j: usize, chain: &ChainSpec, ep: &EtaExpansion) -> Result<CMat> {
    let l = chain.length();
    if j == 0 || j > l {
        return Err(Error::IndexOutOfRange { index: j, len: l });
    }
    let e = chain.inhomogeneities();
    let ej = e[j - 1];
    let EtaExpansion { xi, psi, phi, alpha, beta, gamma, delta, lambda, mu } = *ep;

    let mut b = OpBuilder::new(l);

    // Σ_{k≠j} [(1+ψφ)ε_j² − ξ²]/(ε_j−ε_k) · [2S_j^z S_k^z + S_j^+S_k^− + S_j^−S_k^+]
    for k in 1..=l {
        if k == j {
            continue;
        }
        let ek = e[k - 1];
        let c = ((ONE + psi * phi) * ej * ej - xi * xi) / (ej - ek);
        b.add_two_site(SpinOp::Z, j, SpinOp::Z, k, 2.0 * c);
        b.add_two_site(SpinOp::Plus, j, SpinOp::Minus, k, c);
        b.add_two_site(SpinOp::Minus, j, SpinOp::Plus, k, c);
    }

    // Σ_{k=1}^{L} 1/(ε_j+ε_k) · [...]  (k = j included; same-site products
    // multiply local matrices in the written operator order)
    for k in 1..=l {
        let ek = e[k - 1];
        let d = ONE / (ej + ek);
        b.add_two_site(SpinOp::Z, j, SpinOp::Z, k, d * 2.0 * (ej + xi) * (ej - xi));
        b.add_two_site(SpinOp::Plus, j, SpinOp::Minus, k, -d * (ej - xi) * (ej - xi));
        b.add_two_site(SpinOp::Minus, j, SpinOp::Plus, k, -d * (ej + xi) * (ej + xi));
        b.add_two_site(SpinOp::Z, j, SpinOp::Plus, k, d * 2.0 * psi * ej * (ej + xi));
        b.add_two_site(SpinOp::Plus, j, SpinOp::Z, k, d * 2.0 * psi * ej * (ej - xi));
        b.add_two_site(SpinOp::Minus, j, SpinOp::Z, k, d * 2.0 * phi * ej * (ej + xi));
        b.add_two_site(SpinOp::Z, j, SpinOp::Minus, k, d * 2.0 * phi * ej * (ej - xi));
        b.add_two_site(SpinOp::Plus, j, SpinOp::Plus, k, d * ej * ej * psi * psi);
        b.add_two_site(SpinOp::Minus, j, SpinOp::Minus, k, d * ej * ej * phi * phi);
        b.add_two_site(SpinOp::Z, j, SpinOp::Z, k, -d * ej * ej * 2.0 * psi * phi);
    }

    let ab = alpha + beta;
    b.add_one_site(
        SpinOp::Z,
        j,
        2.0 * ab * ej - 2.0 * xi + psi * (lambda - mu) * ej * ej - phi * (gamma - delta) * ej * ej,
    );
    b.add_one_site(
        SpinOp::Plus,
        j,
        psi * ab * ej - xi * (gamma - delta) * ej - psi * xi + (gamma - delta) * ej * ej,
    );
    b.add_one_site(
        SpinOp::Minus,
        j,
        phi * ab * ej - xi * (lambda - mu) * ej - phi * xi - (lambda - mu) * ej * ej,
    );

    Ok(b.build())
}

/// The reduced conserved operator family with general coefficients:
///
/// ```text
/// τ_j* = Σ_{k≠j} 4ε_j²/(ε_j²−ε_k²) S_j^z S_k^z
///      + Σ_{k≠j} 2ε_jε_k/(ε_j²−ε_k²) (S_j^+S_k^− + S_j^−S_k^+)
///      + 2α S_j^z + γ ε_j S_j^+ − λ ε_j S_j^−
/// ```
pub fn tau_star_general(
    j: usize,
    epsilons: &[C64],
    alpha: C64,
    gamma: C64,
    lambda: C64,
) -> Result<CMat> {
    let l = epsilons.len();
    if j == 0 || j > l {
        return Err(Error::IndexOutOfRange { index: j, len: l });
    }
    let ej = epsilons[j - 1];
    let mut b = OpBuilder::new(l);
    for k in 1..=l {
        if k == j {
            continue;
        }
        let ek = epsilons[k - 1];
        let denom = ej * ej - ek * ek;
        if denom.norm() == 0.0 {
            return Err(Error::SingularRoots {
                index: k,
                reason: format!("epsilon_{j}^2 = epsilon_{k}^2"),
            });
        }
        b.add_two_site(SpinOp::Z, j, SpinOp::Z, k, 4.0 * ej * ej / denom);
        let x = 2.0 * ej * ek / denom;
        b.add_two_site(SpinOp::Plus, j, SpinOp::Minus, k, x);
        b.add_two_site(SpinOp::Minus, j, SpinOp::Plus, k, x);
    }
    b.add_one_site(SpinOp::Z, j, 2.0 * alpha);
    b.add_one_site(SpinOp::Plus, j, gamma * ej);
    b.add_one_site(SpinOp::Minus, j, -lambda * ej);
    Ok(b.build())
}

/// τ_j* for a physical parameter set (α = 1/G, γ = 2Γ/G, λ = −γ, ε = 1/z).
pub fn tau_star(j: usize, params: &ModelParams) -> Result<CMat> {
    let eps: Vec<C64> = params.epsilons().iter().map(|&e| C64::new(e, 0.0)).collect();
    tau_star_general(
        j,
        &eps,
        C64::new(params.alpha(), 0.0),
        C64::new(params.coupling_gamma(), 0.0),
        C64::new(params.coupling_lambda(), 0.0),
    )
}

/// Conjugation by U = U_1…U_L with U_j = diag(√((ε_j+ξ)/(ε_j−ξ)), 1) on the
/// (up, down) local basis. U is diagonal in the product basis, so the
/// conjugation is an entrywise rescaling.
pub fn gauge_transform(op: &CMat, xi: C64, chain: &ChainSpec) -> Result<CMat> {
    let l = chain.length();
    let dim = 1usize << l;
    if op.dim() != (dim, dim) {
        return Err(Error::Matrix(format!(
            "operator dimension {:?} does not match chain length {l}",
            op.dim()
        )));
    }
    let e = chain.inhomogeneities();
    let mut factors = Vec::with_capacity(l);
    for (idx, &ej) in e.iter().enumerate() {
        let denom = ej - xi;
        if denom.norm() < 1e-14 || (ej + xi).norm() < 1e-14 {
            return Err(Error::SingularRoots {
                index: idx + 1,
                reason: "epsilon_j = ±xi in gauge factor".into(),
            });
        }
        factors.push(((ej + xi) / denom).sqrt());
    }
    // D[b] = ∏_{sites j spin-up in b} f_j  (up = bit clear)
    let mut d = vec![ONE; dim];
    for (b, entry) in d.iter_mut().enumerate() {
        for (jm1, &f) in factors.iter().enumerate() {
            if (b >> jm1) & 1 == 0 {
                *entry *= f;
            }
        }
    }
    let mut out = op.clone();
    for r in 0..dim {
        for c in 0..dim {
            out[(r, c)] = d[r] * op[(r, c)] / d[c];
        }
    }
    Ok(out)
}
