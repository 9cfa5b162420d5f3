use super::BetheRoots;
use crate::manybody::ModelParams;
use crate::{C64, Error, Result};

const ONE: C64 = C64::new(1.0, 0.0);

/// Hamiltonian eigenvalue from a Bethe root set:
///
/// ```text
/// E = (1+G) Σ_i y_i − ½ Σ_k z_k² + (Γ²/G) Σ_i ∏_j (1−y_i z_j⁻²) / ∏_{k≠i} (1−y_i y_k⁻¹)
/// ```
///
/// Roots at infinity (y = 0) contribute nothing to the first sum; they are
/// legal only in the closed model (Γ = 0), where the third term vanishes and
/// the sector formula E = (1+G) Σ_finite y − ½ Σ z² applies. Pairwise
/// cancellations in the products are guarded and reported as singular.
pub fn energy_from_roots(roots: &BetheRoots, params: &ModelParams) -> Result<C64> {
    let y = roots.y();
    let z2: Vec<f64> = params.z().iter().map(|&z| z * z).collect();
    let g = params.g();
    let w = params.gamma() * params.gamma() / g;
    let mut e = C64::new(-0.5 * z2.iter().sum::<f64>(), 0.0);
    for (i, &yi) in y.iter().enumerate() {
        if roots.at_infinity()[i] {
            continue;
        }
        e += (1.0 + g) * yi;
        let _ = i;
    }
    if w != 0.0 {
        if roots.any_at_infinity() {
            return Err(Error::invalid(
                "roots at infinity are only consistent with Gamma = 0",
            ));
        }
        let scale = y.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
        for (i, &yi) in y.iter().enumerate() {
            let mut term = C64::new(w, 0.0);
            for &z in &z2 {
                term *= ONE - yi / z;
            }
            for (k, &yk) in y.iter().enumerate() {
                if k == i {
                    continue;
                }
                let denom = ONE - yi / yk;
                if denom.norm() < 1e-13 * scale.max(1.0) {
                    return Err(Error::SingularRoots {
                        index: i,
                        reason: format!("y_{} cancels against y_{}", i + 1, k + 1),
                    });
                }
                term /= denom;
            }
            e += term;
        }
    }
    Ok(e)
}

/// The weighted conserved-eigenvalue sum (1/2α) Σ_j ε_j⁻² λ_j*(roots),
/// evaluated from the eigenvalue formula at an arbitrary root set.
///
/// At a BAE solution this equals the energy formula; away from solutions the
/// two differ by exactly −G · Σ_k r_k with r_k the squared-root-form BAE
/// residuals, which the tests pin down.
pub fn energy_lambda_sum(roots: &BetheRoots, params: &ModelParams) -> Result<C64> {
    let l = params.length();
    let mut acc = C64::new(0.0, 0.0);
    let eps = params.epsilons();
    for j in 1..=l {
        let lam = super::qc_conserved_eigenvalue(j, roots, params)?;
        acc += lam / C64::new(eps[j - 1] * eps[j - 1], 0.0);
    }
    Ok(acc / (2.0 * params.alpha()))
}
