use super::tau_general;
use crate::algebra::{transfer_matrix, ChainSpec, EtaExpansion};
use crate::linalg::{fro_norm, rel_fro_diff};
use crate::{C64, CMat, Error, Result};

/// Offsets used to extract the simple-pole residue of t(u) at u = ε_j by
/// quadratic extrapolation of g(r) = r · t(ε_j + r) to r = 0. The cubic
/// truncation error (∝ r₁r₂r₃, NOT suppressed by η²) must stay far below the
/// η-extrapolation target because the later η → 0 extrapolation amplifies
/// any residue error that scales like 1/η². Roundoff is still negligible at
/// this size once the effective offsets fl(ε+r) − ε are used.
const RESIDUE_OFFSETS: [f64; 3] = [1e-5, 5e-6, 2.5e-6];

/// Verifies the quasi-classical limit lim_{u→ε_j} (u−ε_j) t(u) = η² τ_j + o(η²).
///
/// For each η sample the pole coefficient C(η) = residue / η² is formed from
/// the transfer matrix, then C is extrapolated to η → 0 by polynomial
/// (Neville) extrapolation through the samples and compared against the
/// conserved operator: returns ‖C(0) − τ_j‖_F / ‖τ_j‖_F.
pub fn quasiclassical_check(
    j: usize,
    chain: &ChainSpec,
    ep: &EtaExpansion,
    eta_samples: &[f64],
) -> Result<f64> {
    if eta_samples.len() < 2 {
        return Err(Error::invalid("at least two eta samples are required"));
    }
    if eta_samples.iter().any(|&h| !(h > 0.0 && h <= 0.1)) {
        return Err(Error::invalid("eta samples must lie in (0, 0.1]"));
    }
    let l = chain.length();
    if j == 0 || j > l {
        return Err(Error::IndexOutOfRange { index: j, len: l });
    }
    let ej = chain.inhomogeneities()[j - 1];

    let mut tables: Vec<CMat> = Vec::with_capacity(eta_samples.len());
    for &eta in eta_samples {
        let eta_c = C64::new(eta, 0.0);
        let chain_eta = ChainSpec::new(chain.inhomogeneities().to_vec(), eta_c)?;
        let bp = ep.boundary_at(eta_c);
        // g(r) = r · t(ε_j + r); extrapolate the offset samples to r = 0.
        // The effective offset u − ε_j is formed by exact subtraction so the
        // nominal r never disagrees with the argument actually used.
        let mut gs: Vec<CMat> = Vec::with_capacity(RESIDUE_OFFSETS.len());
        let mut rs: Vec<C64> = Vec::with_capacity(RESIDUE_OFFSETS.len());
        for &r in &RESIDUE_OFFSETS {
            let u = ej + C64::new(r, 0.0);
            let r_eff = u - ej;
            gs.push(transfer_matrix(u, &chain_eta, &bp)?.mapv(|x| r_eff * x));
            rs.push(r_eff);
        }
        let residue = neville_to_zero(gs, &rs);
        tables.push(residue.mapv(|x| x / C64::new(eta * eta, 0.0)));
    }

    // Neville extrapolation to η = 0 across all samples.
    let xs: Vec<C64> = eta_samples.iter().map(|&h| C64::new(h, 0.0)).collect();
    let extrapolated = neville_to_zero(tables, &xs);

    let tau = tau_general(j, chain, ep)?;
    if fro_norm(&tau) == 0.0 {
        return Err(Error::invalid("tau_general vanished; residual undefined"));
    }
    Ok(rel_fro_diff(&extrapolated, &tau))
}

/// Polynomial (Neville) extrapolation of matrix-valued samples to x = 0.
fn neville_to_zero(mut work: Vec<CMat>, xs: &[C64]) -> CMat {
    let levels = work.len();
    for k in 1..levels {
        for i in 0..levels - k {
            let xi = xs[i];
            let xk = xs[i + k];
            let num =
                &work[i + 1].mapv(|x| x * xi) - &work[i].mapv(|x| x * xk);
            work[i] = num.mapv(|x| x / (xi - xk));
        }
        work.truncate(levels - k);
    }
    work.remove(0)
}
