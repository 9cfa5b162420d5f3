use super::equations::{jacobian_y_inner, residual_y_inner};
use super::newton::damped_newton;
use super::{energy_from_roots, BetheRoots, RootSource, Y_INFINITY_THRESHOLD};
use crate::linalg::Lu;
use crate::manybody::ModelParams;
use crate::{C64, Error, Result};

const MIN_GAMMA_STEP: f64 = 1e-6;

/// One accepted point on a continuation path.
#[derive(Debug, Clone)]
pub struct ContinuationPoint {
    pub gamma: f64,
    pub roots: BetheRoots,
    pub energy: C64,
}

/// The trajectory of one root configuration along the Γ path.
#[derive(Debug, Clone)]
pub struct ContinuationTrack {
    pub points: Vec<ContinuationPoint>,
    pub flags: Vec<String>,
    /// False when tracking stopped early (escape or collision flagged).
    pub completed: bool,
}

fn with_gamma(params: &ModelParams, gamma: f64) -> Result<ModelParams> {
    ModelParams::new(params.z().to_vec(), params.g(), gamma)
}

fn solve_at(y0: Vec<C64>, params: &ModelParams) -> Result<(Vec<C64>, f64)> {
    let z2: Vec<C64> = params.z().iter().map(|&z| C64::new(z * z, 0.0)).collect();
    let (g, big_gamma) = (params.g(), params.gamma());
    damped_newton(y0, |y| {
        guard(y)?;
        Ok((
            residual_y_inner(y, &z2, g, big_gamma),
            jacobian_y_inner(y, &z2, g, big_gamma),
        ))
    })
}

fn guard(y: &[C64]) -> Result<()> {
    let scale = y.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    for (i, &yi) in y.iter().enumerate() {
        if !yi.is_finite() || yi.norm() < 1e-15 * scale {
            return Err(Error::SingularRoots { index: i, reason: "y hit zero".into() });
        }
        for (k, &yk) in y.iter().enumerate().skip(i + 1) {
            if (yi - yk).norm() < 1e-14 * scale {
                return Err(Error::SingularRoots { index: k, reason: "y collision".into() });
            }
        }
    }
    Ok(())
}

/// Tangent predictor dy/dΓ = −J⁻¹ ∂r/∂Γ with ∂r_k/∂Γ = (2Γ/G²y_k)·P_k.
fn tangent(y: &[C64], params: &ModelParams) -> Result<Vec<C64>> {
    let z2: Vec<C64> = params.z().iter().map(|&z| C64::new(z * z, 0.0)).collect();
    let g = params.g();
    let big_gamma = params.gamma();
    let n = y.len();
    let mut dgamma = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let yk = y[k];
        let mut prod = C64::new(1.0, 0.0);
        for &z in &z2 {
            prod *= C64::new(1.0, 0.0) - yk / z;
        }
        for (i, &yi) in y.iter().enumerate() {
            if i != k {
                prod /= C64::new(1.0, 0.0) - yk / yi;
            }
        }
        dgamma[k] = C64::new(2.0 * big_gamma / (g * g), 0.0) / yk * prod;
    }
    let jac = jacobian_y_inner(y, &z2, g, big_gamma);
    let lu = Lu::factor(&jac)?;
    let neg: Vec<C64> = dgamma.iter().map(|&x| -x).collect();
    Ok(lu.solve_vec(&neg))
}

fn escape_flags(y: &[C64]) -> Vec<usize> {
    y.iter()
        .enumerate()
        .filter(|(_, v)| v.norm() < Y_INFINITY_THRESHOLD)
        .map(|(i, _)| i)
        .collect()
}

fn collision_flags(y: &[C64]) -> Vec<(usize, usize)> {
    let scale = y.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let mut out = vec![];
    for i in 0..y.len() {
        for k in i + 1..y.len() {
            if (y[i] - y[k]).norm() < super::ROOT_COLLISION_THRESHOLD * scale {
                out.push((i, k));
            }
        }
    }
    out
}

/// Tracks root configurations along a monotone Γ path by Newton
/// predictor-corrector in the inverse variables y = v⁻².
///
/// Escapes (|y| below the at-infinity threshold) and root collisions are
/// flagged on the affected track, which then stops gracefully instead of
/// crashing; a corrector failure triggers Γ-step bisection down to a minimum
/// step, below which the error carries the last good Γ.
pub fn continuation_solve(
    params: &ModelParams,
    gamma_path: &[f64],
    seeds: &[BetheRoots],
) -> Result<Vec<ContinuationTrack>> {
    if gamma_path.is_empty() {
        return Err(Error::invalid("empty gamma path"));
    }
    let increasing = gamma_path.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = gamma_path.windows(2).all(|w| w[1] <= w[0]);
    if !increasing && !decreasing {
        return Err(Error::invalid("gamma path must be monotone"));
    }
    if seeds.is_empty() {
        return Err(Error::invalid("at least one seed configuration is required"));
    }

    let mut tracks = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let p0 = with_gamma(params, gamma_path[0])?;
        // Seeds must actually solve the BAE at the path start.
        let (y_start, r0) = solve_at(seed.y().to_vec(), &p0).map_err(|e| {
            Error::invalid(format!("seed does not converge at path start: {e}"))
        })?;
        let mut flags: Vec<String> = vec![];
        let mut completed = true;
        let roots0 = BetheRoots::from_y(y_start.clone(), RootSource::Continuation)
            .with_residual(r0);
        let e0 = energy_from_roots(&roots0, &p0)?;
        let mut points = vec![ContinuationPoint { gamma: gamma_path[0], roots: roots0, energy: e0 }];
        let mut y = y_start;

        'path: for target_pair in gamma_path.windows(2) {
            let (mut g_here, g_target) = (target_pair[0], target_pair[1]);
            if g_here == g_target {
                continue;
            }
            let mut g_next = g_target;
            loop {
                let p_here = with_gamma(params, g_here)?;
                let step = g_next - g_here;
                // Predictor.
                let y_pred = match tangent(&y, &p_here) {
                    Ok(t) => y
                        .iter()
                        .zip(&t)
                        .map(|(&yi, &ti)| yi + ti * step)
                        .collect::<Vec<_>>(),
                    Err(_) => y.clone(),
                };
                // Relative per-component step cap: a predicted change above
                // 50% of a root's magnitude means the local linearization is
                // unreliable (roots shrinking like Γ² hit this on the way to
                // an escape) — subdivide instead of risking a branch jump.
                let too_far = y
                    .iter()
                    .zip(&y_pred)
                    .any(|(a, b)| (b - a).norm() > 0.5 * a.norm().max(1e-12));
                if too_far && (g_next - g_here).abs() >= MIN_GAMMA_STEP {
                    let half = 0.5 * (g_here + g_next);
                    if (g_next - g_here).abs() < MIN_GAMMA_STEP {
                        return Err(Error::ContinuationStalled {
                            last_gamma: g_here,
                            min_step: MIN_GAMMA_STEP,
                        });
                    }
                    g_next = half;
                    continue;
                }
                let p_next = with_gamma(params, g_next)?;
                let corrected = solve_at(y_pred.clone(), &p_next).and_then(|(y_new, rnorm)| {
                    // Jump detection: the corrector must land near the
                    // predictor; a distant landing is a different branch.
                    let jumped = y_new.iter().zip(&y_pred).any(|(a, b)| {
                        (a - b).norm() > 0.5 * (a.norm() + b.norm()).max(1e-12)
                    });
                    if jumped {
                        Err(Error::invalid("corrector left the tracked branch"))
                    } else {
                        Ok((y_new, rnorm))
                    }
                });
                match corrected {
                    Ok((y_new, rnorm)) => {
                        y = y_new;
                        g_here = g_next;
                        let esc = escape_flags(&y);
                        let col = collision_flags(&y);
                        if g_here == g_target || !esc.is_empty() || !col.is_empty() {
                            let roots = BetheRoots::from_y(y.clone(), RootSource::Continuation)
                                .with_residual(rnorm);
                            let p_rec = with_gamma(params, g_here)?;
                            let energy = energy_from_roots(&roots, &p_rec)
                                .unwrap_or(C64::new(f64::NAN, 0.0));
                            points.push(ContinuationPoint { gamma: g_here, roots, energy });
                        }
                        for i in &esc {
                            flags.push(format!(
                                "root {} escaped toward infinity (|y| < {Y_INFINITY_THRESHOLD:e}) at gamma = {g_here}",
                                i + 1
                            ));
                        }
                        for (i, k) in &col {
                            flags.push(format!(
                                "roots {} and {} collided at gamma = {g_here}",
                                i + 1,
                                k + 1
                            ));
                        }
                        if !esc.is_empty() || !col.is_empty() {
                            completed = false;
                            break 'path;
                        }
                        if g_here == g_target {
                            break;
                        }
                        g_next = g_target;
                    }
                    Err(_) => {
                        // Bisect the Γ step.
                        let half = 0.5 * (g_here + g_next);
                        if (g_next - g_here).abs() < MIN_GAMMA_STEP {
                            return Err(Error::ContinuationStalled {
                                last_gamma: g_here,
                                min_step: MIN_GAMMA_STEP,
                            });
                        }
                        g_next = half;
                    }
                }
            }
            // Record the accepted path point (if not already recorded by a flag).
            if points.last().map(|p| p.gamma) != Some(g_here) {
                let p_rec = with_gamma(params, g_here)?;
                let roots = BetheRoots::from_y(y.clone(), RootSource::Continuation);
                let energy = energy_from_roots(&roots, &p_rec)?;
                points.push(ContinuationPoint { gamma: g_here, roots, energy });
            }
        }
        tracks.push(ContinuationTrack { points, flags, completed });
    }
    Ok(tracks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::{newton_refine, roots_from_conserved, BaeForm};
    use crate::manybody::{exact_spectrum, hamiltonian, tau_star};

    fn ground_seed(p: &ModelParams) -> (BetheRoots, f64) {
        let h = hamiltonian(p);
        let taus: Vec<_> = (1..=p.length()).map(|j| tau_star(j, p).unwrap()).collect();
        let spec = exact_spectrum(&h, Some(&taus), 3).unwrap();
        let lam = &spec.conserved_eigenvalues.as_ref().unwrap()[0];
        let rec = roots_from_conserved(lam, p).unwrap();
        let refined = newton_refine(&rec, p, BaeForm::VForm).unwrap();
        (refined, spec.eigenvalues[0])
    }

    #[test]
    fn ground_state_tracks_match_ed_along_the_path() {
        let p = ModelParams::new(vec![1.0, 1.5], 0.8, 0.3).unwrap();
        let (seed, _) = ground_seed(&p);
        let path = [0.3, 0.25, 0.2, 0.15, 0.1, 0.05];
        let tracks = continuation_solve(&p, &path, &[seed]).unwrap();
        assert_eq!(tracks.len(), 1);
        let track = &tracks[0];
        assert!(track.completed, "flags: {:?}", track.flags);
        for point in &track.points {
            let p_here = ModelParams::new(p.z().to_vec(), p.g(), point.gamma).unwrap();
            let h = hamiltonian(&p_here);
            let spec = exact_spectrum(&h, None, 0).unwrap();
            let best = spec
                .eigenvalues
                .iter()
                .map(|&e| (e - point.energy.re).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(
                best < 1e-8 * (1.0 + point.energy.norm()),
                "gamma={}: distance {best:e}",
                point.gamma
            );
        }
    }

    #[test]
    fn escape_toward_zero_gamma_is_flagged_not_crashed() {
        // Track a state whose closed-model limit has fewer finite roots.
        let p = ModelParams::new(vec![1.3], 0.8, 0.3).unwrap();
        let chain_eta = C64::new(0.0, 0.0);
        let _ = chain_eta;
        // At L = 1 the two configurations are the quadratic's branches; the
        // branch headed for v → ∞ has the smaller |y|.
        let h = hamiltonian(&p);
        let taus = vec![tau_star(1, &p).unwrap()];
        let spec = exact_spectrum(&h, Some(&taus), 3).unwrap();
        let mut escaped = false;
        for m in 0..2 {
            let lam = &spec.conserved_eigenvalues.as_ref().unwrap()[m];
            let rec = roots_from_conserved(lam, &p).unwrap();
            let seed = newton_refine(&rec, &p, BaeForm::VForm).unwrap();
            let path = [0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 1e-4, 1e-5, 3e-6];
            match continuation_solve(&p, &path, &[seed]) {
                Ok(tracks) => {
                    let t = &tracks[0];
                    if !t.completed && t.flags.iter().any(|f| f.contains("escaped")) {
                        escaped = true;
                    }
                }
                Err(Error::ContinuationStalled { .. }) => {}
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
        assert!(escaped, "one of the two configurations must flag an escape");
    }

    #[test]
    fn single_point_path_is_a_refinement_passthrough() {
        let p = ModelParams::new(vec![1.0, 1.5], 0.8, 0.3).unwrap();
        let (seed, _) = ground_seed(&p);
        let before = seed.y().to_vec();
        let tracks = continuation_solve(&p, &[0.3], &[seed]).unwrap();
        assert_eq!(tracks[0].points.len(), 1);
        for (a, b) in tracks[0].points[0].roots.y().iter().zip(&before) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn non_monotone_path_is_rejected() {
        let p = ModelParams::new(vec![1.0, 1.5], 0.8, 0.3).unwrap();
        let (seed, _) = ground_seed(&p);
        assert!(continuation_solve(&p, &[0.3, 0.1, 0.2], &[seed]).is_err());
    }
}
