use super::equations::{
    epsilon_squared, general_constants, jacobian_general_inner, jacobian_v_inner,
    jacobian_y_inner, residual_general_inner, residual_v_inner, residual_y_inner,
};
use super::{BetheRoots, RootSource};
use crate::algebra::{ChainSpec, EtaExpansion};
use crate::linalg::Lu;
use crate::manybody::ModelParams;
use crate::{C64, CMat, Error, Result};

/// Which residual system the Newton refinement targets.
#[derive(Clone, Copy)]
pub enum BaeForm<'a> {
    /// Squared-root variables, physical (reduced) parameters.
    VForm,
    /// Inverse variables y = v⁻², physical parameters.
    YForm,
    /// Squared-root variables, nine-parameter boundary.
    General { chain: &'a ChainSpec, ep: &'a EtaExpansion },
}

pub(crate) const NEWTON_MAX_ITER: usize = 100;
pub(crate) const NEWTON_TOL: f64 = 1e-12;
pub(crate) const NEWTON_STEP_FLOOR: f64 = 1e-14;
pub(crate) const NEWTON_MAX_HALVINGS: usize = 20;

fn max_norm(r: &[C64]) -> f64 {
    r.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Damped Newton iteration on a square complex system.
///
/// Converges when the max residual drops below `NEWTON_TOL` or the step
/// below `NEWTON_STEP_FLOOR` (relative to the iterate scale); on residual
/// increase the step is halved up to `NEWTON_MAX_HALVINGS` times.
pub(crate) fn damped_newton<F>(mut x: Vec<C64>, eval: F) -> Result<(Vec<C64>, f64)>
where
    F: Fn(&[C64]) -> Result<(Vec<C64>, CMat)>,
{
    let n = x.len();
    let (mut r, mut jac) = eval(&x)?;
    let mut rnorm = max_norm(&r);
    for _iter in 0..NEWTON_MAX_ITER {
        if rnorm < NEWTON_TOL {
            // Quadratic convergence is nearly free at this point; polish to
            // the rounding floor so downstream scale factors (polynomial
            // remainders, energy products) keep their full accuracy.
            for _ in 0..2 {
                let lu = match Lu::factor(&jac) {
                    Ok(lu) => lu,
                    Err(_) => break,
                };
                let neg_r: Vec<C64> = r.iter().map(|&z| -z).collect();
                let step = lu.solve_vec(&neg_r);
                let trial: Vec<C64> = (0..n).map(|i| x[i] + step[i]).collect();
                match eval(&trial) {
                    Ok((rt, jt)) => {
                        let rtn = max_norm(&rt);
                        if rtn < rnorm {
                            x = trial;
                            r = rt;
                            jac = jt;
                            rnorm = rtn;
                        } else {
                            break;
                        }
                    }
                    Err(_) => break,
                }
            }
            return Ok((x, rnorm));
        }
        let lu = Lu::factor(&jac).map_err(|_| Error::Matrix("singular BAE Jacobian".into()))?;
        let neg_r: Vec<C64> = r.iter().map(|&z| -z).collect();
        let step = lu.solve_vec(&neg_r);
        let scale = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let step_norm = max_norm(&step);
        if !step_norm.is_finite() {
            return Err(Error::Matrix("non-finite Newton step".into()));
        }
        if step_norm < NEWTON_STEP_FLOOR * scale {
            return Ok((x, rnorm));
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let trial: Vec<C64> = (0..n).map(|i| x[i] + t * step[i]).collect();
            match eval(&trial) {
                Ok((rt, jt)) => {
                    let rtn = max_norm(&rt);
                    if rtn < rnorm || rtn < NEWTON_TOL {
                        x = trial;
                        r = rt;
                        jac = jt;
                        rnorm = rtn;
                        accepted = true;
                        break;
                    }
                }
                Err(_) => {
                    // Trial stepped onto a singular configuration; shrink.
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { iters: _iter + 1, residual: rnorm });
        }
    }
    if rnorm < NEWTON_TOL {
        Ok((x, rnorm))
    } else {
        Err(Error::NoConvergence { iters: NEWTON_MAX_ITER, residual: rnorm })
    }
}

/// Refines a root set on the chosen BAE system by damped Newton iteration.
pub fn newton_refine(
    initial: &BetheRoots,
    params: &ModelParams,
    target: BaeForm<'_>,
) -> Result<BetheRoots> {
    if initial.any_at_infinity() {
        return Err(Error::invalid(
            "cannot Newton-refine a configuration with roots at infinity",
        ));
    }
    match target {
        BaeForm::VForm => {
            let eps2 = epsilon_squared(params);
            let alpha = C64::new(params.alpha(), 0.0);
            let gl = C64::new(params.gamma_lambda(), 0.0);
            let (x, rnorm) = damped_newton(initial.squared().to_vec(), |s| {
                guard_distinct(s)?;
                Ok((
                    residual_v_inner(s, &eps2, alpha, gl),
                    jacobian_v_inner(s, &eps2, alpha, gl),
                ))
            })?;
            Ok(BetheRoots::from_squared(x, RootSource::Newton).with_residual(rnorm))
        }
        BaeForm::YForm => {
            let z2: Vec<C64> = params.z().iter().map(|&z| C64::new(z * z, 0.0)).collect();
            let (g, big_gamma) = (params.g(), params.gamma());
            let (x, rnorm) = damped_newton(initial.y().to_vec(), |y| {
                guard_distinct(y)?;
                Ok((
                    residual_y_inner(y, &z2, g, big_gamma),
                    jacobian_y_inner(y, &z2, g, big_gamma),
                ))
            })?;
            Ok(BetheRoots::from_y(x, RootSource::Newton).with_residual(rnorm))
        }
        BaeForm::General { chain, ep } => {
            let eps2: Vec<C64> = chain.inhomogeneities().iter().map(|&e| e * e).collect();
            let (a_c, b_c, pp1) = general_constants(ep)?;
            let xi = ep.xi;
            let (x, rnorm) = damped_newton(initial.squared().to_vec(), |s| {
                guard_distinct(s)?;
                Ok((
                    residual_general_inner(s, &eps2, a_c, b_c, pp1, xi),
                    jacobian_general_inner(s, &eps2, a_c, b_c, pp1, xi),
                ))
            })?;
            Ok(BetheRoots::from_squared(x, RootSource::Newton).with_residual(rnorm))
        }
    }
}

fn guard_distinct(x: &[C64]) -> Result<()> {
    let scale = x.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    for i in 0..x.len() {
        if !x[i].is_finite() {
            return Err(Error::SingularRoots { index: i, reason: "non-finite iterate".into() });
        }
        if x[i].norm() < 1e-14 * scale {
            return Err(Error::SingularRoots { index: i, reason: "iterate hit zero".into() });
        }
        for k in i + 1..x.len() {
            if (x[i] - x[k]).norm() < 1e-14 * scale {
                return Err(Error::SingularRoots { index: k, reason: "iterate collision".into() });
            }
        }
    }
    Ok(())
}

/// Sector refinement for the closed model (γλ = 0): Newton on the M finite
/// roots against all L levels.
pub(crate) fn newton_refine_sector(
    finite_squared: Vec<C64>,
    params: &ModelParams,
) -> Result<(Vec<C64>, f64)> {
    let eps2 = epsilon_squared(params);
    let alpha = C64::new(params.alpha(), 0.0);
    let zero = C64::new(0.0, 0.0);
    damped_newton(finite_squared, |s| {
        guard_distinct(s)?;
        Ok((
            residual_v_inner(s, &eps2, alpha, zero),
            jacobian_v_inner(s, &eps2, alpha, zero),
        ))
    })
}
