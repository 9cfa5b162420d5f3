//! Polynomial helpers on ascending complex coefficient vectors.
//!
//! `coeffs[k]` multiplies `x^k`; a monic degree-n polynomial has `n + 1`
//! entries with `coeffs[n] == 1`.

use crate::{C64, CMat, Error, Result};
use ndarray::Array2;

/// Horner evaluation.
pub fn eval(coeffs: &[C64], x: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(coeffs: &[C64]) -> Vec<C64> {
    if coeffs.len() <= 1 {
        return vec![C64::new(0.0, 0.0)];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Monic polynomial with the given roots.
pub fn from_roots(roots: &[C64]) -> Vec<C64> {
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        coeffs = next;
    }
    coeffs
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Euclidean division: returns (quotient, remainder).
pub fn div_rem(num: &[C64], den: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    let dn = den.len();
    if dn == 0 || den[dn - 1].norm() == 0.0 {
        return Err(Error::invalid("polynomial division by zero leading coefficient"));
    }
    if num.len() < dn {
        return Ok((vec![C64::new(0.0, 0.0)], num.to_vec()));
    }
    let lead = den[dn - 1];
    let mut rem = num.to_vec();
    let qlen = num.len() - dn + 1;
    let mut quot = vec![C64::new(0.0, 0.0); qlen];
    for k in (0..qlen).rev() {
        let q = rem[k + dn - 1] / lead;
        quot[k] = q;
        for j in 0..dn {
            let delta = q * den[j];
            rem[k + j] -= delta;
        }
    }
    rem.truncate(dn - 1);
    if rem.is_empty() {
        rem.push(C64::new(0.0, 0.0));
    }
    Ok((quot, rem))
}

/// All roots of a polynomial via companion-matrix eigenvalues, each polished
/// with one Newton step on the polynomial itself.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() == 0.0 {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(vec![]);
    }
    let lead = c[deg];
    if !lead.is_finite() || lead.norm() == 0.0 {
        return Err(Error::invalid("polynomial has non-finite leading coefficient"));
    }
    let monic: Vec<C64> = c.iter().map(|&x| x / lead).collect();
    let mut companion = Array2::from_elem((deg, deg), C64::new(0.0, 0.0));
    for i in 1..deg {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -monic[i];
    }
    let raw = eigenvalues_of(&companion)?;
    let dcoeffs = derivative(&monic);
    let polished = raw
        .into_iter()
        .map(|r| {
            let mut x = r;
            for _ in 0..2 {
                let p = eval(&monic, x);
                let dp = eval(&dcoeffs, x);
                if dp.norm() < 1e-300 {
                    break;
                }
                let step = p / dp;
                if !step.is_finite() || step.norm() > 1.0 + x.norm() {
                    break;
                }
                x -= step;
            }
            x
        })
        .collect();
    Ok(polished)
}

fn eigenvalues_of(a: &CMat) -> Result<Vec<C64>> {
    super::eig_values(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        // p(x) = 1 + 2x + 3x²
        let p = vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)];
        let x = C64::new(2.0, -1.0);
        let want = C64::new(1.0, 0.0) + 2.0 * x + 3.0 * x * x;
        assert!((eval(&p, x) - want).norm() < 1e-14);
        let dp = derivative(&p);
        let want_d = C64::new(2.0, 0.0) + 6.0 * x;
        assert!((eval(&dp, x) - want_d).norm() < 1e-14);
    }

    #[test]
    fn roots_roundtrip_through_coefficients() {
        let want = vec![
            C64::new(0.5, 0.0),
            C64::new(-1.25, 0.75),
            C64::new(2.0, -0.3),
            C64::new(0.1, 1.9),
            C64::new(-3.0, 0.0),
        ];
        let p = from_roots(&want);
        let mut got = roots(&p).unwrap();
        let mut want = want;
        let key = |z: &C64| (z.re, z.im);
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-9, "{g} vs {w}");
        }
    }

    #[test]
    fn division_reassembles() {
        let den = from_roots(&[C64::new(1.0, 1.0), C64::new(-2.0, 0.5)]);
        let quot_true = vec![C64::new(3.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0)];
        let rem_true = vec![C64::new(0.25, 0.0), C64::new(-1.0, 2.0)];
        let mut num = mul(&den, &quot_true);
        for (k, &r) in rem_true.iter().enumerate() {
            num[k] += r;
        }
        let (q, r) = div_rem(&num, &den).unwrap();
        for (a, b) in q.iter().zip(quot_true.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
        for (a, b) in r.iter().zip(rem_true.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
