use super::{ModelParams, OpBuilder, SpinOp};
use crate::{C64, CMat};

/// The spin-form pairing Hamiltonian with environment exchange:
///
/// ```text
/// H = Σ_k z_k² S_k^z − G Σ_k Σ_{j≠k} z_k z_j S_k^+ S_j^− + Γ Σ_k z_k (S_k^+ + S_k^−)
/// ```
///
/// Real-symmetric in the standard basis for real parameters. The Γ term
/// breaks u(1) symmetry; at Γ = 0, `[H, Σ_k S_k^z] = 0`.
pub fn hamiltonian(params: &ModelParams) -> CMat {
    let l = params.length();
    let z = params.z();
    let g = params.g();
    let gamma = params.gamma();
    let mut b = OpBuilder::new(l);
    for k in 1..=l {
        b.add_one_site(SpinOp::Z, k, C64::new(z[k - 1] * z[k - 1], 0.0));
    }
    for k in 1..=l {
        for j in 1..=l {
            if j == k {
                continue;
            }
            b.add_two_site(
                SpinOp::Plus,
                k,
                SpinOp::Minus,
                j,
                C64::new(-g * z[k - 1] * z[j - 1], 0.0),
            );
        }
    }
    for k in 1..=l {
        let c = C64::new(gamma * z[k - 1], 0.0);
        b.add_one_site(SpinOp::Plus, k, c);
        b.add_one_site(SpinOp::Minus, k, c);
    }
    b.build()
}

/// Total magnetization Σ_k S_k^z.
pub fn total_sz(length: usize) -> CMat {
    let mut b = OpBuilder::new(length);
    for k in 1..=length {
        b.add_one_site(SpinOp::Z, k, C64::new(1.0, 0.0));
    }
    b.build()
}
