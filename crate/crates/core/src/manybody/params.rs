use crate::algebra::{ChainSpec, EtaExpansion};
use crate::{C64, Error, Result};

/// Physical parameters of the pairing model coupled to its environment.
///
/// The couplings are `z_j` (single-pair energies enter as `z_j²`), the pairing
/// strength `G ≠ 0`, and the environment exchange strength `Γ`. The
/// inverse-scattering parameters are derived: inhomogeneities `ε_j = 1/z_j`,
/// `α = 1/G`, `γ = 2Γ/G`, `λ = −γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    length: usize,
    z: Vec<f64>,
    g: f64,
    gamma: f64,
}

impl ModelParams {
    pub fn new(z: Vec<f64>, g: f64, gamma: f64) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::invalid("at least one z coupling is required"));
        }
        if !z.iter().all(|&x| x.is_finite() && x > 0.0) {
            return Err(Error::invalid("all z_j must be finite and positive"));
        }
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                if (z[i] - z[j]).abs() < 1e-12 * z[i].abs().max(z[j].abs()) {
                    return Err(Error::invalid(format!(
                        "z values must be distinct: z[{}] = z[{}] = {}",
                        i + 1,
                        j + 1,
                        z[i]
                    )));
                }
            }
        }
        if !g.is_finite() || g == 0.0 {
            return Err(Error::invalid("pairing strength G must be nonzero"));
        }
        if !gamma.is_finite() {
            return Err(Error::invalid("environment coupling Gamma must be finite"));
        }
        Ok(ModelParams { length: z.len(), z, g, gamma })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        1usize << self.length
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// α = 1/G.
    pub fn alpha(&self) -> f64 {
        1.0 / self.g
    }

    /// γ = 2Γ/G.
    pub fn coupling_gamma(&self) -> f64 {
        2.0 * self.gamma / self.g
    }

    /// λ = −γ.
    pub fn coupling_lambda(&self) -> f64 {
        -self.coupling_gamma()
    }

    /// Inhomogeneities ε_j = 1/z_j.
    pub fn epsilons(&self) -> Vec<f64> {
        self.z.iter().map(|&z| 1.0 / z).collect()
    }

    /// γλ = −4Γ²/G², the coefficient of the inhomogeneous BAE term.
    pub fn gamma_lambda(&self) -> f64 {
        self.coupling_gamma() * self.coupling_lambda()
    }

    /// The η-expansion of the boundary parameters this model corresponds to:
    /// ξ = β = ψ = φ = δ = μ = 0, α = 1/G, γ = 2Γ/G, λ = −γ.
    pub fn eta_expansion(&self) -> EtaExpansion {
        let zero = C64::new(0.0, 0.0);
        EtaExpansion {
            xi: zero,
            psi: zero,
            phi: zero,
            alpha: C64::new(self.alpha(), 0.0),
            beta: zero,
            gamma: C64::new(self.coupling_gamma(), 0.0),
            delta: zero,
            lambda: C64::new(self.coupling_lambda(), 0.0),
            mu: zero,
        }
    }

    /// Chain specification (inhomogeneities ε_j = 1/z_j) at a given η.
    pub fn chain(&self, eta: C64) -> Result<ChainSpec> {
        let eps = self.epsilons().iter().map(|&e| C64::new(e, 0.0)).collect();
        ChainSpec::new(eps, eta)
    }
}
