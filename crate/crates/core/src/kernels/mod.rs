//! Reproducing kernels of the standard weighted Bergman spaces `A²(dA_η)`,
//! the Fock spaces `F²_α`, and radially weighted Bergman spaces `A²(ω)`.
//!
//! Closed forms:
//! - Bergman: `K_λ(z) = (1 − λ̄z)^{−(2+η)}`, `‖K_λ‖ = (1 − |λ|²)^{−(1+η/2)}`.
//! - Fock: `K_λ(z) = e^{α z λ̄}`, `‖K_λ‖ = e^{α|λ|²/2}`.
//!
//! The weighted kernel has no closed form. Its norm is only known up to
//! unspecified constants through `‖K_λ‖² ∼ (∫_{D_{λ,α}} ω dA)^{−1}`, which
//! is returned as an [`NormKind::Estimate`].

mod quadrature;
mod weight;

pub use quadrature::{
    bekolle_ratio, carleson_ratio, default_carleson_grid, disc_integral, gauss_legendre_unit,
    pairwise_sum, radial_moments, BekolleReport, CarlesonSquare, DiscSpec, CONVERGENCE_GATE,
    MOMENT_GATE,
};
pub use weight::{WeightFunction, WeightPreset};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Node count used for the disc integral behind the weighted norm estimate.
pub const ESTIMATE_RESOLUTION: usize = 32;

#[derive(Debug, Clone)]
pub enum KernelSpec {
    BergmanStandard { eta: f64 },
    Fock { alpha: f64 },
    RadialWeightedBergman { weight: WeightFunction, eta: f64, disc_alpha: Option<f64> },
}

impl KernelSpec {
    pub fn bergman(eta: f64) -> Result<Self> {
        let s = KernelSpec::BergmanStandard { eta };
        s.validate()?;
        Ok(s)
    }

    pub fn fock(alpha: f64) -> Result<Self> {
        let s = KernelSpec::Fock { alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn weighted_bergman(weight: WeightFunction, eta: f64, disc_alpha: Option<f64>) -> Result<Self> {
        let s = KernelSpec::RadialWeightedBergman { weight, eta, disc_alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::BergmanStandard { eta } => check_eta(*eta),
            KernelSpec::Fock { alpha } => {
                if alpha.is_finite() && *alpha > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!("Fock alpha must be positive, got {alpha}")))
                }
            }
            KernelSpec::RadialWeightedBergman { weight, eta, disc_alpha } => {
                check_eta(*eta)?;
                if let Some(a) = disc_alpha {
                    if !(a.is_finite() && *a > 0.0 && *a < 1.0) {
                        return Err(Error::InvalidInput(format!("disc alpha must lie in (0, 1), got {a}")));
                    }
                }
                weight.eval(0.0).map(|_| ())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::BergmanStandard { .. } => "bergman",
            KernelSpec::Fock { .. } => "fock",
            KernelSpec::RadialWeightedBergman { .. } => "weighted_bergman",
        }
    }

    /// Functions live on the unit disc (rather than all of ℂ).
    pub fn on_disc(&self) -> bool {
        !matches!(self, KernelSpec::Fock { .. })
    }

    pub fn check_point(&self, p: Complex64) -> Result<()> {
        if !(p.re.is_finite() && p.im.is_finite()) {
            return Err(Error::NonFinite("kernel argument"));
        }
        if self.on_disc() && p.norm() >= 1.0 {
            return Err(Error::DomainViolation(format!("|{p}| >= 1 for a Bergman-type kernel")));
        }
        Ok(())
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("eta must exceed -1, got {eta}")))
    }
}

/// `1 − |λ|²` without cancellation near the boundary.
fn one_minus_abs_sq(lambda: Complex64) -> f64 {
    let r = lambda.norm();
    (1.0 - r) * (1.0 + r)
}

fn finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite("kernel value"))
    }
}

/// `K(z, λ) = K_λ(z)`.
pub fn kernel_eval(spec: &KernelSpec, z: Complex64, lambda: Complex64) -> Result<Complex64> {
    spec.check_point(z)?;
    spec.check_point(lambda)?;
    match spec {
        KernelSpec::BergmanStandard { eta } => {
            let base = Complex64::new(1.0, 0.0) - lambda.conj() * z;
            finite(base.powf(-(2.0 + eta)))
        }
        KernelSpec::Fock { alpha } => finite((z * lambda.conj() * *alpha).exp()),
        KernelSpec::RadialWeightedBergman { .. } => Err(Error::NotAvailable(
            "the weighted Bergman kernel has no closed form; use a truncated basis".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Exact,
    /// Correct only up to constants independent of λ.
    Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelNorm {
    pub value: f64,
    pub kind: NormKind,
}

/// `‖K_λ‖`, exact for Bergman and Fock, an estimate for weighted Bergman.
pub fn kernel_norm(spec: &KernelSpec, lambda: Complex64) -> Result<KernelNorm> {
    spec.check_point(lambda)?;
    let (value, kind) = match spec {
        KernelSpec::BergmanStandard { eta } => {
            (one_minus_abs_sq(lambda).powf(-(1.0 + eta / 2.0)), NormKind::Exact)
        }
        KernelSpec::Fock { alpha } => ((alpha * lambda.norm_sqr() / 2.0).exp(), NormKind::Exact),
        KernelSpec::RadialWeightedBergman { weight, disc_alpha, .. } => {
            let a = disc_alpha.ok_or_else(|| {
                Error::NotAvailable("weighted norm estimate needs a disc alpha".into())
            })?;
            let disc = DiscSpec::new(lambda, a)?;
            let mass = disc_integral(weight, &disc, ESTIMATE_RESOLUTION)?;
            (mass.powf(-0.5), NormKind::Estimate)
        }
    };
    if !value.is_finite() {
        return Err(Error::NonFinite("kernel norm"));
    }
    Ok(KernelNorm { value, kind })
}

/// `k_λ(z) = K_λ(z) / ‖K_λ‖`.
pub fn normalized_kernel_eval(spec: &KernelSpec, z: Complex64, lambda: Complex64) -> Result<Complex64> {
    let k = kernel_eval(spec, z, lambda)?;
    let n = kernel_norm(spec, lambda)?;
    Ok(k / n.value)
}
