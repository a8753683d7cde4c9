//! Sampling sequences and atomic decompositions in a truncated kernel space.
//!
//! The space is modelled by the orthonormal monomials `e_k(z) = z^k / ρ_k`,
//! `k = 0..=N`. In these coordinates the kernel `K_λ` has entries
//! `conj(λ)^k / ρ_k`, so `⟨f, K_λ⟩ = f(λ)` holds exactly for polynomials of
//! degree at most `N`. Normalized kernels at the sample points form a finite
//! family, and the L-frame machinery of [`crate::atomic`] applies verbatim.
//!
//! Certificates describe the degree-`N` model, not the full space.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::atomic::{
    atomic_coefficients, lframe_bounds, minimal_bessel_dual, LFrameCertificate, OperatorMatrix,
};
use crate::error::{Error, Result};
use crate::frames::{synthesis, CoeffSeq, FrameFamily};
use crate::kernels::{kernel_norm, radial_moments, KernelSpec};
use crate::numeric::{inner, norm, Tolerances};

pub const DEFAULT_BERGMAN_DEGREE: usize = 64;
pub const DEFAULT_FOCK_DEGREE: usize = 32;

pub fn default_degree(spec: &KernelSpec) -> usize {
    match spec {
        KernelSpec::Fock { .. } => DEFAULT_FOCK_DEGREE,
        _ => DEFAULT_BERGMAN_DEGREE,
    }
}

/// Orthonormal monomial basis of degree `N` for one kernel space.
#[derive(Debug, Clone)]
pub struct TruncatedBasis {
    spec: KernelSpec,
    degree: usize,
    /// `ρ_k = ‖z^k‖`.
    norm_constants: Vec<f64>,
    /// `ρ_{k−1} / ρ_k` for `k ≥ 1` (index 0 unused).
    step_ratios: Vec<f64>,
}

impl TruncatedBasis {
    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dimension `N + 1` of the model space.
    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn norm_constants(&self) -> &[f64] {
        &self.norm_constants
    }

    /// Coordinates of the polynomial `Σ a_k z^k` in this basis.
    pub fn coordinates_of_polynomial(&self, monomial_coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if monomial_coeffs.len() > self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: monomial_coeffs.len() });
        }
        let mut c = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (k, a) in monomial_coeffs.iter().enumerate() {
            c[k] = a * self.norm_constants[k];
        }
        Ok(c)
    }
}

pub fn build_basis(spec: &KernelSpec, degree: usize) -> Result<TruncatedBasis> {
    spec.validate()?;
    let mut step_ratios = vec![1.0; degree + 1];
    let mut sq = vec![1.0; degree + 1];
    match spec {
        KernelSpec::BergmanStandard { eta } => {
            // ρ_k² = k! Γ(2+η) / Γ(k+2+η)
            for k in 1..=degree {
                let kf = k as f64;
                sq[k] = sq[k - 1] * kf / (kf + 1.0 + eta);
                step_ratios[k] = ((kf + 1.0 + eta) / kf).sqrt();
            }
        }
        KernelSpec::Fock { alpha } => {
            // ρ_k² = k! / α^k
            for k in 1..=degree {
                let kf = k as f64;
                sq[k] = sq[k - 1] * kf / alpha;
                step_ratios[k] = (alpha / kf).sqrt();
            }
        }
        KernelSpec::RadialWeightedBergman { weight, .. } => {
            sq = radial_moments(weight, degree)?;
            for k in 1..=degree {
                step_ratios[k] = (sq[k - 1] / sq[k]).sqrt();
            }
        }
    }
    let norm_constants: Vec<f64> = sq.iter().map(|v| v.sqrt()).collect();
    if norm_constants.iter().chain(&step_ratios).any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::NonFinite("basis norm constants"));
    }
    Ok(TruncatedBasis { spec: spec.clone(), degree, norm_constants, step_ratios })
}

/// Coordinates of `K_λ`: `(conj(λ)^k / ρ_k)_k`.
pub fn kernel_coordinates(b: &TruncatedBasis, lambda: Complex64) -> Result<Vec<Complex64>> {
    b.spec.check_point(lambda)?;
    let lc = lambda.conj();
    let mut out = Vec::with_capacity(b.dim());
    let mut cur = Complex64::new(1.0 / b.norm_constants[0], 0.0);
    out.push(cur);
    for k in 1..=b.degree {
        cur = cur * lc * b.step_ratios[k];
        out.push(cur);
    }
    if out.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("kernel coordinates"));
    }
    Ok(out)
}

/// `f(λ) = ⟨f, K_λ⟩` for `f` given in basis coordinates.
pub fn evaluate(b: &TruncatedBasis, f_coords: &[Complex64], lambda: Complex64) -> Result<Complex64> {
    if f_coords.len() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: f_coords.len() });
    }
    Ok(inner(f_coords, &kernel_coordinates(b, lambda)?))
}

/// Distinct sample points `{λ_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Complex64>,
}

impl PointSet {
    /// Rejects exact duplicates; near-duplicates are allowed.
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point set is empty".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(Error::NonFinite("sample point"));
            }
            if points[..i].contains(p) {
                return Err(Error::InvalidInput(format!("duplicate sample point {p}")));
            }
        }
        Ok(PointSet { points })
    }

    /// Points `j·spacing + i·k·spacing` with both coordinates in
    /// `[−half_width, half_width]`.
    pub fn square_lattice(spacing: f64, half_width: f64) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0 && half_width.is_finite() && half_width >= 0.0) {
            return Err(Error::InvalidInput("lattice needs spacing > 0 and half_width >= 0".into()));
        }
        let m = (half_width / spacing + 1e-9).floor() as i64;
        let mut pts = Vec::new();
        for j in -m..=m {
            for k in -m..=m {
                pts.push(Complex64::new(j as f64 * spacing, k as f64 * spacing));
            }
        }
        Self::new(pts)
    }

    /// Rings of radius `r_j = 1 − s^j`, `j = 1..=levels`, each with
    /// `per_ring` equally spaced points, optionally plus the origin.
    pub fn radial_exponential(s: f64, levels: usize, per_ring: usize, include_origin: bool) -> Result<Self> {
        if !(s.is_finite() && s > 0.0 && s < 1.0) || levels == 0 || per_ring == 0 {
            return Err(Error::InvalidInput(
                "radial lattice needs s in (0, 1), levels >= 1, per_ring >= 1".into(),
            ));
        }
        let mut pts = Vec::new();
        if include_origin {
            pts.push(Complex64::new(0.0, 0.0));
        }
        for j in 1..=levels {
            let r = 1.0 - s.powi(j as i32);
            for k in 0..per_ring {
                pts.push(Complex64::from_polar(r, 2.0 * PI * k as f64 / per_ring as f64));
            }
        }
        Self::new(pts)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    /// Divide by the norm of the truncated coordinate vector (unit vectors).
    Truncated,
    /// Divide by the closed-form norm, or the disc-integral estimate for
    /// weighted spaces.
    ClosedForm,
}

/// `1/‖K_{λ_n}‖` for each point under the chosen normalization.
pub fn sample_scale_factors(b: &TruncatedBasis, pts: &PointSet, mode: NormMode) -> Result<Vec<f64>> {
    pts.points
        .iter()
        .map(|&p| match mode {
            NormMode::Truncated => Ok(1.0 / norm(&kernel_coordinates(b, p)?)),
            NormMode::ClosedForm => Ok(1.0 / kernel_norm(&b.spec, p)?.value),
        })
        .collect()
}

/// `{K_{λ_n} / ‖K_{λ_n}‖}` in basis coordinates.
pub fn normalized_kernel_family(b: &TruncatedBasis, pts: &PointSet, mode: NormMode) -> Result<FrameFamily> {
    let scales = sample_scale_factors(b, pts, mode)?;
    let vectors = pts
        .points
        .iter()
        .zip(&scales)
        .map(|(&p, &s)| Ok(kernel_coordinates(b, p)?.into_iter().map(|z| z * s).collect()))
        .collect::<Result<Vec<_>>>()?;
    FrameFamily::new(b.dim(), vectors)
}

#[derive(Debug, Clone)]
pub struct SamplingAudit {
    pub certificate: LFrameCertificate,
    pub truncation_degree: usize,
    /// Truncated over reference kernel norm per point. The reference is the
    /// closed form for Bergman and Fock, and the degree-2N truncation for
    /// weighted spaces.
    pub truncation_diagnostics: Vec<f64>,
    /// Set for weighted spaces, whose normalization is only an estimate.
    pub estimate_flag: bool,
    pub norm_mode: NormMode,
}

impl SamplingAudit {
    pub const NOTE: &'static str = "certificate valid for the degree-N truncation of the space only";
}

fn truncation_diagnostics(b: &TruncatedBasis, pts: &PointSet) -> Result<Vec<f64>> {
    let finer = match b.spec {
        KernelSpec::RadialWeightedBergman { .. } => Some(build_basis(&b.spec, 2 * b.degree.max(1))?),
        _ => None,
    };
    pts.points
        .iter()
        .map(|&p| {
            let trunc = norm(&kernel_coordinates(b, p)?);
            let reference = match &finer {
                Some(fb) => norm(&kernel_coordinates(fb, p)?),
                None => kernel_norm(&b.spec, p)?.value,
            };
            // Partial sums never exceed the full norm; clamp rounding at λ ≈ 0.
            Ok((trunc / reference).min(1.0))
        })
        .collect()
}

pub fn sampling_audit(
    b: &TruncatedBasis,
    pts: &PointSet,
    l: &OperatorMatrix,
    mode: NormMode,
    tol: &Tolerances,
) -> Result<SamplingAudit> {
    if l.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: l.dim() });
    }
    let family = normalized_kernel_family(b, pts, mode)?;
    let certificate = lframe_bounds(&family, l, tol)?;
    Ok(SamplingAudit {
        certificate,
        truncation_degree: b.degree,
        truncation_diagnostics: truncation_diagnostics(b, pts)?,
        estimate_flag: matches!(b.spec, KernelSpec::RadialWeightedBergman { .. }),
        norm_mode: mode,
    })
}

#[derive(Debug, Clone)]
pub struct SampleReconstruction {
    /// `a_f` with `Lf = Σ a_n k_{λ_n}`.
    pub coefficients: CoeffSeq,
    /// `Lf` in basis coordinates.
    pub reconstruction: Vec<Complex64>,
    /// `‖Lf_recon − Lf‖ / (‖L‖_F ‖f‖)`, or absolute when `f = 0` or `L = 0`.
    pub relative_error: f64,
}

fn check_f(b: &TruncatedBasis, l: &OperatorMatrix, f: &[Complex64]) -> Result<()> {
    if l.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: l.dim() });
    }
    if f.len() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: f.len() });
    }
    Ok(())
}

fn relative_error(got: &[Complex64], want: &[Complex64], scale: f64) -> f64 {
    let diff: Vec<Complex64> = got.iter().zip(want).map(|(a, b)| a - b).collect();
    let e = norm(&diff);
    if scale > 0.0 {
        e / scale
    } else {
        e
    }
}

/// `Lf = Σ a_n k_{λ_n}` with minimal-norm coefficients `a_f`.
pub fn operator_sample_reconstruct(
    b: &TruncatedBasis,
    pts: &PointSet,
    l: &OperatorMatrix,
    f_coords: &[Complex64],
    mode: NormMode,
    tol: &Tolerances,
) -> Result<SampleReconstruction> {
    check_f(b, l, f_coords)?;
    let family = normalized_kernel_family(b, pts, mode)?;
    let coefficients = atomic_coefficients(&family, l, f_coords, tol)?;
    let reconstruction = synthesis(&family, &coefficients)?;
    let lf = l.apply(f_coords)?;
    let scale = l.matrix().frobenius_norm() * norm(f_coords);
    Ok(SampleReconstruction {
        relative_error: relative_error(&reconstruction, &lf, scale),
        coefficients,
        reconstruction,
    })
}

#[derive(Debug, Clone)]
pub struct AdjointExpansion {
    /// `f(λ_n)`.
    pub samples: Vec<Complex64>,
    /// `1/‖K_{λ_n}‖`.
    pub scale_factors: Vec<f64>,
    /// `Σ f(λ_n)/‖K_{λ_n}‖ · g_n`.
    pub result: Vec<Complex64>,
    /// Against `L*f` computed directly.
    pub relative_error: f64,
}

/// `L*f = Σ f(λ_n)/‖K_{λ_n}‖ · g_n` with the minimal Bessel duals `g_n`.
pub fn adjoint_sample_expansion(
    b: &TruncatedBasis,
    pts: &PointSet,
    l: &OperatorMatrix,
    f_coords: &[Complex64],
    mode: NormMode,
    tol: &Tolerances,
) -> Result<AdjointExpansion> {
    check_f(b, l, f_coords)?;
    let family = normalized_kernel_family(b, pts, mode)?;
    let pair = minimal_bessel_dual(&family, l, tol)?;
    let scale_factors = sample_scale_factors(b, pts, mode)?;
    let samples = pts
        .points
        .iter()
        .map(|&p| evaluate(b, f_coords, p))
        .collect::<Result<Vec<_>>>()?;
    let weighted = CoeffSeq::new(samples.iter().zip(&scale_factors).map(|(s, c)| s * c).collect());
    let result = synthesis(&pair.duals, &weighted)?;
    let direct = l.adjoint().apply(f_coords)?;
    let scale = l.matrix().frobenius_norm() * norm(f_coords);
    Ok(AdjointExpansion {
        relative_error: relative_error(&result, &direct, scale),
        samples,
        scale_factors,
        result,
    })
}
