//! Finite frames in ℂ^d: analysis, synthesis and frame operators, optimal
//! frame bounds, the canonical dual, and the reconstruction formula
//! `x = Σ ⟨x, f_n⟩ S⁻¹ f_n = Σ ⟨x, S⁻¹ f_n⟩ f_n`.
//!
//! Inner products are conjugate-linear in the second slot throughout, so that
//! point evaluation in a kernel space reads `f(λ) = ⟨f, K_λ⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{hermitian_eig, inner, norm, pinv, vec_is_finite, DenseMatrix, Tolerances};

/// Ordered family `{f_n}` of vectors in ℂ^dim. Zero vectors are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFamily {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl FrameFamily {
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidInput("a family needs at least one vector".into()));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            if !vec_is_finite(v) {
                return Err(Error::NonFinite("family vector"));
            }
        }
        Ok(FrameFamily { dim, vectors })
    }

    /// The family of columns of a `d × N` synthesis matrix.
    pub fn from_synthesis_matrix(t: &DenseMatrix) -> Result<Self> {
        Self::new(t.rows(), (0..t.cols()).map(|j| t.column(j)).collect())
    }

    /// Standard orthonormal basis of ℂ^dim.
    pub fn standard_basis(dim: usize) -> Self {
        let m = DenseMatrix::identity(dim);
        Self::from_synthesis_matrix(&m).expect("identity is finite")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, n: usize) -> &[Complex64] {
        &self.vectors[n]
    }

    /// A new family with `v` appended.
    pub fn with_appended(&self, v: Vec<Complex64>) -> Result<Self> {
        let mut vectors = self.vectors.clone();
        vectors.push(v);
        Self::new(self.dim, vectors)
    }

    /// `T`: the `d × N` matrix whose columns are the family vectors.
    pub fn synthesis_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_columns(self.dim, &self.vectors).expect("validated at construction")
    }

    /// `Θ = T*`: the `N × d` analysis matrix.
    pub fn analysis_matrix(&self) -> DenseMatrix {
        self.synthesis_matrix().adjoint()
    }
}

/// A finite coefficient sequence `(c_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    pub values: Vec<Complex64>,
}

impl CoeffSeq {
    pub fn new(values: Vec<Complex64>) -> Self {
        CoeffSeq { values }
    }

    pub fn zeros(n: usize) -> Self {
        CoeffSeq { values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ℓ² norm.
    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }
}

/// A named diagnostic number attached to a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub label: String,
    pub value: f64,
}

impl Residual {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Residual { label: label.into(), value }
    }
}

/// Optimal frame bounds of a finite family.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    /// `λ_min(S)`, present only when it exceeds `bound_slack`.
    pub lower_a: Option<f64>,
    /// `λ_max(S)`.
    pub upper_b: f64,
    pub is_frame: bool,
    pub residuals: Vec<Residual>,
    pub tolerances: Tolerances,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `(⟨x, f_n⟩)_n`.
pub fn analysis(f: &FrameFamily, x: &[Complex64]) -> Result<CoeffSeq> {
    check_len(f.dim, x.len())?;
    Ok(CoeffSeq::new(f.vectors.iter().map(|fv| inner(x, fv)).collect()))
}

/// `Σ c_n f_n`.
pub fn synthesis(f: &FrameFamily, c: &CoeffSeq) -> Result<Vec<Complex64>> {
    check_len(f.len(), c.len())?;
    let mut out = vec![Complex64::new(0.0, 0.0); f.dim];
    for (cn, fv) in c.values.iter().zip(&f.vectors) {
        for (o, &v) in out.iter_mut().zip(fv) {
            *o += cn * v;
        }
    }
    Ok(out)
}

/// `S = T T*`, a Hermitian positive semidefinite `d × d` matrix.
pub fn frame_operator(f: &FrameFamily) -> DenseMatrix {
    let t = f.synthesis_matrix();
    t.matmul(&t.adjoint()).expect("T is d×N")
}

pub fn frame_bounds(f: &FrameFamily, tol: &Tolerances) -> Result<BoundCertificate> {
    let s = frame_operator(f);
    let eig = hermitian_eig(&s, tol)?;
    let lambda_min = eig.min();
    let upper_b = eig.max().max(0.0);
    let is_frame = lambda_min > tol.bound_slack;
    Ok(BoundCertificate {
        lower_a: is_frame.then_some(lambda_min),
        upper_b,
        is_frame,
        residuals: vec![
            Residual::new("lambda_min", lambda_min),
            Residual::new("frame_operator_hermitian_defect", s.hermitian_defect()),
        ],
        tolerances: *tol,
    })
}

/// Optimal Bessel bound `λ_max(S) = σ_max(T)²`.
pub fn bessel_bound(f: &FrameFamily, tol: &Tolerances) -> Result<f64> {
    Ok(frame_bounds(f, tol)?.upper_b)
}

fn require_frame(f: &FrameFamily, tol: &Tolerances) -> Result<()> {
    let cert = frame_bounds(f, tol)?;
    if cert.is_frame {
        Ok(())
    } else {
        Err(Error::NotAFrame { lambda_min: cert.residuals[0].value })
    }
}

/// `d × N` matrix whose columns are `S⁻¹ f_n`, computed as `(T†)*` which is
/// better conditioned than forming `S⁻¹`.
fn dual_synthesis_matrix(f: &FrameFamily, tol: &Tolerances) -> Result<DenseMatrix> {
    Ok(pinv(&f.synthesis_matrix(), tol)?.adjoint())
}

/// `{S⁻¹ f_n}`.
pub fn canonical_dual(f: &FrameFamily, tol: &Tolerances) -> Result<FrameFamily> {
    require_frame(f, tol)?;
    FrameFamily::from_synthesis_matrix(&dual_synthesis_matrix(f, tol)?)
}

/// `Σ ⟨x, f_n⟩ S⁻¹ f_n`.
pub fn reconstruct(f: &FrameFamily, x: &[Complex64], tol: &Tolerances) -> Result<Vec<Complex64>> {
    check_len(f.dim, x.len())?;
    require_frame(f, tol)?;
    let coeffs = f.analysis_matrix().matvec(x)?;
    dual_synthesis_matrix(f, tol)?.matvec(&coeffs)
}

/// `Σ ⟨x, S⁻¹ f_n⟩ f_n`.
pub fn reconstruct_swapped(
    f: &FrameFamily,
    x: &[Complex64],
    tol: &Tolerances,
) -> Result<Vec<Complex64>> {
    check_len(f.dim, x.len())?;
    require_frame(f, tol)?;
    let coeffs = dual_synthesis_matrix(f, tol)?.adjoint().matvec(x)?;
    f.synthesis_matrix().matvec(&coeffs)
}
