//! Problem documents: the JSON accepted on input.
//!
//! Complex numbers are `[re, im]`; matrices are row-major arrays of rows;
//! a family is an array of vectors.

use atomkit::atomic::OperatorMatrix;
use atomkit::frames::FrameFamily;
use atomkit::kernels::{default_carleson_grid, CarlesonSquare, KernelSpec, WeightFunction, WeightPreset};
use atomkit::numeric::{DenseMatrix, RankCutoff, Tolerances};
use atomkit::sampling::{NormMode, PointSet};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

pub type Cx = [f64; 2];

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub family: Option<Vec<Vec<Cx>>>,
    pub operator: Option<Vec<Vec<Cx>>>,
    /// Orthogonal projection onto polynomials of degree at most this value.
    pub operator_projection_degree: Option<usize>,
    pub vector: Option<Vec<Cx>>,
    pub kernel: Option<KernelDoc>,
    pub z: Option<Cx>,
    pub lambda: Option<Cx>,
    pub points: Option<Vec<Cx>>,
    pub point_preset: Option<PointPresetDoc>,
    pub weight: Option<WeightDoc>,
    pub eta: Option<f64>,
    pub grid: Option<GridDoc>,
    pub resolution: Option<usize>,
    pub degree: Option<usize>,
    pub norm_mode: Option<NormModeChoice>,
    pub samples: Option<usize>,
    pub tolerances: Option<TolerancesDoc>,
}

/// `truncated` / `closed_form` in documents, `truncated` / `closed-form` as a flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum NormModeChoice {
    Truncated,
    ClosedForm,
}

impl From<NormModeChoice> for NormMode {
    fn from(m: NormModeChoice) -> Self {
        match m {
            NormModeChoice::Truncated => NormMode::Truncated,
            NormModeChoice::ClosedForm => NormMode::ClosedForm,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelDoc {
    Bergman { eta: f64 },
    Fock { alpha: f64 },
    WeightedBergman { weight: WeightDoc, eta: f64, disc_alpha: Option<f64> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightDoc {
    Constant { value: f64 },
    Poly { s: f64 },
    Log { s: f64, t: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointPresetDoc {
    SquareLattice { spacing: f64, half_width: f64 },
    RadialExponential { s: f64, levels: usize, per_ring: usize, #[serde(default)] include_origin: bool },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub theta_count: usize,
    pub h_count: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDoc {
    /// `null` or absent selects the automatic cutoff.
    pub rank_cutoff_rel: Option<f64>,
    pub residual_tol: Option<f64>,
    pub bound_slack: Option<f64>,
}

pub const DEFAULT_GRID: (usize, usize) = (4, 24);
pub const DEFAULT_RESOLUTION: usize = 32;
pub const DEFAULT_SAMPLES: usize = 64;

fn missing(field: &str) -> CliError {
    CliError::Input(format!("missing required field \"{field}\""))
}

fn cx(v: Cx) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn vector_of(v: &[Cx]) -> Vec<Complex64> {
    v.iter().copied().map(cx).collect()
}

impl ProblemDocument {
    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        serde_json::from_slice(bytes).map_err(|e| CliError::Input(format!("schema: {e}")))
    }

    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        if let Some(d) = &self.tolerances {
            if let Some(r) = d.rank_cutoff_rel {
                t.rank_cutoff_rel = RankCutoff::Relative(r);
            }
            if let Some(r) = d.residual_tol {
                t.residual_tol = r;
            }
            if let Some(s) = d.bound_slack {
                t.bound_slack = s;
            }
        }
        t.validate()?;
        Ok(t)
    }

    pub fn family(&self) -> Result<FrameFamily, CliError> {
        let f = self.family.as_ref().ok_or_else(|| missing("family"))?;
        let dim = f.first().map(Vec::len).ok_or_else(|| CliError::Input("family is empty".into()))?;
        Ok(FrameFamily::new(dim, f.iter().map(|v| vector_of(v)).collect())?)
    }

    /// The document's operator; identity of size `dim` when none is given.
    pub fn operator_or_identity(&self, dim: usize) -> Result<OperatorMatrix, CliError> {
        match (&self.operator, self.operator_projection_degree) {
            (Some(_), Some(_)) => Err(CliError::Input(
                "give either \"operator\" or \"operator_projection_degree\", not both".into(),
            )),
            (Some(_), None) => {
                let l = self.operator()?;
                if l.dim() != dim {
                    return Err(atomkit::Error::DimensionMismatch { expected: dim, found: l.dim() }.into());
                }
                Ok(l)
            }
            (None, Some(k)) => {
                let mut p = DenseMatrix::zeros(dim, dim);
                for i in 0..=k.min(dim.saturating_sub(1)) {
                    p[(i, i)] = Complex64::new(1.0, 0.0);
                }
                Ok(OperatorMatrix::new(p)?)
            }
            (None, None) => Ok(OperatorMatrix::identity(dim)),
        }
    }

    pub fn operator(&self) -> Result<OperatorMatrix, CliError> {
        let rows = self.operator.as_ref().ok_or_else(|| missing("operator"))?;
        let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| vector_of(r)).collect();
        Ok(OperatorMatrix::new(DenseMatrix::from_rows(&rows)?)?)
    }

    pub fn vector(&self) -> Result<Vec<Complex64>, CliError> {
        Ok(vector_of(self.vector.as_ref().ok_or_else(|| missing("vector"))?))
    }

    pub fn kernel(&self) -> Result<KernelSpec, CliError> {
        Ok(match self.kernel.as_ref().ok_or_else(|| missing("kernel"))? {
            KernelDoc::Bergman { eta } => KernelSpec::bergman(*eta)?,
            KernelDoc::Fock { alpha } => KernelSpec::fock(*alpha)?,
            KernelDoc::WeightedBergman { weight, eta, disc_alpha } => {
                KernelSpec::weighted_bergman(weight.build()?, *eta, *disc_alpha)?
            }
        })
    }

    pub fn z(&self) -> Result<Complex64, CliError> {
        self.z.map(cx).ok_or_else(|| missing("z"))
    }

    pub fn lambda(&self) -> Result<Complex64, CliError> {
        self.lambda.map(cx).ok_or_else(|| missing("lambda"))
    }

    pub fn points(&self) -> Result<PointSet, CliError> {
        Ok(match (&self.points, &self.point_preset) {
            (Some(_), Some(_)) => {
                return Err(CliError::Input("give either \"points\" or \"point_preset\", not both".into()))
            }
            (Some(p), None) => PointSet::new(vector_of(p))?,
            (None, Some(PointPresetDoc::SquareLattice { spacing, half_width })) => {
                PointSet::square_lattice(*spacing, *half_width)?
            }
            (None, Some(PointPresetDoc::RadialExponential { s, levels, per_ring, include_origin })) => {
                PointSet::radial_exponential(*s, *levels, *per_ring, *include_origin)?
            }
            (None, None) => return Err(missing("points")),
        })
    }

    pub fn weight(&self) -> Result<WeightFunction, CliError> {
        self.weight.as_ref().ok_or_else(|| missing("weight"))?.build()
    }

    pub fn eta(&self) -> Result<f64, CliError> {
        self.eta.ok_or_else(|| missing("eta"))
    }

    pub fn grid(&self) -> Result<Vec<CarlesonSquare>, CliError> {
        let (t, h) = self.grid.as_ref().map_or(DEFAULT_GRID, |g| (g.theta_count, g.h_count));
        if t == 0 || h == 0 {
            return Err(CliError::Input("grid counts must be positive".into()));
        }
        Ok(default_carleson_grid(t, h))
    }
}

impl WeightDoc {
    pub fn build(&self) -> Result<WeightFunction, CliError> {
        let preset = match *self {
            WeightDoc::Constant { value } => WeightPreset::Constant { value },
            WeightDoc::Poly { s } => WeightPreset::Poly { s },
            WeightDoc::Log { s, t } => WeightPreset::Log { s, t },
        };
        Ok(WeightFunction::from_preset(preset)?)
    }
}
