use crate::error::{Error, Result};

/// How small a singular value must be, relative to the largest one, before it
/// is treated as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankCutoff {
    /// `8 · max(rows, cols) · f64::EPSILON`, resolved per matrix.
    Auto,
    Relative(f64),
}

impl RankCutoff {
    pub fn resolve(&self, rows: usize, cols: usize) -> f64 {
        match *self {
            RankCutoff::Auto => 8.0 * rows.max(cols).max(1) as f64 * f64::EPSILON,
            RankCutoff::Relative(r) => r,
        }
    }
}

/// Numerical thresholds shared by every certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rank_cutoff_rel: RankCutoff,
    /// Relative residual allowed in matrix identities.
    pub residual_tol: f64,
    /// Absolute slack when checking bound inequalities on sampled vectors.
    pub bound_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_cutoff_rel: RankCutoff::Auto,
            residual_tol: 1e-9,
            bound_slack: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if let RankCutoff::Relative(r) = self.rank_cutoff_rel {
            if !(r.is_finite() && r > 0.0 && r < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "rank_cutoff_rel must lie in (0, 1), got {r}"
                )));
            }
        }
        for (name, v) in [
            ("residual_tol", self.residual_tol),
            ("bound_slack", self.bound_slack),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}
