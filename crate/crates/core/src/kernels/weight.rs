use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Named radial weights available without writing code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightPreset {
    /// `ω(r) = value`.
    Constant { value: f64 },
    /// `ω(r) = (1 − r²)^s`.
    Poly { s: f64 },
    /// `ω(r) = (1 − r²)^s · (log(e / (1 − r²)))^t`.
    Log { s: f64, t: f64 },
}

/// A positive radial weight `ω(|z|)` on the unit disc.
#[derive(Clone)]
pub struct WeightFunction {
    label: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl WeightFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        WeightFunction { label: label.into(), eval: Arc::new(f) }
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::from_preset(WeightPreset::Constant { value })
    }

    pub fn poly(s: f64) -> Result<Self> {
        Self::from_preset(WeightPreset::Poly { s })
    }

    pub fn log_weight(s: f64, t: f64) -> Result<Self> {
        Self::from_preset(WeightPreset::Log { s, t })
    }

    pub fn from_preset(p: WeightPreset) -> Result<Self> {
        match p {
            WeightPreset::Constant { value } => {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::InvalidInput(format!("constant weight must be positive, got {value}")));
                }
                Ok(Self::new(format!("constant({value})"), move |_| value))
            }
            WeightPreset::Poly { s } => {
                if !s.is_finite() {
                    return Err(Error::NonFinite("weight exponent"));
                }
                Ok(Self::new(format!("poly(s={s})"), move |r| (1.0 - r * r).powf(s)))
            }
            WeightPreset::Log { s, t } => {
                if !(s.is_finite() && t.is_finite()) {
                    return Err(Error::NonFinite("weight exponent"));
                }
                Ok(Self::new(format!("log(s={s}, t={t})"), move |r| {
                    let q = 1.0 - r * r;
                    q.powf(s) * (1.0 - q.ln()).powf(t)
                }))
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `ω(r)` for `r ∈ [0, 1)`; rejects non-positive or non-finite values.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::DomainViolation(format!("weight radius {r} outside [0, 1)")));
        }
        let v = (self.eval)(r);
        if !v.is_finite() {
            return Err(Error::QuadratureDivergence(format!(
                "weight {} is not finite at r = {r}",
                self.label
            )));
        }
        if v <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "weight {} is not positive at r = {r}",
                self.label
            )));
        }
        Ok(v)
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("WeightFunction").field(&self.label).finish()
    }
}
