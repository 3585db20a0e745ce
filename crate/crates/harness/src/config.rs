//! Experiment configuration: a single JSON document describing the field
//! tower, curve, code, partition, decoders and error model.

use std::sync::Arc;

use fracdec::{
    AffinePoint, Coordinate, CurveModel, Elem, EvalCode, ExtensionTower, Field, FractionalSpec, PartitionPlan,
};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Hermitian {
        q0: u32,
    },
    /// `x^u = Σ_i L[i] y^{p^i}`.
    Kummer {
        u: u32,
        #[serde(rename = "L")]
        linearized: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub z: Coordinate,
    /// Values of `z` for each part, as base-field element indices.
    pub parts: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderChoice {
    Fractional,
    Interleaved,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorModel {
    /// Fresh random positions in every trial.
    #[default]
    Uniform,
    /// One random position set per weight, shared by all its trials.
    CommonPositions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightRange {
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorSpec {
    pub weights: WeightRange,
    #[serde(default)]
    pub model: ErrorModel,
}

fn default_trials() -> usize {
    100
}

fn default_c() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Base field as `"p^e"` or a prime power such as `"9"`.
    pub field: String,
    /// Defining polynomial of the base field over `F_p`, ascending.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<u32>>,
    /// Extension degree.
    pub l: u32,
    /// Defining polynomial of the extension over the base field, ascending
    /// base-field indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension_polynomial: Option<Vec<u32>>,
    /// Basis `ζ` of the extension, as extension-field indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<u32>>,
    pub curve: CurveSpec,
    pub beta: u32,
    /// Evaluation points `[x, y]`; all affine base-field points by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[u32; 2]>>,
    pub partition: PartitionSpec,
    #[serde(default)]
    pub decoder: DecoderChoice,
    /// Also run the full-download decoder over the extension field.
    #[serde(default)]
    pub baseline: bool,
    pub errors: ErrorSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Fixed locator excess for the collaborative decoder; when absent every
    /// admissible value is tried in ascending order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_excess: Option<u32>,
    /// Parameter of the reported interleaved bounds.
    #[serde(default = "default_c")]
    pub c: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every constraint and builds the decoding instance.
    pub fn build(&self) -> Result<FractionalSpec, HarnessError> {
        let invalid = |e: &dyn std::fmt::Display| HarnessError::Invalid(e.to_string());
        if self.trials == 0 {
            return Err(HarnessError::Invalid("trials must be positive".into()));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(HarnessError::Invalid("c must be a positive number".into()));
        }
        let base = Field::from_spec(&self.field, self.polynomial.as_deref()).map_err(|e| invalid(&e))?;
        let ext = match &self.extension_polynomial {
            Some(poly) => {
                if poly.len() != self.l as usize + 1 {
                    return Err(HarnessError::Invalid(format!(
                        "extension_polynomial needs {} coefficients",
                        self.l + 1
                    )));
                }
                let coeffs: Vec<Elem> = poly.iter().map(|&c| Elem(c)).collect();
                Field::extension_with_polynomial(&base, &coeffs).map_err(|e| invalid(&e))?
            }
            None => Field::extension(&base, self.l).map_err(|e| invalid(&e))?,
        };
        let tower = match &self.basis {
            Some(zeta) => ExtensionTower::with_basis(base.clone(), ext, zeta.iter().map(|&z| Elem(z)).collect()),
            None => ExtensionTower::from_fields(base.clone(), ext),
        }
        .map_err(|e| invalid(&e))?;
        let curve = match &self.curve {
            CurveSpec::Hermitian { q0 } => CurveModel::hermitian(base.clone(), *q0),
            CurveSpec::Kummer { u, linearized } => {
                CurveModel::kummer(base.clone(), *u, linearized.iter().map(|&a| Elem(a)).collect())
            }
        }
        .map_err(|e| invalid(&e))?;
        let curve = Arc::new(curve);
        let points = match &self.points {
            Some(pts) => pts.iter().map(|&[x, y]| AffinePoint::new(Elem(x), Elem(y))).collect(),
            None => curve.affine_points(&base),
        };
        let n = points.len();
        let code = EvalCode::new(curve, base, points, self.beta).map_err(|e| invalid(&e))?;
        let values = self.partition.parts.iter().map(|p| p.iter().map(|&a| Elem(a)).collect()).collect();
        let plan = PartitionPlan::from_fibers(&code, self.partition.z, values).map_err(|e| invalid(&e))?;
        let spec = FractionalSpec::new(Arc::new(tower), code, plan).map_err(|e| invalid(&e))?;
        let w = self.errors.weights;
        if w.min > w.max || w.max > n {
            return Err(HarnessError::Invalid(format!("weights {}..={} must lie within 0..={n}", w.min, w.max)));
        }
        Ok(spec)
    }
}
