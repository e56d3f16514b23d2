//! Self-maps: a closed catalog covering affine, rational, power and
//! finite-table forms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{MetricError, Point};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("{map} is undefined at {point}: {reason}")]
    Undefined {
        map: &'static str,
        point: Point,
        reason: &'static str,
    },
    #[error("{map} expects dimension {expected}, got {got}")]
    Dimension {
        map: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid map spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Point(#[from] MetricError),
}

/// A self-map `T`, applied coordinate-wise unless stated otherwise.
///
/// JSON form is internally tagged by `kind`, e.g.
/// `{"kind": "rational", "b": 2.0}` for `x -> 1/(2 + x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelfMapSpec {
    Identity,
    Negation,
    Constant {
        value: Point,
    },
    /// `x -> factor * x`
    Scale {
        factor: f64,
    },
    /// `x -> matrix * x + offset`, `matrix` given row-major.
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    /// `x -> 1 / (b + x)`
    Rational {
        b: f64,
    },
    /// `x -> x^p`, on positive coordinates.
    Power {
        p: f64,
    },
    /// `x -> 1 / sqrt(x)`
    ReciprocalSqrt,
    /// Finite lookup: `inputs[i] -> outputs[i]`, undefined elsewhere.
    Table {
        inputs: Vec<Point>,
        outputs: Vec<Point>,
    },
}

impl SelfMapSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SelfMapSpec::Identity => "identity",
            SelfMapSpec::Negation => "negation",
            SelfMapSpec::Constant { .. } => "constant",
            SelfMapSpec::Scale { .. } => "scale",
            SelfMapSpec::Affine { .. } => "affine",
            SelfMapSpec::Rational { .. } => "rational",
            SelfMapSpec::Power { .. } => "power",
            SelfMapSpec::ReciprocalSqrt => "reciprocal_sqrt",
            SelfMapSpec::Table { .. } => "table",
        }
    }

    /// The map swapping two points and fixing nothing.
    pub fn swap(p: Point, q: Point) -> Self {
        SelfMapSpec::Table {
            inputs: vec![p.clone(), q.clone()],
            outputs: vec![q, p],
        }
    }

    pub fn validate(&self) -> Result<(), MapError> {
        let bad = |msg: String| Err(MapError::InvalidSpec(msg));
        match self {
            SelfMapSpec::Scale { factor } if !factor.is_finite() => {
                bad(format!("scale factor {factor}"))
            }
            SelfMapSpec::Rational { b } if !b.is_finite() => bad(format!("rational offset {b}")),
            SelfMapSpec::Power { p } if !p.is_finite() => bad(format!("power exponent {p}")),
            SelfMapSpec::Affine { matrix, offset } => {
                let n = offset.len();
                if n == 0 || matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                    return bad(format!("affine map needs an {n}x{n} matrix"));
                }
                if matrix
                    .iter()
                    .flatten()
                    .chain(offset)
                    .any(|v| !v.is_finite())
                {
                    return bad("affine coefficients must be finite".into());
                }
                Ok(())
            }
            SelfMapSpec::Table { inputs, outputs } => {
                if inputs.is_empty() || inputs.len() != outputs.len() {
                    return bad("table needs equally many inputs and outputs".into());
                }
                let dim = inputs[0].dim();
                if inputs.iter().chain(outputs).any(|p| p.dim() != dim) {
                    return bad("table points must share one dimension".into());
                }
                for (i, a) in inputs.iter().enumerate() {
                    if inputs[..i].contains(a) {
                        return bad(format!("duplicate table input {a}"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Required dimension, if the map fixes one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SelfMapSpec::Constant { value } => Some(value.dim()),
            SelfMapSpec::Affine { offset, .. } => Some(offset.len()),
            SelfMapSpec::Table { inputs, .. } => inputs.first().map(Point::dim),
            _ => None,
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point, MapError> {
        if let Some(expected) = self.dim() {
            if expected != x.dim() {
                return Err(MapError::Dimension {
                    map: self.name(),
                    expected,
                    got: x.dim(),
                });
            }
        }
        let undefined = |reason| MapError::Undefined {
            map: self.name(),
            point: x.clone(),
            reason,
        };
        let coords = x.coords();
        let out = match self {
            SelfMapSpec::Identity => coords.to_vec(),
            SelfMapSpec::Negation => coords.iter().map(|c| -c).collect(),
            SelfMapSpec::Constant { value } => return Ok(value.clone()),
            SelfMapSpec::Scale { factor } => coords.iter().map(|c| factor * c).collect(),
            SelfMapSpec::Affine { matrix, offset } => matrix
                .iter()
                .zip(offset)
                .map(|(row, b)| row.iter().zip(coords).map(|(m, c)| m * c).sum::<f64>() + b)
                .collect(),
            SelfMapSpec::Rational { b } => {
                if coords.iter().any(|c| b + c == 0.0) {
                    return Err(undefined("pole at x = -b"));
                }
                coords.iter().map(|c| 1.0 / (b + c)).collect()
            }
            SelfMapSpec::Power { p } => {
                if coords.iter().any(|&c| c <= 0.0) {
                    return Err(undefined("power maps need positive coordinates"));
                }
                coords.iter().map(|c| c.powf(*p)).collect()
            }
            SelfMapSpec::ReciprocalSqrt => {
                if coords.iter().any(|&c| c <= 0.0) {
                    return Err(undefined("1/sqrt(x) needs positive coordinates"));
                }
                coords.iter().map(|c| 1.0 / c.sqrt()).collect()
            }
            SelfMapSpec::Table { inputs, outputs } => {
                return inputs
                    .iter()
                    .position(|p| p == x)
                    .map(|i| outputs[i].clone())
                    .ok_or_else(|| undefined("not a table input"));
            }
        };
        Point::new(out).map_err(|_| undefined("result is not finite"))
    }
}
