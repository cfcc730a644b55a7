//! JSON body specifications.
//!
//! ```json
//! {"dim": 2,
//!  "rep": {"type": "lp_sum", "p": 2, "a": 1, "b": 1,
//!          "first": {"dim": 2, "rep": {"type": "polytope", "vertices": [[-1,-1],[1,-1],[1,1],[-1,1]]}},
//!          "second": {"dim": 2, "rep": {"type": "ball", "radius": 1}}},
//!  "flags": {"contains_origin_interior": true}}
//! ```
//!
//! `p` may be the string `"inf"`. Flags are optional assertions checked
//! against the constructed body. Unknown fields are rejected.

use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::body::{lp_combine, ConvexBody};
use super::direction::DirectionSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub dim: usize,
    pub rep: RepSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepSpec {
    Ball {
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Ellipsoid {
        /// Rows of the symmetric positive-definite matrix `A`.
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    SupportSampled {
        directions: Vec<Vec<f64>>,
        values: Vec<f64>,
    },
    Reuleaux {
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    AffineImage {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        translation: Option<Vec<f64>>,
        body: Box<BodySpec>,
    },
    LpSum {
        #[serde(serialize_with = "ser_p", deserialize_with = "de_p")]
        p: f64,
        a: f64,
        b: f64,
        first: Box<BodySpec>,
        second: Box<BodySpec>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contains_origin_interior: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_symmetric: Option<bool>,
}

/// Reads an exponent that may be a number or `"inf"`.
pub fn parse_p(s: &str) -> Result<f64> {
    let t = s.trim();
    if matches!(t, "inf" | "infinity" | "Inf" | "∞") {
        return Ok(f64::INFINITY);
    }
    let p: f64 = t.parse().map_err(|_| Error::Spec(format!("invalid exponent {s:?}")))?;
    if p.is_nan() {
        return Err(Error::Spec(format!("invalid exponent {s:?}")));
    }
    Ok(p)
}

pub(crate) fn ser_p<S: Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

pub(crate) fn de_p<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(x) => Ok(x),
        Raw::Text(t) => parse_p(&t).map_err(serde::de::Error::custom),
    }
}

fn matrix(rows: &[Vec<f64>], cols: usize) -> Result<DMatrix<f64>> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Spec(format!("matrix rows must all have length {cols}")));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn center_or_origin(c: &Option<Vec<f64>>, dim: usize) -> Result<Vec<f64>> {
    match c {
        Some(v) if v.len() != dim => Err(Error::Spec(format!("center has length {}, expected {dim}", v.len()))),
        Some(v) => Ok(v.clone()),
        None => Ok(vec![0.0; dim]),
    }
}

impl BodySpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("body specs always serialize")
    }

    pub fn build(&self) -> Result<ConvexBody> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Spec("dim must be at least 1".into()));
        }
        let body = match &self.rep {
            RepSpec::Ball { radius, center } => ConvexBody::ball_at(*radius, &center_or_origin(center, n)?)?,
            RepSpec::Ellipsoid { matrix: m, center } => {
                ConvexBody::ellipsoid(matrix(m, n)?, &center_or_origin(center, n)?)?
            }
            RepSpec::Polytope { vertices } => ConvexBody::polytope(n, vertices)?,
            RepSpec::SupportSampled { directions, values } => {
                let d = DirectionSet::from_directions(n, directions)?;
                ConvexBody::support_sampled(Arc::new(d), values.clone())?
            }
            RepSpec::Reuleaux { width, center } => {
                if n != 2 {
                    return Err(Error::Spec("reuleaux bodies are planar".into()));
                }
                ConvexBody::reuleaux(*width, &center_or_origin(center, 2)?)?
            }
            RepSpec::AffineImage { matrix: m, translation, body } => {
                let inner = body.build()?;
                let mm = matrix(m, inner.dim())?;
                if mm.nrows() != n {
                    return Err(Error::Spec(format!("affine image has {} rows, expected {n}", mm.nrows())));
                }
                inner.affine_image(mm, &center_or_origin(translation, n)?)?
            }
            RepSpec::LpSum { p, a, b, first, second } => {
                let k = first.build()?;
                let l = second.build()?;
                if k.dim() != n || l.dim() != n {
                    return Err(Error::Spec("lp_sum operands must have the outer dimension".into()));
                }
                lp_combine(*p, *a, &k, *b, &l)?
            }
        };
        if body.dim() != n {
            return Err(Error::Spec(format!("body has dimension {}, spec says {n}", body.dim())));
        }
        if let Some(f) = &self.flags {
            if let Some(want) = f.contains_origin_interior {
                if want != body.contains_origin_interior() {
                    return Err(Error::Spec(format!("contains_origin_interior asserted {want} but is {}", !want)));
                }
            }
            if let Some(want) = f.origin_symmetric {
                if want != body.is_origin_symmetric() {
                    return Err(Error::Spec(format!("origin_symmetric asserted {want} but is {}", !want)));
                }
            }
        }
        Ok(body)
    }
}
