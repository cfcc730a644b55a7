//! Mixed projection bodies in R^3 and the composite functionals
//! `W_{3-j}(Pi_{2-k} K)`.
//!
//! `h_{Pi_i K}(u)` is the `i`-th planar quermassintegral of the shadow
//! `K | u^perp`: its area for `i = 0` and half its perimeter for `i = 1`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functionals::{quermassintegral_exact, JointEstimate, Measure};
use crate::geometry::{planar_area, planar_perimeter, ConvexBody, DirectionSet};
use crate::grassmann::{project_body, Subspace};

#[derive(Debug, Clone)]
pub struct ProjectionBodySpec {
    /// `0` (shadow area) or `1` (half shadow perimeter).
    pub i: usize,
    /// Antipodally closed sampling grid.
    pub grid: Arc<DirectionSet>,
}

impl ProjectionBodySpec {
    pub fn new(i: usize, grid: Arc<DirectionSet>) -> Result<Self> {
        if i > 1 {
            return Err(Error::InvalidArgument(format!("mixed projection body index must be 0 or 1, got {i}")));
        }
        if grid.dim() != 3 {
            return Err(Error::Unsupported("mixed projection bodies are implemented for n = 3".into()));
        }
        Ok(ProjectionBodySpec { i, grid })
    }

    /// Spec for the index matching homogeneity `k` (`i = 2 - k`).
    pub fn for_degree(k: usize, grid: Arc<DirectionSet>) -> Result<Self> {
        if !(1..=2).contains(&k) {
            return Err(Error::InvalidArgument(format!("k must be 1 or 2, got {k}")));
        }
        Self::new(2 - k, grid)
    }
}

/// Shadow quermassintegral `W_i(K | u^perp)` in the plane.
pub fn shadow_quermass(body: &ConvexBody, u: &[f64], i: usize) -> Result<f64> {
    let s = Subspace::complement_of(u)?;
    let shadow = project_body(body, &s)?;
    match i {
        0 => planar_area(&shadow),
        1 => Ok(0.5 * planar_perimeter(&shadow)?),
        _ => Err(Error::InvalidArgument(format!("index {i}"))),
    }
}

/// `Pi_i K` as a support-sampled body on `spec.grid`.
pub fn mixed_projection_body(body: &ConvexBody, spec: &ProjectionBodySpec) -> Result<ConvexBody> {
    if body.dim() != 3 {
        return Err(Error::Unsupported("mixed projection bodies are implemented for n = 3".into()));
    }
    let grid = &spec.grid;
    let m = grid.len();
    // shadows onto u^perp and (-u)^perp coincide: evaluate one of each pair
    let reps: Vec<usize> = (0..m).filter(|&k| k <= grid.antipode(k)).collect();
    let vals: Vec<f64> =
        reps.par_iter().map(|&k| shadow_quermass(body, grid.get(k), spec.i)).collect::<Result<Vec<_>>>()?;
    let mut values = vec![0.0; m];
    for (&k, v) in reps.iter().zip(&vals) {
        if !(*v > 0.0) {
            return Err(Error::Degenerate("a shadow has zero measure".into()));
        }
        values[k] = *v;
        values[grid.antipode(k)] = *v;
    }
    ConvexBody::support_sampled(grid.clone(), values)
}

/// `W_{3-j}(Pi_{2-k} K)`, homogeneous of degree `j k`.
pub fn composite_projection_functional(body: &ConvexBody, j: usize, k: usize, grid: Arc<DirectionSet>) -> Result<Measure> {
    if !(1..=3).contains(&j) {
        return Err(Error::InvalidArgument(format!("j must lie in 1..=3, got {j}")));
    }
    let pi = mixed_projection_body(body, &ProjectionBodySpec::for_degree(k, grid)?)?;
    let m = quermassintegral_exact(&pi, 3 - j)?;
    Ok(Measure { value: m.value, approximate: true })
}

pub(crate) fn composite_joint(bodies: &[ConvexBody], j: usize, k: usize, grid: Arc<DirectionSet>) -> Result<JointEstimate> {
    let mut values = Vec::with_capacity(bodies.len());
    for b in bodies {
        values.push(composite_projection_functional(b, j, k, grid.clone())?.value);
    }
    Ok(JointEstimate::deterministic(values, vec![true; bodies.len()]))
}
