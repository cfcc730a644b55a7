//! Convex bodies, support functions and exact planar/polytope measures.

pub mod body;
pub mod direction;
pub mod halfspace;
pub mod measure;
pub mod hull;
pub mod planar;
pub mod polytope;

pub use body::{lp_combine, lp_mix, BodyFlags, ConvexBody, Rep, SampledSupport, WidthProfile};
pub use direction::{sphere_area, unit_ball_volume, Direction, DirectionSet};
pub use halfspace::polytope_from_support;
pub use planar::{area_by_support_integral, planar_area, planar_perimeter};
pub use polytope::{Facet, Polytope};

pub mod compare;
pub mod random;
pub mod spec_file;

pub use compare::{
    hausdorff_distance, is_dilate_pair, is_homothetic_pair, representation_error, DilateDecision,
    HomothetyDecision, Tolerances,
};
pub use spec_file::BodySpec;

use crate::error::{Error, Result};

/// Convex hull of points in the plane or in space.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<ConvexBody> {
    let dim = points.first().map(|p| p.len()).unwrap_or(0);
    if !(2..=3).contains(&dim) {
        return Err(Error::Unsupported(format!("convex hull in dimension {dim}")));
    }
    ConvexBody::polytope(dim, points)
}
