//! Circumscribed polytopes `{x : x.u_i <= h_i}` from support data, built by
//! polar duality: the facets of `conv{u_i / h_i}` are the vertices of the
//! intersection.

use super::body::ConvexBody;
use super::direction::DirectionSet;
use super::polytope::Polytope;
use crate::error::{Error, Result};

/// The polytope `{x : x.u <= h_K(u) for u in D}`. It contains `K` and
/// converges to it as the grid is refined.
pub fn polytope_from_support(body: &ConvexBody, directions: &DirectionSet) -> Result<Polytope> {
    if body.dim() != directions.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: directions.dim() });
    }
    let values: Vec<f64> = directions.iter().map(|u| body.h(u)).collect();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 1e-9 * scale {
        return intersect(directions, &values, None);
    }
    // move an interior point to the origin first: the mean of the support
    // points lies in the body
    let n = body.dim();
    let mut c = vec![0.0; n];
    for u in directions.iter() {
        for (ci, xi) in c.iter_mut().zip(body.support_point(u)) {
            *ci += xi;
        }
    }
    c.iter_mut().for_each(|x| *x /= directions.len() as f64);
    intersect(directions, &values, Some(&c))
}

/// Wulff polytope of raw support data.
pub(crate) fn wulff_polytope(directions: &DirectionSet, values: &[f64]) -> Result<Polytope> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 1e-9 * scale {
        return intersect(directions, values, None);
    }
    // Steiner point of the data, which lies inside the body
    let n = directions.dim();
    let total = directions.total_weight();
    let mut c = vec![0.0; n];
    for (i, u) in directions.iter().enumerate() {
        let w = directions.weight(i) * values[i] * n as f64 / total;
        for (ci, ui) in c.iter_mut().zip(u) {
            *ci += w * ui;
        }
    }
    intersect(directions, values, Some(&c))
}

fn intersect(directions: &DirectionSet, values: &[f64], center: Option<&[f64]>) -> Result<Polytope> {
    let n = directions.dim();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let shifted: Vec<f64> = match center {
        Some(c) => directions.iter().zip(values).map(|(u, h)| h - dot(u, c)).collect(),
        None => values.to_vec(),
    };
    if shifted.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::Degenerate("support data does not describe a body with interior".into()));
    }
    let back = |x: Vec<f64>| -> Vec<f64> {
        match center {
            Some(c) => x.iter().zip(c).map(|(a, b)| a + b).collect(),
            None => x,
        }
    };
    if n == 1 {
        let mut hi = f64::INFINITY;
        let mut lo = f64::NEG_INFINITY;
        for (u, h) in directions.iter().zip(&shifted) {
            if u[0] > 0.0 {
                hi = hi.min(h / u[0]);
            } else {
                lo = lo.max(h / u[0]);
            }
        }
        if !(hi.is_finite() && lo.is_finite()) {
            return Err(Error::Degenerate("directions do not bound the body".into()));
        }
        return Polytope::from_points(1, &[back(vec![lo]), back(vec![hi])]);
    }
    if n > 3 {
        return Err(Error::Unsupported(format!("halfspace intersection in dimension {n}")));
    }
    let dual: Vec<Vec<f64>> = directions.iter().zip(&shifted).map(|(u, h)| u.iter().map(|x| x / h).collect()).collect();
    let hull = Polytope::from_points(n, &dual)?;
    match hull.min_facet_offset() {
        Some(m) if m > 0.0 => {}
        _ => return Err(Error::Degenerate("directions do not bound the body".into())),
    }
    let verts: Vec<Vec<f64>> =
        hull.facets().iter().map(|f| back(f.normal.iter().map(|x| x / f.offset).collect())).collect();
    Polytope::from_points(n, &verts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_from_four_directions() {
        let d = DirectionSet::circle(4).unwrap();
        let b = ConvexBody::ball(2, 1.0).unwrap();
        let p = polytope_from_support(&b, &d).unwrap();
        assert_eq!(p.vertex_count(), 4);
        assert!((p.volume().unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn circumscribes_and_converges() {
        let b = ConvexBody::ball(3, 1.0).unwrap();
        let d = DirectionSet::icosphere(3).unwrap();
        let p = polytope_from_support(&b, &d).unwrap();
        let v = p.volume().unwrap();
        let exact = 4.0 * std::f64::consts::PI / 3.0;
        assert!(v > exact && v < exact * 1.01, "{v}");
    }

    #[test]
    fn polytope_is_recovered() {
        let c = ConvexBody::cuboid(&[2.0, 2.0, 2.0], &[1.0, 1.0, 1.0]).unwrap();
        let d = DirectionSet::icosphere(2).unwrap();
        let p = polytope_from_support(&c, &d).unwrap();
        assert!((p.volume().unwrap() - 8.0).abs() < 1e-9);
    }

    #[test]
    fn off_center_wulff() {
        let d = DirectionSet::circle(6).unwrap();
        let vals: Vec<f64> = d.iter().map(|u| 1.0 + 3.0 * u[0]).collect();
        let p = wulff_polytope(&d, &vals).unwrap();
        assert_eq!(p.vertex_count(), 6);
        assert!((p.support(&[1.0, 0.0]) - 4.0).abs() < 1e-12);
    }
}
