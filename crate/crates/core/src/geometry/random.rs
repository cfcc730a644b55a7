//! Seeded random bodies and unimodular maps for experiments and tests.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::body::ConvexBody;
use super::compare::hausdorff_distance;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Hull of `count` points with directions uniform on the sphere and radii
/// uniform in `[0.5, 1.5]`, translated by a small random offset. The origin
/// stays well inside (every facet at distance at least 0.05).
pub fn random_polytope(dim: usize, count: usize, rng: RngStream) -> Result<ConvexBody> {
    if !(2..=3).contains(&dim) {
        return Err(Error::Unsupported(format!("random polytopes in dimension {dim}")));
    }
    let mut r = rng.rng();
    for _ in 0..100 {
        let shift: Vec<f64> = (0..dim).map(|_| r.random_range(-0.15..0.15)).collect();
        let pts: Vec<Vec<f64>> = (0..count.max(dim + 1))
            .map(|_| {
                let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut r)).collect();
                let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
                let rad = r.random_range(0.5..1.5);
                g.iter().zip(&shift).map(|(x, s)| rad * x / norm + s).collect()
            })
            .collect();
        let Ok(body) = ConvexBody::polytope(dim, &pts) else { continue };
        let margin = body.as_polytope().and_then(|p| p.min_facet_offset()).unwrap_or(0.0);
        if margin > 0.05 {
            return Ok(body);
        }
    }
    Err(Error::Numerical("could not draw a random polytope around the origin".into()))
}

/// A pair of independent random polytopes with Hausdorff separation at least
/// `min_gap` (relative to the larger support maximum).
pub fn random_polytope_pair(dim: usize, count: usize, min_gap: f64, rng: RngStream) -> Result<(ConvexBody, ConvexBody)> {
    for attempt in 0..100u64 {
        let k = random_polytope(dim, count, rng.fork(2 * attempt))?;
        let l = random_polytope(dim, count, rng.fork(2 * attempt + 1))?;
        let gap = hausdorff_distance(&k, &l, None)?;
        if gap >= min_gap * k.scale().max(l.scale()) {
            return Ok((k, l));
        }
    }
    Err(Error::Numerical("no sufficiently separated pair found".into()))
}

/// A random matrix with determinant one: a Gaussian matrix rescaled, with
/// a row flipped if its determinant is negative.
pub fn random_sl(n: usize, rng: RngStream) -> DMatrix<f64> {
    let mut r = rng.rng();
    loop {
        let mut m: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut r));
        let mut det = m.determinant();
        if det.abs() < 1e-3 {
            continue;
        }
        if det < 0.0 {
            m.row_mut(0).neg_mut();
            det = -det;
        }
        return m / det.powf(1.0 / n as f64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polytopes_contain_origin_and_are_reproducible() {
        for dim in [2, 3] {
            let a = random_polytope(dim, 12, RngStream::new(5)).unwrap();
            let b = random_polytope(dim, 12, RngStream::new(5)).unwrap();
            assert!(a.contains_origin_interior());
            assert_eq!(a.as_polytope(), b.as_polytope());
        }
    }

    #[test]
    fn sl_has_unit_determinant() {
        for s in 0..5 {
            let m = random_sl(3, RngStream::new(s));
            assert!((m.determinant() - 1.0).abs() < 1e-12);
        }
    }
}
