//! Capacities: `Cap_1` is the surface area, `Cap_2` (Newtonian, in R^3) is
//! estimated by walk on spheres.
//!
//! Walkers start uniformly on a sphere of radius `R` enclosing the body. The
//! probability of ever hitting the body is exactly `C / R` with
//! `Cap_2 = 4 pi C`, because the spherical mean of the exterior potential
//! over an enclosing sphere is `C / R`. A walker that leaves the sphere
//! escapes with probability `1 - R/|x|`; otherwise it re-enters at a point
//! drawn from the exterior harmonic measure of the sphere.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;

use super::{quermass::quermass_joint, Estimate, JointEstimate};
use crate::error::{Error, Result};
use crate::geometry::body::Rep;
use crate::geometry::measure::{exact_polytope, surface_area, Measure};
use crate::geometry::{polytope_from_support, ConvexBody, DirectionSet};
use crate::rng::RngStream;

/// `Cap_1(K)`: the boundary measure.
pub fn capacity_q1(body: &ConvexBody) -> Result<Measure> {
    surface_area(body)
}

/// `Cap_1(K) = n W_1(K)` through the Grassmannian estimate of `W_1`.
pub fn capacity_q1_mc(body: &ConvexBody, samples: usize, rng: RngStream) -> Result<Estimate> {
    let n = body.dim() as f64;
    let e = quermass_joint(std::slice::from_ref(body), 1, 1.0, samples, rng)?.get(0);
    Ok(Estimate { value: n * e.value, stderr: n * e.stderr, approximate: e.approximate })
}

/// Lower bound on the distance to the (possibly enlarged) body.
enum Distance {
    Ball { center: [f64; 3], radius: f64 },
    Facets { normals: Vec<[f64; 3]>, offsets: Vec<f64> },
}

impl Distance {
    fn build(body: &ConvexBody) -> Result<(Distance, bool)> {
        if let Rep::Ball { radius, center } = body.rep() {
            return Ok((Distance::Ball { center: [center[0], center[1], center[2]], radius: *radius }, false));
        }
        let (poly, approx) = match exact_polytope(body)? {
            Some(p) => (p, false),
            None => {
                let grid = DirectionSet::icosphere(3)?;
                (polytope_from_support(body, &grid)?, true)
            }
        };
        let normals = poly.facets().iter().map(|f| [f.normal[0], f.normal[1], f.normal[2]]).collect();
        let offsets = poly.facets().iter().map(|f| f.offset).collect();
        Ok((Distance::Facets { normals, offsets }, approx))
    }

    #[inline]
    fn eval(&self, x: &[f64; 3]) -> f64 {
        match self {
            Distance::Ball { center, radius } => {
                let d = [x[0] - center[0], x[1] - center[1], x[2] - center[2]];
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() - radius
            }
            Distance::Facets { normals, offsets } => {
                let mut m = f64::NEG_INFINITY;
                for (n, b) in normals.iter().zip(offsets) {
                    let v = n[0] * x[0] + n[1] * x[1] + n[2] * x[2] - b;
                    if v > m {
                        m = v;
                    }
                }
                m
            }
        }
    }
}

const ABSORB: f64 = 1e-6;
const MAX_STEPS: usize = 1_000_000;

fn sphere_point(rng: &mut ChaCha8Rng) -> [f64; 3] {
    UnitSphere.sample(rng)
}

/// Re-entry point on the sphere `|y| = r` for a walker at `x`, `|x| = rho > r`,
/// conditioned on hitting the sphere.
fn harmonic_return(x: &[f64; 3], rho: f64, r: f64, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let u: f64 = rng.random();
    let inv = 1.0 / (r + rho) + u * (1.0 / (rho - r) - 1.0 / (rho + r));
    let d2 = 1.0 / (inv * inv);
    let t = ((r * r + rho * rho - d2) / (2.0 * r * rho)).clamp(-1.0, 1.0);
    let s = (1.0 - t * t).max(0.0).sqrt();
    let e = [x[0] / rho, x[1] / rho, x[2] / rho];
    // a unit vector orthogonal to e
    let a = if e[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = a[0] * e[0] + a[1] * e[1] + a[2] * e[2];
    let mut e1 = [a[0] - dot * e[0], a[1] - dot * e[1], a[2] - dot * e[2]];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
    let e2 = [e[1] * e1[2] - e[2] * e1[1], e[2] * e1[0] - e[0] * e1[2], e[0] * e1[1] - e[1] * e1[0]];
    let phi = 2.0 * PI * rng.random::<f64>();
    let (c, sn) = (phi.cos(), phi.sin());
    let mut y = [0.0; 3];
    for k in 0..3 {
        y[k] = r * (t * e[k] + s * (c * e1[k] + sn * e2[k]));
    }
    y
}

fn walk(dist: &Distance, r: f64, rng: &mut ChaCha8Rng) -> bool {
    let p = sphere_point(rng);
    let mut x = [r * p[0], r * p[1], r * p[2]];
    let eps = ABSORB * r;
    for _ in 0..MAX_STEPS {
        let d = dist.eval(&x);
        if d < eps {
            return true;
        }
        let s = sphere_point(rng);
        for k in 0..3 {
            x[k] += d * s[k];
        }
        let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if rho > r {
            if rng.random::<f64>() >= r / rho {
                return false;
            }
            x = harmonic_return(&x, rho, r, rng);
        }
    }
    false
}

/// `max_u h_K(u)` over a grid, slightly inflated: a bound on `max |x|`.
fn circumradius(body: &ConvexBody) -> Result<f64> {
    let g = DirectionSet::icosphere(3)?;
    let m = g.iter().map(|u| body.h(u)).fold(0.0f64, f64::max);
    Ok(1.01 * m)
}

/// Newtonian capacity of several bodies in R^3. Body `b` uses the start
/// radius `2 * circumradius(b)`, and walker `i` draws from the same stream
/// for every body, so dilates see scaled copies of the same paths.
pub fn capacity_q2_joint(bodies: &[ConvexBody], walkers: usize, rng: RngStream) -> Result<JointEstimate> {
    for b in bodies {
        if b.dim() != 3 {
            return Err(Error::Unsupported("walk-on-spheres capacity is implemented for n = 3".into()));
        }
    }
    if walkers < 2 {
        return Err(Error::InvalidArgument("at least two walkers are needed".into()));
    }
    let mut setups = Vec::with_capacity(bodies.len());
    let mut approx = Vec::with_capacity(bodies.len());
    for b in bodies {
        let (d, a) = Distance::build(b)?;
        setups.push((d, 2.0 * circumradius(b)?));
        approx.push(a);
    }
    estimate(&setups, walkers, rng, approx)
}

fn estimate(setups: &[(Distance, f64)], walkers: usize, rng: RngStream, approx: Vec<bool>) -> Result<JointEstimate> {
    const CHUNK: usize = 1024;
    let nb = setups.len();
    let chunks = walkers.div_ceil(CHUNK);
    let partial: Vec<(Vec<u64>, Vec<u64>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hits = vec![0u64; nb];
            let mut joint = vec![0u64; nb * nb];
            let mut ind = vec![false; nb];
            for w in c * CHUNK..((c + 1) * CHUNK).min(walkers) {
                for (b, (d, r)) in setups.iter().enumerate() {
                    let mut g = rng.rng_for(w as u64);
                    ind[b] = walk(d, *r, &mut g);
                    hits[b] += ind[b] as u64;
                }
                for i in 0..nb {
                    for j in 0..nb {
                        joint[i * nb + j] += (ind[i] && ind[j]) as u64;
                    }
                }
            }
            (hits, joint)
        })
        .collect();
    let mut hits = vec![0u64; nb];
    let mut joint = vec![0u64; nb * nb];
    for (h, j) in partial {
        for i in 0..nb {
            hits[i] += h[i];
        }
        for i in 0..nb * nb {
            joint[i] += j[i];
        }
    }
    let m = walkers as f64;
    let p: Vec<f64> = hits.iter().map(|h| *h as f64 / m).collect();
    let values: Vec<f64> = (0..nb).map(|b| 4.0 * PI * setups[b].1 * p[b]).collect();
    let mut covariance = nalgebra::DMatrix::zeros(nb, nb);
    for i in 0..nb {
        for j in 0..nb {
            let pij = joint[i * nb + j] as f64 / m;
            let c = (pij - p[i] * p[j]) * m / (m - 1.0) / m;
            covariance[(i, j)] = (4.0 * PI) * (4.0 * PI) * setups[i].1 * setups[j].1 * c;
        }
    }
    Ok(JointEstimate { values, covariance, approximate: approx, monte_carlo: true })
}

/// Newtonian capacity `Cap_2(K)` in R^3, normalized so that
/// `Cap_2(rB) = 4 pi r`. `start_radius` defaults to twice the
/// circumradius and must be at least that.
pub fn capacity_newtonian_wos(
    body: &ConvexBody,
    walkers: usize,
    start_radius: Option<f64>,
    rng: RngStream,
) -> Result<Estimate> {
    if body.dim() != 3 {
        return Err(Error::Unsupported("walk-on-spheres capacity is implemented for n = 3".into()));
    }
    if walkers < 2 {
        return Err(Error::InvalidArgument("at least two walkers are needed".into()));
    }
    let rc = circumradius(body)?;
    let r = match start_radius {
        Some(r) if r < 2.0 * rc / 1.01 => {
            return Err(Error::InvalidArgument(format!(
                "start radius {r} does not leave the body inside the half-radius ball (circumradius {rc})"
            )))
        }
        Some(r) => r,
        None => 2.0 * rc,
    };
    let (d, approx) = Distance::build(body)?;
    Ok(estimate(&[(d, r)], walkers, rng, vec![approx])?.get(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_return_lands_on_sphere() {
        let mut g = RngStream::new(3).rng();
        let y = harmonic_return(&[0.0, 0.0, 5.0], 5.0, 2.0, &mut g);
        let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ball_capacity_small_run() {
        let b = ConvexBody::ball(3, 1.0).unwrap();
        let e = capacity_newtonian_wos(&b, 20_000, None, RngStream::new(8)).unwrap();
        assert!((e.value - 4.0 * PI).abs() < 4.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn dilates_share_paths() {
        let c = ConvexBody::cube(3, 1.0).unwrap();
        let c2 = c.scaled(2.0).unwrap();
        let j = capacity_q2_joint(&[c, c2], 2000, RngStream::new(2)).unwrap();
        assert!((j.values[1] - 2.0 * j.values[0]).abs() < 1e-9 * j.values[1]);
    }

    #[test]
    fn q1_is_surface() {
        let c = ConvexBody::cube(3, 0.5).unwrap();
        assert!((capacity_q1(&c).unwrap().value - 6.0).abs() < 1e-12);
    }
}
