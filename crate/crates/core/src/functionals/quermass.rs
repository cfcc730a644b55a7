//! Quermassintegrals and their harmonic and affine (power-mean) variants.
//!
//! For `1 <= i <= n-1`, with `k = n - i` and `xi` Haar-distributed in
//! `G(n, k)`,
//!
//! * `W_i     = omega_n / omega_k * E[V_k(K|xi)]`
//! * `W^_i    = omega_n / omega_k * E[V_k(K|xi)^-1]^-1`
//! * `Phi_i   = omega_n / omega_k * E[V_k(K|xi)^-n]^(-1/n)`
//!
//! In the plane the expectation over lines is an integral over the circle,
//! computed by kink-aware quadrature; in higher dimension it is a Monte
//! Carlo average.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{mean_and_covariance, Estimate, JointEstimate};
use crate::error::{Error, Result};
use crate::geometry::measure::{mean_width, surface_area, volume, Measure};
use crate::geometry::planar::integrate_symmetrized;
use crate::geometry::{unit_ball_volume, ConvexBody};
use crate::grassmann::{project_body, sample_subspace};
use crate::rng::RngStream;

fn check_bodies(bodies: &[ConvexBody]) -> Result<usize> {
    let n = bodies.first().map(|b| b.dim()).ok_or_else(|| Error::InvalidArgument("no bodies".into()))?;
    for b in bodies {
        if b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
        }
    }
    Ok(n)
}

/// `omega_n / omega_k * E[V_k(K|xi)^q]^(1/q)` for every body, over shared
/// subspaces `xi` in `G(n, k)`.
pub fn power_mean_joint(bodies: &[ConvexBody], k: usize, q: f64, samples: usize, rng: RngStream) -> Result<JointEstimate> {
    let n = check_bodies(bodies)?;
    if k < 1 || k >= n {
        return Err(Error::InvalidArgument(format!("projection dimension must lie in 1..{n}, got {k}")));
    }
    if q == 0.0 || !q.is_finite() {
        return Err(Error::InvalidArgument("power-mean exponent must be finite and nonzero".into()));
    }
    let c = unit_ball_volume(n) / unit_ball_volume(k);
    if n == 2 {
        let mut values = Vec::with_capacity(bodies.len());
        for b in bodies {
            let mut bad = false;
            let integral = integrate_symmetrized(b, |t| {
                let w = b.w(&[t.cos(), t.sin()]);
                if !(w > 0.0) {
                    bad = true;
                }
                w.powf(q)
            });
            if bad {
                return Err(Error::Degenerate("a projection has nonpositive length".into()));
            }
            values.push(c * (integral / (2.0 * PI)).powf(1.0 / q));
        }
        return Ok(JointEstimate::deterministic(values, vec![false; bodies.len()]));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("Monte Carlo estimates need at least two samples".into()));
    }
    let rows: Vec<(Vec<f64>, bool)> = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<(Vec<f64>, bool)> {
            let xi = sample_subspace(n, k, rng.offset(1, s as u64))?;
            let mut row = Vec::with_capacity(bodies.len());
            let mut approx = false;
            for b in bodies {
                let v = if k == 1 {
                    let col: Vec<f64> = xi.basis().column(0).iter().copied().collect();
                    b.w(&col)
                } else {
                    let m = volume(&project_body(b, &xi)?)?;
                    approx |= m.approximate;
                    m.value
                };
                if !(v > 0.0) {
                    return Err(Error::Degenerate("a projection has nonpositive volume".into()));
                }
                row.push(v.powf(q));
            }
            Ok((row, approx))
        })
        .collect::<Result<Vec<_>>>()?;
    let approx = rows.iter().any(|r| r.1);
    let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.0).collect();
    let (mean, cov) = mean_and_covariance(&rows);
    let values: Vec<f64> = mean.iter().map(|m| c * m.powf(1.0 / q)).collect();
    let grad: Vec<f64> = mean.iter().map(|m| c / q * m.powf(1.0 / q - 1.0)).collect();
    let b = bodies.len();
    let mut covariance = cov;
    for i in 0..b {
        for j in 0..b {
            covariance[(i, j)] *= grad[i] * grad[j];
        }
    }
    Ok(JointEstimate { values, covariance, approximate: vec![approx; b], monte_carlo: true })
}

fn index_check(n: usize, i: usize) -> Result<()> {
    if i > n {
        Err(Error::InvalidArgument(format!("quermassintegral index must lie in 0..={n}, got {i}")))
    } else {
        Ok(())
    }
}

/// `W_i(K)` for all bodies, sharing subspaces.
pub(crate) fn quermass_joint(bodies: &[ConvexBody], i: usize, q: f64, samples: usize, rng: RngStream) -> Result<JointEstimate> {
    let n = check_bodies(bodies)?;
    index_check(n, i)?;
    if i == 0 {
        let ms: Vec<Measure> = bodies.iter().map(volume).collect::<Result<_>>()?;
        return Ok(JointEstimate::deterministic(
            ms.iter().map(|m| m.value).collect(),
            ms.iter().map(|m| m.approximate).collect(),
        ));
    }
    if i == n {
        return Ok(JointEstimate::deterministic(vec![unit_ball_volume(n); bodies.len()], vec![false; bodies.len()]));
    }
    power_mean_joint(bodies, n - i, q, samples, rng)
}

/// Quermassintegral `W_i(K)`; index 0 is the volume. Monte Carlo for
/// `n >= 3`.
pub fn quermassintegral(body: &ConvexBody, i: usize, samples: usize, rng: RngStream) -> Result<Estimate> {
    Ok(quermass_joint(std::slice::from_ref(body), i, 1.0, samples, rng)?.get(0))
}

/// Harmonic quermassintegral `W^_i(K)`.
pub fn harmonic_quermassintegral(body: &ConvexBody, i: usize, samples: usize, rng: RngStream) -> Result<Estimate> {
    Ok(quermass_joint(std::slice::from_ref(body), i, -1.0, samples, rng)?.get(0))
}

/// Affine quermassintegral `Phi_i(K)`, invariant under volume-preserving
/// linear maps.
pub fn affine_quermassintegral(body: &ConvexBody, i: usize, samples: usize, rng: RngStream) -> Result<Estimate> {
    let q = -(body.dim() as f64);
    Ok(quermass_joint(std::slice::from_ref(body), i, q, samples, rng)?.get(0))
}

/// Deterministic `W_i` where the body allows it: volume, `W_1` from the
/// boundary measure and `W_{n-1}` from the mean width.
pub fn quermassintegral_exact(body: &ConvexBody, i: usize) -> Result<Measure> {
    let n = body.dim();
    index_check(n, i)?;
    let omega = unit_ball_volume(n);
    if i == 0 {
        return volume(body);
    }
    if i == n {
        return Ok(Measure { value: omega, approximate: false });
    }
    if i == 1 {
        let s = surface_area(body)?;
        return Ok(Measure { value: s.value / n as f64, ..s });
    }
    if i == n - 1 {
        let b = mean_width(body)?;
        return Ok(Measure { value: 0.5 * omega * b.value, ..b });
    }
    Err(Error::Unsupported(format!("closed-form W_{i} in dimension {n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_values_are_exact() {
        for n in [2, 3] {
            let b = ConvexBody::ball(n, 2.0).unwrap();
            for i in 0..=n {
                let want = unit_ball_volume(n) * 2f64.powi((n - i) as i32);
                for q in [1.0, -1.0, -(n as f64)] {
                    let e = quermass_joint(std::slice::from_ref(&b), i, q, 50, RngStream::new(1)).unwrap().get(0);
                    assert!((e.value - want).abs() < 1e-9 * want, "n={n} i={i} q={q}: {}", e.value);
                }
            }
        }
    }

    #[test]
    fn planar_perimeter_agrees() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let w = quermassintegral(&sq, 1, 0, RngStream::new(0)).unwrap();
        assert!((w.value - 4.0).abs() < 1e-12);
        assert!((quermassintegral_exact(&sq, 1).unwrap().value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cube_exact_quermass() {
        let c = ConvexBody::cube(3, 0.5).unwrap();
        assert!((quermassintegral_exact(&c, 1).unwrap().value - 2.0).abs() < 1e-12);
        assert!((quermassintegral_exact(&c, 2).unwrap().value - PI).abs() < 1e-12);
    }

    #[test]
    fn mean_ordering_on_shared_samples() {
        let c = ConvexBody::cube(3, 0.5).unwrap();
        let b = [c];
        let w = power_mean_joint(&b, 1, 1.0, 400, RngStream::new(4)).unwrap();
        let h = power_mean_joint(&b, 1, -1.0, 400, RngStream::new(4)).unwrap();
        let a = power_mean_joint(&b, 1, -3.0, 400, RngStream::new(4)).unwrap();
        assert!(a.values[0] <= h.values[0] && h.values[0] < w.values[0]);
    }
}
