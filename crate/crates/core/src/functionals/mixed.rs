//! Two-body mixed volumes from the polynomial `t -> V_n(K + tM)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::measure::{exact_polytope, grid_polytope, volume};
use crate::geometry::Rep;
use crate::geometry::{lp_combine, ConvexBody};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedVolumeFit {
    /// `V(K, j; M, ..., M)`.
    pub value: f64,
    /// Coefficients of `V_n(K + tM)` in increasing powers of `t`.
    pub coefficients: Vec<f64>,
    pub nodes: Vec<f64>,
    /// Largest relative mismatch of the constant and leading coefficients
    /// against `V_n(K)` and `V_n(M)`.
    pub residual: f64,
    pub approximate: bool,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn fit(k: &ConvexBody, m: &ConvexBody, nodes: &[f64]) -> Result<(Vec<f64>, bool)> {
    let n = k.dim();
    let mut vals = Vec::with_capacity(nodes.len());
    let mut approx = false;
    for &t in nodes {
        let v = volume(&lp_combine(1.0, 1.0, k, t, m)?)?;
        approx |= v.approximate;
        vals.push(v.value);
    }
    let a = DMatrix::from_fn(n + 1, n + 1, |r, c| nodes[r].powi(c as i32));
    let sol = a
        .full_piv_lu()
        .solve(&DVector::from_vec(vals))
        .ok_or_else(|| Error::Numerical("singular Vandermonde system".into()))?;
    Ok((sol.iter().copied().collect(), approx))
}

/// Bodies without a closed-form sum with a ball are replaced by their grid
/// polytope, so that every node volume is exact for the replacement.
fn polytope_or_grid(body: &ConvexBody) -> Result<(ConvexBody, bool)> {
    if body.dim() != 3 || matches!(body.rep(), Rep::Ball { .. }) || exact_polytope(body)?.is_some() {
        return Ok((body.clone(), false));
    }
    Ok((ConvexBody::from_polytope(grid_polytope(body)?), true))
}

/// `V(K, j; M, ..., M)`: `j` copies of `K` and `n - j` of `M`, read off the
/// coefficient of `t^(n-j)` in `V_n(K + tM)` fitted at `n + 1` nodes.
pub fn mixed_volume_pair(k: &ConvexBody, m: &ConvexBody, j: usize) -> Result<MixedVolumeFit> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.dim() });
    }
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!("mixed volumes in dimension {n}")));
    }
    if j < 1 || j > n {
        return Err(Error::InvalidArgument(format!("copy count must lie in 1..={n}, got {j}")));
    }
    let (k, k_grid) = &polytope_or_grid(k)?;
    let (m, m_grid) = &polytope_or_grid(m)?;
    let vk = volume(k)?;
    let vm = volume(m)?;
    if !(vk.value > 0.0 && vm.value > 0.0) {
        return Err(Error::Degenerate("mixed volumes need full-dimensional bodies".into()));
    }
    let s = (vk.value / vm.value).powf(1.0 / n as f64);
    let mut spread = 1.0;
    for attempt in 0..2 {
        let nodes: Vec<f64> = (1..=n + 1).map(|i| i as f64 * s * spread).collect();
        let (coef, approx) = fit(k, m, &nodes)?;
        let approx = approx || vk.approximate || vm.approximate || *k_grid || *m_grid;
        let residual = ((coef[0] - vk.value).abs() / vk.value).max((coef[n] - vm.value).abs() / vm.value);
        let limit = if approx { 5e-2 } else { 1e-6 };
        if residual <= limit {
            let value = coef[n - j] / binomial(n, n - j);
            return Ok(MixedVolumeFit { value, coefficients: coef, nodes, residual, approximate: approx });
        }
        if attempt == 0 {
            spread = 2.0;
        } else {
            return Err(Error::Numerical(format!("mixed-volume fit residual {residual:.3e} too large")));
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_and_disk() {
        let sq = ConvexBody::cuboid(&[0.0, 0.0], &[0.5, 0.5]).unwrap();
        let disk = ConvexBody::ball(2, 1.0).unwrap();
        let f = mixed_volume_pair(&sq, &disk, 1).unwrap();
        assert!((f.value - 2.0).abs() < 1e-10, "{}", f.value);
        assert!(f.residual < 1e-10);
        assert!((mixed_volume_pair(&sq, &disk, 2).unwrap().value - 1.0).abs() < 1e-10);
        let big = sq.scaled(2.0).unwrap();
        assert!((mixed_volume_pair(&big, &disk, 1).unwrap().value - 4.0).abs() < 1e-10);
    }

    #[test]
    fn self_mixed_volume_is_volume() {
        let c = ConvexBody::cube(3, 0.5).unwrap();
        for j in 1..=3 {
            let f = mixed_volume_pair(&c, &c, j).unwrap();
            assert!((f.value - 1.0).abs() < 1e-9, "{j} {}", f.value);
        }
    }

    #[test]
    fn smooth_sums_fit_through_their_grid_polytope() {
        let c = ConvexBody::cube(3, 0.5).unwrap();
        let e = ConvexBody::ellipsoid(DMatrix::from_diagonal(&DVector::from_vec(vec![0.2, 0.3, 0.5])), &[0.0; 3]).unwrap();
        let sum = lp_combine(2.0, 1.0, &c, 1.0, &e).unwrap();
        let ball = ConvexBody::ball(3, 1.0).unwrap();
        let f = mixed_volume_pair(&sum, &ball, 2).unwrap();
        assert!(f.approximate && f.residual < 1e-9, "{f:?}");
        let s = crate::geometry::measure::surface_area(&sum).unwrap().value;
        assert!((f.value - s / 3.0).abs() < 1e-9 * s, "{} {}", f.value, s / 3.0);
    }
}
