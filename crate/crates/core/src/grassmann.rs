//! Haar-random linear subspaces and orthogonal projections onto them.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::measure::volume;
use crate::geometry::{ConvexBody, DirectionSet};
use crate::rng::RngStream;

/// An orthonormal basis (the columns of `basis`) of a linear subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Wraps a basis whose columns must be orthonormal to 1e-12.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let (n, j) = basis.shape();
        if j == 0 || j > n {
            return Err(Error::InvalidArgument(format!("a subspace basis needs 1..={n} columns, got {j}")));
        }
        let gram = basis.transpose() * &basis;
        if (gram - DMatrix::identity(j, j)).abs().max() > 1e-12 {
            return Err(Error::InvalidArgument("basis is not orthonormal".into()));
        }
        Ok(Subspace { basis })
    }

    /// The orthogonal complement of a nonzero vector.
    pub fn complement_of(u: &[f64]) -> Result<Self> {
        let n = u.len();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || n < 2 {
            return Err(Error::InvalidArgument("complement of a zero vector".into()));
        }
        // Householder reflection mapping e_k to +-u/|u|; its other columns
        // span u^perp
        let k = (0..n).max_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs())).unwrap();
        let mut v: Vec<f64> = u.iter().map(|x| x / norm).collect();
        let sign = if v[k] >= 0.0 { 1.0 } else { -1.0 };
        v[k] += sign;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let h = DMatrix::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 } - 2.0 * v[r] * v[c] / vv);
        let cols: Vec<usize> = (0..n).filter(|&c| c != k).collect();
        let basis = DMatrix::from_fn(n, n - 1, |r, c| h[(r, cols[c])]);
        Ok(Subspace { basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Coordinates map `R^n -> R^j`, i.e. `B^T`.
    pub fn coordinates(&self) -> DMatrix<f64> {
        self.basis.transpose()
    }
}

/// Draws a subspace from the Haar probability measure on `G(n, j)`: QR of a
/// Gaussian `n x j` matrix with the diagonal of `R` made positive.
pub fn sample_subspace(n: usize, j: usize, rng: RngStream) -> Result<Subspace> {
    sample_subspace_counted(n, j, rng).map(|(s, _)| s)
}

/// As [`sample_subspace`], also returning the number of rank-deficient
/// draws that were discarded.
pub fn sample_subspace_counted(n: usize, j: usize, rng: RngStream) -> Result<(Subspace, u32)> {
    if j < 1 || j >= n {
        return Err(Error::InvalidArgument(format!("subspace dimension must lie in 1..{n}, got {j}")));
    }
    let mut r = rng.rng();
    let mut retries = 0;
    loop {
        let g: DMatrix<f64> = DMatrix::from_fn(n, j, |_, _| StandardNormal.sample(&mut r));
        let qr = g.qr();
        let rm = qr.r();
        let diag_min = (0..j).map(|i| rm[(i, i)].abs()).fold(f64::INFINITY, f64::min);
        if diag_min < 1e-10 {
            retries += 1;
            if retries > 100 {
                return Err(Error::Numerical("repeated rank-deficient Gaussian draws".into()));
            }
            continue;
        }
        let mut q = qr.q();
        for c in 0..j {
            if rm[(c, c)] < 0.0 {
                q.column_mut(c).neg_mut();
            }
        }
        return Ok((Subspace { basis: q }, retries));
    }
}

/// The projection `K | xi` in the subspace's coordinates, so that
/// `h_{K|xi}(v) = h_K(B v)`.
pub fn project_body(body: &ConvexBody, subspace: &Subspace) -> Result<ConvexBody> {
    if body.dim() != subspace.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: subspace.ambient_dim() });
    }
    body.linear_image(&subspace.coordinates(), &vec![0.0; subspace.dim()])
}

/// Outcome of a strict-projection experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionFraction {
    pub fraction: f64,
    pub strict: usize,
    pub samples: usize,
    /// One-sided 99% Clopper-Pearson lower bound on the true fraction.
    pub lower_99: f64,
}

/// Relative margin below which `V_j(K|xi) < V_j(L|xi)` is not counted.
pub const STRICTNESS_MARGIN: f64 = 1e-9;

/// Monte Carlo estimate of the Haar measure of the subspaces `xi` with
/// `V_j(K|xi) < V_j(L|xi)` (by more than `1e-9 V_j(L|xi)`). Requires
/// `h_K <= h_L` on the default grid.
pub fn strict_projection_fraction(
    k: &ConvexBody,
    l: &ConvexBody,
    j: usize,
    samples: usize,
    rng: RngStream,
) -> Result<ProjectionFraction> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: l.dim() });
    }
    let n = k.dim();
    let grid = DirectionSet::default_for(n)?;
    let scale = k.scale().max(l.scale());
    for u in grid.iter() {
        if k.h(u) > l.h(u) + 1e-9 * scale {
            return Err(Error::InvalidArgument("K is not contained in L".into()));
        }
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is needed".into()));
    }
    let mut strict = 0;
    for i in 0..samples {
        let xi = sample_subspace(n, j, rng.offset(1, i as u64))?;
        let vk = volume(&project_body(k, &xi)?)?.value;
        let vl = volume(&project_body(l, &xi)?)?.value;
        if vk < vl - STRICTNESS_MARGIN * vl {
            strict += 1;
        }
    }
    Ok(ProjectionFraction {
        fraction: strict as f64 / samples as f64,
        strict,
        samples,
        lower_99: clopper_pearson_lower(strict, samples, 0.01),
    })
}

/// One-sided Clopper-Pearson lower confidence bound for a binomial rate.
pub fn clopper_pearson_lower(successes: usize, trials: usize, alpha: f64) -> f64 {
    if successes == 0 {
        return 0.0;
    }
    // P(X >= s | q) is increasing in q; solve P(X >= s | q) = alpha
    let tail = |q: f64| -> f64 {
        // 1 - P(X <= s-1), summed in log space
        let ln_q = q.ln();
        let ln_1q = (1.0 - q).ln();
        let mut lg = vec![0.0; trials + 1];
        for i in 1..=trials {
            lg[i] = lg[i - 1] + (i as f64).ln();
        }
        let mut below = 0.0;
        for x in 0..successes {
            let ln_c = lg[trials] - lg[x] - lg[trials - x];
            below += (ln_c + x as f64 * ln_q + (trials - x) as f64 * ln_1q).exp();
        }
        1.0 - below
    };
    let (mut lo, mut hi) = (0.0f64, successes as f64 / trials as f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bases_are_orthonormal_and_reproducible() {
        for (n, j) in [(2, 1), (3, 1), (3, 2), (5, 3)] {
            let s = sample_subspace(n, j, RngStream::at(3, 9)).unwrap();
            let g = s.basis().transpose() * s.basis();
            assert!((g - DMatrix::identity(j, j)).abs().max() < 1e-12);
            assert_eq!(s, sample_subspace(n, j, RngStream::at(3, 9)).unwrap());
        }
        assert!(sample_subspace(3, 3, RngStream::new(0)).is_err());
        assert!(sample_subspace(3, 0, RngStream::new(0)).is_err());
    }

    #[test]
    fn complement_is_orthogonal() {
        let u = [0.3, -0.5, 0.8];
        let s = Subspace::complement_of(&u).unwrap();
        let g = s.basis().transpose() * s.basis();
        assert!((g - DMatrix::identity(2, 2)).abs().max() < 1e-14);
        for c in 0..2 {
            let d: f64 = (0..3).map(|r| s.basis()[(r, c)] * u[r]).sum();
            assert!(d.abs() < 1e-15);
        }
    }

    #[test]
    fn cube_shadows() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let axis = Subspace::new(DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0])).unwrap();
        let sq = project_body(&cube, &axis).unwrap();
        assert!((volume(&sq).unwrap().value - 4.0).abs() < 1e-14);
        let diag = Subspace::complement_of(&[1.0, 1.0, 1.0]).unwrap();
        let hex = project_body(&cube, &diag).unwrap();
        assert_eq!(hex.as_polytope().unwrap().vertex_count(), 6);
        assert!((volume(&hex).unwrap().value - 4.0 * 3f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn ball_projects_to_ball() {
        let b = ConvexBody::ball(3, 1.0).unwrap();
        for j in [1, 2] {
            let s = sample_subspace(3, j, RngStream::new(j as u64)).unwrap();
            let p = project_body(&b, &s).unwrap();
            let want = crate::geometry::unit_ball_volume(j);
            assert!((volume(&p).unwrap().value - want).abs() < 1e-12);
        }
    }

    #[test]
    fn strict_fraction_examples() {
        let b1 = ConvexBody::ball(3, 1.0).unwrap();
        let b2 = ConvexBody::ball(3, 2.0).unwrap();
        let same = strict_projection_fraction(&b1, &b1, 2, 50, RngStream::new(1)).unwrap();
        assert_eq!(same.strict, 0);
        let all = strict_projection_fraction(&b1, &b2, 1, 50, RngStream::new(1)).unwrap();
        assert_eq!(all.strict, 50);
        assert!(strict_projection_fraction(&b2, &b1, 1, 10, RngStream::new(1)).is_err());
    }

    #[test]
    fn clopper_pearson() {
        // all successes: lower bound alpha^{1/n}
        let lb = clopper_pearson_lower(100, 100, 0.01);
        assert!((lb - 0.01f64.powf(0.01)).abs() < 1e-9);
        assert_eq!(clopper_pearson_lower(0, 10, 0.01), 0.0);
    }
}
