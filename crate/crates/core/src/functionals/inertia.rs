//! Polar moment of inertia and the isotropic constant.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::measure::{second_moment, Measure};
use crate::geometry::ConvexBody;

/// `I(K) = int_K |x - c_K|^2 dx`.
pub fn moment_of_inertia(body: &ConvexBody) -> Result<Measure> {
    let (m, v) = second_moment(body)?;
    Ok(Measure { value: m.trace(), approximate: v.approximate })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropicOptions {
    pub max_iter: usize,
    /// Convergence when the gradient norm falls below `grad_tol * objective`.
    pub grad_tol: f64,
    /// Central-difference step.
    pub fd_step: f64,
}

impl Default for IsotropicOptions {
    fn default() -> Self {
        IsotropicOptions { max_iter: 5000, grad_tol: 1e-7, fd_step: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicResult {
    pub l_k: f64,
    /// `min_{T in SL(n)} I(TK)`.
    pub min_inertia: f64,
    pub volume: f64,
    pub transform: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub approximate: bool,
}

/// Traceless matrix from `n^2 - 1` free parameters: off-diagonal entries,
/// then `E_kk - E_nn` for `k < n`.
fn traceless(n: usize, x: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut idx = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[(i, j)] = x[idx];
                idx += 1;
            }
        }
    }
    for k in 0..n - 1 {
        m[(k, k)] += x[idx];
        m[(n - 1, n - 1)] -= x[idx];
        idx += 1;
    }
    m
}

/// Minimizes `I(TK) = tr(T S T^T)` over `T = exp(M)`, `tr M = 0`, by
/// steepest descent with backtracking and central-difference gradients.
pub fn minimal_inertia(body: &ConvexBody, opts: &IsotropicOptions) -> Result<IsotropicResult> {
    let n = body.dim();
    let (s, vol) = second_moment(body)?;
    if !(vol.value > 0.0) {
        return Err(Error::Degenerate("body has zero volume".into()));
    }
    let f = |x: &[f64]| -> f64 {
        let t = traceless(n, x).exp();
        (&t * &s * t.transpose()).trace()
    };
    let dim = n * n - 1;
    let mut x = vec![0.0; dim];
    let mut fx = f(&x);
    let mut step = 1.0 / s.trace().max(1e-300) * fx.max(1e-300);
    step = step.clamp(1e-6, 1.0);
    let mut converged = false;
    let mut iterations = 0;
    let h = opts.fd_step;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut g = vec![0.0; dim];
        for k in 0..dim {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            g[k] = (f(&xp) - f(&xm)) / (2.0 * h);
        }
        let gn2: f64 = g.iter().map(|v| v * v).sum();
        if gn2.sqrt() < opts.grad_tol * fx {
            converged = true;
            break;
        }
        // step in units of the relative gradient
        let mut t = step;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - t * b / fx).collect();
            let ft = f(&trial);
            if ft <= fx - 1e-4 * t * gn2 / fx {
                x = trial;
                fx = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // no further decrease is resolvable at this precision
            converged = gn2.sqrt() < 1e3 * opts.grad_tol * fx;
            break;
        }
        step = (2.0 * t).min(10.0);
    }
    let l_k = (fx / (n as f64 * vol.value.powf((n as f64 + 2.0) / n as f64))).sqrt();
    Ok(IsotropicResult {
        l_k,
        min_inertia: fx,
        volume: vol.value,
        transform: traceless(n, &x).exp(),
        converged,
        iterations,
        approximate: vol.approximate,
    })
}

/// Isotropic constant `L_K` of an origin-symmetric body.
pub fn isotropic_constant(body: &ConvexBody, opts: &IsotropicOptions) -> Result<IsotropicResult> {
    if !body.is_origin_symmetric() {
        return Err(Error::InvalidArgument("the isotropic constant is defined for origin-symmetric bodies".into()));
    }
    minimal_inertia(body, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `min_T tr(T S T^T) = n det(S)^(1/n)` over `SL(n)`.
    fn closed_form(body: &ConvexBody) -> f64 {
        let (s, _) = second_moment(body).unwrap();
        let n = body.dim() as f64;
        n * s.determinant().powf(1.0 / n)
    }

    #[test]
    fn cube_constant() {
        let c = ConvexBody::cube(3, 0.5).unwrap();
        let r = isotropic_constant(&c, &IsotropicOptions::default()).unwrap();
        assert!(r.converged);
        assert!((r.l_k - 1.0 / 12f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn ellipsoid_matches_ball() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0f64, 1.0, 0.0, 1.0, 1.0, 0.2, 0.0, 0.2, 0.3]);
        let a = &a / a.determinant().powf(1.0 / 3.0);
        let e = ConvexBody::ellipsoid(a, &[0.0; 3]).unwrap();
        let b = ConvexBody::ball(3, 1.0).unwrap();
        let o = IsotropicOptions::default();
        let le = isotropic_constant(&e, &o).unwrap();
        let lb = isotropic_constant(&b, &o).unwrap();
        assert!(le.converged, "{le:?}");
        assert!((le.l_k - lb.l_k).abs() < 1e-6);
        assert!((le.min_inertia - closed_form(&e)).abs() < 1e-7 * le.min_inertia);
    }

    #[test]
    fn rejects_asymmetric() {
        let p = ConvexBody::polytope(2, &[vec![-1.0, -1.0], vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(isotropic_constant(&p, &IsotropicOptions::default()).is_err());
        assert!(minimal_inertia(&p, &IsotropicOptions::default()).is_ok());
    }

    #[test]
    fn inertia_translation_invariant() {
        let p = ConvexBody::polytope(3, &[
            vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        let q = p.translated(&[3.0, -2.0, 5.0]).unwrap();
        let a = moment_of_inertia(&p).unwrap().value;
        let b = moment_of_inertia(&q).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a);
    }
}
