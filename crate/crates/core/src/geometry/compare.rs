//! Comparing bodies through their support functions: Hausdorff distance,
//! dilate and homothety detection.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::body::{ConvexBody, Rep};
use super::direction::{Direction, DirectionSet};
use crate::error::{check_dim, Error, Result};

/// Numerical tolerances shared by comparisons and inequality checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative slack tolerance.
    pub rel_tol: f64,
    /// Largest relative variation of `h_K / h_L` still read as a dilate.
    pub dilate_tol: f64,
    /// Standard errors allowed for Monte Carlo values.
    pub mc_sigma: f64,
    /// Relative error budget for values computed on circumscribed grid
    /// polytopes.
    pub grid_tol: f64,
    /// Relative deadband for asserted equalities of exact values.
    pub eq_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rel_tol: 1e-9, dilate_tol: 1e-6, mc_sigma: 3.0, grid_tol: 1e-2, eq_tol: 1e-6 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("dilate_tol", self.dilate_tol),
            ("mc_sigma", self.mc_sigma),
            ("grid_tol", self.grid_tol),
            ("eq_tol", self.eq_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

fn grid_for(dim: usize) -> Result<DirectionSet> {
    DirectionSet::default_for(dim)
}

/// Relative accuracy of the representation itself: zero for exact
/// representations, about the squared grid spacing for sampled ones.
pub fn representation_error(body: &ConvexBody) -> f64 {
    match body.rep() {
        Rep::SupportSampled(s) => {
            let d = s.directions().spacing();
            0.5 * d * d
        }
        Rep::LpCombination { first, second, .. } => representation_error(first).max(representation_error(second)),
        Rep::AffineImage { body, .. } => representation_error(body),
        _ => 0.0,
    }
}

/// `max_u |h_K(u) - h_L(u)|` over `directions` (the default grid if
/// `None`). A lower bound on the Hausdorff distance that converges as the
/// grid is refined.
pub fn hausdorff_distance(k: &ConvexBody, l: &ConvexBody, directions: Option<&DirectionSet>) -> Result<f64> {
    check_dim(k.dim(), l.dim())?;
    let own;
    let d = match directions {
        Some(d) => {
            check_dim(k.dim(), d.dim())?;
            d
        }
        None => {
            own = grid_for(k.dim())?;
            &own
        }
    };
    Ok(d.iter().map(|u| (k.h(u) - l.h(u)).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub enum DilateDecision {
    Yes { lambda: f64 },
    No { witness: Direction, deviation: f64 },
}

impl DilateDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, DilateDecision::Yes { .. })
    }
}

/// Tests `K = lambda L` by the spread of `h_K / h_L` over the grid.
pub fn is_dilate_pair(k: &ConvexBody, l: &ConvexBody, tol: &Tolerances) -> Result<DilateDecision> {
    check_dim(k.dim(), l.dim())?;
    let d = grid_for(k.dim())?;
    let effective = tol.dilate_tol.max(10.0 * representation_error(k).max(representation_error(l)));
    let mut ratios = Vec::with_capacity(d.len());
    for (i, u) in d.iter().enumerate() {
        let (hk, hl) = (k.h(u), l.h(u));
        if !(hk > 0.0 && hl > 0.0) {
            return Ok(DilateDecision::No { witness: d.direction(i), deviation: f64::INFINITY });
        }
        ratios.push(hk / hl);
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let lambda = sorted[sorted.len() / 2];
    let (worst, dev) = ratios
        .iter()
        .enumerate()
        .map(|(i, r)| (i, (r / lambda - 1.0).abs()))
        .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    if dev <= effective {
        Ok(DilateDecision::Yes { lambda })
    } else {
        Ok(DilateDecision::No { witness: d.direction(worst), deviation: dev })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HomothetyDecision {
    Yes { lambda: f64, translation: Vec<f64> },
    No { residual: f64 },
}

impl HomothetyDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, HomothetyDecision::Yes { .. })
    }
}

/// Tests `K = lambda L + x` by weighted least squares over the grid.
pub fn is_homothetic_pair(k: &ConvexBody, l: &ConvexBody, tol: &Tolerances) -> Result<HomothetyDecision> {
    check_dim(k.dim(), l.dim())?;
    let n = k.dim();
    let d = grid_for(n)?;
    let m = d.len();
    let mut a = DMatrix::zeros(m, n + 1);
    let mut rhs = DVector::zeros(m);
    for (i, u) in d.iter().enumerate() {
        let s = d.weight(i).sqrt();
        a[(i, 0)] = s * l.h(u);
        for c in 0..n {
            a[(i, c + 1)] = s * u[c];
        }
        rhs[i] = s * k.h(u);
    }
    let svd = a.clone().svd(true, true);
    let mut sol = svd.solve(&rhs, 1e-14).map_err(|e| Error::Numerical(e.to_string()))?;
    if sol[0] < 0.0 {
        // refit with lambda = 0
        let sub = a.columns(1, n).into_owned();
        let x = sub.svd(true, true).solve(&rhs, 1e-14).map_err(|e| Error::Numerical(e.to_string()))?;
        sol[0] = 0.0;
        for c in 0..n {
            sol[c + 1] = x[c];
        }
    }
    let resid = (&a * &sol - &rhs).norm() / rhs.norm().max(1e-300);
    let effective = tol.dilate_tol.max(10.0 * representation_error(k).max(representation_error(l)));
    if resid <= effective && sol[0] > 0.0 {
        Ok(HomothetyDecision::Yes { lambda: sol[0], translation: sol.rows(1, n).iter().copied().collect() })
    } else {
        Ok(HomothetyDecision::No { residual: resid })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hausdorff_examples() {
        let b1 = ConvexBody::ball(2, 1.0).unwrap();
        let b2 = ConvexBody::ball(2, 2.0).unwrap();
        assert_eq!(hausdorff_distance(&b1, &b1, None).unwrap(), 0.0);
        assert!((hausdorff_distance(&b1, &b2, None).unwrap() - 1.0).abs() < 1e-15);
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let d = hausdorff_distance(&sq, &b1, None).unwrap();
        assert!((d - (2f64.sqrt() - 1.0)).abs() < 1e-12, "{d}");
    }

    #[test]
    fn dilate_detection() {
        let tol = Tolerances::default();
        let k = ConvexBody::cube(3, 1.0).unwrap();
        let k3 = k.scaled(3.0).unwrap();
        match is_dilate_pair(&k3, &k, &tol).unwrap() {
            DilateDecision::Yes { lambda } => assert!((lambda - 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let b = ConvexBody::ball(3, 1.0).unwrap();
        match is_dilate_pair(&k, &b, &tol).unwrap() {
            DilateDecision::No { witness, deviation } => {
                // the ratio runs between 1 (axes) and sqrt 3 (diagonals)
                let r = k.h(witness.as_slice()) / b.h(witness.as_slice());
                assert!((r - 1.0).abs() < 1e-2 || (r - 3f64.sqrt()).abs() < 1e-2, "{r}");
                assert!(deviation > 0.2);
            }
            other => panic!("{other:?}"),
        }
        let moved = k.translated(&[0.1, 0.0, 0.0]).unwrap();
        assert!(!is_dilate_pair(&moved, &k, &tol).unwrap().is_yes());
    }

    #[test]
    fn homothety_detection() {
        let tol = Tolerances::default();
        let k = ConvexBody::polytope(2, &[vec![-1.0, -0.5], vec![1.0, -0.3], vec![0.2, 1.0]]).unwrap();
        let l = k.scaled(2.0).unwrap().translated(&[0.5, -1.0]).unwrap();
        match is_homothetic_pair(&l, &k, &tol).unwrap() {
            HomothetyDecision::Yes { lambda, translation } => {
                assert!((lambda - 2.0).abs() < 1e-9);
                assert!((translation[0] - 0.5).abs() < 1e-9 && (translation[1] + 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let disk = ConvexBody::ball(2, 1.0).unwrap();
        assert!(!is_homothetic_pair(&sq, &disk, &tol).unwrap().is_yes());
        let r = ConvexBody::reuleaux(1.0, &[0.0, 0.0]).unwrap();
        let half = ConvexBody::ball(2, 0.5).unwrap();
        assert!(!is_homothetic_pair(&r, &half, &tol).unwrap().is_yes());
    }
}
