//! Convex bodies described by their support functions.
//!
//! A [`ConvexBody`] is an immutable, cheaply clonable handle. Composite
//! bodies (L_p combinations, affine images) keep references to their parts
//! and evaluate support values exactly through the tree.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::direction::{Direction, DirectionSet};
use super::halfspace::wulff_polytope;
use super::polytope::Polytope;
use crate::error::{check_dim, Error, Result};

/// Named planar constant-width profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthProfile {
    ReuleauxTriangle,
}

/// Support values on a direction grid, realized as the circumscribed
/// (Wulff) polytope `{x : x.u_i <= h_i}`.
#[derive(Debug, Clone)]
pub struct SampledSupport {
    directions: Arc<DirectionSet>,
    values: Vec<f64>,
    polytope: Polytope,
}

impl SampledSupport {
    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }
}

#[derive(Debug, Clone)]
pub enum Rep {
    Ball { radius: f64, center: Vec<f64> },
    /// `h(u) = sqrt(u^T A u) + c.u`, i.e. the body `c + A^{1/2} B`.
    Ellipsoid { matrix: DMatrix<f64>, center: Vec<f64> },
    Polytope(Polytope),
    SupportSampled(SampledSupport),
    ConstantWidth2D { profile: WidthProfile, width: f64, center: Vec<f64> },
    /// `(a h_K^p + b h_L^p)^{1/p}`; `p = 1` is the Minkowski combination and
    /// `p = inf` the convex hull of the union.
    LpCombination { p: f64, a: f64, first: ConvexBody, b: f64, second: ConvexBody },
    /// `h(u) = h_K(M^T u) + t.u`; `M` may be rectangular (rows = output dim).
    AffineImage { matrix: DMatrix<f64>, translation: Vec<f64>, body: ConvexBody },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BodyFlags {
    pub contains_origin_interior: bool,
    pub origin_symmetric: bool,
}

#[derive(Clone)]
pub struct ConvexBody {
    dim: usize,
    rep: Arc<Rep>,
    flags: BodyFlags,
}

impl fmt::Debug for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvexBody(dim={}, {}, {:?})", self.dim, self.kind(), self.flags)
    }
}

const SYM_TOL: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|x| *x == 0.0)
}

impl ConvexBody {
    fn from_rep(dim: usize, rep: Rep, flags: BodyFlags) -> Self {
        ConvexBody { dim, rep: Arc::new(rep), flags }
    }

    // ----- constructors -------------------------------------------------

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball_at(radius, &vec![0.0; dim])
    }

    pub fn ball_at(radius: f64, center: &[f64]) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
        }
        let dim = center.len();
        if dim < 1 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let flags = BodyFlags {
            contains_origin_interior: norm(center) < radius,
            origin_symmetric: is_zero(center),
        };
        Ok(Self::from_rep(dim, Rep::Ball { radius, center: center.to_vec() }, flags))
    }

    /// Ellipsoid `c + A^{1/2} B` for a symmetric positive-definite `A`.
    pub fn ellipsoid(matrix: DMatrix<f64>, center: &[f64]) -> Result<Self> {
        let dim = center.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows() });
        }
        let asym = (&matrix - matrix.transpose()).abs().max();
        if asym > 1e-12 * matrix.abs().max() {
            return Err(Error::InvalidArgument("ellipsoid matrix must be symmetric".into()));
        }
        let chol = matrix
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidArgument("ellipsoid matrix must be positive definite".into()))?;
        let c = DVector::from_column_slice(center);
        let inside = c.dot(&chol.solve(&c)) < 1.0;
        let flags = BodyFlags { contains_origin_interior: inside, origin_symmetric: is_zero(center) };
        Ok(Self::from_rep(dim, Rep::Ellipsoid { matrix, center: center.to_vec() }, flags))
    }

    pub fn polytope(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        Ok(Self::from_polytope(Polytope::from_points(dim, points)?))
    }

    pub fn from_polytope(poly: Polytope) -> Self {
        let dim = poly.dim();
        let contains = match poly.min_facet_offset() {
            Some(m) => m > 0.0,
            None => {
                // no boundary structure (dim > 3): probe on a grid
                let body = Self::from_rep(dim, Rep::Polytope(poly.clone()), BodyFlags::default());
                body.origin_margin() > 0.0
            }
        };
        let flags = BodyFlags { contains_origin_interior: contains, origin_symmetric: poly.is_origin_symmetric(SYM_TOL) };
        Self::from_rep(dim, Rep::Polytope(poly), flags)
    }

    /// Axis-aligned cube `center + [-half, half]^n`.
    pub fn cube(dim: usize, half: f64) -> Result<Self> {
        Ok(Self::from_polytope(Polytope::cuboid(&vec![0.0; dim], &vec![half; dim])?))
    }

    pub fn cuboid(center: &[f64], half: &[f64]) -> Result<Self> {
        Ok(Self::from_polytope(Polytope::cuboid(center, half)?))
    }

    /// Reuleaux triangle of the given width centered at `center`, with one
    /// corner pointing along +y.
    pub fn reuleaux(width: f64, center: &[f64]) -> Result<Self> {
        if center.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: center.len() });
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidArgument(format!("width must be positive, got {width}")));
        }
        // the triangle is the intersection of the three disks of radius
        // `width` around its corners
        let inside = reuleaux_corners(width)
            .iter()
            .all(|v| ((v[0]).powi(2) + (v[1]).powi(2)).sqrt() > 0.0 && {
                let d = ((v[0] + center[0]).powi(2) + (v[1] + center[1]).powi(2)).sqrt();
                d < width
            });
        let flags = BodyFlags { contains_origin_interior: inside, origin_symmetric: false };
        Ok(Self::from_rep(
            2,
            Rep::ConstantWidth2D { profile: WidthProfile::ReuleauxTriangle, width, center: center.to_vec() },
            flags,
        ))
    }

    /// Support values sampled on `directions`. The data must be the support
    /// function of a convex body: every halfspace `x.u_i <= h_i` has to touch
    /// the intersection of all of them (within `1e-9` of the body's scale).
    pub fn support_sampled(directions: Arc<DirectionSet>, values: Vec<f64>) -> Result<Self> {
        let dim = directions.dim();
        if values.len() != directions.len() {
            return Err(Error::InvalidArgument(format!(
                "{} support values for {} directions",
                values.len(),
                directions.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("support values must be finite".into()));
        }
        if dim > 3 {
            return Err(Error::Unsupported("sampled support functions in dimension > 3".into()));
        }
        let polytope = wulff_polytope(&directions, &values)?;
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        for (i, u) in directions.iter().enumerate() {
            let h = polytope.support(u);
            if h < values[i] - 1e-9 * scale {
                return Err(Error::NonConvex(format!(
                    "value {:.6e} in direction {i} exceeds the support {h:.6e} of the induced body",
                    values[i]
                )));
            }
        }
        let contains = values.iter().all(|v| *v > 0.0);
        let symmetric = (0..values.len())
            .all(|i| (values[i] - values[directions.antipode(i)]).abs() <= 1e-12 * scale);
        let flags = BodyFlags { contains_origin_interior: contains, origin_symmetric: symmetric };
        Ok(Self::from_rep(dim, Rep::SupportSampled(SampledSupport { directions, values, polytope }), flags))
    }

    /// `M K + t`. `M` must have `self.dim()` columns; its row count is the
    /// output dimension.
    pub fn affine_image(&self, matrix: DMatrix<f64>, translation: &[f64]) -> Result<Self> {
        if matrix.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: matrix.ncols() });
        }
        let out = matrix.nrows();
        check_dim(out, translation.len())?;
        let square = out == self.dim;
        let invertible = square && matrix.clone().lu().determinant().abs() > 1e-300;
        let origin_symmetric = self.flags.origin_symmetric && is_zero(translation);
        let mut body = Self::from_rep(
            out,
            Rep::AffineImage { matrix, translation: translation.to_vec(), body: self.clone() },
            BodyFlags { contains_origin_interior: false, origin_symmetric },
        );
        body.flags.contains_origin_interior = if invertible && is_zero(translation) {
            self.flags.contains_origin_interior
        } else if out == self.dim && !invertible {
            false
        } else {
            body.origin_margin() > 0.0
        };
        Ok(body)
    }

    /// The dilate `lambda K` (lambda > 0).
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {lambda}")));
        }
        if lambda == 1.0 {
            return Ok(self.clone());
        }
        match &*self.rep {
            Rep::Ball { radius, center } if is_zero(center) => Self::ball(self.dim, radius * lambda),
            Rep::AffineImage { matrix, translation, body } if is_zero(translation) && is_scalar(matrix).is_some() => {
                let s = is_scalar(matrix).unwrap() * lambda;
                if s == 1.0 {
                    return Ok(body.clone());
                }
                body.affine_image(DMatrix::identity(self.dim, self.dim) * s, &vec![0.0; self.dim])
            }
            _ => self.affine_image(DMatrix::identity(self.dim, self.dim) * lambda, &vec![0.0; self.dim]),
        }
    }

    /// The translate `K + x`.
    pub fn translated(&self, x: &[f64]) -> Result<Self> {
        check_dim(self.dim, x.len())?;
        match &*self.rep {
            Rep::Ball { radius, center } => {
                let c: Vec<f64> = center.iter().zip(x).map(|(a, b)| a + b).collect();
                Self::ball_at(*radius, &c)
            }
            Rep::Polytope(p) => Ok(Self::from_polytope(p.map_affine(&DMatrix::identity(self.dim, self.dim), x)?)),
            _ => self.affine_image(DMatrix::identity(self.dim, self.dim), x),
        }
    }

    /// `x -> M x + shift` applied to the body, with `M` of size `j x n`.
    ///
    /// Structure is kept where the image has a closed form: balls and
    /// ellipsoids map to ellipsoids, polytopes to the hull of the mapped
    /// vertices, and L_p combinations to the combination of the images. A
    /// one-dimensional image is the segment spanned by two support values.
    pub fn linear_image(&self, m: &DMatrix<f64>, shift: &[f64]) -> Result<ConvexBody> {
        if m.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: m.ncols() });
        }
        let j = m.nrows();
        check_dim(j, shift.len())?;
        if j == 1 {
            let row: Vec<f64> = m.row(0).iter().copied().collect();
            let neg: Vec<f64> = row.iter().map(|x| -x).collect();
            let hi = self.h(&row) + shift[0];
            let lo = -self.h(&neg) + shift[0];
            return ConvexBody::polytope(1, &[vec![lo], vec![hi]]);
        }
        let apply = |c: &[f64]| -> Vec<f64> {
            (0..j).map(|r| (0..self.dim).map(|k| m[(r, k)] * c[k]).sum::<f64>() + shift[r]).collect()
        };
        match &*self.rep {
            Rep::Ball { radius, center } => {
                let g = m * m.transpose();
                let c = apply(center);
                if (&g - DMatrix::identity(j, j)).abs().max() <= 1e-14 {
                    ConvexBody::ball_at(*radius, &c)
                } else {
                    ConvexBody::ellipsoid(symmetrize(g * (radius * radius)), &c)
                }
            }
            Rep::Ellipsoid { matrix, center } => {
                ConvexBody::ellipsoid(symmetrize(m * matrix * m.transpose()), &apply(center))
            }
            Rep::Polytope(p) => Ok(ConvexBody::from_polytope(p.map_affine(m, shift)?)),
            Rep::SupportSampled(s) => Ok(ConvexBody::from_polytope(s.polytope.map_affine(m, shift)?)),
            Rep::LpCombination { p, a, first, b, second } => {
                let zero = vec![0.0; j];
                let k = first.linear_image(m, &zero)?;
                let l = second.linear_image(m, &zero)?;
                let combined = lp_combine(*p, *a, &k, *b, &l)?;
                if is_zero(shift) {
                    Ok(combined)
                } else {
                    combined.translated(shift)
                }
            }
            Rep::AffineImage { matrix, translation, body } => {
                let mt = m * matrix;
                let s = apply(translation);
                body.linear_image(&mt, &s)
            }
            Rep::ConstantWidth2D { .. } => self.affine_image(m.clone(), shift),
        }
    }

    // ----- accessors ----------------------------------------------------

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn flags(&self) -> BodyFlags {
        self.flags
    }

    pub fn contains_origin_interior(&self) -> bool {
        self.flags.contains_origin_interior
    }

    pub fn is_origin_symmetric(&self) -> bool {
        self.flags.origin_symmetric
    }

    pub fn kind(&self) -> &'static str {
        match &*self.rep {
            Rep::Ball { .. } => "ball",
            Rep::Ellipsoid { .. } => "ellipsoid",
            Rep::Polytope(_) => "polytope",
            Rep::SupportSampled(_) => "support_sampled",
            Rep::ConstantWidth2D { .. } => "reuleaux",
            Rep::LpCombination { .. } => "lp_sum",
            Rep::AffineImage { .. } => "affine_image",
        }
    }

    pub fn same_handle(&self, other: &ConvexBody) -> bool {
        Arc::ptr_eq(&self.rep, &other.rep)
    }

    /// The polytope behind this body if it is (a sampled) polytope.
    pub fn as_polytope(&self) -> Option<&Polytope> {
        match &*self.rep {
            Rep::Polytope(p) => Some(p),
            Rep::SupportSampled(s) => Some(s.polytope()),
            _ => None,
        }
    }

    // ----- support function ----------------------------------------------

    /// Support value `h_K(u)` at a unit direction.
    pub fn support(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        Ok(self.h(u.as_slice()))
    }

    /// Width `h_K(u) + h_K(-u)`.
    pub fn width(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        Ok(self.w(u.as_slice()))
    }

    pub(crate) fn w(&self, u: &[f64]) -> f64 {
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        self.h(u) + self.h(&neg)
    }

    /// Support function on all of R^n (positively homogeneous extension).
    /// No dimension check.
    pub fn h(&self, u: &[f64]) -> f64 {
        match &*self.rep {
            Rep::Ball { radius, center } => radius * norm(u) + dot(center, u),
            Rep::Ellipsoid { matrix, center } => quad_form(matrix, u).max(0.0).sqrt() + dot(center, u),
            Rep::Polytope(p) => p.support(u),
            Rep::SupportSampled(s) => s.polytope.support(u),
            Rep::ConstantWidth2D { width, center, .. } => reuleaux_support(*width, u).0 + dot(center, u),
            Rep::LpCombination { p, a, first, b, second } => {
                let hk = first.h(u);
                let hl = second.h(u);
                combine(*p, *a, hk, *b, hl)
            }
            Rep::AffineImage { matrix, translation, body } => {
                let v = transpose_apply(matrix, u);
                body.h(&v) + dot(translation, u)
            }
        }
    }

    /// A point of the body at which `x.u = h(u)`; the gradient of `h` where
    /// it is differentiable.
    pub fn support_point(&self, u: &[f64]) -> Vec<f64> {
        match &*self.rep {
            Rep::Ball { radius, center } => {
                let n = norm(u);
                center.iter().zip(u).map(|(c, x)| c + radius * x / n).collect()
            }
            Rep::Ellipsoid { matrix, center } => {
                let au = matrix * DVector::from_column_slice(u);
                let s = dot(au.as_slice(), u).max(1e-300).sqrt();
                center.iter().zip(au.iter()).map(|(c, x)| c + x / s).collect()
            }
            Rep::Polytope(p) => p.support_point(u),
            Rep::SupportSampled(s) => s.polytope.support_point(u),
            Rep::ConstantWidth2D { width, center, .. } => {
                let (_, x) = reuleaux_support(*width, u);
                vec![x[0] + center[0], x[1] + center[1]]
            }
            Rep::LpCombination { p, a, first, b, second } => {
                let xk = first.support_point(u);
                let xl = second.support_point(u);
                if *p == 1.0 {
                    return xk.iter().zip(&xl).map(|(x, y)| a * x + b * y).collect();
                }
                let hk = dot(&xk, u);
                let hl = dot(&xl, u);
                if p.is_infinite() {
                    return if hk >= hl { xk } else { xl };
                }
                let h = combine(*p, *a, hk, *b, hl);
                let wk = a * (hk / h).powf(p - 1.0);
                let wl = b * (hl / h).powf(p - 1.0);
                xk.iter().zip(&xl).map(|(x, y)| wk * x + wl * y).collect()
            }
            Rep::AffineImage { matrix, translation, body } => {
                let v = transpose_apply(matrix, u);
                let x = body.support_point(&v);
                let mx = matrix * DVector::from_vec(x);
                mx.iter().zip(translation).map(|(a, t)| a + t).collect()
            }
        }
    }

    /// A crude size: the largest support value along the coordinate axes.
    pub fn scale(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.dim {
            let mut e = vec![0.0; self.dim];
            e[i] = 1.0;
            m = m.max(self.h(&e).abs());
            e[i] = -1.0;
            m = m.max(self.h(&e).abs());
        }
        m
    }

    /// `min_u h(u)` over a default grid: the radius of the largest centered
    /// ball found inside (negative if the origin is outside).
    pub fn origin_margin(&self) -> f64 {
        let grid = match self.dim {
            1 => return self.h(&[1.0]).min(self.h(&[-1.0])),
            2 => DirectionSet::circle(360),
            3 => DirectionSet::icosphere(3),
            n => DirectionSet::random(n, 200 * n, crate::rng::RngStream::new(11)),
        };
        match grid {
            Ok(g) => g.iter().map(|u| self.h(u)).fold(f64::INFINITY, f64::min),
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// If `self` and `other` are recognizably dilates by construction, the
    /// factor `lambda` with `self = lambda * other`.
    pub fn structural_dilate_factor(&self, other: &ConvexBody) -> Option<f64> {
        if self.dim != other.dim {
            return None;
        }
        let (s1, b1) = self.dilation_parts();
        let (s2, b2) = other.dilation_parts();
        let r = base_ratio(b1, b2)?;
        Some(s1 * r / s2)
    }

    /// `(s, K0)` with `self = s K0`, peeling scalar linear maps.
    fn dilation_parts(&self) -> (f64, &ConvexBody) {
        match &*self.rep {
            Rep::AffineImage { matrix, translation, body } if is_zero(translation) => match is_scalar(matrix) {
                Some(s) if s > 0.0 => {
                    let (t, b) = body.dilation_parts();
                    (s * t, b)
                }
                _ => (1.0, self),
            },
            _ => (1.0, self),
        }
    }

    /// Angles at which the planar support function may fail to be smooth.
    pub(crate) fn kinks_2d(&self) -> Vec<f64> {
        debug_assert_eq!(self.dim, 2);
        match &*self.rep {
            Rep::Ball { .. } | Rep::Ellipsoid { .. } => Vec::new(),
            Rep::Polytope(p) => p.facets().iter().map(|f| f.normal[1].atan2(f.normal[0])).collect(),
            Rep::SupportSampled(s) => s.polytope.facets().iter().map(|f| f.normal[1].atan2(f.normal[0])).collect(),
            Rep::ConstantWidth2D { .. } => (0..6).map(|k| PI / 3.0 + k as f64 * PI / 3.0).collect(),
            Rep::LpCombination { p, first, second, .. } => {
                let mut k = first.kinks_2d();
                k.extend(second.kinks_2d());
                if p.is_infinite() {
                    k.extend(crossings_2d(first, second));
                }
                k
            }
            Rep::AffineImage { matrix, body, .. } => {
                if body.dim != 2 {
                    return Vec::new();
                }
                let Some(inv) = matrix.clone().try_inverse() else {
                    return Vec::new();
                };
                let inv_t = inv.transpose();
                body.kinks_2d()
                    .into_iter()
                    .map(|t| {
                        let v = &inv_t * DVector::from_vec(vec![t.cos(), t.sin()]);
                        v[1].atan2(v[0])
                    })
                    .collect()
            }
        }
    }
}

/// Power combination of support values.
#[inline]
pub(crate) fn combine(p: f64, a: f64, hk: f64, b: f64, hl: f64) -> f64 {
    if p == 1.0 {
        a * hk + b * hl
    } else if p.is_infinite() {
        match (a > 0.0, b > 0.0) {
            (true, true) => hk.max(hl),
            (true, false) => hk,
            _ => hl,
        }
    } else {
        (a * hk.powf(p) + b * hl.powf(p)).powf(1.0 / p)
    }
}

/// `a ._p K +_p b ._p L`.
///
/// `p = 1` gives the Minkowski combination `aK + bL`, evaluated as
/// `a h_K + b h_L`. For `p > 1` both bodies must contain the origin in their
/// interiors. A zero weight reduces to the L_p scalar multiple
/// `c ._p M = c^{1/p} M` of the other body, and for `p > 1` bodies that are
/// dilates by construction (`L = lambda K`) collapse to the exact dilate
/// `(a + b lambda^p)^{1/p} K`.
pub fn lp_combine(p: f64, a: f64, first: &ConvexBody, b: f64, second: &ConvexBody) -> Result<ConvexBody> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("L_p combination needs p >= 1, got {p}")));
    }
    check_dim(first.dim, second.dim)?;
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::InvalidArgument("both weights are zero".into()));
    }
    if p > 1.0 && !(first.flags.contains_origin_interior && second.flags.contains_origin_interior) {
        return Err(Error::InvalidArgument(format!(
            "L_p combination with p = {p} requires both bodies to contain the origin in their interiors"
        )));
    }
    let scalar = |c: f64| if p.is_infinite() { 1.0 } else { c.powf(1.0 / p) };
    if b == 0.0 {
        return first.scaled(scalar(a));
    }
    if a == 0.0 {
        return second.scaled(scalar(b));
    }
    if p > 1.0 {
        if let Some(lambda) = second.structural_dilate_factor(first) {
            let factor = if p.is_infinite() { lambda.max(1.0) } else { (a + b * lambda.powf(p)).powf(1.0 / p) };
            return first.scaled(factor);
        }
    }
    let flags = BodyFlags {
        contains_origin_interior: first.flags.contains_origin_interior && second.flags.contains_origin_interior,
        origin_symmetric: first.flags.origin_symmetric && second.flags.origin_symmetric,
    };
    let mut body = ConvexBody::from_rep(
        first.dim,
        Rep::LpCombination { p, a, first: first.clone(), b, second: second.clone() },
        flags,
    );
    if !flags.contains_origin_interior {
        body.flags.contains_origin_interior = body.origin_margin() > 0.0;
    }
    Ok(body)
}

/// `(1 - alpha) ._p K +_p alpha ._p L`.
pub fn lp_mix(p: f64, alpha: f64, first: &ConvexBody, second: &ConvexBody) -> Result<ConvexBody> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    lp_combine(p, 1.0 - alpha, first, alpha, second)
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn quad_form(m: &DMatrix<f64>, u: &[f64]) -> f64 {
    let n = u.len();
    let mut s = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += m[(i, j)] * u[j];
        }
        s += u[i] * row;
    }
    s
}

fn transpose_apply(m: &DMatrix<f64>, u: &[f64]) -> Vec<f64> {
    (0..m.ncols()).map(|c| (0..m.nrows()).map(|r| m[(r, c)] * u[r]).sum()).collect()
}

fn is_scalar(m: &DMatrix<f64>) -> Option<f64> {
    if !m.is_square() {
        return None;
    }
    let s = m[(0, 0)];
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let want = if i == j { s } else { 0.0 };
            if m[(i, j)] != want {
                return None;
            }
        }
    }
    Some(s)
}

/// Ratio `r` with `b1 = r * b2` for structurally comparable bodies.
fn base_ratio(b1: &ConvexBody, b2: &ConvexBody) -> Option<f64> {
    if b1.same_handle(b2) {
        return Some(1.0);
    }
    const TOL: f64 = 1e-13;
    match (&*b1.rep, &*b2.rep) {
        (Rep::Ball { radius: r1, center: c1 }, Rep::Ball { radius: r2, center: c2 }) if is_zero(c1) && is_zero(c2) => {
            Some(r1 / r2)
        }
        (Rep::ConstantWidth2D { width: w1, center: c1, .. }, Rep::ConstantWidth2D { width: w2, center: c2, .. })
            if is_zero(c1) && is_zero(c2) =>
        {
            Some(w1 / w2)
        }
        (Rep::Ellipsoid { matrix: m1, center: c1 }, Rep::Ellipsoid { matrix: m2, center: c2 })
            if is_zero(c1) && is_zero(c2) =>
        {
            let r2 = m1.trace() / m2.trace();
            let scale = m1.abs().max();
            ((m1 - m2 * r2).abs().max() <= TOL * scale).then(|| r2.sqrt())
        }
        (Rep::Polytope(p1), Rep::Polytope(p2)) if p1.vertex_count() == p2.vertex_count() => {
            let v1: Vec<f64> = p1.vertices().flatten().copied().collect();
            let v2: Vec<f64> = p2.vertices().flatten().copied().collect();
            let k = (0..v2.len()).max_by(|&i, &j| v2[i].abs().total_cmp(&v2[j].abs()))?;
            if v2[k] == 0.0 {
                return None;
            }
            let r = v1[k] / v2[k];
            if !(r > 0.0) {
                return None;
            }
            let scale = v1[k].abs();
            v1.iter().zip(&v2).all(|(x, y)| (x - r * y).abs() <= TOL * scale).then_some(r)
        }
        _ => None,
    }
}

fn reuleaux_corners(width: f64) -> [[f64; 2]; 3] {
    let r = width / 3f64.sqrt();
    let mut out = [[0.0; 2]; 3];
    for (k, c) in out.iter_mut().enumerate() {
        let phi = PI / 2.0 + 2.0 * PI * k as f64 / 3.0;
        *c = [r * phi.cos(), r * phi.sin()];
    }
    out
}

/// Support value and support point of the centered Reuleaux triangle.
fn reuleaux_support(width: f64, u: &[f64]) -> (f64, [f64; 2]) {
    let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
    if n == 0.0 {
        return (0.0, [0.0, 0.0]);
    }
    let e = [u[0] / n, u[1] / n];
    let corners = reuleaux_corners(width);
    let proj: Vec<f64> = corners.iter().map(|c| c[0] * e[0] + c[1] * e[1]).collect();
    let kmax = (0..3).max_by(|&i, &j| proj[i].total_cmp(&proj[j])).unwrap();
    // inside the 60-degree normal cone of the corner iff the projection
    // reaches cos(30 deg) of the circumradius
    let r = width / 3f64.sqrt();
    if proj[kmax] >= r * (PI / 6.0).cos() {
        return (n * proj[kmax], corners[kmax]);
    }
    let kmin = (0..3).min_by(|&i, &j| proj[i].total_cmp(&proj[j])).unwrap();
    let c = corners[kmin];
    (n * (proj[kmin] + width), [c[0] + width * e[0], c[1] + width * e[1]])
}

/// Angles where `h_K - h_L` changes sign (planar bodies).
fn crossings_2d(k: &ConvexBody, l: &ConvexBody) -> Vec<f64> {
    const SAMPLES: usize = 2048;
    let g = |t: f64| {
        let u = [t.cos(), t.sin()];
        k.h(&u) - l.h(&u)
    };
    let mut out = Vec::new();
    let step = 2.0 * PI / SAMPLES as f64;
    let mut t0 = 0.0;
    let mut g0 = g(t0);
    for i in 1..=SAMPLES {
        let t1 = i as f64 * step;
        let g1 = g(t1);
        if g0 == 0.0 {
            out.push(t0);
        } else if g0 * g1 < 0.0 {
            let (mut lo, mut hi, mut glo) = (t0, t1, g0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm * glo > 0.0 {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        t0 = t1;
        g0 = g1;
    }
    out
}
