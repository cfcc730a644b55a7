//! Exact area and perimeter of planar bodies from their support functions.
//!
//! For a planar body `A = 1/2 int (h^2 - h'^2) dtheta` and `L = int h dtheta`.
//! The integrands are smooth between the kink angles reported by the body,
//! so Gauss-Legendre quadrature on short pieces is accurate to rounding.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::body::{ConvexBody, Rep, WidthProfile};
use crate::error::{check_dim, Result};

const GL_ORDER: usize = 16;
const MAX_PIECE: f64 = PI / 16.0;

fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static NODES: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_ORDER;
        let mut x = [0.0; GL_ORDER];
        let mut w = [0.0; GL_ORDER];
        for i in 0..n {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

fn breakpoints(kinks: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let tau = 2.0 * PI;
    let mut k: Vec<f64> = kinks.into_iter().map(|t| t.rem_euclid(tau)).collect();
    k.push(0.0);
    k.sort_by(f64::total_cmp);
    k.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    k
}

/// `int_0^{2pi} f(theta) dtheta`, split at the body's kinks.
fn integrate(body: &ConvexBody, f: impl FnMut(f64) -> f64) -> f64 {
    integrate_with_kinks(body.kinks_2d(), f)
}

/// Width-type integrands `g(h(theta), h(theta + pi))`: the kinks of the
/// body and of its reflection.
pub(crate) fn integrate_symmetrized(body: &ConvexBody, f: impl FnMut(f64) -> f64) -> f64 {
    let k = body.kinks_2d();
    let both: Vec<f64> = k.iter().copied().chain(k.iter().map(|t| t + PI)).collect();
    integrate_with_kinks(both, f)
}

/// `int_0^{2pi} f(theta) dtheta` for `f` smooth between the given angles.
pub(crate) fn integrate_with_kinks(kinks: impl IntoIterator<Item = f64>, mut f: impl FnMut(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre();
    let bp = breakpoints(kinks);
    let mut total = 0.0;
    for (i, &a) in bp.iter().enumerate() {
        let b = if i + 1 < bp.len() { bp[i + 1] } else { 2.0 * PI };
        let pieces = ((b - a) / MAX_PIECE).ceil().max(1.0) as usize;
        let len = (b - a) / pieces as f64;
        for p in 0..pieces {
            let lo = a + p as f64 * len;
            let mid = lo + 0.5 * len;
            let mut s = 0.0;
            for k in 0..GL_ORDER {
                s += w[k] * f(mid + 0.5 * len * x[k]);
            }
            total += 0.5 * len * s;
        }
    }
    total
}

/// Area through the support-function integral, whatever the representation.
pub fn area_by_support_integral(body: &ConvexBody) -> Result<f64> {
    check_dim(2, body.dim())?;
    Ok(0.5
        * integrate(body, |t| {
            let (c, s) = (t.cos(), t.sin());
            let u = [c, s];
            let x = body.support_point(&u);
            let h = x[0] * c + x[1] * s;
            let dh = -x[0] * s + x[1] * c;
            h * h - dh * dh
        }))
}

/// Area of a planar body.
pub fn planar_area(body: &ConvexBody) -> Result<f64> {
    check_dim(2, body.dim())?;
    Ok(match body.rep() {
        Rep::Ball { radius, .. } => PI * radius * radius,
        Rep::Ellipsoid { matrix, .. } => PI * matrix.determinant().sqrt(),
        Rep::Polytope(p) => p.volume()?,
        Rep::SupportSampled(s) => s.polytope().volume()?,
        Rep::ConstantWidth2D { profile: WidthProfile::ReuleauxTriangle, width, .. } => {
            0.5 * (PI - 3f64.sqrt()) * width * width
        }
        Rep::AffineImage { matrix, body: inner, .. } if inner.dim() == 2 => matrix.determinant().abs() * planar_area(inner)?,
        _ => area_by_support_integral(body)?,
    })
}

/// Perimeter of a planar body.
pub fn planar_perimeter(body: &ConvexBody) -> Result<f64> {
    check_dim(2, body.dim())?;
    Ok(match body.rep() {
        Rep::Ball { radius, .. } => 2.0 * PI * radius,
        Rep::Polytope(p) => p.boundary_measure()?,
        Rep::SupportSampled(s) => s.polytope().boundary_measure()?,
        Rep::ConstantWidth2D { width, .. } => PI * width,
        _ => integrate(body, |t| body.h(&[t.cos(), t.sin()])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::body::lp_combine;
    use nalgebra::DMatrix;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre();
        let s: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn integral_matches_closed_forms() {
        let sq = ConvexBody::cuboid(&[0.3, -0.2], &[1.0, 0.5]).unwrap();
        assert!((area_by_support_integral(&sq).unwrap() - 2.0).abs() < 1e-13);
        let e = ConvexBody::ellipsoid(DMatrix::from_row_slice(2, 2, &[9.0, 1.0, 1.0, 0.25]), &[0.0, 0.0]).unwrap();
        let exact = planar_area(&e).unwrap();
        assert!((area_by_support_integral(&e).unwrap() - exact).abs() < 1e-10 * exact);
        let r = ConvexBody::reuleaux(2.0, &[0.1, 0.0]).unwrap();
        assert!((area_by_support_integral(&r).unwrap() - planar_area(&r).unwrap()).abs() < 1e-13);
        let d = ConvexBody::ball_at(1.0, &[0.2, 0.3]).unwrap();
        assert!((area_by_support_integral(&d).unwrap() - PI).abs() < 1e-13);
    }

    #[test]
    fn minkowski_area_is_mixed_area_polynomial() {
        // |K + tB| = |K| + t L(K) + pi t^2
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let disk = ConvexBody::ball(2, 1.0).unwrap();
        let s = lp_combine(1.0, 1.0, &sq, 0.5, &disk).unwrap();
        let expect = 4.0 + 0.5 * 8.0 + PI * 0.25;
        assert!((planar_area(&s).unwrap() - expect).abs() < 1e-12);
        assert!((planar_perimeter(&s).unwrap() - (8.0 + PI)).abs() < 1e-12);
    }

    #[test]
    fn hull_of_union_area() {
        // square [-1,1]^2 with the disk of radius sqrt(2)... union hull is the disk
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let disk = ConvexBody::ball(2, 1.2).unwrap();
        let u = lp_combine(f64::INFINITY, 1.0, &sq, 1.0, &disk).unwrap();
        // four corner caps added to the disk: each is the region between two
        // tangent segments and the arc
        let r: f64 = 1.2;
        let d = 2f64.sqrt();
        let phi = (r / d).acos();
        let cap = r * (d * d - r * r).sqrt() - r * r * phi;
        let expect = PI * r * r + 4.0 * cap;
        assert!((planar_area(&u).unwrap() - expect).abs() < 1e-10, "{}", planar_area(&u).unwrap());
    }
}
