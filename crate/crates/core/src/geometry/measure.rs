//! Volumes, surface areas, mean widths and second moments of bodies.
//!
//! Closed forms and exact polytope arithmetic are used whenever the
//! representation allows; everything else is measured on the circumscribed
//! grid polytope and flagged as approximate (the value then overestimates
//! volume and surface area).

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;

use super::body::{ConvexBody, Rep};
use super::direction::{unit_ball_volume, DirectionSet};
use super::halfspace::polytope_from_support;
use super::planar::{planar_area, planar_perimeter};
use super::polytope::Polytope;
use crate::error::{Error, Result};

/// A measured quantity; `approximate` marks grid-polytope values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measure {
    pub value: f64,
    pub approximate: bool,
}

impl Measure {
    fn exact(value: f64) -> Self {
        Measure { value, approximate: false }
    }

    fn approx(value: f64) -> Self {
        Measure { value, approximate: true }
    }
}

const PLANAR_GRID: usize = 4096;

/// The grid used for circumscribed-polytope approximations.
pub fn approximation_grid(dim: usize) -> Result<Arc<DirectionSet>> {
    static CIRCLE: OnceLock<Arc<DirectionSet>> = OnceLock::new();
    static SPHERE: OnceLock<Arc<DirectionSet>> = OnceLock::new();
    match dim {
        2 => Ok(CIRCLE.get_or_init(|| Arc::new(DirectionSet::circle(PLANAR_GRID).expect("circle grid"))).clone()),
        3 => Ok(SPHERE.get_or_init(|| Arc::new(DirectionSet::default_for(3).expect("sphere grid"))).clone()),
        n => Err(Error::Unsupported(format!("grid polytopes in dimension {n}"))),
    }
}

/// Relative volume excess of the circumscribed grid polytope of the unit
/// ball, a calibration of the grid error.
pub fn grid_volume_excess(dim: usize) -> Result<f64> {
    static EXCESS: OnceLock<[f64; 2]> = OnceLock::new();
    if !(2..=3).contains(&dim) {
        return Err(Error::Unsupported(format!("grid polytopes in dimension {dim}")));
    }
    let e = EXCESS.get_or_init(|| {
        let mut out = [0.0; 2];
        for (k, n) in [2usize, 3].into_iter().enumerate() {
            let b = ConvexBody::ball(n, 1.0).expect("unit ball");
            let p = polytope_from_support(&b, &approximation_grid(n).expect("grid")).expect("grid polytope");
            out[k] = p.volume().expect("volume") / unit_ball_volume(n) - 1.0;
        }
        out
    });
    Ok(e[dim - 2])
}

/// The circumscribed grid polytope of `body`.
pub fn grid_polytope(body: &ConvexBody) -> Result<Polytope> {
    polytope_from_support(body, &*approximation_grid(body.dim())?)
}

/// The body as an explicit polytope, when its representation is polyhedral:
/// polytopes, their affine images, Minkowski combinations (`p = 1`) and
/// hulls of unions (`p = inf`) of polyhedral bodies.
pub fn exact_polytope(body: &ConvexBody) -> Result<Option<Polytope>> {
    Ok(match body.rep() {
        Rep::Polytope(p) => Some(p.clone()),
        Rep::SupportSampled(s) => Some(s.polytope().clone()),
        Rep::AffineImage { matrix, translation, body: inner } => match exact_polytope(inner)? {
            Some(p) => Some(p.map_affine(matrix, translation)?),
            None => None,
        },
        Rep::LpCombination { p, a, first, b, second } if *p == 1.0 || p.is_infinite() => {
            let (Some(pk), Some(pl)) = (exact_polytope(first)?, exact_polytope(second)?) else {
                return Ok(None);
            };
            let pts: Vec<Vec<f64>> = if *p == 1.0 {
                let mut v = Vec::with_capacity(pk.vertex_count() * pl.vertex_count());
                for x in pk.vertices() {
                    for y in pl.vertices() {
                        v.push(x.iter().zip(y).map(|(s, t)| a * s + b * t).collect());
                    }
                }
                v
            } else {
                pk.vertices().chain(pl.vertices()).map(|x| x.to_vec()).collect()
            };
            Some(Polytope::from_points(body.dim(), &pts)?)
        }
        _ => None,
    })
}

/// Replaces an affine image of a ball, ellipsoid or polytope by the image
/// itself.
fn simplified(body: &ConvexBody) -> Result<ConvexBody> {
    match body.rep() {
        Rep::AffineImage { matrix, translation, body: inner }
            if matches!(inner.rep(), Rep::Ball { .. } | Rep::Ellipsoid { .. }) =>
        {
            inner.linear_image(matrix, translation)
        }
        _ => Ok(body.clone()),
    }
}

/// `s P + rho B` for a p = 1 sum of an exact polytope and a ball, as
/// `(P, s, rho)`.
fn polytope_plus_ball(body: &ConvexBody) -> Result<Option<(Polytope, f64, f64)>> {
    if let Rep::LpCombination { p, a, first, b, second } = body.rep() {
        if *p == 1.0 && body.dim() == 3 {
            for (s, poly, t, ball) in [(*a, first, *b, second), (*b, second, *a, first)] {
                if let Rep::Ball { radius, .. } = ball.rep() {
                    if let Some(q) = exact_polytope(poly)? {
                        return Ok(Some((q, s, t * radius)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// `n`-dimensional volume.
pub fn volume(body: &ConvexBody) -> Result<Measure> {
    let n = body.dim();
    match n {
        1 => return Ok(Measure::exact(body.h(&[1.0]) + body.h(&[-1.0]))),
        2 => return Ok(Measure::exact(planar_area(body)?)),
        _ => {}
    }
    match body.rep() {
        Rep::Ball { radius, .. } => return Ok(Measure::exact(unit_ball_volume(n) * radius.powi(n as i32))),
        Rep::Ellipsoid { matrix, .. } => {
            return Ok(Measure::exact(unit_ball_volume(n) * matrix.determinant().max(0.0).sqrt()))
        }
        Rep::AffineImage { matrix, body: inner, .. } if inner.dim() == n => {
            let inner_v = volume(inner)?;
            return Ok(Measure { value: matrix.determinant().abs() * inner_v.value, ..inner_v });
        }
        _ => {}
    }
    if n != 3 {
        return Err(Error::Unsupported(format!("volume of a {} body in dimension {n}", body.kind())));
    }
    if let Some(p) = exact_polytope(body)? {
        return Ok(Measure::exact(p.volume()?));
    }
    if let Some((q, s, r)) = polytope_plus_ball(body)? {
        // Steiner polynomial
        let v = s.powi(3) * q.volume()?
            + s * s * q.boundary_measure()? * r
            + 2.0 * PI * s * q.mean_width()? * r * r
            + 4.0 / 3.0 * PI * r.powi(3);
        return Ok(Measure::exact(v));
    }
    Ok(Measure::approx(grid_polytope(body)?.volume()?))
}

/// Boundary measure: perimeter in the plane, surface area in space.
pub fn surface_area(body: &ConvexBody) -> Result<Measure> {
    let n = body.dim();
    if n == 2 {
        return Ok(Measure::exact(planar_perimeter(body)?));
    }
    let body = simplified(body)?;
    match body.rep() {
        Rep::Ball { radius, .. } => {
            return Ok(Measure::exact(n as f64 * unit_ball_volume(n) * radius.powi(n as i32 - 1)))
        }
        Rep::Ellipsoid { matrix, .. } if n == 3 => {
            let eig = matrix.clone().symmetric_eigen();
            let l = eig.eigenvalues;
            let det = (l[0] * l[1] * l[2]).sqrt();
            let s = sphere_quadrature(|u| (u[0] * u[0] / l[0] + u[1] * u[1] / l[1] + u[2] * u[2] / l[2]).sqrt());
            return Ok(Measure::exact(det * s));
        }
        _ => {}
    }
    if n != 3 {
        return Err(Error::Unsupported(format!("surface area of a {} body in dimension {n}", body.kind())));
    }
    if let Some(p) = exact_polytope(&body)? {
        return Ok(Measure::exact(p.boundary_measure()?));
    }
    if let Some((q, s, r)) = polytope_plus_ball(&body)? {
        let a = s * s * q.boundary_measure()? + 4.0 * PI * s * q.mean_width()? * r + 4.0 * PI * r * r;
        return Ok(Measure::exact(a));
    }
    Ok(Measure::approx(grid_polytope(&body)?.boundary_measure()?))
}

/// Mean width: the average of `h(u) + h(-u)` over the unit sphere.
pub fn mean_width(body: &ConvexBody) -> Result<Measure> {
    let n = body.dim();
    match n {
        1 => return Ok(Measure::exact(body.h(&[1.0]) + body.h(&[-1.0]))),
        2 => return Ok(Measure::exact(planar_perimeter(body)? / PI)),
        _ => {}
    }
    let body = simplified(body)?;
    match body.rep() {
        Rep::Ball { radius, .. } => return Ok(Measure::exact(2.0 * radius)),
        Rep::Ellipsoid { matrix, .. } if n == 3 => {
            let s = sphere_quadrature(|u| {
                let mut q = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        q += u[i] * matrix[(i, j)] * u[j];
                    }
                }
                q.max(0.0).sqrt()
            });
            return Ok(Measure::exact(s / (2.0 * PI)));
        }
        _ => {}
    }
    if n != 3 {
        return Err(Error::Unsupported(format!("mean width of a {} body in dimension {n}", body.kind())));
    }
    if let Some(p) = exact_polytope(&body)? {
        return Ok(Measure::exact(p.mean_width()?));
    }
    if let Some((q, s, r)) = polytope_plus_ball(&body)? {
        return Ok(Measure::exact(s * q.mean_width()? + 2.0 * r));
    }
    Ok(Measure::approx(grid_polytope(&body)?.mean_width()?))
}

/// Central second moment matrix `int_K (x - c)(x - c)^T dx` and volume.
pub fn second_moment(body: &ConvexBody) -> Result<(DMatrix<f64>, Measure)> {
    let n = body.dim();
    let body = simplified(body)?;
    match body.rep() {
        Rep::Ball { radius, .. } => {
            let v = unit_ball_volume(n) * radius.powi(n as i32);
            let m = DMatrix::identity(n, n) * (v * radius * radius / (n as f64 + 2.0));
            return Ok((m, Measure::exact(v)));
        }
        Rep::Ellipsoid { matrix, .. } => {
            let v = unit_ball_volume(n) * matrix.determinant().max(0.0).sqrt();
            return Ok((matrix * (v / (n as f64 + 2.0)), Measure::exact(v)));
        }
        Rep::AffineImage { matrix, body: inner, .. } if inner.dim() == n => {
            let (m, v) = second_moment(inner)?;
            let det = matrix.determinant().abs();
            return Ok((matrix * m * matrix.transpose() * det, Measure { value: v.value * det, ..v }));
        }
        _ => {}
    }
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!("second moments of a {} body in dimension {n}", body.kind())));
    }
    if let Some(p) = exact_polytope(&body)? {
        return Ok((p.central_second_moment()?, Measure::exact(p.volume()?)));
    }
    let p = grid_polytope(&body)?;
    Ok((p.central_second_moment()?, Measure::approx(p.volume()?)))
}

/// Product Gauss-Legendre (in `cos theta`) by trapezoid (in `phi`) rule on
/// the unit sphere, spectrally accurate for smooth integrands.
fn sphere_quadrature(f: impl Fn(&[f64; 3]) -> f64) -> f64 {
    const NZ: usize = 64;
    const NPHI: usize = 128;
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (z, w) = NODES.get_or_init(|| legendre_nodes(NZ));
    let mut total = 0.0;
    for (zi, wi) in z.iter().zip(w) {
        let s = (1.0 - zi * zi).max(0.0).sqrt();
        let mut ring = 0.0;
        for k in 0..NPHI {
            let phi = 2.0 * PI * (k as f64 + 0.5) / NPHI as f64;
            ring += f(&[s * phi.cos(), s * phi.sin(), *zi]);
        }
        total += wi * ring * 2.0 * PI / NPHI as f64;
    }
    total
}

fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::body::lp_combine;

    #[test]
    fn closed_forms() {
        let b = ConvexBody::ball(3, 2.0).unwrap();
        assert!((volume(&b).unwrap().value - 32.0 * PI / 3.0).abs() < 1e-12);
        assert!((surface_area(&b).unwrap().value - 16.0 * PI).abs() < 1e-12);
        let e = ConvexBody::ellipsoid(DMatrix::identity(3, 3) * 4.0, &[0.0; 3]).unwrap();
        assert!((surface_area(&e).unwrap().value - 16.0 * PI).abs() < 1e-10);
        assert!((mean_width(&e).unwrap().value - 4.0).abs() < 1e-12);
        let b5 = ConvexBody::ball(5, 1.0).unwrap();
        assert!((volume(&b5).unwrap().value - 8.0 * PI * PI / 15.0).abs() < 1e-12);
    }

    #[test]
    fn prolate_spheroid_area() {
        // semi-axes 1, 1, 2
        let e = ConvexBody::ellipsoid(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, 4.0])), &[0.0; 3])
            .unwrap();
        let ecc = (1.0f64 - 0.25).sqrt();
        let exact = 2.0 * PI * (1.0 + 2.0 * ecc.asin() / ecc);
        assert!((surface_area(&e).unwrap().value - exact).abs() < 1e-10);
    }

    #[test]
    fn minkowski_polytope_is_exact() {
        let c = ConvexBody::cube(3, 0.5).unwrap();
        let s = lp_combine(1.0, 1.0, &c, 1.0, &c.translated(&[0.2, 0.0, 0.0]).unwrap()).unwrap();
        let v = volume(&s).unwrap();
        assert!(!v.approximate);
        assert!((v.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn inertia_of_ball_and_cube() {
        let (m, v) = second_moment(&ConvexBody::ball(3, 1.0).unwrap()).unwrap();
        assert!((m.trace() - 4.0 * PI / 5.0).abs() < 1e-12 && !v.approximate);
        let (m, _) = second_moment(&ConvexBody::cube(3, 0.5).unwrap()).unwrap();
        assert!((m.trace() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn approximations_overestimate() {
        let b = ConvexBody::ball(3, 1.0).unwrap();
        let c = ConvexBody::cube(3, 1.0).unwrap();
        let s = lp_combine(2.0, 1.0, &c, 1.0, &b).unwrap();
        let v = volume(&s).unwrap();
        assert!(v.approximate);
        let ex = grid_volume_excess(3).unwrap();
        assert!(ex > 0.0 && ex < 5e-3, "{ex}");
        assert!(grid_volume_excess(2).unwrap() < 1e-6);
    }

    #[test]
    fn cube_plus_ball_follows_steiner() {
        let cube = ConvexBody::cuboid(&[0.5; 3], &[0.5; 3]).unwrap();
        let ball = ConvexBody::ball(3, 1.0).unwrap();
        let r = 0.3;
        let sum = lp_combine(1.0, 2.0, &cube, r, &ball).unwrap();
        let v = volume(&sum).unwrap();
        let expected = 8.0 + 24.0 * r + 6.0 * PI * r * r + 4.0 / 3.0 * PI * r.powi(3);
        assert!(!v.approximate && (v.value - expected).abs() < 1e-12 * expected, "{v:?}");
        let grid = grid_polytope(&sum).unwrap().volume().unwrap();
        assert!(grid > v.value && grid < v.value * 1.005);
        let s = surface_area(&sum).unwrap().value;
        assert!((s - (24.0 + 24.0 * PI * r * 0.5 + 4.0 * PI * r * r)).abs() < 1e-12 * s, "{s}");
        assert!((mean_width(&sum).unwrap().value - (3.0 + 2.0 * r)).abs() < 1e-12);
    }
}
