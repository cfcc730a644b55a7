//! Convex hulls in the plane and in space with exact orientation signs.

use std::collections::HashMap;

use robust::{orient2d, orient3d, Coord, Coord3D};

use crate::error::{Error, Result};

#[inline]
fn c2(p: &[f64]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

#[inline]
fn c3(p: &[f64]) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Indices of the planar hull vertices in counterclockwise order, starting at
/// the lexicographically smallest point. Collinear boundary points are dropped.
pub fn hull2(points: &[[f64; 2]]) -> Result<Vec<usize>> {
    if points.len() < 3 {
        return Err(Error::Degenerate(format!("{} points cannot span the plane", points.len())));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));
    order.dedup_by(|a, b| points[*a] == points[*b]);

    let turn = |o: usize, a: usize, b: usize| orient2d(c2(&points[o]), c2(&points[a]), c2(&points[b]));
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    Ok(lower)
}

/// Triangulated boundary of a 3D hull.
#[derive(Debug, Clone)]
pub struct Hull3 {
    /// Indices (into the input) of the extreme points, ascending.
    pub vertices: Vec<usize>,
    /// Outward, counterclockwise triangles over input indices.
    pub triangles: Vec<[usize; 3]>,
}

/// Incremental 3D hull. Visibility uses the adaptive-precision orientation
/// predicate, so the combinatorics are exact for the given floating-point
/// input.
pub fn hull3(points: &[[f64; 3]]) -> Result<Hull3> {
    let hull = hull3_raw(points)?;
    let extreme = extreme_vertices(points, &hull);
    let used: usize = {
        let mut v: Vec<usize> = hull.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    if extreme.len() == used {
        return Ok(Hull3 { vertices: extreme, triangles: hull });
    }
    // Non-extreme points survived on flat patches or edges; rebuild from the
    // extreme set only.
    let sub: Vec<[f64; 3]> = extreme.iter().map(|&i| points[i]).collect();
    let inner = hull3_raw(&sub)?;
    let triangles = inner.iter().map(|t| [extreme[t[0]], extreme[t[1]], extreme[t[2]]]).collect();
    Ok(Hull3 { vertices: extreme, triangles })
}

fn hull3_raw(points: &[[f64; 3]]) -> Result<Vec<[usize; 3]>> {
    let n = points.len();
    if n < 4 {
        return Err(Error::Degenerate(format!("{n} points cannot span R^3")));
    }
    let dist2 = |a: &[f64; 3], b: &[f64; 3]| (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>();
    let i0 = (0..n).min_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b))).unwrap();
    let i1 = (0..n)
        .max_by(|&a, &b| dist2(&points[i0], &points[a]).total_cmp(&dist2(&points[i0], &points[b])).then(b.cmp(&a)))
        .unwrap();
    if dist2(&points[i0], &points[i1]) == 0.0 {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let area2 = |k: usize| {
        let a = points[i0];
        let b = points[i1];
        let c = points[k];
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let x = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
    };
    let i2 = (0..n).max_by(|&a, &b| area2(a).total_cmp(&area2(b)).then(b.cmp(&a))).unwrap();
    if area2(i2) == 0.0 {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let vol = |k: usize| orient3d(c3(&points[i0]), c3(&points[i1]), c3(&points[i2]), c3(&points[k]));
    let i3 = (0..n).max_by(|&a, &b| vol(a).abs().total_cmp(&vol(b).abs()).then(b.cmp(&a))).unwrap();
    if vol(i3) == 0.0 {
        return Err(Error::Degenerate("points are coplanar".into()));
    }

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let orient = |f: &[usize; 3], p: usize| {
        orient3d(c3(&points[f[0]]), c3(&points[f[1]]), c3(&points[f[2]]), c3(&points[p]))
    };
    let simplex = [i0, i1, i2, i3];
    for skip in 0..4 {
        let mut f = [0usize; 3];
        let mut k = 0;
        for (s, &v) in simplex.iter().enumerate() {
            if s != skip {
                f[k] = v;
                k += 1;
            }
        }
        // the opposite vertex must lie below (inside)
        if orient(&f, simplex[skip]) < 0.0 {
            f.swap(1, 2);
        }
        add_face(&mut faces, &mut alive, &mut edges, f);
    }

    let mut visible: Vec<usize> = Vec::new();
    let mut is_visible: Vec<bool> = Vec::new();
    for p in 0..n {
        if simplex.contains(&p) {
            continue;
        }
        visible.clear();
        for (fi, f) in faces.iter().enumerate() {
            if alive[fi] && orient(f, p) < 0.0 {
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            continue;
        }
        is_visible.resize(faces.len(), false);
        for &fi in &visible {
            is_visible[fi] = true;
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &fi in &visible {
            let f = faces[fi];
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                let twin = edges[&(b, a)];
                if !is_visible[twin] {
                    horizon.push((a, b));
                }
            }
        }
        for &fi in &visible {
            let f = faces[fi];
            alive[fi] = false;
            is_visible[fi] = false;
            for e in 0..3 {
                edges.remove(&(f[e], f[(e + 1) % 3]));
            }
        }
        for (a, b) in horizon {
            add_face(&mut faces, &mut alive, &mut edges, [a, b, p]);
        }
    }
    Ok(faces.into_iter().zip(alive).filter(|(_, a)| *a).map(|(f, _)| f).collect())
}

fn add_face(
    faces: &mut Vec<[usize; 3]>,
    alive: &mut Vec<bool>,
    edges: &mut HashMap<(usize, usize), usize>,
    f: [usize; 3],
) {
    let id = faces.len();
    for e in 0..3 {
        edges.insert((f[e], f[(e + 1) % 3]), id);
    }
    faces.push(f);
    alive.push(true);
}

/// Normal `(b - a) x (c - a)`, evaluated as an exact expansion of
/// coordinate products so that slivers still get an accurate direction.
pub(crate) fn triangle_normal(a: &[f64], b: &[f64], c: &[f64]) -> [f64; 3] {
    let comp = |i: usize, j: usize| {
        let mut e = Vec::with_capacity(12);
        for (x, y, s) in [
            (b[i], c[j], 1.0),
            (b[i], a[j], -1.0),
            (a[i], c[j], -1.0),
            (b[j], c[i], -1.0),
            (b[j], a[i], 1.0),
            (a[j], c[i], 1.0),
        ] {
            let p = s * x * y;
            grow(&mut e, p);
            grow(&mut e, (s * x).mul_add(y, -p));
        }
        e.iter().sum::<f64>()
    };
    [comp(1, 2), comp(2, 0), comp(0, 1)]
}

fn grow(e: &mut Vec<f64>, mut q: f64) {
    for x in e.iter_mut() {
        let s = q + *x;
        let bv = s - q;
        let err = (q - (s - bv)) + (*x - bv);
        *x = err;
        q = s;
    }
    e.push(q);
}

pub(crate) fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Points whose incident facet normals span R^3, i.e. genuine corners.
fn extreme_vertices(points: &[[f64; 3]], tris: &[[usize; 3]]) -> Vec<usize> {
    let mut incident: HashMap<usize, Vec<[f64; 3]>> = HashMap::new();
    for t in tris {
        let nrm = unit(triangle_normal(&points[t[0]], &points[t[1]], &points[t[2]]));
        for &v in t {
            incident.entry(v).or_default().push(nrm);
        }
    }
    let mut out: Vec<usize> = incident
        .into_iter()
        .filter(|(_, normals)| normals_span_space(normals))
        .map(|(v, _)| v)
        .collect();
    out.sort_unstable();
    out
}

fn normals_span_space(normals: &[[f64; 3]]) -> bool {
    const TOL: f64 = 1e-10;
    let first = normals[0];
    let Some(second) = normals.iter().find(|n| {
        let c = [
            first[1] * n[2] - first[2] * n[1],
            first[2] * n[0] - first[0] * n[2],
            first[0] * n[1] - first[1] * n[0],
        ];
        c.iter().map(|x| x * x).sum::<f64>().sqrt() > TOL
    }) else {
        return false;
    };
    let c = [
        first[1] * second[2] - first[2] * second[1],
        first[2] * second[0] - first[0] * second[2],
        first[0] * second[1] - first[1] * second[0],
    ];
    let c = unit(c);
    normals.iter().any(|n| (c[0] * n[0] + c[1] * n[1] + c[2] * n[2]).abs() > TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_hull_drops_interior_point() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.2, 0.2]];
        assert_eq!(hull2(&pts).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn planar_hull_drops_collinear_points() {
        let pts = [[0.0, 0.0], [0.5, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(hull2(&pts).unwrap().len(), 4);
        assert!(hull2(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).is_err());
    }

    #[test]
    fn cube_with_centroid() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        pts.push([0.5, 0.5, 0.5]);
        let h = hull3(&pts).unwrap();
        assert_eq!(h.vertices, (0..8).collect::<Vec<_>>());
        assert_eq!(h.triangles.len(), 12);
    }

    #[test]
    fn face_center_points_are_not_vertices() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([(i & 1) as f64 * 2.0 - 1.0, ((i >> 1) & 1) as f64 * 2.0 - 1.0, ((i >> 2) & 1) as f64 * 2.0 - 1.0]);
        }
        // face centers and edge midpoints lie on the boundary
        pts.push([1.0, 0.0, 0.0]);
        pts.push([0.0, 0.0, -1.0]);
        pts.push([1.0, 1.0, 0.0]);
        let h = hull3(&pts).unwrap();
        assert_eq!(h.vertices, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn coplanar_input_is_degenerate() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(matches!(hull3(&pts), Err(Error::Degenerate(_))));
    }
}
