//! Vertex-described polytopes with their boundary structure and exact
//! measures (volume, centroid, second moments, surface area, mean width).

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::hull::{hull2, hull3, triangle_normal, unit};
use crate::error::{Error, Result};

/// A boundary facet with outward unit normal and offset (`normal . x = offset`).
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    coords: Vec<f64>,
    facets: Vec<Facet>,
    /// Outward triangles over vertex indices (3D only).
    triangles: Vec<[usize; 3]>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.coords == other.coords
    }
}

impl Polytope {
    /// Convex hull of `points` (each of length `dim`). For `dim <= 3` the
    /// boundary structure is computed and interior points are dropped; in
    /// higher dimension the points are kept as given and only the support
    /// function is available.
    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("polytope vertex has a non-finite coordinate".into()));
            }
        }
        if points.len() < dim + 1 {
            return Err(Error::Degenerate(format!("{} points cannot span R^{dim}", points.len())));
        }
        match dim {
            1 => {
                let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                if !(hi > lo) {
                    return Err(Error::Degenerate("segment has zero length".into()));
                }
                Ok(Self::segment(lo, hi))
            }
            2 => {
                let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
                let order = hull2(&pts)?;
                let verts: Vec<[f64; 2]> = order.iter().map(|&i| pts[i]).collect();
                Ok(Self::polygon_ccw(&verts))
            }
            3 => {
                let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
                let hull = hull3(&pts)?;
                let mut order = hull.vertices.clone();
                order.sort_by(|&a, &b| {
                    pts[a].iter().zip(&pts[b]).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.cmp(&b))
                });
                let remap: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let coords: Vec<f64> = order.iter().flat_map(|&i| pts[i]).collect();
                let mut triangles: Vec<[usize; 3]> =
                    hull.triangles.iter().map(|t| [remap[&t[0]], remap[&t[1]], remap[&t[2]]]).collect();
                for t in triangles.iter_mut() {
                    // rotate so the smallest index leads, keeping orientation
                    let m = (0..3).min_by_key(|&k| t[k]).unwrap();
                    *t = [t[m], t[(m + 1) % 3], t[(m + 2) % 3]];
                }
                triangles.sort_unstable();
                let mut poly = Polytope { dim: 3, coords, facets: Vec::new(), triangles };
                poly.facets = poly.merge_facets();
                Ok(poly)
            }
            _ => Ok(Polytope {
                dim,
                coords: points.iter().flatten().copied().collect(),
                facets: Vec::new(),
                triangles: Vec::new(),
            }),
        }
    }

    fn segment(lo: f64, hi: f64) -> Self {
        Polytope {
            dim: 1,
            coords: vec![lo, hi],
            facets: vec![
                Facet { vertices: vec![0], normal: vec![-1.0], offset: -lo },
                Facet { vertices: vec![1], normal: vec![1.0], offset: hi },
            ],
            triangles: Vec::new(),
        }
    }

    fn polygon_ccw(verts: &[[f64; 2]]) -> Self {
        let m = verts.len();
        let facets = (0..m)
            .map(|i| {
                let a = verts[i];
                let b = verts[(i + 1) % m];
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let len = dx.hypot(dy);
                let normal = vec![dy / len, -dx / len];
                let offset = normal[0] * a[0] + normal[1] * a[1];
                Facet { vertices: vec![i, (i + 1) % m], normal, offset }
            })
            .collect();
        Polytope { dim: 2, coords: verts.iter().flatten().copied().collect(), facets, triangles: Vec::new() }
    }

    /// Axis-aligned box with the given per-axis half widths, centered at `center`.
    pub fn cuboid(center: &[f64], half: &[f64]) -> Result<Self> {
        let n = half.len();
        if center.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: center.len() });
        }
        let pts: Vec<Vec<f64>> = (0..1usize << n)
            .map(|mask| (0..n).map(|k| center[k] + if mask >> k & 1 == 1 { half[k] } else { -half[k] }).collect())
            .collect();
        Self::from_points(n, &pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn vertex_list(&self) -> Vec<Vec<f64>> {
        self.vertices().map(|v| v.to_vec()).collect()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn has_boundary(&self) -> bool {
        self.dim <= 3
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn support_point(&self, u: &[f64]) -> Vec<f64> {
        let mut best = 0;
        let mut val = f64::NEG_INFINITY;
        for (i, v) in self.vertices().enumerate() {
            let d = dot(v, u);
            if d > val {
                val = d;
                best = i;
            }
        }
        self.vertex(best).to_vec()
    }

    /// Mean of the vertices; an interior point for full-dimensional polytopes.
    pub fn vertex_mean(&self) -> Vec<f64> {
        let m = self.vertex_count() as f64;
        let mut c = vec![0.0; self.dim];
        for v in self.vertices() {
            for (ck, vk) in c.iter_mut().zip(v) {
                *ck += vk / m;
            }
        }
        c
    }

    fn require_boundary(&self) -> Result<()> {
        if self.has_boundary() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("exact polytope measures in dimension {}", self.dim)))
        }
    }

    /// Simplices `(vertex ids)` decomposing the polytope, fanned from the
    /// vertex mean (which is returned alongside).
    fn for_each_simplex(&self, mut f: impl FnMut(&[&[f64]])) -> Result<()> {
        self.require_boundary()?;
        let o = self.vertex_mean();
        match self.dim {
            1 => f(&[self.vertex(0), self.vertex(1)]),
            2 => {
                let m = self.vertex_count();
                for i in 0..m {
                    f(&[&o, self.vertex(i), self.vertex((i + 1) % m)]);
                }
            }
            _ => {
                for t in &self.triangles {
                    f(&[&o, self.vertex(t[0]), self.vertex(t[1]), self.vertex(t[2])]);
                }
            }
        }
        Ok(())
    }

    pub fn volume(&self) -> Result<f64> {
        let mut vol = 0.0;
        self.for_each_simplex(|s| vol += simplex_volume(s))?;
        Ok(vol)
    }

    pub fn centroid(&self) -> Result<Vec<f64>> {
        let mut vol = 0.0;
        let mut c = vec![0.0; self.dim];
        self.for_each_simplex(|s| {
            let v = simplex_volume(s);
            vol += v;
            for k in 0..c.len() {
                c[k] += v * s.iter().map(|p| p[k]).sum::<f64>() / s.len() as f64;
            }
        })?;
        Ok(c.into_iter().map(|x| x / vol).collect())
    }

    /// Second moment matrix `int_P (x - c)(x - c)^T dx` about the centroid `c`.
    pub fn central_second_moment(&self) -> Result<DMatrix<f64>> {
        // work in coordinates centered at the vertex mean to limit cancellation
        let o = self.vertex_mean();
        let n = self.dim;
        let mut vol = 0.0;
        let mut first = vec![0.0; n];
        let mut second = DMatrix::zeros(n, n);
        self.for_each_simplex(|s| {
            let v = simplex_volume(s);
            if v == 0.0 {
                return;
            }
            let pts: Vec<Vec<f64>> = s.iter().map(|p| p.iter().zip(&o).map(|(a, b)| a - b).collect()).collect();
            let k = pts.len() as f64;
            let mut sum = vec![0.0; n];
            for p in &pts {
                for i in 0..n {
                    sum[i] += p[i];
                }
            }
            // int_S x x^T = V / ((n+1)(n+2)) * (sum v v^T + s s^T)
            let scale = v / (k * (k + 1.0));
            for i in 0..n {
                for j in 0..n {
                    let mut acc = sum[i] * sum[j];
                    for p in &pts {
                        acc += p[i] * p[j];
                    }
                    second[(i, j)] += scale * acc;
                }
                first[i] += v * sum[i] / k;
            }
            vol += v;
        })?;
        // parallel-axis shift to the centroid
        for i in 0..n {
            for j in 0..n {
                second[(i, j)] -= first[i] * first[j] / vol;
            }
        }
        Ok(second)
    }

    /// Polar moment of inertia about the centroid.
    pub fn moment_of_inertia(&self) -> Result<f64> {
        Ok(self.central_second_moment()?.trace())
    }

    /// Boundary measure: perimeter in 2D, surface area in 3D.
    pub fn boundary_measure(&self) -> Result<f64> {
        self.require_boundary()?;
        Ok(match self.dim {
            1 => 2.0,
            2 => {
                let m = self.vertex_count();
                (0..m).map(|i| dist(self.vertex(i), self.vertex((i + 1) % m))).sum()
            }
            _ => self
                .triangles
                .iter()
                .map(|t| {
                    let c = triangle_normal(self.vertex(t[0]), self.vertex(t[1]), self.vertex(t[2]));
                    0.5 * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
                })
                .sum(),
        })
    }

    /// Mean width (average of `h(u) + h(-u)` over the sphere). In 3D this is
    /// the edge formula `sum(len * exterior angle) / (4 pi)`.
    pub fn mean_width(&self) -> Result<f64> {
        self.require_boundary()?;
        Ok(match self.dim {
            1 => self.coords[1] - self.coords[0],
            2 => self.boundary_measure()? / std::f64::consts::PI,
            _ => {
                let normals: Vec<[f64; 3]> = self
                    .triangles
                    .iter()
                    .map(|t| unit(triangle_normal(self.vertex(t[0]), self.vertex(t[1]), self.vertex(t[2]))))
                    .collect();
                let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
                for (fi, t) in self.triangles.iter().enumerate() {
                    for e in 0..3 {
                        owner.insert((t[e], t[(e + 1) % 3]), fi);
                    }
                }
                let mut total = 0.0;
                for (fi, t) in self.triangles.iter().enumerate() {
                    for e in 0..3 {
                        let (a, b) = (t[e], t[(e + 1) % 3]);
                        if a > b {
                            continue;
                        }
                        let fj = owner[&(b, a)];
                        let (n1, n2) = (normals[fi], normals[fj]);
                        let cos = (n1[0] * n2[0] + n1[1] * n2[1] + n1[2] * n2[2]).clamp(-1.0, 1.0);
                        total += dist(self.vertex(a), self.vertex(b)) * cos.acos();
                    }
                }
                total / (4.0 * std::f64::consts::PI)
            }
        })
    }

    /// Signed distance lower bound `max_f (n_f . x - b_f)`; exact outside the
    /// polytope when the nearest point lies in a facet's relative interior.
    pub fn facet_distance(&self, x: &[f64]) -> f64 {
        self.facets.iter().map(|f| dot(&f.normal, x) - f.offset).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest facet offset; positive iff the origin is interior.
    pub fn min_facet_offset(&self) -> Option<f64> {
        if self.facets.is_empty() {
            None
        } else {
            Some(self.facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min))
        }
    }

    pub fn is_origin_symmetric(&self, tol: f64) -> bool {
        let scale = self.coords.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        self.vertices().all(|v| {
            self.vertices().any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() <= tol * scale))
        })
    }

    /// Applies `x -> M x + t` to every vertex (M is `rows x dim`).
    pub fn map_affine(&self, matrix: &DMatrix<f64>, translation: &[f64]) -> Result<Polytope> {
        let rows = matrix.nrows();
        let pts: Vec<Vec<f64>> = self
            .vertices()
            .map(|v| (0..rows).map(|r| (0..self.dim).map(|c| matrix[(r, c)] * v[c]).sum::<f64>() + translation[r]).collect())
            .collect();
        Polytope::from_points(rows, &pts)
    }

    fn merge_facets(&self) -> Vec<Facet> {
        const TOL: f64 = 1e-10;
        let tris = &self.triangles;
        let normals: Vec<[f64; 3]> =
            tris.iter().map(|t| unit(triangle_normal(self.vertex(t[0]), self.vertex(t[1]), self.vertex(t[2])))).collect();
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, t) in tris.iter().enumerate() {
            for e in 0..3 {
                owner.insert((t[e], t[(e + 1) % 3]), fi);
            }
        }
        let mut parent: Vec<usize> = (0..tris.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for (fi, t) in tris.iter().enumerate() {
            for e in 0..3 {
                let fj = owner[&(t[(e + 1) % 3], t[e])];
                let (a, b) = (normals[fi], normals[fj]);
                if (0..3).all(|k| (a[k] - b[k]).abs() < TOL) {
                    let (ra, rb) = (find(&mut parent, fi), find(&mut parent, fj));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for fi in 0..tris.len() {
            let r = find(&mut parent, fi);
            let k = *slot.entry(r).or_insert_with(|| {
                groups.push((r, Vec::new()));
                groups.len() - 1
            });
            groups[k].1.push(fi);
        }
        groups
            .into_iter()
            .map(|(_, members)| {
                let mut next: HashMap<usize, usize> = HashMap::new();
                let mut area_normal = [0.0; 3];
                for &fi in &members {
                    let t = tris[fi];
                    let c = triangle_normal(self.vertex(t[0]), self.vertex(t[1]), self.vertex(t[2]));
                    for k in 0..3 {
                        area_normal[k] += c[k];
                    }
                    for e in 0..3 {
                        let (a, b) = (t[e], t[(e + 1) % 3]);
                        let twin = owner[&(b, a)];
                        if !members.contains(&twin) {
                            next.insert(a, b);
                        }
                    }
                }
                let start = *next.keys().min().unwrap();
                let mut loop_ = vec![start];
                let mut cur = next[&start];
                while cur != start && loop_.len() <= next.len() {
                    loop_.push(cur);
                    cur = next[&cur];
                }
                let normal = unit(area_normal).to_vec();
                let offset = dot(&normal, self.vertex(start));
                Facet { vertices: loop_, normal, offset }
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Unsigned volume of the simplex with the given corners (k = dim + 1 points).
fn simplex_volume(s: &[&[f64]]) -> f64 {
    match s.len() {
        2 => (s[1][0] - s[0][0]).abs(),
        3 => {
            let (a, b, c) = (s[0], s[1], s[2]);
            0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs()
        }
        4 => {
            let (a, b, c, d) = (s[0], s[1], s[2], s[3]);
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let w = [d[0] - a[0], d[1] - a[1], d[2] - a[2]];
            let det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
                + u[2] * (v[0] * w[1] - v[1] * w[0]);
            det.abs() / 6.0
        }
        _ => unreachable!("simplices only in dimensions 1 to 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(half: f64) -> Polytope {
        Polytope::cuboid(&[0.0; 3], &[half; 3]).unwrap()
    }

    #[test]
    fn cube_measures() {
        let c = cube(1.0);
        assert_eq!(c.vertex_count(), 8);
        assert_eq!(c.triangles().len(), 12);
        assert_eq!(c.facets().len(), 6);
        assert!(c.facets().iter().all(|f| f.vertices.len() == 4 && (f.offset - 1.0).abs() < 1e-15));
        assert!((c.volume().unwrap() - 8.0).abs() < 1e-12);
        assert!((c.boundary_measure().unwrap() - 24.0).abs() < 1e-12);
        assert!((c.mean_width().unwrap() - 3.0).abs() < 1e-12);
        assert!(c.is_origin_symmetric(1e-12));
    }

    #[test]
    fn unit_cube_inertia_is_one_quarter() {
        let c = Polytope::cuboid(&[0.3, -2.0, 5.0], &[0.5; 3]).unwrap();
        assert!((c.moment_of_inertia().unwrap() - 0.25).abs() < 1e-12);
        let cen = c.centroid().unwrap();
        assert!((cen[0] - 0.3).abs() < 1e-12 && (cen[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_second_moment_matches_integral() {
        // triangle (0,0),(1,0),(0,1): int x^2 = 1/12, centroid (1/3,1/3), area 1/2
        let t = Polytope::from_points(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let m = t.central_second_moment().unwrap();
        let xx = 1.0 / 12.0 - 0.5 / 9.0;
        assert!((m[(0, 0)] - xx).abs() < 1e-14);
        assert!((t.volume().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn planar_boundary_and_distance() {
        let sq = Polytope::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((sq.boundary_measure().unwrap() - 8.0).abs() < 1e-14);
        assert!((sq.facet_distance(&[3.0, 0.0]) - 2.0).abs() < 1e-14);
        assert!(sq.facet_distance(&[0.0, 0.0]) < 0.0);
        assert_eq!(sq.min_facet_offset(), Some(1.0));
    }

    #[test]
    fn simplex_volume_in_3d() {
        let t = Polytope::from_points(
            3,
            &[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        )
        .unwrap();
        assert!((t.volume().unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(!t.is_origin_symmetric(1e-12));
    }
}
