//! Unit directions and quadrature grids on the sphere.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Volume of the unit ball in R^j.
pub fn unit_ball_volume(j: usize) -> f64 {
    match j {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / j as f64 * unit_ball_volume(j - 2),
    }
}

/// Surface measure of S^{n-1}, equal to n * omega_n.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(DVector<f64>);

impl Direction {
    /// Normalizes `v`; fails on (numerically) zero input.
    pub fn new(v: DVector<f64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::InvalidArgument("direction must be a nonzero finite vector".into()));
        }
        Ok(Direction(v / norm))
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(v))
    }

    pub fn axis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        Direction(v)
    }

    pub fn from_angle(theta: f64) -> Self {
        Direction(DVector::from_vec(vec![theta.cos(), theta.sin()]))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn neg(&self) -> Self {
        Direction(-&self.0)
    }
}

/// Quadrature directions on S^{n-1}, closed under antipodes.
#[derive(Debug, Clone)]
pub struct DirectionSet {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    antipode: Vec<usize>,
    /// Triangles of the icosphere (3D only); used for neighbor queries.
    triangles: Vec<[usize; 3]>,
}

pub const DEFAULT_CIRCLE_COUNT: usize = 720;
pub const DEFAULT_SPHERE_COUNT: usize = 2562;

impl DirectionSet {
    /// Default-resolution grid for dimension `n`.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            2 => Self::circle(DEFAULT_CIRCLE_COUNT),
            3 => Self::icosphere_at_least(DEFAULT_SPHERE_COUNT),
            _ => Self::random(n, 400 * n, RngStream::new(0x5eed_d1)),
        }
    }

    /// Grid with roughly `count` directions: equal angles for n = 2, the
    /// smallest icosphere with at least `count` vertices for n = 3.
    pub fn with_count(n: usize, count: usize) -> Result<Self> {
        match n {
            2 => Self::circle(count + count % 2),
            3 => Self::icosphere_at_least(count),
            _ => Self::random(n, count, RngStream::new(0x5eed_d1)),
        }
    }

    /// `m` equally spaced angles (m even, so the set is antipodal).
    pub fn circle(m: usize) -> Result<Self> {
        if m < 4 || m % 2 != 0 {
            return Err(Error::InvalidArgument(format!("circle grid needs an even count >= 4, got {m}")));
        }
        let mut coords = Vec::with_capacity(2 * m);
        for k in 0..m {
            let t = 2.0 * PI * k as f64 / m as f64;
            coords.push(t.cos());
            coords.push(t.sin());
        }
        Ok(DirectionSet {
            dim: 2,
            coords,
            weights: vec![2.0 * PI / m as f64; m],
            antipode: (0..m).map(|k| (k + m / 2) % m).collect(),
            triangles: Vec::new(),
        })
    }

    /// Subdivided icosahedron with `level` midpoint refinements
    /// (12, 42, 162, 642, 2562, 10242, ... vertices).
    pub fn icosphere(level: u32) -> Result<Self> {
        let (verts, tris) = icosphere_mesh(level);
        let m = verts.len();
        let mut weights = vec![0.0; m];
        for t in &tris {
            let area = spherical_triangle_area(&verts[t[0]], &verts[t[1]], &verts[t[2]]);
            for &i in t {
                weights[i] += area / 3.0;
            }
        }
        let antipode = antipode_map(&verts)?;
        let coords = verts.iter().flat_map(|v| v.iter().copied()).collect();
        Ok(DirectionSet { dim: 3, coords, weights, antipode, triangles: tris })
    }

    pub fn icosphere_at_least(count: usize) -> Result<Self> {
        let mut level = 0u32;
        while 10 * 4usize.pow(level) + 2 < count {
            level += 1;
        }
        Self::icosphere(level)
    }

    /// Gaussian directions and their antipodes with equal weights, for n >= 4.
    pub fn random(n: usize, count: usize, rng: RngStream) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("direction sets need n >= 2".into()));
        }
        let half = count.div_ceil(2).max(n);
        let mut r = rng.rng();
        let mut coords = Vec::with_capacity(2 * half * n);
        let mut base = Vec::with_capacity(half);
        // the axes first so that the set always spans
        for i in 0..n.min(half) {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            base.push(v);
        }
        while base.len() < half {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-9 {
                base.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        for v in &base {
            coords.extend_from_slice(v);
        }
        for v in &base {
            coords.extend(v.iter().map(|x| -x));
        }
        let m = 2 * half;
        Ok(DirectionSet {
            dim: n,
            coords,
            weights: vec![sphere_area(n) / m as f64; m],
            antipode: (0..m).map(|k| (k + half) % m).collect(),
            triangles: Vec::new(),
        })
    }

    /// Builds a set from explicit directions (normalized) with equal weights.
    /// The set must be antipodally closed.
    pub fn from_directions(n: usize, dirs: &[Vec<f64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(dirs.len() * n);
        let mut verts = Vec::with_capacity(dirs.len());
        for d in dirs {
            if d.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: d.len() });
            }
            let dir = Direction::from_slice(d)?;
            coords.extend_from_slice(dir.as_slice());
            verts.push(dir.as_slice().to_vec());
        }
        let m = verts.len();
        if m < n + 1 {
            return Err(Error::Degenerate(format!("{m} directions cannot span R^{n}")));
        }
        let antipode = antipode_map(&verts)?;
        Ok(DirectionSet {
            dim: n,
            coords,
            weights: vec![sphere_area(n) / m as f64; m],
            antipode,
            triangles: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn direction(&self, i: usize) -> Direction {
        Direction(DVector::from_column_slice(self.get(i)))
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest angle between a direction and its nearest grid neighbor,
    /// estimated from the grid itself.
    pub fn spacing(&self) -> f64 {
        match self.dim {
            2 => 2.0 * PI / self.len() as f64,
            3 if !self.triangles.is_empty() => self
                .triangles
                .iter()
                .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
                .map(|(a, b)| angle_between(self.get(a), self.get(b)))
                .fold(0.0, f64::max),
            _ => (sphere_area(self.dim) / self.len() as f64).powf(1.0 / (self.dim as f64 - 1.0)),
        }
    }

    /// Weighted integral of `f` over the sphere.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        self.iter().zip(&self.weights).map(|(u, w)| w * f(u)).sum()
    }
}

fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    d.clamp(-1.0, 1.0).acos()
}

fn antipode_map(verts: &[Vec<f64>]) -> Result<Vec<usize>> {
    let key = |v: &[f64]| -> Vec<i64> { v.iter().map(|x| (x * 1e9).round() as i64).collect() };
    let index: HashMap<Vec<i64>, usize> = verts.iter().enumerate().map(|(i, v)| (key(v), i)).collect();
    verts
        .iter()
        .map(|v| {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            index
                .get(&key(&neg))
                .copied()
                .or_else(|| {
                    // rounding landed on a bucket boundary; fall back to a scan
                    verts.iter().position(|w| w.iter().zip(&neg).all(|(a, b)| (a - b).abs() < 1e-9))
                })
                .ok_or_else(|| Error::InvalidArgument("direction set is not antipodally closed".into()))
        })
        .collect()
}

/// Spherical excess of the triangle with unit-vector corners.
pub(crate) fn spherical_triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let triple = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0]);
    let dot = |x: &[f64], y: &[f64]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * triple.abs().atan2(denom)
}

fn icosphere_mesh(level: u32) -> (Vec<Vec<f64>>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let normalize = |v: [f64; 3]| -> Vec<f64> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        vec![v[0] / n, v[1] / n, v[2] / n]
    };
    let mut verts: Vec<Vec<f64>> = raw.iter().map(|v| normalize(*v)).collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec<f64>>| -> usize {
            let k = (a.min(b), a.max(b));
            *mids.entry(k).or_insert_with(|| {
                let m = [
                    verts[a][0] + verts[b][0],
                    verts[a][1] + verts[b][1],
                    verts[a][2] + verts[b][2],
                ];
                verts.push(normalize(m));
                verts.len() - 1
            })
        };
        for t in &tris {
            let ab = midpoint(t[0], t[1], &mut verts);
            let bc = midpoint(t[1], t[2], &mut verts);
            let ca = midpoint(t[2], t[0], &mut verts);
            next.push([t[0], ab, ca]);
            next.push([t[1], bc, ab]);
            next.push([t[2], ca, bc]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    (verts, tris)
}
