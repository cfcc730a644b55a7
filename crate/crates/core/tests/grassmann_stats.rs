//! Statistical checks of the Haar samplers on Grassmannians.

use lpbm::functionals::volume;
use lpbm::geometry::ConvexBody;
use lpbm::grassmann::{project_body, sample_subspace, strict_projection_fraction, Subspace};
use lpbm::rng::RngStream;

fn lines(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let rng = RngStream::new(seed);
    (0..count)
        .map(|i| {
            let s = sample_subspace(n, 1, rng.offset(1, i as u64)).unwrap();
            s.basis().column(0).iter().copied().collect()
        })
        .collect()
}

fn normals(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let rng = RngStream::new(seed);
    (0..count)
        .map(|i| {
            let b = sample_subspace(3, 2, rng.offset(1, i as u64)).unwrap().basis().clone();
            let (x, y) = (b.column(0), b.column(1));
            [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]]
        })
        .collect()
}

/// Pearson statistic of `values` in `[0, 1)` against the uniform law.
fn chi_square_uniform(values: impl Iterator<Item = f64>, bins: usize) -> f64 {
    let mut counts = vec![0usize; bins];
    let mut total = 0;
    for v in values {
        counts[((v * bins as f64) as usize).min(bins - 1)] += 1;
        total += 1;
    }
    let expected = total as f64 / bins as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

#[test]
fn mean_direction_obeys_the_clt_bound() {
    let n = 100_000;
    let dirs = lines(3, n, 11);
    let mut mean = [0.0; 3];
    for d in &dirs {
        for k in 0..3 {
            mean[k] += d[k] / n as f64;
        }
    }
    let norm = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm <= 4.0 / (n as f64).sqrt(), "{norm}");
}

#[test]
fn planar_angles_pass_kolmogorov_smirnov() {
    let n = 20_000;
    let mut angles: Vec<f64> = lines(2, n, 12)
        .iter()
        .map(|d| (d[1].atan2(d[0]) + std::f64::consts::PI) / std::f64::consts::TAU)
        .collect();
    angles.sort_by(f64::total_cmp);
    let d = angles
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n as f64 - x).max(x - i as f64 / n as f64))
        .fold(0.0, f64::max);
    // 1% critical value
    assert!(d < 1.628 / (n as f64).sqrt(), "{d}");
}

#[test]
fn plane_normals_are_rotation_invariant() {
    // |<nu, a>| is uniform on [0, 1] for every unit axis a
    let ns = normals(20_000, 13);
    let s = 1.0 / 3f64.sqrt();
    let c = (0.3f64).cos();
    let axes = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [s, s, s], [c * 0.6, c * 0.8, (0.3f64).sin()]];
    for a in axes {
        let chi = chi_square_uniform(ns.iter().map(|v| (v[0] * a[0] + v[1] * a[1] + v[2] * a[2]).abs()), 10);
        // 0.1% critical value with 9 degrees of freedom
        assert!(chi < 27.88, "{a:?}: {chi}");
    }
}

#[test]
fn cube_shadow_along_the_diagonal() {
    let u = [1.0 / 3f64.sqrt(); 3];
    let xi = Subspace::complement_of(&u).unwrap();
    let cube = ConvexBody::cube(3, 1.0).unwrap();
    let area = volume(&project_body(&cube, &xi).unwrap()).unwrap().value;
    assert!((area - 4.0 * 3f64.sqrt()).abs() < 1e-10, "{area}");
}

#[test]
fn ball_in_cube_has_strictly_smaller_shadows() {
    let ball = ConvexBody::ball(3, 1.0).unwrap();
    let cube = ConvexBody::cube(3, 1.0).unwrap();
    let f = strict_projection_fraction(&ball, &cube, 2, 10_000, RngStream::new(14)).unwrap();
    assert!(f.fraction >= 0.99, "{f:?}");
    assert!(f.lower_99 > 0.99, "{f:?}");
}
