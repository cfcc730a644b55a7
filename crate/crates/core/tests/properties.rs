//! Property tests for the invariants of bodies, subspaces, functionals and
//! slack records.

use std::sync::Arc;

use lpbm::functionals::{power_mean_joint, EvalContext, FunctionalDescriptor};
use lpbm::geometry::compare::Tolerances;
use lpbm::geometry::random::{random_polytope, random_polytope_pair};
use lpbm::geometry::{
    lp_combine, polytope_from_support, sphere_area, BodySpec, ConvexBody, Direction, DirectionSet,
};
use lpbm::grassmann::{project_body, sample_subspace};
use lpbm::harness::{
    alpha_grid, audit_homogeneity, audit_translation, check_lp_bm, check_lp_inclusion, sample_curve, Verdict,
};
use lpbm::rng::RngStream;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn body_zoo(dim: usize, seed: u64) -> Vec<ConvexBody> {
    let rng = RngStream::new(seed);
    let mut r = rng.rng();
    let mut out = vec![
        random_polytope(dim, 10, rng.fork(1)).unwrap(),
        ConvexBody::ball_at(r.random_range(0.5..2.0), &vec![0.1; dim]).unwrap(),
    ];
    let a = DMatrix::from_fn(dim, dim, |i, j| if i == j { r.random_range(0.5..2.0) } else { 0.2 });
    out.push(ConvexBody::ellipsoid(&a * a.transpose(), &vec![0.0; dim]).unwrap());
    let m = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { r.random_range(-0.4..0.4) });
    out.push(out[0].affine_image(m, &vec![0.05; dim]).unwrap());
    if dim == 2 {
        out.push(ConvexBody::reuleaux(r.random_range(0.5..2.0), &[0.02, -0.03]).unwrap());
    }
    out.push(lp_combine(r.random_range(1.0..4.0), 0.7, &out[0], 0.4, &out[1]).unwrap());
    out
}

fn unit(dim: usize, r: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn directions_are_unit(v in proptest::collection::vec(-10.0f64..10.0, 2..5)) {
        prop_assume!(v.iter().map(|x| x * x).sum::<f64>() > 1e-6);
        let d = Direction::from_slice(&v).unwrap();
        let norm = d.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grids_carry_sphere_measure_and_antipodes(m in 2usize..400, level in 0u32..4) {
        for d in [DirectionSet::circle(2 * m).unwrap(), DirectionSet::icosphere(level).unwrap()] {
            let n = d.dim();
            prop_assert!((d.total_weight() / sphere_area(n) - 1.0).abs() < 1e-6);
            for i in 0..d.len() {
                let a = d.antipode(i);
                for (x, y) in d.get(i).iter().zip(d.get(a)) {
                    prop_assert!((x + y).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn supports_are_sublinear_and_homogeneous(seed in any::<u64>(), dim in 2usize..4, lam in 0.1f64..5.0) {
        let mut r = RngStream::new(seed).fork(9).rng();
        for b in body_zoo(dim, seed) {
            let s = b.scale();
            let scaled = b.scaled(lam).unwrap();
            for _ in 0..20 {
                let u = unit(dim, &mut r);
                let v = unit(dim, &mut r);
                let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
                prop_assert!(b.h(&w) <= b.h(&u) + b.h(&v) + 1e-9 * s, "{}", b.kind());
                prop_assert!((scaled.h(&u) - lam * b.h(&u)).abs() <= 1e-12 * lam * s.max(1.0), "{}", b.kind());
            }
        }
    }

    #[test]
    fn lp_interchange(seed in any::<u64>(), dim in 2usize..4, p in 1.0f64..8.0, a in 0.01f64..3.0, b in 0.01f64..3.0) {
        let zoo = body_zoo(dim, seed);
        let (k, l) = (&zoo[0], &zoo[2]);
        let c = lp_combine(p, a, k, b, l).unwrap();
        let mut r = RngStream::new(seed).rng();
        for _ in 0..50 {
            let u = unit(dim, &mut r);
            let lhs = c.h(&u).powf(p);
            let rhs = a * k.h(&u).powf(p) + b * l.h(&u).powf(p);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300) * (1.0 + p));
        }
    }

    #[test]
    fn lp_inclusion_and_its_equality_case(seed in any::<u64>(), p in 1.01f64..6.0, alpha in 0.01f64..0.99, same in any::<bool>()) {
        let (k, l) = random_polytope_pair(2, 8, 0.05, RngStream::new(seed)).unwrap();
        let l = if same { k.clone() } else { l };
        let r = check_lp_inclusion(&k, &l, p, alpha, &DirectionSet::circle(360).unwrap()).unwrap();
        prop_assert!(r.consistent(), "{r:?}");
        prop_assert_eq!(r.equal_everywhere, same);
    }

    #[test]
    fn supports_increase_with_p(seed in any::<u64>(), dim in 2usize..4, p1 in 1.0f64..5.0, dp in 0.01f64..5.0) {
        let zoo = body_zoo(dim, seed);
        let (k, l) = (&zoo[0], &zoo[1]);
        let c1 = lp_combine(p1, 0.5, k, 0.5, l).unwrap();
        let c2 = lp_combine(p1 + dp, 0.5, k, 0.5, l).unwrap();
        let ci = lp_combine(f64::INFINITY, 0.5, k, 0.5, l).unwrap();
        let mut r = RngStream::new(seed).rng();
        for _ in 0..50 {
            let u = unit(dim, &mut r);
            let eps = 1e-12 * k.scale().max(l.scale());
            prop_assert!(c1.h(&u) <= c2.h(&u) + eps);
            prop_assert!(c2.h(&u) <= ci.h(&u) + eps);
        }
    }

    #[test]
    fn circumscribed_polytopes_contain_and_shrink(seed in any::<u64>()) {
        let zoo = body_zoo(3, seed);
        let fine = DirectionSet::icosphere(3).unwrap();
        for b in &zoo[1..] {
            let mut last = f64::INFINITY;
            for level in 1..=3 {
                let g = DirectionSet::icosphere(level).unwrap();
                let p = polytope_from_support(b, &g).unwrap();
                for u in fine.iter() {
                    prop_assert!(p.support(u) >= b.h(u) - 1e-9 * b.scale(), "{} level {level}: {} < {}", b.kind(), p.support(u), b.h(u));
                }
                let v = p.volume().unwrap();
                prop_assert!(v <= last * (1.0 + 1e-12), "{} level {level}: {v} > {last}", b.kind());
                last = v;
            }
        }
    }

    #[test]
    fn projection_commutes_with_lp_sums(seed in any::<u64>(), j in 1usize..3, p in 1.0f64..5.0) {
        let zoo = body_zoo(3, seed);
        let xi = sample_subspace(3, j, RngStream::new(seed)).unwrap();
        let g = xi.basis().transpose() * xi.basis();
        prop_assert!((g - DMatrix::<f64>::identity(j, j)).amax() < 1e-12);
        let (k, l) = (&zoo[0], &zoo[2]);
        let sum_then_project = project_body(&lp_combine(p, 1.0, k, 1.0, l).unwrap(), &xi).unwrap();
        let project_then_sum =
            lp_combine(p, 1.0, &project_body(k, &xi).unwrap(), 1.0, &project_body(l, &xi).unwrap()).unwrap();
        let mut r = RngStream::new(seed).fork(3).rng();
        for _ in 0..30 {
            let v = unit(j.max(1), &mut r);
            let v = if j == 1 { vec![if r.random_bool(0.5) { 1.0 } else { -1.0 }] } else { v };
            let (a, b) = (sum_then_project.h(&v), project_then_sum.h(&v));
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn streams_are_reproducible(seed in any::<u64>(), counter in any::<u64>()) {
        let a: Vec<u64> = { let mut r = RngStream::at(seed, counter).rng(); (0..8).map(|_| r.random()).collect() };
        let b: Vec<u64> = { let mut r = RngStream::at(seed, counter).rng(); (0..8).map(|_| r.random()).collect() };
        prop_assert_eq!(a, b);
    }

    #[test]
    fn spec_files_round_trip(r in 0.1f64..5.0, cx in -1.0f64..1.0, p in 1.0f64..9.0) {
        let c = 0.5 * cx * r;
        let text = format!(
            r#"{{"dim": 2, "rep": {{"type": "lp_sum", "p": {p}, "a": 1, "b": 2,
                "first": {{"dim": 2, "rep": {{"type": "ball", "radius": {r}, "center": [{c}, 0]}}}},
                "second": {{"dim": 2, "rep": {{"type": "reuleaux", "width": 1}}}}}}}}"#
        );
        let spec = BodySpec::from_json_str(&text).unwrap();
        let again = BodySpec::from_json_str(&spec.to_json()).unwrap();
        prop_assert_eq!(&spec, &again);
        let (a, b) = (spec.build().unwrap(), again.build().unwrap());
        prop_assert_eq!(a.h(&[0.6, 0.8]), b.h(&[0.6, 0.8]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn planar_functionals_are_homogeneous_and_translation_invariant(seed in any::<u64>(), x in -0.1f64..0.1) {
        let tol = Tolerances::default();
        let ctx = EvalContext::new(seed);
        let k = random_polytope(2, 9, RngStream::new(seed)).unwrap();
        for name in ["volume", "quermass:1", "harmonic_quermass:1", "affine_quermass:1", "mixed_volume:1",
                     "inertia", "width_power:0.5", "width_power:-1", "capacity_q1", "isotropic"] {
            let f = FunctionalDescriptor::parse(name, 2).unwrap();
            let b = if name == "isotropic" { ConvexBody::cube(2, 0.7).unwrap() } else { k.clone() };
            let h = audit_homogeneity(&f, &b, &[0.5, 1.0, 2.0, 3.0], &ctx, &tol).unwrap();
            prop_assert!(h.passed, "{h:?}");
            if name != "isotropic" {
                let t = audit_translation(&f, &b, &[vec![x, 0.05]], &ctx, &tol).unwrap();
                prop_assert!(t.passed, "{t:?}");
            }
        }
    }

    #[test]
    fn power_means_are_ordered_on_shared_samples(seed in any::<u64>(), i in 1usize..3) {
        let k = random_polytope(3, 10, RngStream::new(seed)).unwrap();
        let rng = RngStream::new(seed).fork(1);
        let w = power_mean_joint(std::slice::from_ref(&k), 3 - i, 1.0, 400, rng).unwrap().values[0];
        let h = power_mean_joint(std::slice::from_ref(&k), 3 - i, -1.0, 400, rng).unwrap().values[0];
        let a = power_mean_joint(std::slice::from_ref(&k), 3 - i, -3.0, 400, rng).unwrap().values[0];
        prop_assert!(a <= h * (1.0 + 1e-12) && h <= w * (1.0 + 1e-12), "{a} {h} {w}");
    }

    #[test]
    fn mixed_volume_with_itself_is_volume(seed in any::<u64>(), j in 1usize..3) {
        let k = random_polytope(2, 9, RngStream::new(seed)).unwrap();
        let f = lpbm::functionals::mixed_volume_pair(&k, &k, j).unwrap();
        let v = lpbm::functionals::volume(&k).unwrap().value;
        prop_assert!((f.value - v).abs() < 1e-8 * v);
    }

    #[test]
    fn planar_lp_bm_is_never_violated(seed in any::<u64>(), p in 1.0f64..5.0) {
        let tol = Tolerances::default();
        let ctx = EvalContext::new(seed);
        let (k, l) = random_polytope_pair(2, 9, 0.05, RngStream::new(seed)).unwrap();
        for name in ["volume", "quermass:1", "harmonic_quermass:1", "affine_quermass:1", "mixed_volume:1",
                     "inertia", "width_power:0.5", "capacity_q1"] {
            let f = FunctionalDescriptor::parse(name, 2).unwrap();
            let r = check_lp_bm(&f, p, &k, &l, &ctx, &tol).unwrap();
            prop_assert!(r.verdict != Verdict::Violated, "{r:?}");
            let d = check_lp_bm(&f, p, &k, &k.scaled(1.7).unwrap(), &ctx, &tol).unwrap();
            prop_assert_eq!(d.equality_holds, Some(true), "{:?}", d);
        }
    }

    #[test]
    fn curve_endpoints_match_the_bodies(seed in any::<u64>(), p in 1.0f64..4.0) {
        let (k, l) = random_polytope_pair(2, 9, 0.05, RngStream::new(seed)).unwrap();
        let f = FunctionalDescriptor::parse("quermass:1", 2).unwrap();
        let ctx = EvalContext::new(seed);
        let c = sample_curve(&f, p, &k, &l, &alpha_grid(5).unwrap(), &ctx).unwrap();
        let fk = f.evaluate(&k, &ctx).unwrap().value.powf(p / f.degree);
        let fl = f.evaluate(&l, &ctx).unwrap().value.powf(p / f.degree);
        prop_assert!((c.values[0] - fk).abs() <= 1e-12 * fk);
        prop_assert!((c.values[4] - fl).abs() <= 1e-12 * fl);
    }

    #[test]
    fn verdicts_follow_the_noise_rule(seed in any::<u64>(), p in 1.1f64..4.0) {
        let tol = Tolerances::default();
        let (k, l) = random_polytope_pair(3, 9, 0.05, RngStream::new(seed)).unwrap();
        let f = FunctionalDescriptor::parse("quermass:1", 3).unwrap();
        let ctx = EvalContext::new(seed).with_budget(lpbm::functionals::Budget { mc_samples: 300, ..Default::default() });
        let r = check_lp_bm(&f, p, &k, &l, &ctx, &tol).unwrap();
        let floor = -(tol.mc_sigma * r.slack_stderr) - tol.rel_tol * r.rhs.value.abs().max(r.lhs.value.abs());
        prop_assert!(r.noise >= -floor - 1e-15);
        prop_assert_eq!(r.verdict == Verdict::Violated, r.slack < -r.noise);
        prop_assert!(r.slack_stderr > 0.0);
    }
}

#[test]
fn support_sampled_bodies_reject_nonconvex_data() {
    let g = Arc::new(DirectionSet::circle(64).unwrap());
    let mut v: Vec<f64> = vec![1.0; 64];
    v[5] = 0.5;
    assert!(ConvexBody::support_sampled(g.clone(), v).is_err());
    assert!(ConvexBody::support_sampled(g, vec![1.0; 64]).is_ok());
}
