//! Dilates give equality, other separated pairs strict inequality, and a
//! translate is strict for p > 1 while an equality for p = 1.

use lpbm::functionals::{EvalContext, FunctionalDescriptor};
use lpbm::geometry::compare::Tolerances;
use lpbm::geometry::ConvexBody;
use lpbm::harness::{check_corollary_isotropic, check_equality_characterization};

pub fn run_example() -> lpbm::Result<()> {
    let tol = Tolerances::default();
    let ctx = EvalContext::new(4);
    let cube = ConvexBody::cube(3, 1.0)?;
    let ball = ConvexBody::ball(3, 1.0)?;
    let f = FunctionalDescriptor::parse("inertia", 3)?;
    let pairs = vec![(cube.clone(), cube.scaled(2.0)?), (cube.clone(), ball.clone())];
    let rep = check_equality_characterization(&f, &pairs, 2.0, &ctx, &tol)?;
    for o in &rep.pairs {
        println!(
            "dilate {:5}  separation {:.3}  relative slack {:+.3e}  ok {}",
            o.dilate,
            o.separation,
            o.record.relative_slack(),
            o.ok
        );
    }
    if let Some(h) = &rep.homothety {
        println!("translate: p = 2 strict {}, p = 1 equality {:?}", h.lp_strict, h.minkowski.equality_holds);
    }
    let iso = check_corollary_isotropic(&cube, &ball, 2.0, &ctx, &tol)?;
    println!("isotropic corollary, cube and ball: slack {:.5} ({:?})", iso.slack, iso.verdict);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
