//! A disk and a Reuleaux triangle of the same width: equality for the width
//! functional at p = 1, strict inequality at p = 2, and not homothetic.

use lpbm::functionals::{EvalContext, FunctionalDescriptor};
use lpbm::geometry::compare::{is_homothetic_pair, Tolerances};
use lpbm::geometry::ConvexBody;
use lpbm::harness::{calibrate_floor, check_lp_bm_weighted};

pub fn run_example() -> lpbm::Result<()> {
    let tol = Tolerances::default();
    let ctx = EvalContext::new(0);
    let disk = ConvexBody::ball(2, 0.5)?;
    let tri = ConvexBody::reuleaux(1.0, &[0.0, 0.0])?;
    let f = FunctionalDescriptor::parse("width_power:0.5", 2)?;
    let one = check_lp_bm_weighted(&f, 1.0, 0.5, &disk, &tri, &ctx, &tol)?;
    let two = check_lp_bm_weighted(&f, 2.0, 0.5, &disk, &tri, &ctx, &tol)?;
    let floor = calibrate_floor(&f, 2.0, &disk, &ctx, &tol)?;
    println!("p = 1: relative slack {:.3e}", one.relative_slack());
    println!("p = 2: relative slack {:.3e}, strict {}", two.relative_slack(), floor.is_strict(&two, &tol));
    println!("homothetic: {}", is_homothetic_pair(&disk, &tri, &tol)?.is_yes());
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
