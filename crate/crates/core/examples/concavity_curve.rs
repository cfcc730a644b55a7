//! The curve `alpha -> F((1-alpha) ._p K +_p alpha ._p L)^p` for a square and
//! a disk, its concavity, and direct midpoint tests on the same bodies.

use lpbm::functionals::{EvalContext, FunctionalDescriptor};
use lpbm::geometry::compare::Tolerances;
use lpbm::geometry::ConvexBody;
use lpbm::harness::{alpha_grid, check_concavity, cross_check_midpoints, sample_curve};

pub fn run_example() -> lpbm::Result<()> {
    let f = FunctionalDescriptor::parse("volume", 2)?;
    let ctx = EvalContext::new(1);
    let tol = Tolerances::default();
    let square = ConvexBody::cube(2, 0.5)?;
    let disk = ConvexBody::ball(2, 0.5)?;
    let curve = sample_curve(&f, 2.0, &square, &disk, &alpha_grid(11)?, &ctx)?;
    for (a, v) in curve.alphas.iter().zip(&curve.values) {
        let chord = (1.0 - a) * curve.values[0] + a * curve.values[10];
        println!("alpha {a:.1}: F^p = {v:.6}  above chord by {:.3e}", v - chord);
    }
    let verdict = check_concavity(&curve, &tol)?;
    println!("concave: {} (min margin {:.3e})", verdict.concave, verdict.min_margin);
    let cross = cross_check_midpoints(&f, 2.0, &square, &disk, &curve, 10, &ctx, &tol)?;
    println!("midpoint tests agree with the curve: {}", cross.agree);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
