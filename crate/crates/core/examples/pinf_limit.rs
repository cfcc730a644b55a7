//! `F(K +_p L)` decreasing in p toward `F(K +_inf L) >= max(F(K), F(L))`.

use lpbm::functionals::{EvalContext, FunctionalDescriptor};
use lpbm::geometry::compare::Tolerances;
use lpbm::geometry::ConvexBody;
use lpbm::harness::check_pinfty_limit;

pub fn run_example() -> lpbm::Result<()> {
    let f = FunctionalDescriptor::parse("volume", 2)?;
    let square = ConvexBody::cube(2, 0.5)?;
    let disk = ConvexBody::ball(2, 0.6)?;
    let ps = [2.0, 4.0, 8.0, 16.0, 32.0];
    let r = check_pinfty_limit(&f, &square, &disk, &ps, &EvalContext::new(0), &Tolerances::default())?;
    for (p, v) in ps.iter().zip(&r.values) {
        println!("p = {p:>4}: F = {:.6}", v.value);
    }
    println!("p = inf : F = {:.6}  (F(K) = {:.6}, F(L) = {:.6})", r.limit.value, r.f_k.value, r.f_l.value);
    println!("monotone {}  above limit {}  max bound {}", r.monotone, r.above_limit, r.max_bound);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
