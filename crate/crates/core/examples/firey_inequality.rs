//! `W_{n-j}(K +_p L)^{p/j} >= W_{n-j}(K)^{p/j} + W_{n-j}(L)^{p/j}` on random
//! polytope pairs, with the strictness floor calibrated from a dilate pair.

use lpbm::functionals::{EvalContext, FunctionalDescriptor};
use lpbm::geometry::compare::Tolerances;
use lpbm::geometry::random::random_polytope_pair;
use lpbm::harness::{calibrate_floor, check_lp_bm};
use lpbm::rng::RngStream;

pub fn run_example() -> lpbm::Result<()> {
    let tol = Tolerances::default();
    let ctx = EvalContext::new(17);
    for n in [2, 3] {
        let (k, l) = random_polytope_pair(n, 12, 0.05, RngStream::new(n as u64))?;
        for j in 1..=n {
            let name = if j == n { "volume".to_string() } else { format!("quermass:{}", n - j) };
            let f = FunctionalDescriptor::parse(&name, n)?;
            let floor = calibrate_floor(&f, 2.0, &k, &ctx, &tol)?;
            let r = check_lp_bm(&f, 2.0, &k, &l, &ctx, &tol)?;
            println!(
                "n = {n} {name:>11}: slack {:+.5e} +- {:.1e}  {:?}  strict {}",
                r.slack,
                r.slack_stderr,
                r.verdict,
                floor.is_strict(&r, &tol)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
