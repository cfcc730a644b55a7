//! Capacities: surface area for q = 1 and walk-on-spheres Newtonian
//! capacity for q = 2 in R^3.

use lpbm::functionals::{capacity_newtonian_wos, capacity_q1};
use lpbm::geometry::ConvexBody;
use lpbm::rng::RngStream;

pub fn run_example() -> lpbm::Result<()> {
    let ball = ConvexBody::ball(3, 1.0)?;
    let cube = ConvexBody::cube(3, 0.5)?;
    println!("Cap_1(unit cube) = {}", capacity_q1(&cube)?.value);
    let rng = RngStream::new(3);
    let e = capacity_newtonian_wos(&ball, 200_000, None, rng)?;
    println!(
        "Cap_2(B) = {:.4} +- {:.4} (4 pi = {:.4})",
        e.value,
        e.stderr,
        4.0 * std::f64::consts::PI
    );
    let c = capacity_newtonian_wos(&cube, 100_000, None, rng)?;
    println!("Cap_2(unit cube) = {:.4} +- {:.4}", c.value, c.stderr);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
