//! Quermassintegrals and their harmonic and affine versions, estimated on
//! shared Grassmannian samples.

use lpbm::functionals::{power_mean_joint, quermassintegral_exact};
use lpbm::geometry::ConvexBody;
use lpbm::rng::RngStream;

pub fn run_example() -> lpbm::Result<()> {
    let cube = ConvexBody::cube(3, 0.5)?;
    let rng = RngStream::new(5);
    for i in 1..3 {
        let k = 3 - i;
        let w = power_mean_joint(std::slice::from_ref(&cube), k, 1.0, 20_000, rng)?;
        let h = power_mean_joint(std::slice::from_ref(&cube), k, -1.0, 20_000, rng)?;
        let a = power_mean_joint(std::slice::from_ref(&cube), k, -3.0, 20_000, rng)?;
        let exact = quermassintegral_exact(&cube, i)?;
        println!(
            "i = {i}: W = {:.5} +- {:.5} (exact {:.5})  W^ = {:.5}  Phi = {:.5}",
            w.values[0],
            w.stderr(0),
            exact.value,
            h.values[0],
            a.values[0]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
