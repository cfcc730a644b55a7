//! Minimal inertia over SL(n) and the isotropic constant.

use lpbm::functionals::{isotropic_constant, IsotropicOptions};
use lpbm::geometry::ConvexBody;
use nalgebra::DMatrix;

pub fn run_example() -> lpbm::Result<()> {
    let opts = IsotropicOptions::default();
    let cube = ConvexBody::cube(3, 1.0)?;
    let stretched = cube.affine_image(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 1.0 / 3.0])), &[0.0; 3])?;
    let ball = ConvexBody::ball(3, 1.0)?;
    for (name, b) in [("cube", &cube), ("stretched cube", &stretched), ("ball", &ball)] {
        let r = isotropic_constant(b, &opts)?;
        println!(
            "{name:>15}: L = {:.6}  min I = {:.6}  converged {} in {} steps",
            r.l_k, r.min_inertia, r.converged, r.iterations
        );
    }
    println!("1/sqrt(12) = {:.6}", 1.0 / 12f64.sqrt());
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
