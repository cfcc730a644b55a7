//! Mixed projection bodies sampled from shadow areas and perimeters.

use std::sync::Arc;

use lpbm::geometry::{ConvexBody, DirectionSet};
use lpbm::projection_bodies::{composite_projection_functional, mixed_projection_body, ProjectionBodySpec};

pub fn run_example() -> lpbm::Result<()> {
    let grid = Arc::new(DirectionSet::icosphere(3)?);
    let cube = ConvexBody::cube(3, 1.0)?;
    let pi0 = mixed_projection_body(&cube, &ProjectionBodySpec::new(0, grid.clone())?)?;
    println!("Pi_0(cube): h(e1) = {:.6}, h at a diagonal = {:.6}", pi0.h(&[1.0, 0.0, 0.0]), {
        let s = 1.0 / 3f64.sqrt();
        pi0.h(&[s, s, s])
    });
    let ball = ConvexBody::ball(3, 1.0)?;
    let pb = mixed_projection_body(&ball, &ProjectionBodySpec::new(0, grid.clone())?)?;
    println!("Pi_0(B): h(e3) = {:.6} (pi)", pb.h(&[0.0, 0.0, 1.0]));
    for j in 1..=3 {
        for k in 1..=2 {
            let m = composite_projection_functional(&cube, j, k, grid.clone())?;
            println!("W_{{3-{j}}}(Pi_{{2-{k}}} cube) = {:.5}", m.value);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
