//! Mixed volumes `V(K, j; B, ..., B)` read off the polynomial
//! `t -> V(K + t B)`.

use lpbm::functionals::mixed_volume_pair;
use lpbm::geometry::ConvexBody;

pub fn run_example() -> lpbm::Result<()> {
    let square = ConvexBody::cube(2, 0.5)?;
    let disk = ConvexBody::ball(2, 1.0)?;
    let fit = mixed_volume_pair(&square, &disk, 1)?;
    println!("V(square, disk) = {:.9} (perimeter / 2 = 2), residual {:.2e}", fit.value, fit.residual);
    println!("coefficients of V(K + tB): {:?}", fit.coefficients);

    let cube = ConvexBody::cube(3, 0.5)?;
    let ball = ConvexBody::ball(3, 1.0)?;
    for j in 1..=3 {
        let f = mixed_volume_pair(&cube, &ball, j)?;
        println!("V(C, {j}; B) = {:.5}{}", f.value, if f.approximate { " (grid volumes)" } else { "" });
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
