//! Volume, surface area, mean width and inertia, exact where the
//! representation allows and on circumscribed grid polytopes otherwise.

use lpbm::functionals::{mean_width, moment_of_inertia, surface_area, volume};
use lpbm::geometry::{lp_combine, ConvexBody};

pub fn run_example() -> lpbm::Result<()> {
    let cube = ConvexBody::cube(3, 0.5)?;
    let ball = ConvexBody::ball(3, 1.0)?;
    let sum = lp_combine(1.0, 1.0, &cube, 1.0, &ball)?;
    let l2 = lp_combine(2.0, 1.0, &cube, 1.0, &ball)?;
    for (name, b) in [("unit cube", &cube), ("unit ball", &ball), ("cube + ball", &sum), ("cube +_2 ball", &l2)] {
        let v = volume(b)?;
        let s = surface_area(b)?;
        let w = mean_width(b)?;
        let i = moment_of_inertia(b)?;
        println!(
            "{name:>14}: V = {:10.6}{}  S = {:10.6}  b = {:8.6}  I = {:8.6}",
            v.value,
            if v.approximate { "~" } else { " " },
            s.value,
            w.value,
            i.value
        );
    }
    // Steiner: V(C + B) = 1 + 6 + 3 pi + 4 pi / 3
    let pi = std::f64::consts::PI;
    println!("Steiner polynomial at t = 1: {:.6}", 1.0 + 6.0 + 3.0 * pi + 4.0 * pi / 3.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
