//! Haar-random subspaces, projections, and the share of subspaces on which
//! a strictly smaller body has a strictly smaller shadow.

use lpbm::functionals::volume;
use lpbm::geometry::ConvexBody;
use lpbm::grassmann::{project_body, sample_subspace, strict_projection_fraction};
use lpbm::rng::RngStream;

pub fn run_example() -> lpbm::Result<()> {
    let rng = RngStream::new(11);
    let cube = ConvexBody::cube(3, 1.0)?;
    let mut total = 0.0;
    let m = 2000;
    for i in 0..m {
        let xi = sample_subspace(3, 2, rng.offset(1, i))?;
        total += volume(&project_body(&cube, &xi)?)?.value;
    }
    // Cauchy: mean shadow area = S / 4 = 6
    println!("mean shadow area of [-1,1]^3 over {m} planes: {:.4} (exact 6)", total / m as f64);

    let inner = ConvexBody::cuboid(&[0.0; 3], &[1.0, 1.0, 0.8])?;
    let f = strict_projection_fraction(&inner, &cube, 1, 500, rng.fork(1))?;
    println!(
        "lines seeing a strictly shorter shadow: {}/{} (99% lower bound {:.3})",
        f.strict, f.samples, f.lower_99
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
