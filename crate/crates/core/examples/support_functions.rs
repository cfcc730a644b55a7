//! Bodies through their support functions: closed forms, affine images and
//! lazy L_p combinations.

use lpbm::geometry::{lp_combine, lp_mix, BodySpec, ConvexBody, Direction};

pub fn run_example() -> lpbm::Result<()> {
    let u = Direction::from_slice(&[1.0, 1.0])?;
    let square = ConvexBody::cube(2, 0.5)?;
    let disk = ConvexBody::ball(2, 0.5)?;
    let tri = ConvexBody::reuleaux(1.0, &[0.0, 0.0])?;
    for (name, b) in [("square", &square), ("disk", &disk), ("reuleaux", &tri)] {
        println!("{name:>9}: h(u) = {:.6}  w(u) = {:.6}", b.support(&u)?, b.width(&u)?);
    }

    // h^2 = h_K^2 + h_L^2
    let sum = lp_combine(2.0, 1.0, &square, 1.0, &disk)?;
    let (a, b) = (square.support(&u)?, disk.support(&u)?);
    println!("K +_2 L : h(u) = {:.6}  (sqrt(h_K^2 + h_L^2) = {:.6})", sum.support(&u)?, (a * a + b * b).sqrt());

    // dilates collapse: B +_3 2B = (1 + 8)^(1/3) B
    let b3 = ConvexBody::ball(3, 1.0)?;
    let c = lp_combine(3.0, 1.0, &b3, 1.0, &b3.scaled(2.0)?)?;
    println!("B +_3 2B is a {} of radius {:.6}", c.kind(), c.h(&[0.0, 0.0, 1.0]));

    let mid = lp_mix(4.0, 0.25, &square, &tri)?;
    println!("(3/4) ._4 K +_4 (1/4) ._4 L at u: {:.6}", mid.support(&u)?);

    let spec = BodySpec::from_json_str(
        r#"{"dim": 2, "rep": {"type": "affine_image", "matrix": [[2, 0], [0, 1]],
            "translation": [0.1, 0], "body": {"dim": 2, "rep": {"type": "ball", "radius": 1}}}}"#,
    )?;
    let e = spec.build()?;
    println!("affine image of the disk: kind {}, h(e1) = {:.3}", e.kind(), e.h(&[1.0, 0.0]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
