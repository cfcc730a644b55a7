//! Convex hulls, halfspace intersections from sampled support values and
//! exact polytope measures.

use std::sync::Arc;

use lpbm::geometry::{convex_hull, polytope_from_support, ConvexBody, DirectionSet};

pub fn run_example() -> lpbm::Result<()> {
    let pts: Vec<Vec<f64>> = vec![
        vec![1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
        vec![0.1, 0.1, 0.1],
    ];
    let octa = convex_hull(&pts)?;
    let p = octa.as_polytope().expect("hull is a polytope");
    println!("octahedron: {} vertices, {} facets, volume {:.6}", p.vertex_count(), p.facets().len(), p.volume()?);

    // circumscribed polytope of the unit ball on refining grids
    let ball = ConvexBody::ball(3, 1.0)?;
    for level in 1..=4 {
        let grid = DirectionSet::icosphere(level)?;
        let w = polytope_from_support(&ball, &grid)?;
        println!("icosphere({level}) {:>5} directions: volume {:.6}", grid.len(), w.volume()?);
    }
    println!("exact                      : {:.6}", 4.0 * std::f64::consts::PI / 3.0);

    let grid = Arc::new(DirectionSet::icosphere(2)?);
    let values: Vec<f64> = grid.iter().map(|u| u.iter().map(|x| x.abs()).sum()).collect();
    let sampled = ConvexBody::support_sampled(grid, values)?;
    println!("support-sampled cube: h(e3) = {:.6}", sampled.h(&[0.0, 0.0, 1.0]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
