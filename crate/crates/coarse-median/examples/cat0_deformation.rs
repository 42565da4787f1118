//! Maximal diagonal cubes, their Euclidean weights, and the deformed metric
//! with its sandwich bounds.
//!
//! Run: `cargo run --example cat0_deformation`

use coarse_median::algebra::FiniteMedianAlgebra;
use coarse_median::complex::StandardModel;
use coarse_median::deform::{
    cat0_metric_with_rows, cube_weight, enumerate_diagonal_cubes, interval_blocks,
    maximal_diagonal_cube,
};
use coarse_median::metrics::unit_wall_instance;

fn main() {
    // unit square: the diagonal's separating walls cross, so the maximal
    // cube is the full square and its weight is sqrt(2)
    let square = unit_wall_instance(&FiniteMedianAlgebra::majority_bits(2).unwrap()).unwrap();
    let blocks = interval_blocks(&square, 0, 3).unwrap();
    let cube = maximal_diagonal_cube(&square, 0, 3).unwrap();
    println!(
        "square diagonal: {} blocks, cube dimension {}, omega = {:.9}",
        blocks.len(),
        cube.dimension(),
        cube_weight(&cube)
    );

    // a path: nested walls merge into one block, the cube is the pair itself
    let path = unit_wall_instance(&StandardModel::Path(4).build().unwrap()).unwrap();
    let cube = maximal_diagonal_cube(&path, 0, 3).unwrap();
    println!(
        "path ends: cube dimension {}, omega = {:.9} (= d, walls are nested)",
        cube.dimension(),
        cube_weight(&cube)
    );

    // the brute-force oracle confirms uniqueness of the maximal cube
    let grid = unit_wall_instance(&StandardModel::Grid(2, 3).build().unwrap()).unwrap();
    let mut checked = 0;
    for x in 0..6 {
        for y in x + 1..6 {
            let all = enumerate_diagonal_cubes(&grid, x, y).unwrap();
            let computed = maximal_diagonal_cube(&grid, x, y).unwrap();
            let mut top = computed.vertices.clone();
            top.sort_unstable();
            assert!(all.iter().all(|c| c.iter().all(|v| top.contains(v))));
            checked += 1;
        }
    }
    println!("grid 2x3: oracle agreed with the construction on {checked} pairs");

    // sigma_d tables: the n-cube diagonal contracts to sqrt(n), trees are
    // left untouched
    for dim in 1..=4u32 {
        let inst = unit_wall_instance(&FiniteMedianAlgebra::majority_bits(dim).unwrap()).unwrap();
        let (sigma, _) = cat0_metric_with_rows(&inst).unwrap();
        println!(
            "unit {dim}-cube: d(diagonal) = {} deforms to sigma = {:.9} (lower bound {:.9})",
            dim,
            sigma.get(0, (1 << dim) - 1),
            dim as f64 / (dim as f64).sqrt()
        );
    }

    let tree = unit_wall_instance(
        &StandardModel::Tree(7, vec![(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (0, 6)])
            .build()
            .unwrap(),
    )
    .unwrap();
    let (sigma, rows) = cat0_metric_with_rows(&tree).unwrap();
    println!(
        "tree: sigma == d everywhere: {}",
        sigma.matrix() == tree.metric.matrix()
    );
    let worst = rows
        .iter()
        .map(|r| (r.sigma / r.d * 1e9).round() / 1e9)
        .fold(f64::INFINITY, f64::min);
    println!("tree: min sigma/d ratio over pairs = {worst}");
}
