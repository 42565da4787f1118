//! Median algebras from the ground up: axiom checking, closures, intervals,
//! walls, crossing and rank.
//!
//! Run: `cargo run --example axioms_and_walls`

use coarse_median::algebra::{crossing, separating_walls, FiniteMedianAlgebra};

fn main() {
    // the 3-cube with coordinatewise majority is a median algebra
    let cube = FiniteMedianAlgebra::majority_bits(3).unwrap();
    let report = cube.verify_axioms();
    println!(
        "majority-{{0,1}}^3: ok = {}, tuples checked = {}",
        report.ok, report.checked_tuples
    );

    // a deliberately broken operation: med(x,y,z) := x
    let n = 4;
    let mut table = vec![0u32; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                table[(x * n + y) * n + z] = x as u32;
            }
        }
    }
    let ids = (0..n).map(|i| i.to_string()).collect();
    let broken = FiniteMedianAlgebra::from_table(ids, table).unwrap();
    let bad = broken.verify_axioms();
    println!(
        "constant-first-argument table: ok = {}, first violation = {:?} at {:?}",
        bad.ok, bad.violations[0].identity, bad.violations[0].witness
    );

    // closures grow to the smallest median-closed superset
    let gens = [0b000, 0b011, 0b110];
    let closure = cube.median_closure(&gens).unwrap();
    println!(
        "closure of {{000, 110, 011}} in the 3-cube: {:?}  (|<A>| = {} <= 2^2^3 = 256)",
        closure.iter().map(|&i| cube.id(i)).collect::<Vec<_>>(),
        closure.len()
    );

    // intervals and walls
    println!(
        "interval(000, 111) = all {} vertices",
        cube.interval(0, 7).len()
    );
    let walls = cube.enumerate_walls().unwrap();
    println!("the 3-cube has {} walls (one per coordinate)", walls.len());
    let sep = separating_walls(&walls, 0b000, 0b011);
    println!("walls separating 000 from 110: {}", sep.len());
    println!(
        "coordinate walls cross pairwise: {}",
        crossing(&walls[0], &walls[1]).unwrap() && crossing(&walls[1], &walls[2]).unwrap()
    );
    println!("rank of the 3-cube = {}", cube.rank().unwrap());

    // trees have rank 1: no two walls cross
    let star = FiniteMedianAlgebra::from_tree_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    println!("rank of the 4-star tree = {}", star.rank().unwrap());
}
