//! From finite median algebras to cube complex 1-skeletons: edges, parallel
//! classes, standard models and products.
//!
//! Run: `cargo run --example skeletons`

use coarse_median::algebra::separating_walls;
use coarse_median::complex::{one_skeleton, parallel_classes, product, StandardModel};

fn main() {
    for (name, model) in [
        ("hypercube 3", StandardModel::Hypercube(3)),
        ("path 5", StandardModel::Path(5)),
        ("grid 2x3", StandardModel::Grid(2, 3)),
        (
            "tree (spider)",
            StandardModel::Tree(6, vec![(0, 1), (1, 2), (1, 3), (3, 4), (0, 5)]),
        ),
    ] {
        let algebra = model.build().unwrap();
        let skel = one_skeleton(&algebra).unwrap();
        let classes = parallel_classes(&skel);
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        println!(
            "{name}: {} vertices, {} edges, {} walls, parallel class sizes {:?}",
            algebra.n(),
            skel.edges.len(),
            skel.walls.len(),
            sizes
        );

        // graph distance equals the number of separating walls
        let dist = skel.distances().unwrap();
        let n = algebra.n();
        let coherent = (0..n).all(|a| {
            (0..n).all(|b| dist[a * n + b] as usize == separating_walls(&skel.walls, a, b).len())
        });
        println!("  graph distance == wall count distance: {coherent}");
    }

    // products add rank
    let p2 = StandardModel::Path(2).build().unwrap();
    let square = product(&p2, &p2).unwrap();
    println!(
        "path 2 x path 2: {} vertices, rank {}",
        square.n(),
        square.rank().unwrap()
    );

    let star = StandardModel::Tree(4, vec![(0, 1), (0, 2), (0, 3)])
        .build()
        .unwrap();
    let prism = product(&star, &p2).unwrap();
    println!(
        "3-star x path 2: {} vertices, rank {}",
        prism.n(),
        prism.rank().unwrap()
    );
}
