//! The approximation pipeline: finite subsets of a model are approximated
//! by finite median metric spaces, with measured distortion constants.
//!
//! Run: `cargo run --example approximate_subset`

use coarse_median::approx::{approximate, exactify, resolve, Resolver};
use coarse_median::coarse::{graph_model_from_edges, l1_lattice_model, TieBreak};

fn main() {
    // lattice subsets embed isometrically: the closure is a subalgebra and
    // the wall metric reproduces the l1 distance
    let model = l1_lattice_model(&[(0, 7), (0, 7), (0, 7)]).unwrap();
    let pts = [[0i64, 0, 0], [3, 1, 4], [7, 2, 2], [5, 5, 0], [1, 6, 3]];
    let a: Vec<usize> = pts
        .iter()
        .map(|c| model.lattice_index(c).unwrap())
        .collect();
    let report = approximate(&model, &a, Resolver::Lattice, false).unwrap();
    println!("l1 box, |A| = {}:", a.len());
    println!(
        "  |M| = {} (closure), rank = {}",
        report.resolution.algebra.n(),
        report.rank
    );
    println!(
        "  (alpha, epsilon) = ({}, {})",
        report.alpha, report.epsilon
    );
    println!("  (beta, gamma) = ({}, {})", report.beta, report.gamma);
    println!("  covered = {}", report.covered);

    // exactification multiplies by a path tree on A and pins A pointwise
    let res = resolve(&model, &a, Resolver::Lattice).unwrap();
    let exact = exactify(&model, &res, &a).unwrap();
    println!(
        "  exactified: |M'| = {} = |M| * |A|, bound = {}",
        exact.algebra.n(),
        exact.bound
    );

    // tree graphs reproduce their subsets exactly through the tree resolver
    let edges = [
        (0usize, 1usize),
        (1, 2),
        (2, 3),
        (1, 4),
        (4, 5),
        (5, 6),
        (0, 7),
    ];
    let tree = graph_model_from_edges(8, &edges, TieBreak::Lex).unwrap();
    let a = vec![3, 6, 7, 0];
    let report = approximate(&tree, &a, Resolver::Tree { basepoint: 0 }, false).unwrap();
    println!("tree graph, A = {{3, 6, 7, 0}}:");
    println!(
        "  |M| = {} (with Steiner points), (alpha, epsilon) = ({}, {})",
        report.resolution.algebra.n(),
        report.alpha,
        report.epsilon
    );
    println!("  quasi-morphism bound = {}", report.resolution.bound);

    // on a cycle the tree approximation is genuinely coarse: the report
    // stays finite and exactification forces coverage
    let cycle: Vec<(usize, usize)> = (0..12).map(|i| (i, (i + 1) % 12)).collect();
    let model = graph_model_from_edges(12, &cycle, TieBreak::Lex).unwrap();
    let a = vec![0, 3, 6, 9];
    let report = approximate(&model, &a, Resolver::Tree { basepoint: 0 }, true).unwrap();
    println!("12-cycle, A = {{0, 3, 6, 9}}, exactified:");
    println!(
        "  |M'| = {}, rank = {}",
        report.resolution.algebra.n(),
        report.rank
    );
    println!(
        "  (alpha, epsilon) = ({:.6}, {:.6}), (beta, gamma) = ({:.6}, {:.6})",
        report.alpha, report.epsilon, report.beta, report.gamma
    );
    println!(
        "  bound = {}, covered = {}",
        report.resolution.bound, report.covered
    );
    let spreads: Vec<String> = report
        .spread
        .iter()
        .map(|(lo, hi)| format!("[{lo:.3},{hi:.3}]"))
        .collect();
    println!("  per-wall image length spread: {}", spreads.join(" "));
}
