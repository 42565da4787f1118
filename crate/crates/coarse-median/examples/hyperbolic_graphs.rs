//! Graph models with the tripod-center median: exact medians on trees,
//! center quality, the four-point constant, and tie-break stability.
//!
//! Run: `cargo run --example hyperbolic_graphs`

use coarse_median::algebra::FiniteMedianAlgebra;
use coarse_median::coarse::{closeness_distance, graph_model_from_edges, Mode, TieBreak};
use coarse_median::sampling::{random_tree_edges, random_unicyclic_edges, task_rng};

fn main() {
    // on a tree the center median IS the tree median, and K = 0
    let mut rng = task_rng(2024, 0);
    let edges = random_tree_edges(16, &mut rng);
    let space = graph_model_from_edges(16, &edges, TieBreak::Lex).unwrap();
    let algebra = FiniteMedianAlgebra::from_tree_edges(16, &edges).unwrap();
    let mut agree = true;
    for x in 0..16 {
        for y in 0..16 {
            for z in 0..16 {
                agree &= space.median(x, y, z) == algebra.med(x, y, z);
            }
        }
    }
    let graph = space.graph().unwrap();
    println!("random 16-vertex tree:");
    println!("  center median == tree median on all triples: {agree}");
    println!(
        "  K (worst center quality) = {}",
        graph.center_quality_max()
    );
    println!("  four-point delta = {}", graph.delta_four_point());
    println!(
        "  measured params: k = {}, h0 = {}",
        space.params.k, space.params.h0
    );

    // cycles are not median graphs; the center quality and delta grow
    for n in [4usize, 6, 8] {
        let cycle: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let space = graph_model_from_edges(n, &cycle, TieBreak::Lex).unwrap();
        let graph = space.graph().unwrap();
        println!(
            "{n}-cycle: K = {}, delta = {}, k = {:.3}",
            graph.center_quality_max(),
            graph.delta_four_point(),
            space.params.k
        );
    }

    // two tie-break policies give close (on trees: equal) medians
    let tree_case = ("tree", random_tree_edges(20, &mut rng));
    let unicyclic_case = ("unicyclic", random_unicyclic_edges(20, &mut rng));
    for (name, edges) in [tree_case, unicyclic_case] {
        let n = 20;
        let lex = graph_model_from_edges(n, &edges, TieBreak::Lex).unwrap();
        let rev = graph_model_from_edges(n, &edges, TieBreak::RevLex).unwrap();
        let est = closeness_distance(&lex, &rev, Mode::Exhaustive).unwrap();
        println!(
            "{name} on {n} vertices: closeness(lex, revlex) = {} over {} triples",
            est.sup_observed, est.sample_count
        );
    }
}
