//! Deterministic, counter-based sampling.
//!
//! One `--seed` governs every sampled computation in the crate. Samplers are
//! derived per task from `(seed, stream)` so that evaluation order (including
//! any future parallel evaluation) cannot perturb results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// RNG for a given task stream. Identical `(seed, stream)` pairs always give
/// identical sequences, independently of everything else in the process.
pub fn task_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform random recursive tree on `n` vertices: vertex `i` attaches to a
/// uniform earlier vertex. Edges are returned as `(parent, child)`.
pub fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    (1..n).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// Random non-empty subset of `0..n` of the given size (without replacement).
pub fn random_subset(n: usize, size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    assert!(size >= 1 && size <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(size);
    for _ in 0..size {
        let k = rng.gen_range(0..pool.len());
        out.push(pool.swap_remove(k));
    }
    out.sort_unstable();
    out
}

/// Random connected unicyclic graph: a random tree plus one extra edge
/// between two non-adjacent vertices.
pub fn random_unicyclic_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    assert!(n >= 3);
    let mut edges = random_tree_edges(n, rng);
    loop {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        if !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (lo, hi)) {
            edges.push((lo, hi));
            return edges;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: Vec<u32> = task_rng(7, 0)
            .sample_iter(rand::distributions::Standard)
            .take(4)
            .collect();
        let b: Vec<u32> = task_rng(7, 1)
            .sample_iter(rand::distributions::Standard)
            .take(4)
            .collect();
        let a2: Vec<u32> = task_rng(7, 0)
            .sample_iter(rand::distributions::Standard)
            .take(4)
            .collect();
        assert_eq!(a, a2);
        assert_ne!(a, b);
    }

    #[test]
    fn random_tree_is_a_tree() {
        let mut rng = task_rng(1, 0);
        for n in 2..20 {
            let edges = random_tree_edges(n, &mut rng);
            assert_eq!(edges.len(), n - 1);
            for &(p, c) in &edges {
                assert!(p < c && c < n);
            }
        }
    }
}
