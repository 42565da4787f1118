//! Deformation of a finite median metric space towards a CAT(0) metric.
//!
//! For points `x, y` the separating walls split into blocks (connected
//! components of the non-crossing relation); the unique maximal cube
//! `Q(x,y)` with diagonal `{x,y}` has one dimension per block, and carries
//! the Euclidean weight `ω(Q) = sqrt(Σ_B len(B)^2)`. The deformed metric is
//!
//! ```text
//! σ_d(x,y) = inf over finite sequences x = x_0, …, x_N = y
//!            of Σ ω(Q(x_{i-1}, x_i))
//! ```
//!
//! which on a finite carrier is exactly the all-pairs shortest path over the
//! complete graph weighted by `ω(Q(·,·))`. It satisfies the sandwich
//! `d/sqrt(rank) <= σ_d <= d`.
//!
//! The characterization of `Q(x,y)` through non-crossing components is an
//! implementation hypothesis guarded by [`enumerate_diagonal_cubes`], a
//! brute-force oracle usable whenever the interval is small; a discrepancy
//! is a hard failure, not silent acceptance.

use std::collections::HashSet;

use crate::algebra::{crossing, rank_of_walls, separating_walls, BitSet};
use crate::error::{Error, Result};
use crate::metrics::{verify_median_metric, FiniteMetric, MetricMedianAlgebraInstance};
use crate::{nearly_eq, nearly_le};

/// Oracle cap: brute-force cube enumeration is offered for intervals of at
/// most this many points.
pub const ORACLE_INTERVAL_CAP: usize = 16;

/// The maximal cube with diagonal `{x, y}` in a median metric instance.
#[derive(Clone, Debug)]
pub struct DiagonalCube {
    pub endpoints: (usize, usize),
    /// Partition of the separating wall indices into non-crossing blocks,
    /// each sorted, ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
    /// Corner for every block choice: `vertices[mask]` is the unique point
    /// of `I(x,y)` separated from `x` by exactly the walls of the blocks
    /// selected in `mask`. `vertices[0] = x`, `vertices[full] = y`.
    pub vertices: Vec<usize>,
    /// Per-block total wall length in the ambient metric.
    pub block_lengths: Vec<f64>,
}

impl DiagonalCube {
    pub fn dimension(&self) -> usize {
        self.blocks.len()
    }
}

/// Euclidean weight `ω(Q)`. A single block is returned as its plain length
/// so that rank-1 instances stay exact.
pub fn cube_weight(cube: &DiagonalCube) -> f64 {
    block_weight(&cube.block_lengths)
}

fn block_weight(lengths: &[f64]) -> f64 {
    match lengths.len() {
        0 => 0.0,
        1 => lengths[0],
        _ => lengths.iter().map(|l| l * l).sum::<f64>().sqrt(),
    }
}

/// Per-wall edge length of a median metric instance. In a median metric
/// space parallel edges have equal length; the check is enforced here.
pub fn median_wall_lengths(inst: &MetricMedianAlgebraInstance) -> Result<Vec<f64>> {
    let thickness = inst.wall_thickness();
    for (w, &(lo, hi)) in thickness.iter().enumerate() {
        if !nearly_eq(lo, hi) {
            return Err(Error::InternalConsistency {
                context: "median_wall_lengths",
                witness: format!("wall {w} has parallel edges of lengths {lo} and {hi}"),
            });
        }
    }
    Ok(thickness.into_iter().map(|(_, hi)| hi).collect())
}

/// Partition of the walls separating `x` and `y` into connected components
/// of the non-crossing relation.
pub fn interval_blocks(
    inst: &MetricMedianAlgebraInstance,
    x: usize,
    y: usize,
) -> Result<Vec<Vec<usize>>> {
    if x == y {
        return Err(Error::DegenerateDiagonal);
    }
    let walls = &inst.skeleton().walls;
    let sep = separating_walls(walls, x, y);
    let mut parent: Vec<usize> = (0..sep.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..sep.len() {
        for j in i + 1..sep.len() {
            if !crossing(&walls[sep[i]], &walls[sep[j]])? {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..sep.len() {
        let root = find(&mut parent, i);
        groups.entry(sep[root]).or_default().push(sep[i]);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_by_key(|b| b[0]);
    Ok(blocks)
}

/// The unique maximal cube with diagonal `{x, y}`: one dimension per block,
/// corners resolved inside `interval(x,y)` by their separating wall sets.
pub fn maximal_diagonal_cube(
    inst: &MetricMedianAlgebraInstance,
    x: usize,
    y: usize,
) -> Result<DiagonalCube> {
    let blocks = interval_blocks(inst, x, y)?;
    let lengths = median_wall_lengths(inst)?;
    let walls = &inst.skeleton().walls;
    let interval = inst.algebra.interval(x, y);
    let wall_count = walls.len();

    let sep_mask = |a: usize, b: usize| {
        let mut bs = BitSet::new(wall_count);
        for w in separating_walls(walls, a, b) {
            bs.set(w);
        }
        bs
    };

    let k = blocks.len();
    let mut vertices = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let mut target = BitSet::new(wall_count);
        for (b, block) in blocks.iter().enumerate() {
            if mask >> b & 1 == 1 {
                for &w in block {
                    target.set(w);
                }
            }
        }
        let mut found = None;
        for &z in &interval {
            if sep_mask(x, z) == target {
                if found.is_some() {
                    return Err(Error::InternalConsistency {
                        context: "maximal_diagonal_cube",
                        witness: format!("two corners realize block choice {mask:b}"),
                    });
                }
                found = Some(z);
            }
        }
        match found {
            Some(z) => vertices.push(z),
            None => {
                return Err(Error::InternalConsistency {
                    context: "maximal_diagonal_cube",
                    witness: format!(
                        "no point of interval({x},{y}) realizes block choice {mask:b}"
                    ),
                })
            }
        }
    }
    let block_lengths = blocks
        .iter()
        .map(|b| b.iter().map(|&w| lengths[w]).sum())
        .collect();
    Ok(DiagonalCube {
        endpoints: (x, y),
        blocks,
        vertices,
        block_lengths,
    })
}

/// Brute-force enumeration of every cube with diagonal `{x,y}` inside the
/// interval, as sorted vertex sets. Intended as the independent oracle for
/// the non-crossing-component characterization; refuses intervals larger
/// than [`ORACLE_INTERVAL_CAP`].
pub fn enumerate_diagonal_cubes(
    inst: &MetricMedianAlgebraInstance,
    x: usize,
    y: usize,
) -> Result<Vec<Vec<usize>>> {
    if x == y {
        return Err(Error::DegenerateDiagonal);
    }
    let interval = inst.algebra.interval(x, y);
    if interval.len() > ORACLE_INTERVAL_CAP {
        return Err(Error::ExhaustiveCapExceeded {
            got: interval.len(),
            cap: ORACLE_INTERVAL_CAP,
        });
    }
    let walls = &inst.skeleton().walls;
    let sep = separating_walls(walls, x, y);
    let rest: Vec<usize> = interval
        .iter()
        .copied()
        .filter(|&z| z != x && z != y)
        .collect();
    let mut cubes = Vec::new();
    for mask in 0..(1usize << rest.len()) {
        let size = 2 + (mask as u64).count_ones() as usize;
        if !size.is_power_of_two() {
            continue;
        }
        let mut candidate = vec![x, y];
        for (i, &z) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                candidate.push(z);
            }
        }
        candidate.sort_unstable();
        if is_cube_with_diagonal(inst, &candidate, &sep, size.trailing_zeros() as usize) {
            cubes.push(candidate);
        }
    }
    Ok(cubes)
}

/// Check that `set` (inside `interval(x,y)`, containing `x` and `y`) is
/// median-closed and isomorphic to `{-1,1}^dim`: `2^dim` points cut by
/// exactly `dim` distinct induced wall partitions.
fn is_cube_with_diagonal(
    inst: &MetricMedianAlgebraInstance,
    set: &[usize],
    sep: &[usize],
    dim: usize,
) -> bool {
    let alg = &inst.algebra;
    for &a in set {
        for &b in set {
            for &c in set {
                if !set.contains(&alg.med(a, b, c)) {
                    return false;
                }
            }
        }
    }
    // distinct non-trivial partitions induced by the separating walls
    let walls = &inst.skeleton().walls;
    let mut partitions: HashSet<u32> = HashSet::new();
    for &w in sep {
        let mut bits = 0u32;
        for (i, &s) in set.iter().enumerate() {
            if walls[w].in_half(s) {
                bits |= 1 << i;
            }
        }
        let full = (1u32 << set.len()) - 1;
        if bits != 0 && bits != full {
            partitions.insert(bits.min(!bits & full));
        }
    }
    partitions.len() == dim
}

/// Rows of the deformed-metric table: `(x, y, d, σ_d, lower, upper)`.
#[derive(Clone, Debug)]
pub struct SigmaRow {
    pub x: usize,
    pub y: usize,
    pub d: f64,
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Bowditch's deformed metric `σ_d` on a verified median metric instance.
///
/// Verifies that the metric is median with intrinsic median equal to the
/// algebra's operation, computes `ω(Q(x,y))` for every pair, closes under
/// shortest paths, and asserts the sandwich bounds.
pub fn cat0_metric(inst: &MetricMedianAlgebraInstance) -> Result<FiniteMetric> {
    Ok(cat0_metric_with_rows(inst)?.0)
}

pub fn cat0_metric_with_rows(
    inst: &MetricMedianAlgebraInstance,
) -> Result<(FiniteMetric, Vec<SigmaRow>)> {
    let n = inst.n();
    let report = verify_median_metric(&inst.metric);
    if let Some((x, y, z, count)) = report.witness {
        return Err(Error::InternalConsistency {
            context: "cat0_metric",
            witness: format!(
                "metric is not median: intervals of ({x},{y},{z}) meet in {count} points"
            ),
        });
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if report.median(n, x, y, z) != Some(inst.algebra.med(x, y, z)) {
                    return Err(Error::InternalConsistency {
                        context: "cat0_metric",
                        witness: format!("intrinsic median differs from med at ({x},{y},{z})"),
                    });
                }
            }
        }
    }
    let lengths = median_wall_lengths(inst)?;
    let walls = &inst.skeleton().walls;
    let rank = rank_of_walls(walls);

    // ω(Q(x,y)) per pair via non-crossing blocks
    let w = walls.len();
    let mut cross = vec![false; w * w];
    for i in 0..w {
        for j in i + 1..w {
            if crossing(&walls[i], &walls[j])? {
                cross[i * w + j] = true;
                cross[j * w + i] = true;
            }
        }
    }
    let mut omega = vec![0.0f64; n * n];
    for x in 0..n {
        for y in x + 1..n {
            let sep = separating_walls(walls, x, y);
            let m = sep.len();
            let mut parent: Vec<usize> = (0..m).collect();
            for i in 0..m {
                for j in i + 1..m {
                    if !cross[sep[i] * w + sep[j]] {
                        let (mut a, mut b) = (i, j);
                        while parent[a] != a {
                            a = parent[a];
                        }
                        while parent[b] != b {
                            b = parent[b];
                        }
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
            let mut block_len: std::collections::BTreeMap<usize, f64> = Default::default();
            for i in 0..m {
                let mut root = i;
                while parent[root] != root {
                    root = parent[root];
                }
                *block_len.entry(root).or_insert(0.0) += lengths[sep[i]];
            }
            let ls: Vec<f64> = block_len.into_values().collect();
            let value = block_weight(&ls);
            omega[x * n + y] = value;
            omega[y * n + x] = value;
        }
    }

    // shortest paths over the complete ω-graph
    let mut sigma = omega;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = sigma[i * n + k] + sigma[k * n + j];
                if via < sigma[i * n + j] {
                    sigma[i * n + j] = via;
                }
            }
        }
    }

    let mut rows = Vec::new();
    let sqrt_rank = (rank.max(1) as f64).sqrt();
    for x in 0..n {
        for y in x + 1..n {
            let d = inst.metric.get(x, y);
            let s = sigma[x * n + y];
            let lower = d / sqrt_rank;
            if !nearly_le(lower, s) || !nearly_le(s, d) {
                return Err(Error::InternalConsistency {
                    context: "cat0_metric",
                    witness: format!("sandwich violated at ({x},{y}): {lower} <= {s} <= {d} fails"),
                });
            }
            rows.push(SigmaRow {
                x,
                y,
                d,
                sigma: s,
                lower,
                upper: d,
            });
        }
    }
    let metric = FiniteMetric::new(inst.metric.ids().to_vec(), sigma)?;
    Ok((metric, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteMedianAlgebra;
    use crate::complex::{path_algebra, StandardModel};
    use crate::metrics::unit_wall_instance;

    #[test]
    fn blocks_of_path_square_and_cube() {
        let p = unit_wall_instance(&path_algebra(3).unwrap()).unwrap();
        assert_eq!(interval_blocks(&p, 0, 2).unwrap().len(), 1);

        let sq = unit_wall_instance(&FiniteMedianAlgebra::majority_bits(2).unwrap()).unwrap();
        assert_eq!(interval_blocks(&sq, 0, 3).unwrap().len(), 2);

        let c3 = unit_wall_instance(&FiniteMedianAlgebra::majority_bits(3).unwrap()).unwrap();
        assert_eq!(interval_blocks(&c3, 0, 7).unwrap().len(), 3);

        assert!(matches!(
            interval_blocks(&p, 1, 1),
            Err(Error::DegenerateDiagonal)
        ));
    }

    #[test]
    fn diagonal_cube_of_square_is_the_square() {
        let sq = unit_wall_instance(&FiniteMedianAlgebra::majority_bits(2).unwrap()).unwrap();
        let cube = maximal_diagonal_cube(&sq, 0, 3).unwrap();
        assert_eq!(cube.dimension(), 2);
        let mut v = cube.vertices.clone();
        v.sort_unstable();
        assert_eq!(v, vec![0, 1, 2, 3]);
        assert_eq!(cube.block_lengths, vec![1.0, 1.0]);
        assert!((cube_weight(&cube) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn nested_walls_make_one_dimensional_cubes() {
        let p = unit_wall_instance(&path_algebra(4).unwrap()).unwrap();
        let cube = maximal_diagonal_cube(&p, 0, 3).unwrap();
        assert_eq!(cube.dimension(), 1);
        assert_eq!(cube.vertices, vec![0, 3]);
        assert_eq!(cube_weight(&cube), 3.0);
    }

    #[test]
    fn grid_corner_cube_has_mixed_block_lengths() {
        let g = StandardModel::Grid(2, 3).build().unwrap();
        let inst = unit_wall_instance(&g).unwrap();
        // pick the pair at maximal skeleton distance: the long diagonal
        let dist = inst.skeleton().distances().unwrap();
        let n = g.n();
        let (mut a, mut b, mut best) = (0, 0, 0);
        for x in 0..n {
            for y in 0..n {
                if dist[x * n + y] > best {
                    best = dist[x * n + y];
                    a = x;
                    b = y;
                }
            }
        }
        let cube = maximal_diagonal_cube(&inst, a, b).unwrap();
        assert_eq!(cube.dimension(), 2);
        let mut lens = cube.block_lengths.clone();
        lens.sort_by(|p, q| p.partial_cmp(q).unwrap());
        assert_eq!(lens, vec![1.0, 2.0]);
        assert!((cube_weight(&cube) - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_construction() {
        for alg in [
            FiniteMedianAlgebra::majority_bits(3).unwrap(),
            StandardModel::Grid(2, 3).build().unwrap(),
            StandardModel::Tree(6, vec![(0, 1), (1, 2), (1, 3), (3, 4), (0, 5)])
                .build()
                .unwrap(),
        ] {
            let inst = unit_wall_instance(&alg).unwrap();
            for x in 0..alg.n() {
                for y in x + 1..alg.n() {
                    let all = enumerate_diagonal_cubes(&inst, x, y).unwrap();
                    let computed = maximal_diagonal_cube(&inst, x, y).unwrap();
                    let mut expect = computed.vertices.clone();
                    expect.sort_unstable();
                    // every valid cube is contained in the computed one, and
                    // the computed one is among them: unique maximal
                    assert!(all.contains(&expect));
                    for cube in &all {
                        assert!(
                            cube.iter().all(|v| expect.contains(v)),
                            "cube {cube:?} not inside {expect:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_equals_d_on_trees() {
        let t = StandardModel::Tree(7, vec![(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (0, 6)])
            .build()
            .unwrap();
        let inst = unit_wall_instance(&t).unwrap();
        let sigma = cat0_metric(&inst).unwrap();
        assert_eq!(sigma.matrix(), inst.metric.matrix());
    }

    #[test]
    fn sigma_on_unit_cubes_hits_the_diagonal_bound() {
        for dim in 1..=4u32 {
            let c = FiniteMedianAlgebra::majority_bits(dim).unwrap();
            let inst = unit_wall_instance(&c).unwrap();
            let sigma = cat0_metric(&inst).unwrap();
            let diag = sigma.get(0, (1usize << dim) - 1);
            assert!(
                (diag - (dim as f64).sqrt()).abs() < 1e-9,
                "dim {dim}: diagonal {diag}"
            );
        }
    }

    #[test]
    fn sigma_square_diagonal_is_sqrt2() {
        let sq = unit_wall_instance(&FiniteMedianAlgebra::majority_bits(2).unwrap()).unwrap();
        let (sigma, rows) = cat0_metric_with_rows(&sq).unwrap();
        assert!((sigma.get(0, 3) - 2f64.sqrt()).abs() < 1e-12);
        for row in rows {
            assert!(row.lower <= row.sigma + 1e-12 && row.sigma <= row.upper + 1e-12);
        }
    }

    #[test]
    fn random_sequences_never_beat_sigma() {
        use rand::Rng;
        let g = StandardModel::Grid(3, 3).build().unwrap();
        let inst = unit_wall_instance(&g).unwrap();
        let sigma = cat0_metric(&inst).unwrap();
        let n = g.n();
        let omega = |a: usize, b: usize| {
            if a == b {
                0.0
            } else {
                cube_weight(&maximal_diagonal_cube(&inst, a, b).unwrap())
            }
        };
        let mut rng = crate::sampling::task_rng(13, 1);
        for _ in 0..10_000 {
            let len = rng.gen_range(2..6);
            let seq: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            let total: f64 = seq.windows(2).map(|w| omega(w[0], w[1])).sum();
            let direct = sigma.get(seq[0], seq[len - 1]);
            assert!(direct <= total + 1e-9);
        }
    }
}
