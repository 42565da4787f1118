//! Approximation of finite subsets of a coarse median model by finite
//! median metric spaces, with measured distortion.
//!
//! The pipeline: a resolver produces `(M, λ, π)` — a finite median algebra
//! `M`, a map `λ: M -> X` and `π: A -> M` with a measured quasi-morphism
//! bound; optionally the triple is exactified so that `λ∘π` is the honest
//! inclusion (at the cost of one extra rank and an inflated bound); each
//! wall of `M` receives the image length of one crossing edge; the wall
//! metric `d_l` is compared against the model metric through `λ`, yielding
//! the tightest `(α, ε)` with
//!
//! ```text
//! d_l(m1,m2)/α − ε <= d(λ m1, λ m2) <= α d_l(m1,m2) + ε.
//! ```
//!
//! Two resolvers are built in: the `ℓ1`-lattice resolver (median closure,
//! exact, bound 0) and the tree resolver for graph models (bottleneck
//! Gromov products realized as a Steiner tree).

use std::collections::HashMap;

use rand::Rng;

use crate::algebra::{rank_of_walls, FiniteMedianAlgebra};
use crate::coarse::CoarseMedianSpace;
use crate::complex::{
    one_skeleton_with_walls, parallel_classes, path_algebra, CubeComplexSkeleton,
};
use crate::error::{Error, Result};
use crate::metrics::{verify_median_metric, wall_metric, FiniteMetric, WallWeighting};
use crate::sampling::task_rng;
use crate::{nearly_eq, nearly_le};

/// Exhaustive quasi-morphism defect scans are done up to this carrier size
/// for `M`; beyond it the defect is sampled (seeded).
pub const EXHAUSTIVE_DEFECT_CAP: usize = 64;

const DEFECT_SAMPLES: u64 = 20_000;

/// Replacement factor for degenerate (zero image length) walls.
const ZERO_LENGTH_FACTOR: f64 = 1e-6;

// ---------------------------------------------------------------------------
// resolutions
// ---------------------------------------------------------------------------

/// Output of a resolver: a finite median algebra with maps into and out of
/// the model, and the measured quasi-morphism bound `L` covering both
/// `sup d(a, λπ(a))` and the median defect of `λ`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub algebra: FiniteMedianAlgebra,
    /// `M` index -> model carrier index.
    pub lambda: Vec<usize>,
    /// Position in `A` -> `M` index.
    pub pi: Vec<usize>,
    /// Measured quasi-morphism bound (exact sup for small `M`, sampled
    /// beyond [`EXHAUSTIVE_DEFECT_CAP`]).
    pub bound: f64,
    /// Whether `bound` is the exact sup (exhaustive triple scan).
    pub bound_exhaustive: bool,
    pub exactified: bool,
}

/// Built-in resolvers.
#[derive(Clone, Copy, Debug)]
pub enum Resolver {
    /// Median closure inside an `ℓ1` lattice model; exact, bound 0.
    Lattice,
    /// Bottleneck-Gromov-product Steiner tree on a graph model, based at
    /// the given member of `A`.
    Tree { basepoint: usize },
}

fn measure_defects(
    model: &CoarseMedianSpace,
    algebra: &FiniteMedianAlgebra,
    lambda: &[usize],
    a: &[usize],
    pi: &[usize],
) -> f64 {
    let mut bound: f64 = 0.0;
    for (pos, &point) in a.iter().enumerate() {
        bound = bound.max(model.dist(point, lambda[pi[pos]]));
    }
    let m = algebra.n();
    let eval = |x: usize, y: usize, z: usize, sup: &mut f64| {
        let through_m = lambda[algebra.med(x, y, z)];
        let through_x = model.median(lambda[x], lambda[y], lambda[z]);
        *sup = sup.max(model.dist(through_m, through_x));
    };
    if m <= EXHAUSTIVE_DEFECT_CAP {
        for x in 0..m {
            for y in x..m {
                for z in y..m {
                    eval(x, y, z, &mut bound);
                }
            }
        }
    } else {
        let mut rng = task_rng(0, 0x646566); // "def"
        for _ in 0..DEFECT_SAMPLES {
            let x = rng.gen_range(0..m);
            let y = rng.gen_range(0..m);
            let z = rng.gen_range(0..m);
            eval(x, y, z, &mut bound);
        }
    }
    bound
}

/// Median closure of `A` inside a lattice model: `M` is the closure,
/// `λ` the inclusion, `π` the identity, bound 0 (verified by measurement).
pub fn lattice_resolver(model: &CoarseMedianSpace, a: &[usize]) -> Result<Resolution> {
    if a.is_empty() {
        return Err(Error::EmptyGeneratingSet);
    }
    let coords = model
        .lattice_coords()
        .ok_or_else(|| Error::MalformedInput("lattice resolver needs a lattice model".into()))?;
    if a.iter().any(|&p| p >= model.len()) {
        return Err(Error::MalformedInput(
            "subset point outside the model carrier".into(),
        ));
    }
    // fixed-point closure in carrier-index space, worklist over new points
    let mut members: Vec<usize> = a.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut in_set = vec![false; model.len()];
    for &i in &members {
        in_set[i] = true;
    }
    let mut fresh = members.clone();
    while !fresh.is_empty() {
        let mut next = Vec::new();
        let snapshot = members.clone();
        for &x in &fresh {
            for &y in &snapshot {
                for &z in &snapshot {
                    let m = model.median(x, y, z);
                    if !in_set[m] {
                        in_set[m] = true;
                        members.push(m);
                        next.push(m);
                    }
                }
            }
        }
        members.sort_unstable();
        fresh = next;
    }
    let closure_coords: Vec<Vec<i64>> = members.iter().map(|&i| coords[i].clone()).collect();
    let algebra = FiniteMedianAlgebra::from_lattice_points(closure_coords)?;
    let lambda = members.clone();
    let pi: Vec<usize> = a
        .iter()
        .map(|&p| {
            members
                .binary_search(&p)
                .expect("A lies inside its closure")
        })
        .collect();
    let bound = measure_defects(model, &algebra, &lambda, a, &pi);
    if bound != 0.0 {
        return Err(Error::InternalConsistency {
            context: "lattice_resolver",
            witness: format!("closure subalgebra has non-zero defect {bound}"),
        });
    }
    let bound_exhaustive = algebra.n() <= EXHAUSTIVE_DEFECT_CAP;
    Ok(Resolution {
        algebra,
        lambda,
        pi,
        bound,
        bound_exhaustive,
        exactified: false,
    })
}

/// Tree resolver on a graph model: bottleneck Gromov products at the
/// basepoint define a tree metric on `A`, realized as a Steiner tree whose
/// vertex median algebra is `M`; `λ` places every tree vertex on the graph
/// vertex whose distance profile to `A` best matches the tree's.
pub fn tree_resolver(
    model: &CoarseMedianSpace,
    a: &[usize],
    basepoint: usize,
) -> Result<Resolution> {
    if a.is_empty() {
        return Err(Error::EmptyGeneratingSet);
    }
    let Some(w_pos) = a.iter().position(|&p| p == basepoint) else {
        return Err(Error::BasepointOutsideSubset(basepoint));
    };
    if model.graph().is_none() {
        return Err(Error::MalformedInput(
            "tree resolver needs a graph model".into(),
        ));
    }
    if a.iter().any(|&p| p >= model.len()) {
        return Err(Error::MalformedInput(
            "subset point outside the model carrier".into(),
        ));
    }
    let s = a.len();
    let d = |x: usize, y: usize| model.dist(x, y) as i64;

    // doubled Gromov products at the basepoint, then widest-path closure:
    // wp2[i][j] = max over paths through A of the minimum doubled product
    let mut wp2 = vec![0i64; s * s];
    for i in 0..s {
        for j in 0..s {
            wp2[i * s + j] = d(a[i], basepoint) + d(a[j], basepoint) - d(a[i], a[j]);
        }
    }
    for k in 0..s {
        for i in 0..s {
            for j in 0..s {
                let via = wp2[i * s + k].min(wp2[k * s + j]);
                if via > wp2[i * s + j] {
                    wp2[i * s + j] = via;
                }
            }
        }
    }

    // realize d_T(i,j) = h(i) + h(j) - wp(i,j) (all doubled) by iterative
    // leaf attachment with Steiner vertices; vertex 0 is the basepoint
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut height2: Vec<i64> = vec![0];
    let mut ids: Vec<String> = vec![model.ids()[basepoint].clone()];
    let mut steiner = 0usize;
    let mut leaf_for: Vec<usize> = vec![usize::MAX; s];
    leaf_for[w_pos] = 0;
    let mut processed = vec![w_pos];
    for i in 0..s {
        if i == w_pos {
            continue;
        }
        let h2 = 2 * d(a[i], basepoint);
        let mut t2 = 0;
        let mut best = w_pos;
        for &b in &processed {
            if wp2[i * s + b] > t2 {
                t2 = wp2[i * s + b];
                best = b;
            }
        }
        // walk rootward from the best leaf to the attachment height
        let mut v = leaf_for[best];
        let mut child: Option<usize> = None;
        while height2[v] > t2 {
            child = Some(v);
            v = parent[v].expect("the root sits at height 0 <= t2");
        }
        let attach = if height2[v] == t2 {
            v
        } else {
            let c = child.expect("a vertex above the attachment height exists");
            let st = parent.len();
            parent.push(Some(v));
            height2.push(t2);
            ids.push(format!("s{steiner}"));
            steiner += 1;
            parent[c] = Some(st);
            st
        };
        if h2 == t2 {
            leaf_for[i] = attach;
        } else {
            let leaf = parent.len();
            parent.push(Some(attach));
            height2.push(h2);
            ids.push(model.ids()[a[i]].clone());
            leaf_for[i] = leaf;
        }
        processed.push(i);
    }

    // weighted tree distances (doubled), accumulated from each vertex
    let v_count = parent.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); v_count];
    let mut edges = Vec::new();
    for v in 1..v_count {
        let p = parent[v].unwrap();
        let w2 = height2[v] - height2[p];
        adj[p].push((v, w2));
        adj[v].push((p, w2));
        edges.push((p, v));
    }
    let mut dt2 = vec![0i64; v_count * v_count];
    for start in 0..v_count {
        let mut stack = vec![start];
        let mut seen = vec![false; v_count];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &(u, w2) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    dt2[start * v_count + u] = dt2[start * v_count + v] + w2;
                    stack.push(u);
                }
            }
        }
    }
    // the realization must reproduce the tree metric on A exactly
    for i in 0..s {
        for j in 0..s {
            let want = d(a[i], basepoint) + d(a[j], basepoint) - wp2[i * s + j];
            let got2 = dt2[leaf_for[i] * v_count + leaf_for[j]];
            if got2 != 2 * want {
                return Err(Error::InternalConsistency {
                    context: "tree_resolver",
                    witness: format!(
                        "realized tree distance {got2}/2 differs from d_T = {want} at ({i},{j})"
                    ),
                });
            }
        }
    }

    let algebra = FiniteMedianAlgebra::from_tree_edges_with_ids(ids, &edges)?;

    // λ: best-matching graph vertex per tree vertex, lexicographic tie-break
    let n = model.len();
    let mut lambda = vec![0usize; v_count];
    for (v, slot) in lambda.iter_mut().enumerate() {
        let mut best_u = 0usize;
        let mut best_err = f64::INFINITY;
        for u in 0..n {
            let mut err: f64 = 0.0;
            for (i, &point) in a.iter().enumerate() {
                let tree_d = dt2[v * v_count + leaf_for[i]] as f64 / 2.0;
                err = err.max((model.dist(u, point) - tree_d).abs());
            }
            if err < best_err {
                best_err = err;
                best_u = u;
            }
        }
        *slot = best_u;
    }

    let bound = measure_defects(model, &algebra, &lambda, a, &leaf_for);
    let bound_exhaustive = algebra.n() <= EXHAUSTIVE_DEFECT_CAP;
    Ok(Resolution {
        algebra,
        lambda,
        pi: leaf_for,
        bound,
        bound_exhaustive,
        exactified: false,
    })
}

/// Resolve with the chosen resolver.
pub fn resolve(model: &CoarseMedianSpace, a: &[usize], resolver: Resolver) -> Result<Resolution> {
    match resolver {
        Resolver::Lattice => lattice_resolver(model, a),
        Resolver::Tree { basepoint } => tree_resolver(model, a, basepoint),
    }
}

/// Exactification: replace `(M, λ, π)` by `(M × T_A, λ~, π~)` with `T_A` a
/// path tree on `A`, `λ~(y,a) = a` when `y = π(a)` and `λ(y)` otherwise,
/// `π~(a) = (π(a), a)`. Guarantees `λ~ ∘ π~ = id` on `A` exactly and raises
/// the rank by at most one. The measured bound of the new map must stay
/// under `(3k+2)·L + h0` (all three arguments may move by `L` under the
/// `k`-Lipschitz median); an overshoot is an error when the model's
/// parameters are exact.
pub fn exactify(model: &CoarseMedianSpace, res: &Resolution, a: &[usize]) -> Result<Resolution> {
    let tree_on_a = path_algebra(a.len())?;
    let product = FiniteMedianAlgebra::product(&res.algebra, &tree_on_a)?;
    let s = a.len();
    let mut lambda = Vec::with_capacity(product.n());
    for m in 0..res.algebra.n() {
        for (j, &point) in a.iter().enumerate() {
            lambda.push(if res.pi[j] == m { point } else { res.lambda[m] });
        }
    }
    let pi: Vec<usize> = (0..s).map(|j| res.pi[j] * s + j).collect();
    for (j, &point) in a.iter().enumerate() {
        assert_eq!(lambda[pi[j]], point, "exactified map must fix A pointwise");
    }
    let bound = measure_defects(model, &product, &lambda, a, &pi);
    let bound_exhaustive = product.n() <= EXHAUSTIVE_DEFECT_CAP;
    let ceiling = (3.0 * model.params.k + 2.0) * res.bound + model.params.h0;
    if model.params_exact && res.bound_exhaustive && bound_exhaustive && !nearly_le(bound, ceiling)
    {
        return Err(Error::AprioriBoundViolated {
            detail: format!("exactified bound {bound} exceeds (3k+2)L + h0 = {ceiling}"),
        });
    }
    Ok(Resolution {
        algebra: product,
        lambda,
        pi,
        bound,
        bound_exhaustive,
        exactified: true,
    })
}

// ---------------------------------------------------------------------------
// wall lengths and distortion constants
// ---------------------------------------------------------------------------

/// Per-wall image lengths: the lexicographically first crossing edge of
/// each wall donates `l(W) = d(λ e_-, λ e_+)`; zero lengths are replaced by
/// the smallest positive observed length times `1e-6`. Also records the
/// min/max image length over each parallel class (the sensitivity of the
/// choice).
pub fn assign_wall_lengths(
    skeleton: &CubeComplexSkeleton,
    lambda: &[usize],
    model: &CoarseMedianSpace,
) -> Result<WallLengthAssignment> {
    let classes = parallel_classes(skeleton);
    if classes.is_empty() {
        // a one-point algebra has no walls to weight
        return Ok(WallLengthAssignment {
            weighting: WallWeighting::unit(0),
            spread: Vec::new(),
            resolution: 0.0,
        });
    }
    let mut lengths = Vec::with_capacity(classes.len());
    let mut spread = Vec::with_capacity(classes.len());
    for class in &classes {
        if class.is_empty() {
            return Err(Error::InternalConsistency {
                context: "assign_wall_lengths",
                witness: "wall without a crossing edge".into(),
            });
        }
        // skeleton edges are already in lexicographic order
        let first = class[0];
        let (u, v) = skeleton.edges[first];
        let chosen = model.dist(lambda[u], lambda[v]);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &e in class {
            let (p, q) = skeleton.edges[e];
            let len = model.dist(lambda[p], lambda[q]);
            lo = lo.min(len);
            hi = hi.max(len);
        }
        lengths.push(chosen);
        spread.push((lo, hi));
    }
    let min_positive = lengths
        .iter()
        .copied()
        .filter(|&l| l > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !min_positive.is_finite() {
        return Err(Error::CollapsedImage);
    }
    for l in &mut lengths {
        if *l == 0.0 {
            *l = min_positive * ZERO_LENGTH_FACTOR;
        }
    }
    Ok(WallLengthAssignment {
        weighting: WallWeighting::new(lengths)?,
        spread,
        resolution: min_positive,
    })
}

/// Output of [`assign_wall_lengths`]: the weighting, the per-wall min/max
/// image spread, and the metric resolution (the smallest genuine positive
/// wall length; `d_l` values below it consist of degenerate guard walls
/// only).
#[derive(Clone, Debug)]
pub struct WallLengthAssignment {
    pub weighting: WallWeighting,
    pub spread: Vec<(f64, f64)>,
    pub resolution: f64,
}

/// Tightest `(β, γ)` with `β >= 1, γ >= 0` such that
/// `d(f e2) <= β d(f e1) + γ` over all ordered pairs of parallel edges,
/// and verification of the a-priori bound `k·d(f e1) + h0 + 2L`.
pub fn parallel_edge_constants(
    skeleton: &CubeComplexSkeleton,
    lambda: &[usize],
    model: &CoarseMedianSpace,
    qm_bound: f64,
    qm_bound_exhaustive: bool,
) -> Result<(f64, f64)> {
    let classes = parallel_classes(skeleton);
    let edge_len = |e: usize| {
        let (u, v) = skeleton.edges[e];
        model.dist(lambda[u], lambda[v])
    };
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for class in &classes {
        for &e1 in class {
            for &e2 in class {
                if e1 != e2 {
                    pairs.push((edge_len(e1), edge_len(e2)));
                }
            }
        }
    }
    if pairs.is_empty() {
        return Ok((1.0, 0.0));
    }
    let mut beta: f64 = 1.0;
    for &(d1, d2) in &pairs {
        if d1 > 0.0 {
            beta = beta.max(d2 / d1);
        }
    }
    let mut gamma: f64 = 0.0;
    for &(d1, d2) in &pairs {
        gamma = gamma.max(d2 - beta * d1);
    }
    // a-priori bound from the quasi-morphism argument
    let apriori = |d1: f64| model.params.k * d1 + model.params.h0 + 2.0 * qm_bound;
    if model.params_exact && qm_bound_exhaustive {
        for &(d1, d2) in &pairs {
            if !nearly_le(d2, apriori(d1)) {
                return Err(Error::AprioriBoundViolated {
                    detail: format!(
                        "parallel edge image {d2} exceeds k*{d1} + h0 + 2L = {}",
                        apriori(d1)
                    ),
                });
            }
        }
    }
    Ok((beta, gamma))
}

/// Tightest `(α, ε)`, `α >= 1`, with `a/α − ε <= b <= α a + ε` for every
/// pair `(a, b)`.
///
/// `α` is minimized first: the candidate ceiling comes from the pairwise
/// ratios, the unavoidable additive error is evaluated there, and a binary
/// search finds the smallest `α` still achieving it; `ε` is then computed
/// exactly at that `α`.
pub fn fit_distortion(pairs: &[(f64, f64)]) -> (f64, f64) {
    fit_distortion_with_resolution(pairs, 0.0)
}

/// Like [`fit_distortion`], but pairs whose first entry falls below
/// `resolution` (distances made of degenerate guard walls only) contribute
/// to the additive error, not to the multiplicative ceiling.
pub fn fit_distortion_with_resolution(pairs: &[(f64, f64)], resolution: f64) -> (f64, f64) {
    let eps_needed = |alpha: f64| -> f64 {
        let mut e: f64 = 0.0;
        for &(a, b) in pairs {
            e = e.max(a / alpha - b).max(b - alpha * a);
        }
        e.max(0.0)
    };
    let mut alpha_max: f64 = 1.0;
    for &(a, b) in pairs {
        if a > 0.0 && b > 0.0 && a >= resolution {
            alpha_max = alpha_max.max(a / b).max(b / a);
        }
    }
    let floor = eps_needed(alpha_max);
    if eps_needed(1.0) <= floor {
        return (1.0, eps_needed(1.0));
    }
    let (mut lo, mut hi) = (1.0, alpha_max);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if eps_needed(mid) <= floor {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, eps_needed(hi))
}

// ---------------------------------------------------------------------------
// the full pipeline
// ---------------------------------------------------------------------------

/// Full report of one approximation run.
#[derive(Clone, Debug)]
pub struct ApproximationReport {
    pub resolution: Resolution,
    pub skeleton: CubeComplexSkeleton,
    pub lengths: WallWeighting,
    /// Per-wall min/max image length over the parallel class.
    pub spread: Vec<(f64, f64)>,
    pub metric: FiniteMetric,
    pub rank: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub gamma: f64,
    pub covered: bool,
    /// `(M, d_l)` verified as a median metric with intrinsic median equal
    /// to `med` exhaustively; when false, the sampled additivity criterion
    /// ran instead (both hard-fail on violation).
    pub median_metric_exhaustive: bool,
}

/// Run the whole pipeline: resolve (optionally exactify), assign wall
/// lengths, build `d_l`, fit `(α, ε)` and `(β, γ)`, check coverage and the
/// median-metric property of `(M, d_l)`.
pub fn approximate(
    model: &CoarseMedianSpace,
    a: &[usize],
    resolver: Resolver,
    exactify_flag: bool,
) -> Result<ApproximationReport> {
    let mut res = resolve(model, a, resolver)?;
    if exactify_flag {
        res = exactify(model, &res, a)?;
    }
    let walls = res.algebra.enumerate_walls()?;
    let skeleton = one_skeleton_with_walls(&res.algebra, walls)?;
    let assignment = assign_wall_lengths(&skeleton, &res.lambda, model)?;
    let WallLengthAssignment {
        weighting: lengths,
        spread,
        resolution,
    } = assignment;
    let metric = wall_metric(&res.algebra, &skeleton.walls, &lengths)?;
    let rank = rank_of_walls(&skeleton.walls);

    let m = res.algebra.n();
    let median_metric_exhaustive = m <= 48;
    if median_metric_exhaustive {
        let report = verify_median_metric(&metric);
        if let Some((x, y, z, count)) = report.witness {
            return Err(Error::InternalConsistency {
                context: "approximate",
                witness: format!("(M, d_l) not median at ({x},{y},{z}): {count} points"),
            });
        }
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if report.median(m, x, y, z) != Some(res.algebra.med(x, y, z)) {
                        return Err(Error::InternalConsistency {
                            context: "approximate",
                            witness: format!("intrinsic median differs at ({x},{y},{z})"),
                        });
                    }
                }
            }
        }
    } else {
        // sampled interval-additivity criterion
        let mut rng = task_rng(0, 0x6d6d63); // "mmc"
        for _ in 0..DEFECT_SAMPLES {
            let x = rng.gen_range(0..m);
            let y = rng.gen_range(0..m);
            let z = res.algebra.med(x, y, rng.gen_range(0..m));
            if !nearly_eq(metric.get(x, y), metric.get(x, z) + metric.get(z, y)) {
                return Err(Error::InternalConsistency {
                    context: "approximate",
                    witness: format!("d_l additivity fails through med point at ({x},{y},{z})"),
                });
            }
        }
    }

    let mut pairs = Vec::with_capacity(m * (m.saturating_sub(1)) / 2);
    for m1 in 0..m {
        for m2 in m1 + 1..m {
            pairs.push((
                metric.get(m1, m2),
                model.dist(res.lambda[m1], res.lambda[m2]),
            ));
        }
    }
    let (alpha, epsilon) = fit_distortion_with_resolution(&pairs, resolution);
    let (beta, gamma) = parallel_edge_constants(
        &skeleton,
        &res.lambda,
        model,
        res.bound,
        res.bound_exhaustive,
    )?;

    let image: std::collections::HashSet<usize> = res.lambda.iter().copied().collect();
    let covered = a.iter().all(|p| image.contains(p));
    if res.exactified {
        assert!(covered, "exactified runs cover A by construction");
    }

    Ok(ApproximationReport {
        resolution: res,
        skeleton,
        lengths,
        spread,
        metric,
        rank,
        alpha,
        epsilon,
        beta,
        gamma,
        covered,
        median_metric_exhaustive,
    })
}

/// Combinatorial-geodesic check: along sampled skeleton geodesics, every
/// step image is bounded by `k·d(f x_0, f x_m) + h0 + 2L`.
pub fn geodesic_bound_check(
    report: &ApproximationReport,
    model: &CoarseMedianSpace,
    samples: u64,
    seed: u64,
) -> Result<()> {
    let skel = &report.skeleton;
    let n = skel.n();
    if n < 2 {
        return Ok(());
    }
    let adj = skel.adjacency();
    let dist = skel.distances()?;
    let lambda = &report.resolution.lambda;
    let bound = |ends: f64| model.params.k * ends + model.params.h0 + 2.0 * report.resolution.bound;
    let mut rng = task_rng(seed, 0x67656f); // "geo"
    for _ in 0..samples {
        let x0 = rng.gen_range(0..n);
        let xm = rng.gen_range(0..n);
        if x0 == xm {
            continue;
        }
        // lexicographic geodesic in the skeleton
        let mut path = vec![xm];
        let mut v = xm;
        while v != x0 {
            let next = adj[v]
                .iter()
                .copied()
                .find(|&u| dist[x0 * n + u] + 1 == dist[x0 * n + v])
                .expect("skeleton is connected");
            path.push(next);
            v = next;
        }
        path.reverse();
        let ends = model.dist(lambda[x0], lambda[xm]);
        for step in path.windows(2) {
            let img = model.dist(lambda[step[0]], lambda[step[1]]);
            if model.params_exact
                && report.resolution.bound_exhaustive
                && !nearly_le(img, bound(ends))
            {
                return Err(Error::AprioriBoundViolated {
                    detail: format!(
                        "geodesic step image {img} exceeds k*{ends} + h0 + 2L = {}",
                        bound(ends)
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Stable map wall index -> chosen length, for report serialization.
pub fn lengths_as_map(w: &WallWeighting) -> std::collections::BTreeMap<usize, f64> {
    w.lengths().iter().copied().enumerate().collect()
}

/// Resolve point ids against a model's carrier.
pub fn resolve_point_ids(model: &CoarseMedianSpace, ids: &[String]) -> Result<Vec<usize>> {
    let lookup: HashMap<&str, usize> = model
        .ids()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    ids.iter()
        .map(|s| {
            lookup
                .get(s.as_str())
                .copied()
                .ok_or_else(|| Error::MalformedInput(format!("unknown point id {s:?}")))
        })
        .collect()
}
