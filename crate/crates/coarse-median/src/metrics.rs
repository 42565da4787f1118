//! Metrics on median algebras.
//!
//! Three layers:
//!
//! * wall-weighted metrics `d_l(a,b) = Σ_{W separating a,b} l(W)`, which are
//!   always median metrics recovering the algebra's own median;
//! * verification that an arbitrary finite metric is a median metric, by
//!   intersecting the three metric intervals of every triple;
//! * rectification: replacing an arbitrary metric on a median algebra by the
//!   wall sum of maximal edge thicknesses, which dominates the input metric
//!   and is monotone under passing to larger subalgebras.
//!
//! Real arithmetic is 64-bit floating point; comparisons are exact whenever
//! the operands are exactly-representable integers and relative `1e-9`
//! otherwise.

use crate::algebra::{separating_walls, BitSet, FiniteMedianAlgebra, Wall};
use crate::complex::{one_skeleton, parallel_classes, CubeComplexSkeleton};
use crate::error::{Error, Result};
use crate::{nearly_eq, nearly_le};

// ---------------------------------------------------------------------------
// finite metrics
// ---------------------------------------------------------------------------

/// A finite metric space: ordered points plus a validated distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetric {
    ids: Vec<String>,
    dist: Vec<f64>,
}

impl FiniteMetric {
    /// Validates symmetry, zero diagonal, positivity off the diagonal and
    /// the triangle inequality over all triples.
    pub fn new(ids: Vec<String>, dist: Vec<f64>) -> Result<Self> {
        let n = ids.len();
        if dist.len() != n * n {
            return Err(Error::MalformedInput(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        let m = FiniteMetric { ids, dist };
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::Validation(format!(
                    "d({i},{i}) = {} != 0",
                    m.get(i, i)
                )));
            }
            for j in 0..n {
                if !m.get(i, j).is_finite() || (i != j && m.get(i, j) <= 0.0) {
                    return Err(Error::Validation(format!("d({i},{j}) = {}", m.get(i, j))));
                }
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Validation(format!(
                        "asymmetry: d({i},{j}) = {} but d({j},{i}) = {}",
                        m.get(i, j),
                        m.get(j, i)
                    )));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !nearly_le(m.get(x, y), m.get(x, z) + m.get(z, y)) {
                        return Err(Error::Validation(format!(
                            "triangle inequality fails: d({x},{y}) > d({x},{z}) + d({z},{y})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n() + b]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.dist
    }

    /// True when every entry is an exactly-representable integer, enabling
    /// exact comparisons downstream.
    pub fn is_integral(&self) -> bool {
        self.dist.iter().all(|d| d.fract() == 0.0)
    }

    /// Metric interval membership: `z` between `x` and `y`.
    pub fn between(&self, x: usize, z: usize, y: usize) -> bool {
        nearly_eq(self.get(x, z) + self.get(z, y), self.get(x, y))
    }

    /// The metric interval `I(x,y)`, sorted.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.n()).filter(|&z| self.between(x, z, y)).collect()
    }

    /// Restriction to a subset of the points (indices, kept in order).
    pub fn restrict(&self, subset: &[usize]) -> FiniteMetric {
        let m = subset.len();
        let mut dist = vec![0.0; m * m];
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                dist[a * m + b] = self.get(i, j);
            }
        }
        let ids = subset.iter().map(|&i| self.ids[i].clone()).collect();
        FiniteMetric { ids, dist }
    }

    /// Graph metric of a connected unweighted graph.
    pub fn from_graph(ids: Vec<String>, adj: &[Vec<usize>]) -> Result<Self> {
        let d = crate::algebra::bfs_all_pairs(adj)?;
        let dist = d.iter().map(|&x| x as f64).collect();
        FiniteMetric::new(ids, dist)
    }
}

// ---------------------------------------------------------------------------
// wall weightings and d_l
// ---------------------------------------------------------------------------

/// Strictly positive length per wall; index-aligned with a canonical wall
/// enumeration.
#[derive(Clone, Debug)]
pub struct WallWeighting {
    lengths: Vec<f64>,
}

impl WallWeighting {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        for (i, &l) in lengths.iter().enumerate() {
            if l <= 0.0 || !l.is_finite() {
                return Err(Error::Validation(format!(
                    "wall {i} has non-positive length {l}"
                )));
            }
        }
        Ok(WallWeighting { lengths })
    }

    /// Unit length on every wall.
    pub fn unit(wall_count: usize) -> Self {
        WallWeighting {
            lengths: vec![1.0; wall_count],
        }
    }

    /// From a sparse `wall index -> length` map that must cover `0..wall_count`.
    pub fn from_map(
        map: &std::collections::BTreeMap<usize, f64>,
        wall_count: usize,
    ) -> Result<Self> {
        let mut lengths = Vec::with_capacity(wall_count);
        for i in 0..wall_count {
            match map.get(&i) {
                Some(&l) => lengths.push(l),
                None => return Err(Error::MissingWallLength(i)),
            }
        }
        WallWeighting::new(lengths)
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn get(&self, w: usize) -> f64 {
        self.lengths[w]
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }
}

/// The wall-weighted metric `d_l`. Walls are summed in index order, so the
/// result is bitwise deterministic.
pub fn wall_metric(
    m: &FiniteMedianAlgebra,
    walls: &[Wall],
    w: &WallWeighting,
) -> Result<FiniteMetric> {
    if w.len() != walls.len() {
        return Err(Error::MissingWallLength(w.len()));
    }
    let n = m.n();
    let mut dist = vec![0.0; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let mut d = 0.0;
            for (i, wall) in walls.iter().enumerate() {
                if wall.separates(a, b) {
                    d += w.get(i);
                }
            }
            dist[a * n + b] = d;
            dist[b * n + a] = d;
        }
    }
    FiniteMetric::new(m.ids().to_vec(), dist)
}

// ---------------------------------------------------------------------------
// median metric verification
// ---------------------------------------------------------------------------

/// Result of checking whether the three metric intervals of every triple
/// intersect in exactly one point.
#[derive(Clone, Debug)]
pub struct MedianMetricReport {
    pub ok: bool,
    /// First failing triple together with the size of the intersection.
    pub witness: Option<(usize, usize, usize, usize)>,
    median: Option<Vec<u32>>,
}

impl MedianMetricReport {
    /// Intrinsic median table (flat `n^3`), present when `ok`.
    pub fn median_table(&self) -> Option<&[u32]> {
        self.median.as_deref()
    }

    pub fn median(&self, n: usize, x: usize, y: usize, z: usize) -> Option<usize> {
        self.median
            .as_ref()
            .map(|t| t[(x * n + y) * n + z] as usize)
    }

    /// The intrinsic median operation as a table-backed algebra.
    pub fn intrinsic_algebra(&self, ids: Vec<String>) -> Option<FiniteMedianAlgebra> {
        let table = self.median.clone()?;
        FiniteMedianAlgebra::from_table(ids, table).ok()
    }
}

/// For every triple, intersect the three metric intervals; the space is a
/// median metric space iff every intersection is a singleton.
pub fn verify_median_metric(metric: &FiniteMetric) -> MedianMetricReport {
    let n = metric.n();
    // interval membership masks per unordered pair
    let mut masks: Vec<BitSet> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut bs = BitSet::new(n);
            if x <= y {
                for z in 0..n {
                    if metric.between(x, z, y) {
                        bs.set(z);
                    }
                }
            }
            masks.push(bs);
        }
    }
    let mask = |x: usize, y: usize| &masks[x.min(y) * n + x.max(y)];

    let mut median = vec![0u32; n * n * n];
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                let m1 = mask(x, y);
                let m2 = mask(y, z);
                let m3 = mask(x, z);
                let mut found: Option<usize> = None;
                let mut count = 0usize;
                for c in 0..n {
                    if m1.get(c) && m2.get(c) && m3.get(c) {
                        count += 1;
                        if found.is_none() {
                            found = Some(c);
                        }
                    }
                }
                if count != 1 {
                    return MedianMetricReport {
                        ok: false,
                        witness: Some((x, y, z, count)),
                        median: None,
                    };
                }
                let m = found.unwrap() as u32;
                for (a, b, c) in [
                    (x, y, z),
                    (x, z, y),
                    (y, x, z),
                    (y, z, x),
                    (z, x, y),
                    (z, y, x),
                ] {
                    median[(a * n + b) * n + c] = m;
                }
            }
        }
    }
    MedianMetricReport {
        ok: true,
        witness: None,
        median: Some(median),
    }
}

// ---------------------------------------------------------------------------
// metric median algebra instances and rectification
// ---------------------------------------------------------------------------

/// A median algebra carrying an arbitrary metric on the same points
/// (continuity is vacuous on finite sets). The skeleton is computed once at
/// construction.
#[derive(Clone, Debug)]
pub struct MetricMedianAlgebraInstance {
    pub algebra: FiniteMedianAlgebra,
    pub metric: FiniteMetric,
    skeleton: CubeComplexSkeleton,
}

impl MetricMedianAlgebraInstance {
    pub fn new(algebra: FiniteMedianAlgebra, metric: FiniteMetric) -> Result<Self> {
        if algebra.ids() != metric.ids() {
            return Err(Error::MalformedInput(
                "algebra and metric must be on the same ordered point set".into(),
            ));
        }
        let skeleton = one_skeleton(&algebra)?;
        Ok(MetricMedianAlgebraInstance {
            algebra,
            metric,
            skeleton,
        })
    }

    pub fn skeleton(&self) -> &CubeComplexSkeleton {
        &self.skeleton
    }

    pub fn n(&self) -> usize {
        self.algebra.n()
    }

    /// Edge thickness per skeleton edge: `λ(e) = d(e_-, e_+)`.
    pub fn edge_thickness(&self) -> Vec<f64> {
        self.skeleton
            .edges
            .iter()
            .map(|&(a, b)| self.metric.get(a, b))
            .collect()
    }

    /// Per-wall minimal and maximal thickness over the wall's parallel class.
    pub fn wall_thickness(&self) -> Vec<(f64, f64)> {
        let lambda = self.edge_thickness();
        parallel_classes(&self.skeleton)
            .iter()
            .map(|class| {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &e in class {
                    lo = lo.min(lambda[e]);
                    hi = hi.max(lambda[e]);
                }
                (lo, hi)
            })
            .collect()
    }

    /// The rectified metric: wall metric with lengths `λ_max`. Dominates the
    /// input metric pointwise; the domination is asserted.
    pub fn rectified_metric(&self) -> Result<FiniteMetric> {
        let thickness = self.wall_thickness();
        let lengths: Vec<f64> = thickness.iter().map(|&(_, hi)| hi).collect();
        let weighting = WallWeighting::new(lengths)?;
        let rectified = wall_metric(&self.algebra, &self.skeleton.walls, &weighting)?;
        for a in 0..self.n() {
            for b in 0..self.n() {
                if !nearly_le(self.metric.get(a, b), rectified.get(a, b)) {
                    return Err(Error::InternalConsistency {
                        context: "rectified_metric",
                        witness: format!(
                            "d({a},{b}) = {} exceeds rectified {}",
                            self.metric.get(a, b),
                            rectified.get(a, b)
                        ),
                    });
                }
            }
        }
        Ok(rectified)
    }

    /// Rectified distance `d_μ^S(x,y)` of the subalgebra induced on `subset`
    /// (ambient indices; must be median-closed and contain `x`, `y`).
    pub fn rectified_on_subalgebra(&self, subset: &[usize], x: usize, y: usize) -> Result<f64> {
        let sub = self.algebra.induced(subset)?;
        let metric = self.metric.restrict(subset);
        let inst = MetricMedianAlgebraInstance::new(sub, metric)?;
        let rect = inst.rectified_metric()?;
        let pos = |v: usize| {
            subset
                .iter()
                .position(|&i| i == v)
                .ok_or_else(|| Error::MalformedInput(format!("point {v} not in subalgebra")))
        };
        Ok(rect.get(pos(x)?, pos(y)?))
    }
}

/// One nested-subalgebra monotonicity case: `small ⊆ large` med-closed
/// subsets of the ambient carrier with `x, y ∈ small`.
#[derive(Clone, Debug)]
pub struct NestedPairCase {
    pub small: Vec<usize>,
    pub large: Vec<usize>,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    pub checked: usize,
    /// Cases where `d_μ^M(x,y) > d_μ^N(x,y)` beyond tolerance (expected none).
    pub violations: Vec<(usize, f64, f64)>,
}

/// Check `d_μ^M(x,y) <= d_μ^N(x,y)` for each nested pair, both sides
/// computed on the induced subalgebras with the ambient metric.
pub fn check_monotonicity(
    ambient: &MetricMedianAlgebraInstance,
    cases: &[NestedPairCase],
) -> Result<MonotonicityReport> {
    let mut report = MonotonicityReport {
        checked: 0,
        violations: Vec::new(),
    };
    for (idx, case) in cases.iter().enumerate() {
        if !case.small.iter().all(|i| case.large.contains(i)) {
            return Err(Error::MalformedInput(format!(
                "case {idx}: M is not a subset of N"
            )));
        }
        if !case.small.contains(&case.x) || !case.small.contains(&case.y) {
            return Err(Error::MalformedInput(format!(
                "case {idx}: x,y must lie in M"
            )));
        }
        let small = ambient.rectified_on_subalgebra(&case.small, case.x, case.y)?;
        let large = ambient.rectified_on_subalgebra(&case.large, case.x, case.y)?;
        report.checked += 1;
        if !nearly_le(small, large) {
            report.violations.push((idx, small, large));
        }
    }
    Ok(report)
}

/// Finite-scale rectifiability diagnostics: the supremum of
/// `d_μ^M(x,y)/d(x,y)` over sampled subalgebras `M` (always including the
/// full carrier) and all pairs in them, plus the largest wall spread
/// `λ_max/λ_min` observed.
#[derive(Clone, Debug)]
pub struct RectifiabilityDiagnostics {
    pub ratio_sup: f64,
    pub spread_sup: f64,
    pub subalgebras_sampled: usize,
}

pub fn rectifiability_diagnostics(
    inst: &MetricMedianAlgebraInstance,
    samples: usize,
    seed: u64,
) -> Result<RectifiabilityDiagnostics> {
    use rand::Rng;
    let n = inst.n();
    let mut subalgebras: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut rng = crate::sampling::task_rng(seed, 0x726563); // "rec"
    for _ in 0..samples {
        let size = rng.gen_range(1..=n.min(4));
        let gens = crate::sampling::random_subset(n, size, &mut rng);
        subalgebras.push(inst.algebra.median_closure(&gens)?);
    }
    let mut ratio_sup = f64::NEG_INFINITY;
    let mut spread_sup = f64::NEG_INFINITY;
    for subset in &subalgebras {
        let sub = inst.algebra.induced(subset)?;
        let metric = inst.metric.restrict(subset);
        let sub_inst = MetricMedianAlgebraInstance::new(sub, metric)?;
        for (lo, hi) in sub_inst.wall_thickness() {
            spread_sup = spread_sup.max(hi / lo);
        }
        let rect = sub_inst.rectified_metric()?;
        for a in 0..subset.len() {
            for b in a + 1..subset.len() {
                ratio_sup = ratio_sup.max(rect.get(a, b) / sub_inst.metric.get(a, b));
            }
        }
    }
    if !ratio_sup.is_finite() {
        ratio_sup = 1.0; // no pair sampled (singleton carrier)
    }
    if !spread_sup.is_finite() {
        spread_sup = 1.0;
    }
    Ok(RectifiabilityDiagnostics {
        ratio_sup,
        spread_sup,
        subalgebras_sampled: subalgebras.len(),
    })
}

/// Seeded perturbation of a metric: multiply each entry by `1 + rel*u` with
/// `u` uniform in `[0,1)`, then repair the triangle inequality by taking the
/// shortest-path closure of the perturbed weights.
pub fn perturbed_metric(base: &FiniteMetric, rel: f64, seed: u64) -> FiniteMetric {
    use rand::Rng;
    let n = base.n();
    let mut rng = crate::sampling::task_rng(seed, 0x706572); // "per"
    let mut dist = vec![0.0; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let factor = 1.0 + rel * rng.gen::<f64>();
            let d = base.get(a, b) * factor;
            dist[a * n + b] = d;
            dist[b * n + a] = d;
        }
    }
    // Floyd–Warshall closure restores the triangle inequality
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i * n + k] + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
    FiniteMetric::new(base.ids().to_vec(), dist).expect("shortest-path closure is a metric")
}

/// The skeleton graph metric of an algebra (unit length on every wall).
pub fn unit_wall_instance(algebra: &FiniteMedianAlgebra) -> Result<MetricMedianAlgebraInstance> {
    let walls = algebra.enumerate_walls()?;
    let metric = wall_metric(algebra, &walls, &WallWeighting::unit(walls.len()))?;
    MetricMedianAlgebraInstance::new(algebra.clone(), metric)
}

/// Does `metric` equal the separating wall-length sum everywhere?
pub fn metric_equals_wall_sum(
    metric: &FiniteMetric,
    walls: &[Wall],
    lengths: &WallWeighting,
) -> bool {
    let n = metric.n();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let sum: f64 = separating_walls(walls, a, b)
                .iter()
                .map(|&w| lengths.get(w))
                .sum();
            nearly_eq(metric.get(a, b), sum)
        })
    })
}
