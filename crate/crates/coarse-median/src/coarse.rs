//! Concrete coarse median spaces and the structure-level calculus.
//!
//! Models:
//!
//! * integer boxes and disks in `Z^n` with the coordinatewise median, under
//!   the `ℓ1` or Euclidean metric (the exact median algebra case and the
//!   rotation counterexample live here);
//! * connected graphs with the center-of-tripod median: for each triple,
//!   geodesics are chosen deterministically (BFS parents with a lexicographic
//!   or reverse-lexicographic tie-break) and the median is the vertex
//!   minimizing the maximal distance to the three sides;
//! * transported medians `f ∘ μ ∘ (g×g×g)` along quasi-isometries
//!   (pushforward / pullback).
//!
//! Parameters `(k, h(0))` are either declared exactly (lattice models) or
//! measured on the carrier. Closeness of two medians and invariance defects
//! under isometries are measured exhaustively on small carriers and by
//! seeded sampling otherwise.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::nearly_eq;
use crate::sampling::task_rng;

/// Carriers up to this size allow exhaustive triple scans.
pub const EXHAUSTIVE_TRIPLE_CAP: usize = 64;

/// Carriers up to this size allow exhaustive parameter measurement
/// (a quartic scan).
pub const EXHAUSTIVE_PARAM_CAP: usize = 64;

/// Coarse-median parameters: the multiplicative constant of condition (i)
/// and the additive constant `h(0)`. At finite scale only `h(0)` of the
/// non-decreasing function `h` is consumed; per-subset defects are measured
/// and reported by the resolvers instead of being declared here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoarseParams {
    pub k: f64,
    pub h0: f64,
}

/// Exhaustive-or-sampled evaluation switch shared by the measuring
/// operations.
#[derive(Clone, Copy, Debug)]
pub enum Mode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Result of a sup-measurement over triples.
#[derive(Clone, Copy, Debug)]
pub struct ClosenessEstimate {
    pub sup_observed: f64,
    pub exhaustive: bool,
    pub sample_count: u64,
    pub seed: Option<u64>,
}

/// Geodesic / argmin tie-break policy for graph models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    Lex,
    RevLex,
}

// ---------------------------------------------------------------------------
// graph carrier
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct GraphModel {
    adj: Vec<Vec<usize>>,
    dist: Vec<u32>,
    tie: TieBreak,
    /// Per unordered pair `(a <= b)`, the chosen geodesic vertex set and the
    /// distance of every vertex to it.
    sides: Vec<Vec<u32>>,
    side_dist: Vec<Vec<u32>>,
    center_quality_max: OnceLock<u32>,
    delta_four_point: OnceLock<f64>,
}

impl GraphModel {
    fn build(adj: Vec<Vec<usize>>, tie: TieBreak) -> Result<Self> {
        let n = adj.len();
        let dist = crate::algebra::bfs_all_pairs(&adj)?;
        let mut sides = vec![Vec::new(); n * n];
        let mut side_dist = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in a..n {
                let side = geodesic(&adj, &dist, n, tie, a, b);
                let sd = multi_source_bfs(&adj, &side);
                sides[a * n + b] = side;
                side_dist[a * n + b] = sd;
            }
        }
        Ok(GraphModel {
            adj,
            dist,
            tie,
            sides,
            side_dist,
            center_quality_max: OnceLock::new(),
            delta_four_point: OnceLock::new(),
        })
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn dist(&self, a: usize, b: usize) -> u32 {
        self.dist[a * self.n() + b]
    }

    /// The chosen geodesic between `a` and `b` (vertex list, path order).
    pub fn geodesic(&self, a: usize, b: usize) -> &[u32] {
        let (a, b) = (a.min(b), a.max(b));
        &self.sides[a * self.n() + b]
    }

    fn side_distance(&self, v: usize, a: usize, b: usize) -> u32 {
        let (a, b) = (a.min(b), a.max(b));
        self.side_dist[a * self.n() + b][v]
    }

    /// Center of the geodesic triangle on `{x,y,z}`: the vertex minimizing
    /// the maximal distance to the three sides, ties by policy. Returns the
    /// center and its quality.
    pub fn center(&self, x: usize, y: usize, z: usize) -> (usize, u32) {
        let mut t = [x, y, z];
        t.sort_unstable();
        let [p, q, r] = t;
        let mut best_v = usize::MAX;
        let mut best_q = u32::MAX;
        for v in 0..self.n() {
            let quality = self
                .side_distance(v, p, q)
                .max(self.side_distance(v, q, r))
                .max(self.side_distance(v, p, r));
            let wins = match self.tie {
                TieBreak::Lex => quality < best_q,
                TieBreak::RevLex => quality <= best_q,
            };
            if wins {
                best_q = quality;
                best_v = v;
            }
        }
        (best_v, best_q)
    }

    /// `K(graph)`: the worst center quality over all triples.
    pub fn center_quality_max(&self) -> u32 {
        *self.center_quality_max.get_or_init(|| {
            let n = self.n();
            let mut worst = 0;
            for x in 0..n {
                for y in x..n {
                    for z in y..n {
                        worst = worst.max(self.center(x, y, z).1);
                    }
                }
            }
            worst
        })
    }

    /// Gromov four-point condition constant of the graph metric: half the
    /// gap between the two largest of the three pairwise sums, maximized
    /// over all quadruples.
    pub fn delta_four_point(&self) -> f64 {
        *self.delta_four_point.get_or_init(|| {
            let n = self.n();
            let mut worst = 0u32;
            for x in 0..n {
                for y in x..n {
                    for z in y..n {
                        for w in z..n {
                            let s1 = self.dist(x, y) + self.dist(z, w);
                            let s2 = self.dist(x, z) + self.dist(y, w);
                            let s3 = self.dist(x, w) + self.dist(y, z);
                            let top = s1.max(s2).max(s3);
                            let low = s1.min(s2).min(s3);
                            let mid = s1 + s2 + s3 - top - low;
                            worst = worst.max(top - mid);
                        }
                    }
                }
            }
            worst as f64 / 2.0
        })
    }
}

/// Deterministic geodesic: walk back from `b` through BFS-style parents;
/// the parent of `v` is the smallest (Lex) or largest (RevLex) neighbor one
/// step closer to `a`.
fn geodesic(
    adj: &[Vec<usize>],
    dist: &[u32],
    n: usize,
    tie: TieBreak,
    a: usize,
    b: usize,
) -> Vec<u32> {
    let d = |u: usize, v: usize| dist[u * n + v];
    let mut path = vec![b as u32];
    let mut v = b;
    while v != a {
        let target = d(a, v) - 1;
        let parent = match tie {
            TieBreak::Lex => adj[v].iter().copied().find(|&u| d(a, u) == target),
            TieBreak::RevLex => adj[v].iter().copied().rev().find(|&u| d(a, u) == target),
        }
        .expect("connected graph has a predecessor on every geodesic");
        path.push(parent as u32);
        v = parent;
    }
    path.reverse();
    path
}

fn multi_source_bfs(adj: &[Vec<usize>], sources: &[u32]) -> Vec<u32> {
    let n = adj.len();
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        dist[s as usize] = 0;
        queue.push_back(s as usize);
    }
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

// ---------------------------------------------------------------------------
// the coarse median space
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum SpaceKind {
    Lattice {
        coords: Vec<Vec<i64>>,
        index: HashMap<Vec<i64>, usize>,
        euclidean: bool,
        /// Conjugating rotation angle for the median (2-d carriers only):
        /// `μ'(x,y,z) = snap(A^{-1} med(Ax, Ay, Az))`.
        rotation: Option<f64>,
    },
    Graph(GraphModel),
    /// Explicit tables: an arbitrary finite metric with an arbitrary
    /// ternary operation (used to expose exact median algebras as coarse
    /// median spaces).
    Table {
        dist: Vec<f64>,
        med: Vec<u32>,
    },
    Transported {
        base: Box<CoarseMedianSpace>,
        /// Distance donor on this carrier.
        carrier: Box<CoarseMedianSpace>,
        /// Carrier index -> base index (applied to the three arguments).
        to_base: Vec<usize>,
        /// Base index -> carrier index (applied to the result).
        from_base: Vec<usize>,
    },
}

/// A finite carrier with a metric, a ternary operation, declared or
/// measured parameters, and an optional rank bound.
#[derive(Debug)]
pub struct CoarseMedianSpace {
    ids: Vec<String>,
    kind: SpaceKind,
    pub params: CoarseParams,
    /// Whether `params` are exact/exhaustively measured (as opposed to a
    /// sampled lower estimate).
    pub params_exact: bool,
    pub rank_bound: Option<u32>,
}

impl CoarseMedianSpace {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        match &self.kind {
            SpaceKind::Lattice {
                coords, euclidean, ..
            } => {
                let (p, q) = (&coords[a], &coords[b]);
                if *euclidean {
                    p.iter()
                        .zip(q)
                        .map(|(&x, &y)| ((x - y) as f64).powi(2))
                        .sum::<f64>()
                        .sqrt()
                } else {
                    p.iter()
                        .zip(q)
                        .map(|(&x, &y)| (x - y).abs() as f64)
                        .sum::<f64>()
                }
            }
            SpaceKind::Graph(g) => g.dist(a, b) as f64,
            SpaceKind::Table { dist, .. } => dist[a * self.len() + b],
            SpaceKind::Transported { carrier, .. } => carrier.dist(a, b),
        }
    }

    pub fn median(&self, x: usize, y: usize, z: usize) -> usize {
        match &self.kind {
            SpaceKind::Lattice {
                coords,
                index,
                rotation,
                ..
            } => match rotation {
                None => {
                    let med: Vec<i64> = (0..coords[x].len())
                        .map(|c| crate::algebra::median3(coords[x][c], coords[y][c], coords[z][c]))
                        .collect();
                    *index
                        .get(&med)
                        .expect("carrier is closed under the coordinatewise median")
                }
                Some(angle) => {
                    let rot = |p: &[i64], sign: f64| {
                        let (s, c) = (angle * sign).sin_cos();
                        let (px, py) = (p[0] as f64, p[1] as f64);
                        [c * px - s * py, s * px + c * py]
                    };
                    let (ax, ay, az) = (
                        rot(&coords[x], 1.0),
                        rot(&coords[y], 1.0),
                        rot(&coords[z], 1.0),
                    );
                    let med = [
                        median3_f64(ax[0], ay[0], az[0]),
                        median3_f64(ax[1], ay[1], az[1]),
                    ];
                    let (s, c) = (-angle).sin_cos();
                    let back = [c * med[0] - s * med[1], s * med[0] + c * med[1]];
                    self.snap(&back)
                }
            },
            SpaceKind::Graph(g) => g.center(x, y, z).0,
            SpaceKind::Table { med, .. } => {
                let n = self.len();
                med[(x * n + y) * n + z] as usize
            }
            SpaceKind::Transported {
                base,
                to_base,
                from_base,
                ..
            } => from_base[base.median(to_base[x], to_base[y], to_base[z])],
        }
    }

    /// Lattice coordinates of the carrier, when it is lattice-backed.
    pub fn lattice_coords(&self) -> Option<&[Vec<i64>]> {
        match &self.kind {
            SpaceKind::Lattice { coords, .. } => Some(coords),
            _ => None,
        }
    }

    /// Index of a lattice point on the carrier.
    pub fn lattice_index(&self, point: &[i64]) -> Option<usize> {
        match &self.kind {
            SpaceKind::Lattice { index, .. } => index.get(point).copied(),
            _ => None,
        }
    }

    /// The graph machinery, when the carrier is a graph model.
    pub fn graph(&self) -> Option<&GraphModel> {
        match &self.kind {
            SpaceKind::Graph(g) => Some(g),
            _ => None,
        }
    }

    /// Nearest carrier point to a real position: smallest Euclidean
    /// distance, lexicographic on ties. Deterministic ring search.
    fn snap(&self, point: &[f64]) -> usize {
        let SpaceKind::Lattice { coords, index, .. } = &self.kind else {
            unreachable!("snap is only called on lattice carriers");
        };
        let rounded: Vec<i64> = point.iter().map(|&v| v.round() as i64).collect();
        let dim = rounded.len();
        let norm2 = |c: &[i64]| -> f64 {
            c.iter()
                .zip(point)
                .map(|(&a, &b)| (a as f64 - b).powi(2))
                .sum()
        };
        let mut best: Option<(f64, Vec<i64>, usize)> = None;
        let mut radius = 0i64;
        loop {
            let mut offsets = ring_offsets(dim, radius);
            offsets.sort();
            for off in offsets {
                let cand: Vec<i64> = rounded.iter().zip(&off).map(|(&a, &b)| a + b).collect();
                if let Some(&i) = index.get(&cand) {
                    let d2 = norm2(&coords[i]);
                    let better = match &best {
                        None => true,
                        Some((bd, bc, _)) => d2 < *bd || (d2 == *bd && cand < *bc),
                    };
                    if better {
                        best = Some((d2, cand, i));
                    }
                }
            }
            if let Some((bd, _, i)) = &best {
                // a ring-r candidate sits at Euclidean distance >= r - 0.5
                // from the query (rounding moves each coordinate by at most
                // a half), so rings at r >= best + 0.5 cannot improve
                if (radius as f64) - 0.5 >= bd.sqrt() {
                    return *i;
                }
            }
            radius += 1;
            assert!(
                radius < 1_000_000,
                "snap search diverged: point far outside the carrier"
            );
        }
    }
}

fn median3_f64(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.max(c)).min(b.max(c))
}

fn ring_offsets(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    fn rec(dim: usize, radius: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if acc.len() == dim {
            if acc.iter().map(|v| v.abs()).max().unwrap_or(0) == radius {
                out.push(acc.clone());
            }
            return;
        }
        for v in -radius..=radius {
            acc.push(v);
            rec(dim, radius, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, radius, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// model constructors
// ---------------------------------------------------------------------------

const LATTICE_POINT_CAP: usize = 200_000;

fn lattice_space(
    coords: Vec<Vec<i64>>,
    euclidean: bool,
    rank_bound: u32,
) -> Result<CoarseMedianSpace> {
    if coords.is_empty() {
        return Err(Error::MalformedInput(
            "lattice carrier must be non-empty".into(),
        ));
    }
    if coords.len() > LATTICE_POINT_CAP {
        return Err(Error::SizeCapExceeded {
            what: "lattice carrier",
            got: coords.len(),
            cap: LATTICE_POINT_CAP,
        });
    }
    let ids = coords
        .iter()
        .map(|c| crate::algebra::lattice_id(c))
        .collect();
    let mut index = HashMap::with_capacity(coords.len());
    for (i, c) in coords.iter().enumerate() {
        index.insert(c.clone(), i);
    }
    Ok(CoarseMedianSpace {
        ids,
        kind: SpaceKind::Lattice {
            coords,
            index,
            euclidean,
            rotation: None,
        },
        // the coordinatewise median on a box or centered disk is exactly
        // 1-Lipschitz in each argument
        params: CoarseParams { k: 1.0, h0: 0.0 },
        params_exact: true,
        rank_bound: Some(rank_bound),
    })
}

/// Integer box in `Z^n` under the `ℓ1` metric with the coordinatewise
/// median: an exact median algebra, parameters `(k, h0) = (1, 0)`.
pub fn l1_lattice_model(ranges: &[(i64, i64)]) -> Result<CoarseMedianSpace> {
    if ranges.is_empty() || ranges.iter().any(|&(lo, hi)| lo > hi) {
        return Err(Error::MalformedInput("box ranges must be non-empty".into()));
    }
    let mut coords = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for c in coords {
            for v in lo..=hi {
                let mut c2: Vec<i64> = c.clone();
                c2.push(v);
                next.push(c2);
            }
        }
        coords = next;
        if coords.len() > LATTICE_POINT_CAP {
            return Err(Error::SizeCapExceeded {
                what: "lattice box",
                got: coords.len(),
                cap: LATTICE_POINT_CAP,
            });
        }
    }
    coords.sort();
    lattice_space(coords, false, ranges.len() as u32)
}

/// Lattice points of the closed Euclidean disk of the given radius in
/// `Z^2`, with the `ℓ1`-median as coarse median and the Euclidean metric.
pub fn euclidean_disk_model(radius: i64) -> Result<CoarseMedianSpace> {
    if radius < 0 {
        return Err(Error::MalformedInput("radius must be non-negative".into()));
    }
    let mut coords = Vec::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            if x * x + y * y <= radius * radius {
                coords.push(vec![x, y]);
            }
        }
    }
    coords.sort();
    lattice_space(coords, true, 2)
}

/// Conjugate the median of a 2-d lattice model by a rotation around the
/// origin: `μ'(x,y,z) = snap(A^{-1} μ(Ax, Ay, Az))`. Parameters are
/// re-measured in the given mode.
pub fn conjugate_by_rotation(
    space: &CoarseMedianSpace,
    angle: f64,
    mode: Mode,
) -> Result<CoarseMedianSpace> {
    let SpaceKind::Lattice {
        coords,
        index,
        euclidean,
        ..
    } = &space.kind
    else {
        return Err(Error::MalformedInput(
            "rotation conjugation needs a lattice carrier".into(),
        ));
    };
    if coords[0].len() != 2 {
        return Err(Error::MalformedInput(
            "rotation conjugation is two-dimensional".into(),
        ));
    }
    let mut out = CoarseMedianSpace {
        ids: space.ids.clone(),
        kind: SpaceKind::Lattice {
            coords: coords.clone(),
            index: index.clone(),
            euclidean: *euclidean,
            rotation: Some(angle),
        },
        params: CoarseParams {
            k: f64::NAN,
            h0: 0.0,
        },
        params_exact: matches!(mode, Mode::Exhaustive),
        rank_bound: space.rank_bound,
    };
    out.params = measure_params(&out, mode)?;
    Ok(out)
}

/// Graph model with the default lexicographic tie-break.
pub fn graph_model(adj: Vec<Vec<usize>>) -> Result<CoarseMedianSpace> {
    graph_model_with_tie(adj, TieBreak::Lex)
}

/// A finite median algebra as a coarse median space: its own median on the
/// skeleton graph metric (the intrinsic median of a median metric space is
/// 1-Lipschitz, so parameters `(1, 0)` are declared exactly). Materializes
/// the full median table, so carriers are capped at 128 points.
pub fn algebra_model(alg: &crate::algebra::FiniteMedianAlgebra) -> Result<CoarseMedianSpace> {
    if alg.n() > crate::algebra::TABLE_LIMIT {
        return Err(Error::SizeCapExceeded {
            what: "algebra model",
            got: alg.n(),
            cap: crate::algebra::TABLE_LIMIT,
        });
    }
    let skel = crate::complex::one_skeleton(alg)?;
    let n = alg.n();
    let graph_dist = skel.distances()?;
    let dist: Vec<f64> = graph_dist.iter().map(|&d| d as f64).collect();
    let mut med = vec![0u32; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                med[(x * n + y) * n + z] = alg.med(x, y, z) as u32;
            }
        }
    }
    Ok(CoarseMedianSpace {
        ids: alg.ids().to_vec(),
        kind: SpaceKind::Table { dist, med },
        params: CoarseParams { k: 1.0, h0: 0.0 },
        params_exact: true,
        rank_bound: None,
    })
}

/// Connected-graph coarse median model: graph metric, tripod-center median.
/// Parameters are measured exhaustively for carriers up to
/// [`EXHAUSTIVE_PARAM_CAP`] vertices and by seeded sampling beyond.
pub fn graph_model_with_tie(mut adj: Vec<Vec<usize>>, tie: TieBreak) -> Result<CoarseMedianSpace> {
    let n = adj.len();
    if n == 0 {
        return Err(Error::MalformedInput(
            "graph must have at least one vertex".into(),
        ));
    }
    for (v, nbrs) in adj.iter_mut().enumerate() {
        nbrs.sort_unstable();
        nbrs.dedup();
        if nbrs.iter().any(|&u| u >= n || u == v) {
            return Err(Error::MalformedInput(format!(
                "bad neighbor list at vertex {v}"
            )));
        }
    }
    let ids = (0..n).map(|i| i.to_string()).collect();
    let model = GraphModel::build(adj, tie)?;
    let mut space = CoarseMedianSpace {
        ids,
        kind: SpaceKind::Graph(model),
        params: CoarseParams {
            k: f64::NAN,
            h0: 0.0,
        },
        params_exact: n <= EXHAUSTIVE_PARAM_CAP,
        rank_bound: None,
    };
    let mode = if n <= EXHAUSTIVE_PARAM_CAP {
        Mode::Exhaustive
    } else {
        Mode::Sampled {
            samples: 100_000,
            seed: 0,
        }
    };
    space.params = measure_params(&space, mode)?;
    Ok(space)
}

/// Graph model from an edge list.
pub fn graph_model_from_edges(
    n: usize,
    edges: &[(usize, usize)],
    tie: TieBreak,
) -> Result<CoarseMedianSpace> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n || a == b {
            return Err(Error::MalformedInput(format!("bad edge ({a},{b})")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    graph_model_with_tie(adj, tie)
}

// ---------------------------------------------------------------------------
// parameter and closeness measurement
// ---------------------------------------------------------------------------

/// Measure `(k, h0)` for the coarse-Lipschitz condition on the carrier, as
/// the worst ratio `d(μ(a,b,c), μ(a,b,c')) / d(c,c')` over one-argument
/// changes (the medians here are symmetric, so the three-argument
/// inequality follows by telescoping with the same constant and `h0 = 0`).
pub fn measure_params(space: &CoarseMedianSpace, mode: Mode) -> Result<CoarseParams> {
    let n = space.len();
    let mut k: f64 = 1.0;
    match mode {
        Mode::Exhaustive => {
            if n > EXHAUSTIVE_PARAM_CAP {
                return Err(Error::ExhaustiveCapExceeded {
                    got: n,
                    cap: EXHAUSTIVE_PARAM_CAP,
                });
            }
            let mut meds = vec![0usize; n];
            for a in 0..n {
                for b in 0..n {
                    for (c, slot) in meds.iter_mut().enumerate() {
                        *slot = space.median(a, b, c);
                    }
                    for c in 0..n {
                        for c2 in c + 1..n {
                            let num = space.dist(meds[c], meds[c2]);
                            let den = space.dist(c, c2);
                            if den > 0.0 {
                                k = k.max(num / den);
                            }
                        }
                    }
                }
            }
        }
        Mode::Sampled { samples, seed } => {
            let mut rng = task_rng(seed, 0x706172); // "par"
            for _ in 0..samples {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                let c = rng.gen_range(0..n);
                let c2 = rng.gen_range(0..n);
                if c == c2 {
                    continue;
                }
                let num = space.dist(space.median(a, b, c), space.median(a, b, c2));
                let den = space.dist(c, c2);
                if den > 0.0 {
                    k = k.max(num / den);
                }
            }
        }
    }
    Ok(CoarseParams { k, h0: 0.0 })
}

/// Sup of `d(μ1(t), μ2(t))` over triples of the shared carrier.
pub fn closeness_distance(
    a: &CoarseMedianSpace,
    b: &CoarseMedianSpace,
    mode: Mode,
) -> Result<ClosenessEstimate> {
    if a.len() != b.len() {
        return Err(Error::MalformedInput(
            "closeness needs a shared carrier".into(),
        ));
    }
    let n = a.len();
    let mut sup: f64 = 0.0;
    match mode {
        Mode::Exhaustive => {
            if n > EXHAUSTIVE_TRIPLE_CAP {
                return Err(Error::ExhaustiveCapExceeded {
                    got: n,
                    cap: EXHAUSTIVE_TRIPLE_CAP,
                });
            }
            for x in 0..n {
                for y in x..n {
                    for z in y..n {
                        sup = sup.max(a.dist(a.median(x, y, z), b.median(x, y, z)));
                    }
                }
            }
            Ok(ClosenessEstimate {
                sup_observed: sup,
                exhaustive: true,
                sample_count: (n * (n + 1) * (n + 2) / 6) as u64,
                seed: None,
            })
        }
        Mode::Sampled { samples, seed } => {
            let mut rng = task_rng(seed, 0x636c6f); // "clo"
            for _ in 0..samples {
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                let z = rng.gen_range(0..n);
                sup = sup.max(a.dist(a.median(x, y, z), b.median(x, y, z)));
            }
            Ok(ClosenessEstimate {
                sup_observed: sup,
                exhaustive: false,
                sample_count: samples,
                seed: Some(seed),
            })
        }
    }
}

/// Sup of `d(μ(gx, gy, gz), g μ(x,y,z))` over carrier isometries `g`
/// (permutations) and triples. Errors when a transformation is not an
/// isometry.
pub fn invariance_defect(
    space: &CoarseMedianSpace,
    transformations: &[Vec<usize>],
    mode: Mode,
) -> Result<f64> {
    let n = space.len();
    for (t, g) in transformations.iter().enumerate() {
        if g.len() != n {
            return Err(Error::MalformedInput(format!(
                "transformation {t} has wrong length"
            )));
        }
        for a in 0..n {
            for b in a + 1..n {
                if !nearly_eq(space.dist(g[a], g[b]), space.dist(a, b)) {
                    return Err(Error::NotAnIsometry { index: t, a, b });
                }
            }
        }
    }
    let mut sup: f64 = 0.0;
    let eval = |g: &Vec<usize>, x: usize, y: usize, z: usize| -> f64 {
        let lhs = space.median(g[x], g[y], g[z]);
        let rhs = g[space.median(x, y, z)];
        space.dist(lhs, rhs)
    };
    match mode {
        Mode::Exhaustive => {
            if n > EXHAUSTIVE_TRIPLE_CAP {
                return Err(Error::ExhaustiveCapExceeded {
                    got: n,
                    cap: EXHAUSTIVE_TRIPLE_CAP,
                });
            }
            for g in transformations {
                for x in 0..n {
                    for y in x..n {
                        for z in y..n {
                            sup = sup.max(eval(g, x, y, z));
                        }
                    }
                }
            }
        }
        Mode::Sampled { samples, seed } => {
            let mut rng = task_rng(seed, 0x696e76); // "inv"
            for _ in 0..samples {
                let g = &transformations[rng.gen_range(0..transformations.len())];
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                let z = rng.gen_range(0..n);
                sup = sup.max(eval(g, x, y, z));
            }
        }
    }
    Ok(sup)
}

// ---------------------------------------------------------------------------
// quasi-isometries: pushforward and pullback
// ---------------------------------------------------------------------------

/// Measured quasi-isometry constants of a forward/backward map pair.
#[derive(Clone, Copy, Debug)]
pub struct QiConstants {
    /// Multiplicative and additive distortion of the forward map.
    pub mult: f64,
    pub add: f64,
    /// Sup distances of `g∘f` and `f∘g` from the identities.
    pub back_forth: f64,
    pub forth_back: f64,
}

/// A quasi-isometry between two finite carriers, as explicit index maps
/// with constants measured on construction (recorded, never assumed).
#[derive(Clone, Debug)]
pub struct QuasiIsometryPair {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
    pub constants: QiConstants,
}

impl QuasiIsometryPair {
    pub fn measure(
        from: &CoarseMedianSpace,
        to: &CoarseMedianSpace,
        forward: Vec<usize>,
        backward: Vec<usize>,
    ) -> Result<Self> {
        if forward.len() != from.len() || backward.len() != to.len() {
            return Err(Error::MalformedInput(
                "map lengths do not match carriers".into(),
            ));
        }
        if forward.iter().any(|&y| y >= to.len()) || backward.iter().any(|&x| x >= from.len()) {
            return Err(Error::MalformedInput("map image out of range".into()));
        }
        let mut pairs = Vec::new();
        for a in 0..from.len() {
            for b in a + 1..from.len() {
                pairs.push((from.dist(a, b), to.dist(forward[a], forward[b])));
            }
        }
        let (mult, add) = crate::approx::fit_distortion(&pairs);
        let mut back_forth: f64 = 0.0;
        for a in 0..from.len() {
            back_forth = back_forth.max(from.dist(backward[forward[a]], a));
        }
        let mut forth_back: f64 = 0.0;
        for y in 0..to.len() {
            forth_back = forth_back.max(to.dist(forward[backward[y]], y));
        }
        Ok(QuasiIsometryPair {
            forward,
            backward,
            constants: QiConstants {
                mult,
                add,
                back_forth,
                forth_back,
            },
        })
    }
}

/// Pushforward `f_* μ_X = f ∘ μ_X ∘ (g×g×g)` as a coarse median on the
/// carrier of `target`; parameters re-measured in the given mode.
pub fn pushforward(
    qi: &QuasiIsometryPair,
    source: &CoarseMedianSpace,
    target: &CoarseMedianSpace,
    mode: Mode,
) -> Result<CoarseMedianSpace> {
    transported(
        source,
        target,
        qi.backward.clone(),
        qi.forward.clone(),
        mode,
    )
}

/// Pullback `f^* μ_Y = g ∘ μ_Y ∘ (f×f×f)` as a coarse median on the carrier
/// of `source`.
pub fn pullback(
    qi: &QuasiIsometryPair,
    target: &CoarseMedianSpace,
    source: &CoarseMedianSpace,
    mode: Mode,
) -> Result<CoarseMedianSpace> {
    transported(
        target,
        source,
        qi.forward.clone(),
        qi.backward.clone(),
        mode,
    )
}

fn transported(
    median_donor: &CoarseMedianSpace,
    carrier: &CoarseMedianSpace,
    to_base: Vec<usize>,
    from_base: Vec<usize>,
    mode: Mode,
) -> Result<CoarseMedianSpace> {
    if to_base.len() != carrier.len() || from_base.len() != median_donor.len() {
        return Err(Error::MalformedInput(
            "transport maps do not match carriers".into(),
        ));
    }
    let mut out = CoarseMedianSpace {
        ids: carrier.ids.clone(),
        kind: SpaceKind::Transported {
            base: Box::new(median_donor.clone()),
            carrier: Box::new(carrier.clone()),
            to_base,
            from_base,
        },
        params: CoarseParams {
            k: f64::NAN,
            h0: 0.0,
        },
        params_exact: matches!(mode, Mode::Exhaustive),
        rank_bound: median_donor.rank_bound,
    };
    out.params = measure_params(&out, mode)?;
    Ok(out)
}

impl Clone for CoarseMedianSpace {
    fn clone(&self) -> Self {
        let kind = match &self.kind {
            SpaceKind::Lattice {
                coords,
                index,
                euclidean,
                rotation,
            } => SpaceKind::Lattice {
                coords: coords.clone(),
                index: index.clone(),
                euclidean: *euclidean,
                rotation: *rotation,
            },
            SpaceKind::Graph(g) => SpaceKind::Graph(GraphModel {
                adj: g.adj.clone(),
                dist: g.dist.clone(),
                tie: g.tie,
                sides: g.sides.clone(),
                side_dist: g.side_dist.clone(),
                center_quality_max: g.center_quality_max.clone(),
                delta_four_point: g.delta_four_point.clone(),
            }),
            SpaceKind::Table { dist, med } => SpaceKind::Table {
                dist: dist.clone(),
                med: med.clone(),
            },
            SpaceKind::Transported {
                base,
                carrier,
                to_base,
                from_base,
            } => SpaceKind::Transported {
                base: base.clone(),
                carrier: carrier.clone(),
                to_base: to_base.clone(),
                from_base: from_base.clone(),
            },
        };
        CoarseMedianSpace {
            ids: self.ids.clone(),
            kind,
            params: self.params,
            params_exact: self.params_exact,
            rank_bound: self.rank_bound,
        }
    }
}

// ---------------------------------------------------------------------------
// the rotation example
// ---------------------------------------------------------------------------

/// Gap of the rotation example: with `x = (k,0)`, `y = (0,k)` and `A` the
/// rotation by `angle` around the origin,
/// `‖μ(Ax, Ay, A·0) − A μ(x, y, 0)‖_2` for the coordinatewise median `μ`.
/// At `angle = π/4` this equals `k/√2`.
pub fn euclidean_rotation_gap(k_scale: f64, angle: f64) -> f64 {
    let (s, c) = angle.sin_cos();
    let rot = |p: [f64; 2]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
    let x = [k_scale, 0.0];
    let y = [0.0, k_scale];
    let zero = [0.0, 0.0];
    let med = |a: [f64; 2], b: [f64; 2], cc: [f64; 2]| {
        [
            median3_f64(a[0], b[0], cc[0]),
            median3_f64(a[1], b[1], cc[1]),
        ]
    };
    let lhs = med(rot(x), rot(y), rot(zero));
    let rhs = rot(med(x, y, zero));
    ((lhs[0] - rhs[0]).powi(2) + (lhs[1] - rhs[1]).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn box_model(side: i64) -> CoarseMedianSpace {
        l1_lattice_model(&[(0, side - 1), (0, side - 1)]).unwrap()
    }

    #[test]
    fn lattice_median_is_coordinatewise() {
        let m = l1_lattice_model(&[(0, 2), (0, 5)]).unwrap();
        let p = |x: i64, y: i64| m.lattice_index(&[x, y]).unwrap();
        assert_eq!(m.median(p(0, 0), p(2, 0), p(1, 5)), p(1, 0));
        // absorption
        assert_eq!(m.median(p(0, 3), p(0, 3), p(2, 1)), p(0, 3));
    }

    #[test]
    fn lattice_condition_i_holds_exactly() {
        let m = box_model(10);
        let n = m.len();
        let mut rng = task_rng(42, 2);
        for _ in 0..10_000 {
            let t: [usize; 6] = std::array::from_fn(|_| rng.gen_range(0..n));
            let lhs = m.dist(m.median(t[0], t[1], t[2]), m.median(t[3], t[4], t[5]));
            let rhs = m.dist(t[0], t[3]) + m.dist(t[1], t[4]) + m.dist(t[2], t[5]);
            assert!(lhs <= rhs, "k=1, h0=0 violated: {lhs} > {rhs}");
        }
    }

    #[test]
    fn rotation_gap_reproduces_the_quarter_turn_value() {
        for k in [1.0, 2.0, 50.0, 100.0] {
            let gap = euclidean_rotation_gap(k, FRAC_PI_4);
            assert!((gap - k / 2f64.sqrt()).abs() < 1e-9, "k={k}: {gap}");
        }
        assert!(euclidean_rotation_gap(7.0, FRAC_PI_2) < 1e-9);
        assert_eq!(euclidean_rotation_gap(7.0, 0.0), 0.0);
    }

    #[test]
    fn tree_graph_center_is_the_tree_median() {
        // centers must coincide with the median algebra of the same tree,
        // and K = 0
        let edges = [(0usize, 1usize), (1, 2), (1, 3), (3, 4), (3, 5)];
        let space = graph_model_from_edges(6, &edges, TieBreak::Lex).unwrap();
        let alg = crate::algebra::FiniteMedianAlgebra::from_tree_edges(6, &edges).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..6 {
                    assert_eq!(space.median(x, y, z), alg.med(x, y, z));
                }
            }
        }
        assert_eq!(space.graph().unwrap().center_quality_max(), 0);
        assert_eq!(space.graph().unwrap().delta_four_point(), 0.0);
    }

    #[test]
    fn four_cycle_center_quality_is_at_most_one() {
        let edges = [(0usize, 1usize), (1, 2), (2, 3), (3, 0)];
        let space = graph_model_from_edges(4, &edges, TieBreak::Lex).unwrap();
        assert!(space.graph().unwrap().center_quality_max() <= 1);
        assert_eq!(space.graph().unwrap().delta_four_point(), 1.0);
    }

    #[test]
    fn single_vertex_graph_is_trivial() {
        let space = graph_model(vec![vec![]]).unwrap();
        assert_eq!(space.median(0, 0, 0), 0);
        assert_eq!(space.graph().unwrap().center_quality_max(), 0);
    }

    #[test]
    fn disconnected_graphs_are_rejected() {
        assert!(matches!(
            graph_model(vec![vec![], vec![]]),
            Err(Error::DisconnectedGraph(_, _))
        ));
    }

    #[test]
    fn disk_median_is_coarsely_lipschitz_with_unit_constant() {
        // condition (i) with (k, h0) = (1, 0) on sampled 6-tuples, under the
        // Euclidean metric
        let disk = euclidean_disk_model(20).unwrap();
        let n = disk.len();
        let mut rng = task_rng(8, 4);
        for _ in 0..100_000 {
            let t: [usize; 6] = std::array::from_fn(|_| rng.gen_range(0..n));
            let lhs = disk.dist(disk.median(t[0], t[1], t[2]), disk.median(t[3], t[4], t[5]));
            let rhs = disk.dist(t[0], t[3]) + disk.dist(t[1], t[4]) + disk.dist(t[2], t[5]);
            assert!(crate::nearly_le(lhs, rhs), "{lhs} > {rhs}");
        }
    }

    #[test]
    fn closeness_of_a_median_with_itself_is_zero() {
        let m = box_model(4);
        let est = closeness_distance(&m, &m, Mode::Exhaustive).unwrap();
        assert_eq!(est.sup_observed, 0.0);
        assert!(est.exhaustive);
    }

    #[test]
    fn conjugated_median_defect_matches_the_gap_formula() {
        let disk = euclidean_disk_model(40).unwrap();
        let rotated = conjugate_by_rotation(
            &disk,
            FRAC_PI_4,
            Mode::Sampled {
                samples: 500,
                seed: 3,
            },
        )
        .unwrap();
        let p = |x: i64, y: i64| disk.lattice_index(&[x, y]).unwrap();
        let (x, y, o) = (p(40, 0), p(0, 40), p(0, 0));
        let defect = disk.dist(disk.median(x, y, o), rotated.median(x, y, o));
        let expect = 40.0 / 2f64.sqrt();
        assert!((defect - expect).abs() < 2.0, "defect {defect} vs {expect}");
    }

    #[test]
    fn conjugate_closeness_grows_with_radius() {
        let mode = Mode::Sampled {
            samples: 2_000,
            seed: 11,
        };
        let mut previous = 0.0;
        for radius in [10, 20, 40] {
            let disk = euclidean_disk_model(radius).unwrap();
            let rotated = conjugate_by_rotation(&disk, FRAC_PI_4, mode).unwrap();
            let est = closeness_distance(&disk, &rotated, mode).unwrap();
            assert!(
                est.sup_observed > previous,
                "radius {radius}: {} not > {previous}",
                est.sup_observed
            );
            previous = est.sup_observed;
        }
    }

    #[test]
    fn disk_radius_100_defect_exceeds_seventy() {
        // the witness triple of the gap formula, after lattice rounding,
        // keeps a defect of about 100/sqrt(2) on the radius-100 disk; the
        // sup over all triples is therefore at least 70
        let disk = euclidean_disk_model(100).unwrap();
        let rotated = conjugate_by_rotation(
            &disk,
            FRAC_PI_4,
            Mode::Sampled {
                samples: 300,
                seed: 17,
            },
        )
        .unwrap();
        let p = |x: i64, y: i64| disk.lattice_index(&[x, y]).unwrap();
        let (x, y, o) = (p(100, 0), p(0, 100), p(0, 0));
        let defect = disk.dist(disk.median(x, y, o), rotated.median(x, y, o));
        assert!(defect >= 70.0, "witness defect {defect} < 70");
    }

    #[test]
    fn cube_graph_majority_is_a_tripod_center_choice() {
        // the majority median of the 3-cube lies in all three pairwise
        // metric intervals of any triple, so a geodesic tripod with the
        // median as 0-center always exists...
        let cube_alg = crate::algebra::FiniteMedianAlgebra::majority_bits(3).unwrap();
        let maj = algebra_model(&cube_alg).unwrap();
        let mut edges = Vec::new();
        for a in 0..8usize {
            for b in a + 1..8 {
                if (a ^ b).count_ones() == 1 {
                    edges.push((a, b));
                }
            }
        }
        let hyp = graph_model_from_edges(8, &edges, TieBreak::Lex).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                for z in 0..8 {
                    let m = cube_alg.med(x, y, z);
                    let d = |a: usize, b: usize| hyp.dist(a, b);
                    assert_eq!(d(x, m) + d(m, y), d(x, y));
                    assert_eq!(d(y, m) + d(m, z), d(y, z));
                    assert_eq!(d(x, m) + d(m, z), d(x, z));
                }
            }
        }
        // ...but the deterministic lex tripods need not pass through it:
        // at (011, 101, 110) all three chosen sides dodge the majority
        // corner 111 and the center lands on 000, three steps away
        assert_eq!(cube_alg.med(3, 5, 6), 7);
        assert_eq!(hyp.median(3, 5, 6), 0);
        let est = closeness_distance(&maj, &hyp, Mode::Exhaustive).unwrap();
        assert_eq!(est.sup_observed, 3.0);
    }

    #[test]
    fn coordinate_swap_is_invariant_on_the_box() {
        let m = box_model(4);
        let coords = m.lattice_coords().unwrap().to_vec();
        let swap: Vec<usize> = coords
            .iter()
            .map(|c| m.lattice_index(&[c[1], c[0]]).unwrap())
            .collect();
        let defect = invariance_defect(&m, &[swap], Mode::Exhaustive).unwrap();
        assert_eq!(defect, 0.0);
    }

    #[test]
    fn non_isometry_is_rejected() {
        let m = box_model(3);
        let collapse = vec![0; m.len()];
        assert!(matches!(
            invariance_defect(&m, &[collapse], Mode::Exhaustive),
            Err(Error::NotAnIsometry { .. })
        ));
    }

    #[test]
    fn translation_commutes_with_the_coordinatewise_median() {
        let mut rng = task_rng(5, 9);
        for _ in 0..10_000 {
            let p: [i64; 6] = std::array::from_fn(|_| rng.gen_range(-50..50));
            let t: [i64; 2] = std::array::from_fn(|_| rng.gen_range(-20..20));
            let med = |a: [i64; 2], b: [i64; 2], c: [i64; 2]| {
                [
                    crate::algebra::median3(a[0], b[0], c[0]),
                    crate::algebra::median3(a[1], b[1], c[1]),
                ]
            };
            let (a, b, c) = ([p[0], p[1]], [p[2], p[3]], [p[4], p[5]]);
            let shifted = med(
                [a[0] + t[0], a[1] + t[1]],
                [b[0] + t[0], b[1] + t[1]],
                [c[0] + t[0], c[1] + t[1]],
            );
            let base = med(a, b, c);
            assert_eq!(shifted, [base[0] + t[0], base[1] + t[1]]);
        }
    }

    #[test]
    fn pushforward_along_identity_is_exact() {
        let m = box_model(3);
        let id: Vec<usize> = (0..m.len()).collect();
        let qi = QuasiIsometryPair::measure(&m, &m, id.clone(), id).unwrap();
        assert_eq!(qi.constants.mult, 1.0);
        assert_eq!(qi.constants.add, 0.0);
        let pushed = pushforward(&qi, &m, &m, Mode::Exhaustive).unwrap();
        let est = closeness_distance(&pushed, &m, Mode::Exhaustive).unwrap();
        assert_eq!(est.sup_observed, 0.0);
    }

    #[test]
    fn antipodal_map_preserves_the_square_median() {
        // the unit square with its majority median: the antipodal swap is a
        // self-isometry commuting with the median
        let square = crate::algebra::FiniteMedianAlgebra::majority_bits(2).unwrap();
        let g = algebra_model(&square).unwrap();
        let antipodal = vec![3, 2, 1, 0];
        let qi = QuasiIsometryPair::measure(&g, &g, antipodal.clone(), antipodal).unwrap();
        let pushed = pushforward(&qi, &g, &g, Mode::Exhaustive).unwrap();
        let est = closeness_distance(&pushed, &g, Mode::Exhaustive).unwrap();
        assert_eq!(est.sup_observed, 0.0);
    }

    #[test]
    fn pullback_of_pushforward_is_close_to_the_original() {
        let m = box_model(4);
        let coords = m.lattice_coords().unwrap().to_vec();
        let refl: Vec<usize> = coords
            .iter()
            .map(|c| m.lattice_index(&[3 - c[0], 3 - c[1]]).unwrap())
            .collect();
        let qi = QuasiIsometryPair::measure(&m, &m, refl.clone(), refl).unwrap();
        let pushed = pushforward(&qi, &m, &m, Mode::Exhaustive).unwrap();
        let back = pullback(&qi, &pushed, &m, Mode::Exhaustive).unwrap();
        let est = closeness_distance(&back, &m, Mode::Exhaustive).unwrap();
        // reflection is an exact automorphism of the coordinatewise median
        assert_eq!(est.sup_observed, 0.0);
    }

    #[test]
    fn condition_i_holds_exhaustively_on_small_carriers() {
        // the declared parameters satisfy the full six-point inequality,
        // checked over every pair of triples
        let exhaustive_check = |space: &CoarseMedianSpace| {
            let n = space.len();
            let (k, h0) = (space.params.k, space.params.h0);
            for t1 in 0..n * n * n {
                let (x, y, z) = (t1 / (n * n), t1 / n % n, t1 % n);
                let m1 = space.median(x, y, z);
                for t2 in 0..n * n * n {
                    let (x2, y2, z2) = (t2 / (n * n), t2 / n % n, t2 % n);
                    let lhs = space.dist(m1, space.median(x2, y2, z2));
                    let rhs =
                        k * (space.dist(x, x2) + space.dist(y, y2) + space.dist(z, z2)) + h0;
                    assert!(
                        crate::nearly_le(lhs, rhs),
                        "condition (i) fails: {lhs} > {rhs} at ({x},{y},{z}) vs ({x2},{y2},{z2})"
                    );
                }
            }
        };
        exhaustive_check(&l1_lattice_model(&[(0, 2), (0, 2)]).unwrap());
        let cycle = [(0usize, 1usize), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)];
        exhaustive_check(&graph_model_from_edges(6, &cycle, TieBreak::Lex).unwrap());
        exhaustive_check(
            &algebra_model(&crate::algebra::FiniteMedianAlgebra::majority_bits(3).unwrap())
                .unwrap(),
        );
    }

    #[test]
    fn pushforward_equals_pullback_along_the_quasi_inverse() {
        // with f and its quasi-inverse g, transporting forward along f and
        // pulling back along g are the same construction
        let m = box_model(4);
        let coords = m.lattice_coords().unwrap().to_vec();
        let refl: Vec<usize> =
            coords.iter().map(|c| m.lattice_index(&[3 - c[0], c[1]]).unwrap()).collect();
        let qi_f = QuasiIsometryPair::measure(&m, &m, refl.clone(), refl.clone()).unwrap();
        let qi_g = QuasiIsometryPair::measure(&m, &m, refl.clone(), refl).unwrap();
        let pushed = pushforward(&qi_f, &m, &m, Mode::Exhaustive).unwrap();
        let pulled = pullback(&qi_g, &m, &m, Mode::Exhaustive).unwrap();
        let est = closeness_distance(&pushed, &pulled, Mode::Exhaustive).unwrap();
        assert_eq!(est.sup_observed, 0.0);
    }

    #[test]
    fn close_maps_transport_to_close_structures() {
        // replace the forward map by one within distance 1 of it: the two
        // pushforwards stay within the bound k * 3 * 1 + h0
        let m = box_model(4);
        let coords = m.lattice_coords().unwrap().to_vec();
        let to_idx = |c: &[i64]| m.lattice_index(c).unwrap();
        let id: Vec<usize> = (0..m.len()).collect();
        // shift the x coordinate by one where possible
        let nudged: Vec<usize> = coords
            .iter()
            .map(|c| to_idx(&[(c[0] + 1).min(3), c[1]]))
            .collect();
        let qi1 = QuasiIsometryPair::measure(&m, &m, id.clone(), id.clone()).unwrap();
        let qi2 = QuasiIsometryPair::measure(&m, &m, nudged, id).unwrap();
        let a = pushforward(&qi1, &m, &m, Mode::Exhaustive).unwrap();
        let b = pushforward(&qi2, &m, &m, Mode::Exhaustive).unwrap();
        let est = closeness_distance(&a, &b, Mode::Exhaustive).unwrap();
        assert!(est.sup_observed <= m.params.k * 1.0 + m.params.h0 + 1e-12);
    }

    #[test]
    fn composition_law_within_measured_bound() {
        let m = box_model(4);
        let coords = m.lattice_coords().unwrap().to_vec();
        let to_idx = |c: &[i64]| m.lattice_index(c).unwrap();
        let f1: Vec<usize> = coords.iter().map(|c| to_idx(&[c[1], c[0]])).collect();
        let f2: Vec<usize> = coords.iter().map(|c| to_idx(&[3 - c[0], c[1]])).collect();
        let g1 = f1.clone(); // both are involutions
        let g2 = f2.clone();
        let qi1 = QuasiIsometryPair::measure(&m, &m, f1.clone(), g1.clone()).unwrap();
        let qi2 = QuasiIsometryPair::measure(&m, &m, f2.clone(), g2.clone()).unwrap();
        let comp_f: Vec<usize> = (0..m.len()).map(|i| f2[f1[i]]).collect();
        let comp_g: Vec<usize> = (0..m.len()).map(|i| g1[g2[i]]).collect();
        let qi12 = QuasiIsometryPair::measure(&m, &m, comp_f, comp_g).unwrap();

        let lhs = pushforward(&qi12, &m, &m, Mode::Exhaustive).unwrap();
        let step = pushforward(&qi1, &m, &m, Mode::Exhaustive).unwrap();
        let rhs = pushforward(&qi2, &step, &m, Mode::Exhaustive).unwrap();
        let est = closeness_distance(&lhs, &rhs, Mode::Exhaustive).unwrap();
        // with exact inverses the two transports agree pointwise; the
        // measured-constant bound is the generic ceiling
        let bound =
            m.params.k * 3.0 * (qi1.constants.back_forth + qi2.constants.back_forth) + m.params.h0;
        assert!(est.sup_observed <= bound + 1e-9);
        assert_eq!(est.sup_observed, 0.0);
    }
}
