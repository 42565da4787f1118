//! Finite median algebras as first-class values.
//!
//! A median algebra is a set with a ternary operation `med` satisfying, for
//! all `x, y, z, u, v`:
//!
//! ```text
//! med(x,y,z) = med(x,z,y) = med(y,z,x)                     (symmetry)
//! med(x,x,y) = x                                           (absorption)
//! med(med(x,y,z),u,v) = med(x, med(y,u,v), med(z,u,v))     (distributivity)
//! ```
//!
//! Elements are indices into an ordered list of opaque string identifiers.
//! The operation is either an explicit table or a rule (coordinatewise
//! majority on bit-vectors, tree median via graph distances, coordinatewise
//! median on lattice points, componentwise product). Tables are exact ground
//! truth; rules scale.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Hard cap on table-backed carriers (and on the structural operations:
/// wall enumeration, skeletons, rank).
pub const ALGEBRA_CAP: usize = 4096;

/// Rule-backed carriers (majority bits, lattice points, products) may grow
/// past the table cap; axiom verification must then be sampled. Tree
/// carriers stay under [`ALGEBRA_CAP`]: they store a full distance matrix.
pub const RULE_CAP: usize = 65_536;

/// Full `n^3` median tables are cached up to this carrier size.
pub const TABLE_LIMIT: usize = 128;

// ---------------------------------------------------------------------------
// bitsets
// ---------------------------------------------------------------------------

/// Fixed-width bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
}

// ---------------------------------------------------------------------------
// walls
// ---------------------------------------------------------------------------

/// A wall: a partition of the carrier into two non-empty convex halves.
///
/// Canonical orientation: `half` is the side containing the smallest element
/// identifier (index 0 of the carrier), so wall sets compare as values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Wall {
    half: Vec<usize>,
    cohalf: Vec<usize>,
    mask: BitSet,
}

impl Wall {
    /// Build a wall from the member set of one side. Orientation is
    /// canonicalized; both sides must be non-empty.
    pub fn new(n: usize, side: &[usize]) -> Self {
        let mut in_side = vec![false; n];
        for &i in side {
            in_side[i] = true;
        }
        // canonical: the stored half contains element 0
        let keep = in_side[0];
        let mut half = Vec::new();
        let mut cohalf = Vec::new();
        let mut mask = BitSet::new(n);
        for (i, &flag) in in_side.iter().enumerate() {
            if flag == keep {
                half.push(i);
                mask.set(i);
            } else {
                cohalf.push(i);
            }
        }
        assert!(
            !half.is_empty() && !cohalf.is_empty(),
            "wall sides must be non-empty"
        );
        Wall { half, cohalf, mask }
    }

    pub fn half(&self) -> &[usize] {
        &self.half
    }

    pub fn cohalf(&self) -> &[usize] {
        &self.cohalf
    }

    /// True if `x` lies in the canonical half.
    pub fn in_half(&self, x: usize) -> bool {
        self.mask.get(x)
    }

    pub fn separates(&self, a: usize, b: usize) -> bool {
        self.in_half(a) != self.in_half(b)
    }
}

/// Two distinct walls cross iff all four quadrant intersections are
/// non-empty. Asking a wall to cross itself is an error.
pub fn crossing(w: &Wall, v: &Wall) -> Result<bool> {
    if w == v {
        return Err(Error::SelfCrossing);
    }
    let q = |a: &[usize], in_v_half: bool| a.iter().any(|&x| v.in_half(x) == in_v_half);
    Ok(q(&w.half, true) && q(&w.half, false) && q(&w.cohalf, true) && q(&w.cohalf, false))
}

/// Indices (into `walls`) of the walls separating `a` from `b`.
/// Empty iff `a == b` when `walls` is the full wall set of an algebra.
pub fn separating_walls(walls: &[Wall], a: usize, b: usize) -> Vec<usize> {
    walls
        .iter()
        .enumerate()
        .filter(|(_, w)| w.separates(a, b))
        .map(|(i, _)| i)
        .collect()
}

// ---------------------------------------------------------------------------
// the algebra
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum MedianRule {
    /// Explicit flat `n^3` table, row-major `(x*n + y)*n + z`.
    Table(Vec<u32>),
    /// Coordinatewise majority on `{0,1}^dim`; element `i` has bit pattern `i`.
    MajorityBits { dim: u32 },
    /// Median of a tree: the unique common point of the three geodesics.
    Tree {
        dist: Vec<u32>,
        adj: Vec<Vec<usize>>,
    },
    /// Coordinatewise median on a median-closed set of lattice points.
    Lattice {
        coords: Vec<Vec<i64>>,
        index: HashMap<Vec<i64>, usize>,
    },
    /// Componentwise median on a cartesian product.
    Product {
        left: Box<FiniteMedianAlgebra>,
        right: Box<FiniteMedianAlgebra>,
    },
}

/// A finite set with a total ternary operation, candidate median algebra.
///
/// `med` is total by construction; whether the three median-algebra
/// identities hold is decided by [`FiniteMedianAlgebra::verify_axioms`],
/// which reports violations instead of erroring.
#[derive(Debug)]
pub struct FiniteMedianAlgebra {
    ids: Vec<String>,
    rule: MedianRule,
    table: OnceLock<Vec<u32>>,
}

impl Clone for FiniteMedianAlgebra {
    fn clone(&self) -> Self {
        let rule = match &self.rule {
            MedianRule::Table(t) => MedianRule::Table(t.clone()),
            MedianRule::MajorityBits { dim } => MedianRule::MajorityBits { dim: *dim },
            MedianRule::Tree { dist, adj } => MedianRule::Tree {
                dist: dist.clone(),
                adj: adj.clone(),
            },
            MedianRule::Lattice { coords, index } => MedianRule::Lattice {
                coords: coords.clone(),
                index: index.clone(),
            },
            MedianRule::Product { left, right } => MedianRule::Product {
                left: left.clone(),
                right: right.clone(),
            },
        };
        let table = OnceLock::new();
        if let Some(t) = self.table.get() {
            let _ = table.set(t.clone());
        }
        FiniteMedianAlgebra {
            ids: self.ids.clone(),
            rule,
            table,
        }
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCapExceeded { what, got: n, cap });
    }
    if n == 0 {
        return Err(Error::MalformedInput(format!(
            "{what}: carrier must be non-empty"
        )));
    }
    Ok(())
}

impl FiniteMedianAlgebra {
    // -- constructors -------------------------------------------------------

    /// Explicit table, `table[(x*n + y)*n + z]` = median index.
    pub fn from_table(ids: Vec<String>, table: Vec<u32>) -> Result<Self> {
        let n = ids.len();
        check_cap("table algebra", n, ALGEBRA_CAP)?;
        if table.len() != n * n * n {
            return Err(Error::MalformedInput(format!(
                "median table has {} entries, expected {}",
                table.len(),
                n * n * n
            )));
        }
        if let Some(&bad) = table.iter().find(|&&m| m as usize >= n) {
            return Err(Error::MalformedInput(format!(
                "median table entry {bad} out of range (n = {n})"
            )));
        }
        Ok(FiniteMedianAlgebra {
            ids,
            rule: MedianRule::Table(table),
            table: OnceLock::new(),
        })
    }

    /// Majority vote on `{0,1}^dim`.
    pub fn majority_bits(dim: u32) -> Result<Self> {
        let n = 1usize << dim;
        check_cap("hypercube", n, RULE_CAP)?;
        let ids = (0..n)
            .map(|i| {
                (0..dim)
                    .map(|j| if i >> j & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect();
        Ok(FiniteMedianAlgebra {
            ids,
            rule: MedianRule::MajorityBits { dim },
            table: OnceLock::new(),
        })
    }

    /// Vertex median algebra of a tree given by its edge list.
    pub fn from_tree_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::from_tree_edges_with_ids(ids, edges)
    }

    pub fn from_tree_edges_with_ids(ids: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        check_cap("tree algebra", n, ALGEBRA_CAP)?;
        if n == 1 && edges.is_empty() {
            return FiniteMedianAlgebra::from_table(ids, vec![0]);
        }
        if edges.len() != n - 1 {
            return Err(Error::MalformedTree(format!(
                "{} edges for {} vertices (want n-1)",
                edges.len(),
                n
            )));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::MalformedTree(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::MalformedTree(format!("self-loop at {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::MalformedTree(format!("duplicate edge ({a},{b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        let dist = bfs_all_pairs(&adj)?;
        Ok(FiniteMedianAlgebra {
            ids,
            rule: MedianRule::Tree { dist, adj },
            table: OnceLock::new(),
        })
    }

    /// Coordinatewise median on a median-closed set of lattice points.
    pub fn from_lattice_points(coords: Vec<Vec<i64>>) -> Result<Self> {
        let n = coords.len();
        check_cap("lattice algebra", n, RULE_CAP)?;
        let dim = coords[0].len();
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::MalformedInput(
                "inconsistent lattice point dimension".into(),
            ));
        }
        let ids = coords.iter().map(|c| lattice_id(c)).collect();
        let mut index = HashMap::with_capacity(n);
        for (i, c) in coords.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(Error::MalformedInput(format!(
                    "duplicate lattice point {}",
                    lattice_id(c)
                )));
            }
        }
        let alg = FiniteMedianAlgebra {
            ids,
            rule: MedianRule::Lattice { coords, index },
            table: OnceLock::new(),
        };
        // closedness safety net at table scale; larger carriers are produced
        // only by closure computations which are closed by construction
        if alg.n() <= TABLE_LIMIT {
            let n = alg.n();
            for x in 0..n {
                for y in x..n {
                    for z in y..n {
                        if alg.try_med(x, y, z).is_none() {
                            return Err(Error::NotMedianClosed { x, y, z });
                        }
                    }
                }
            }
        }
        Ok(alg)
    }

    /// Cartesian product with componentwise median.
    pub fn product(left: &FiniteMedianAlgebra, right: &FiniteMedianAlgebra) -> Result<Self> {
        let n = left.n() * right.n();
        check_cap("product algebra", n, RULE_CAP)?;
        let mut ids = Vec::with_capacity(n);
        for a in 0..left.n() {
            for b in 0..right.n() {
                ids.push(format!("({},{})", left.id(a), right.id(b)));
            }
        }
        Ok(FiniteMedianAlgebra {
            ids,
            rule: MedianRule::Product {
                left: Box::new(left.clone()),
                right: Box::new(right.clone()),
            },
            table: OnceLock::new(),
        })
    }

    /// Restriction to a median-closed subset (indices into `self`, sorted).
    /// Returns the induced algebra; element `k` of the result corresponds to
    /// `subset[k]` in `self`.
    pub fn induced(&self, subset: &[usize]) -> Result<FiniteMedianAlgebra> {
        if subset.is_empty() {
            return Err(Error::EmptyGeneratingSet);
        }
        let m = subset.len();
        let mut back = vec![usize::MAX; self.n()];
        for (k, &i) in subset.iter().enumerate() {
            back[i] = k;
        }
        let mut table = vec![0u32; m * m * m];
        for (a, &ia) in subset.iter().enumerate() {
            for (b, &ib) in subset.iter().enumerate() {
                for (c, &ic) in subset.iter().enumerate() {
                    let mm = self.med(ia, ib, ic);
                    if back[mm] == usize::MAX {
                        return Err(Error::NotMedianClosed {
                            x: ia,
                            y: ib,
                            z: ic,
                        });
                    }
                    table[(a * m + b) * m + c] = back[mm] as u32;
                }
            }
        }
        let ids = subset.iter().map(|&i| self.id(i).to_string()).collect();
        FiniteMedianAlgebra::from_table(ids, table)
    }

    // -- basics -------------------------------------------------------------

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    /// Lattice coordinates of the elements, when this algebra is backed by
    /// lattice points.
    pub fn lattice_coords(&self) -> Option<&[Vec<i64>]> {
        match &self.rule {
            MedianRule::Lattice { coords, .. } => Some(coords),
            _ => None,
        }
    }

    fn eval_rule(&self, x: usize, y: usize, z: usize) -> usize {
        self.try_med(x, y, z)
            .expect("median rule produced a point outside the carrier")
    }

    fn try_med(&self, x: usize, y: usize, z: usize) -> Option<usize> {
        let n = self.n();
        match &self.rule {
            MedianRule::Table(t) => Some(t[(x * n + y) * n + z] as usize),
            MedianRule::MajorityBits { .. } => Some((x & y) | (x & z) | (y & z)),
            MedianRule::Tree { dist, .. } => {
                let d = |a: usize, b: usize| dist[a * n + b];
                (0..n).find(|&m| {
                    d(x, m) + d(m, y) == d(x, y)
                        && d(y, m) + d(m, z) == d(y, z)
                        && d(x, m) + d(m, z) == d(x, z)
                })
            }
            MedianRule::Lattice { coords, index } => {
                let med: Vec<i64> = (0..coords[x].len())
                    .map(|c| median3(coords[x][c], coords[y][c], coords[z][c]))
                    .collect();
                index.get(&med).copied()
            }
            MedianRule::Product { left, right } => {
                let nr = right.n();
                let (xa, xb) = (x / nr, x % nr);
                let (ya, yb) = (y / nr, y % nr);
                let (za, zb) = (z / nr, z % nr);
                Some(left.med(xa, ya, za) * nr + right.med(xb, yb, zb))
            }
        }
    }

    /// The ternary operation. Cached as a flat table for small carriers.
    pub fn med(&self, x: usize, y: usize, z: usize) -> usize {
        if let Some(t) = self.med_table() {
            let n = self.n();
            t[(x * n + y) * n + z] as usize
        } else {
            self.eval_rule(x, y, z)
        }
    }

    /// Flat `n^3` table of the operation, if the carrier is small enough to
    /// cache one.
    pub fn med_table(&self) -> Option<&[u32]> {
        let n = self.n();
        if n > TABLE_LIMIT {
            return None;
        }
        Some(self.table.get_or_init(|| {
            let mut t = vec![0u32; n * n * n];
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        t[(x * n + y) * n + z] = self.eval_rule(x, y, z) as u32;
                    }
                }
            }
            t
        }))
    }

    // -- the operations of the module ----------------------------------------

    /// Exhaustively check the three median-algebra identities over all
    /// tuples (`n^5` work for distributivity). A non-algebra is a report,
    /// not an error. At most [`MAX_VIOLATIONS`] witnesses are retained.
    pub fn verify_axioms(&self) -> AxiomReport {
        self.verify_axioms_inner(None)
    }

    /// Seeded, sampled variant for carriers where `n^5` is out of reach.
    pub fn verify_axioms_sampled(&self, seed: u64, samples: u64) -> AxiomReport {
        self.verify_axioms_inner(Some((seed, samples)))
    }

    fn verify_axioms_inner(&self, sampling: Option<(u64, u64)>) -> AxiomReport {
        use rand::Rng;
        let n = self.n();
        let mut report = AxiomReport::default();
        let table = self.med_table();
        let med = |x: usize, y: usize, z: usize| match table {
            Some(t) => t[(x * n + y) * n + z] as usize,
            None => self.eval_rule(x, y, z),
        };

        let check_symmetry = |r: &mut AxiomReport, x: usize, y: usize, z: usize| {
            let m = med(x, y, z);
            if m != med(x, z, y) || m != med(y, z, x) {
                r.record("symmetry", vec![x, y, z]);
            }
        };
        let check_absorption = |r: &mut AxiomReport, x: usize, y: usize| {
            if med(x, x, y) != x {
                r.record("absorption", vec![x, y]);
            }
        };
        let check_distributivity =
            |r: &mut AxiomReport, x: usize, y: usize, z: usize, u: usize, v: usize| {
                if med(med(x, y, z), u, v) != med(x, med(y, u, v), med(z, u, v)) {
                    r.record("distributivity", vec![x, y, z, u, v]);
                }
            };

        match sampling {
            None => {
                for x in 0..n {
                    for y in 0..n {
                        check_absorption(&mut report, x, y);
                        for z in 0..n {
                            check_symmetry(&mut report, x, y, z);
                        }
                    }
                }
                report.checked_tuples += (n * n * (n + 1)) as u64;
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            let m = med(x, y, z);
                            for u in 0..n {
                                for v in 0..n {
                                    if med(m, u, v) != med(x, med(y, u, v), med(z, u, v)) {
                                        report.record("distributivity", vec![x, y, z, u, v]);
                                    }
                                }
                            }
                        }
                    }
                }
                report.checked_tuples += (n as u64).pow(5);
            }
            Some((seed, samples)) => {
                let mut rng = crate::sampling::task_rng(seed, 0x617869); // "axi"
                for _ in 0..samples {
                    let t: [usize; 5] = std::array::from_fn(|_| rng.gen_range(0..n));
                    check_absorption(&mut report, t[0], t[1]);
                    check_symmetry(&mut report, t[0], t[1], t[2]);
                    check_distributivity(&mut report, t[0], t[1], t[2], t[3], t[4]);
                    report.checked_tuples += 3;
                }
            }
        }
        report.ok = report.violations.is_empty();
        report
    }

    /// Smallest subset containing `a` and closed under `med`, by fixed-point
    /// iteration over triples in lexicographic order. Result is sorted.
    pub fn median_closure(&self, a: &[usize]) -> Result<Vec<usize>> {
        if a.is_empty() {
            return Err(Error::EmptyGeneratingSet);
        }
        let mut members: Vec<usize> = a.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut in_set = vec![false; self.n()];
        for &i in &members {
            in_set[i] = true;
        }
        // worklist: only triples touching at least one new element
        let mut fresh: Vec<usize> = members.clone();
        while !fresh.is_empty() {
            let mut next = Vec::new();
            let snapshot = members.clone();
            for &x in &fresh {
                for &y in &snapshot {
                    for &z in &snapshot {
                        let m = self.med(x, y, z);
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
        Ok(members)
    }

    /// The median interval `I(x,y) = { z | med(x,y,z) = z }`, sorted.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.n()).filter(|&z| self.med(x, y, z) == z).collect()
    }

    /// All walls, each exactly once in canonical orientation, sorted by
    /// their canonical half. Built from the two-point-interval adjacency:
    /// for each edge `(a,b)` the half is `{ z | med(a,b,z) = a }`. Lattice
    /// carriers take a coordinate-threshold shortcut (their walls are
    /// exactly the non-trivial threshold cuts).
    pub fn enumerate_walls(&self) -> Result<Vec<Wall>> {
        let n = self.n();
        if n > ALGEBRA_CAP {
            return Err(Error::SizeCapExceeded { what: "wall enumeration", got: n, cap: ALGEBRA_CAP });
        }
        let mut seen = std::collections::HashSet::new();
        let mut walls: Vec<Wall> = Vec::new();
        if let MedianRule::Lattice { coords, .. } = &self.rule {
            let dim = coords[0].len();
            for c in 0..dim {
                let mut values: Vec<i64> = coords.iter().map(|p| p[c]).collect();
                values.sort_unstable();
                values.dedup();
                for t in values.iter().take(values.len().saturating_sub(1)) {
                    let side: Vec<usize> = (0..n).filter(|&i| coords[i][c] <= *t).collect();
                    let wall = Wall::new(n, &side);
                    if seen.insert(wall.mask.clone()) {
                        if n <= 96 {
                            self.check_wall_convexity(&wall)?;
                        }
                        walls.push(wall);
                    }
                }
            }
        } else {
            for a in 0..n {
                for b in a + 1..n {
                    if !self.is_edge(a, b) {
                        continue;
                    }
                    let side: Vec<usize> = (0..n).filter(|&z| self.med(a, b, z) == a).collect();
                    if side.is_empty() || side.len() == n {
                        return Err(Error::InternalConsistency {
                            context: "enumerate_walls",
                            witness: format!(
                                "edge ({},{}) induces a trivial bipartition",
                                self.id(a),
                                self.id(b)
                            ),
                        });
                    }
                    let wall = Wall::new(n, &side);
                    if seen.insert(wall.mask.clone()) {
                        self.check_wall_convexity(&wall)?;
                        walls.push(wall);
                    }
                }
            }
        }
        walls.sort_by(|u, v| u.half.cmp(&v.half));
        // every pair of distinct elements must be separated by some wall
        for a in 0..n {
            for b in a + 1..n {
                if !walls.iter().any(|w| w.separates(a, b)) {
                    return Err(Error::InternalConsistency {
                        context: "enumerate_walls",
                        witness: format!(
                            "elements {} and {} are separated by no wall",
                            self.id(a),
                            self.id(b)
                        ),
                    });
                }
            }
        }
        Ok(walls)
    }

    /// Adjacency in the cube complex 1-skeleton: `interval(a,b) = {a,b}`.
    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a != b && (0..self.n()).all(|z| z == a || z == b || self.med(a, b, z) != z)
    }

    fn check_wall_convexity(&self, wall: &Wall) -> Result<()> {
        for (side, other) in [(&wall.half, &wall.cohalf), (&wall.cohalf, &wall.half)] {
            for &u in side.iter() {
                for &v in side.iter() {
                    for &z in other.iter() {
                        if self.med(u, v, z) == z {
                            return Err(Error::InternalConsistency {
                                context: "wall convexity",
                                witness: format!(
                                    "{} lies in the interval [{}, {}] across the wall",
                                    self.id(z),
                                    self.id(u),
                                    self.id(v)
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Rank: the size of a maximum pairwise-crossing family of walls,
    /// i.e. the top cube dimension of the associated complex.
    pub fn rank(&self) -> Result<usize> {
        Ok(rank_of_walls(&self.enumerate_walls()?))
    }
}

/// Maximum pairwise-crossing family among the given walls (max clique of the
/// crossing graph, Bron–Kerbosch with pivoting).
pub fn rank_of_walls(walls: &[Wall]) -> usize {
    let w = walls.len();
    if w == 0 {
        return 0;
    }
    let mut cross = vec![false; w * w];
    for i in 0..w {
        for j in i + 1..w {
            if crossing(&walls[i], &walls[j]).unwrap_or(false) {
                cross[i * w + j] = true;
                cross[j * w + i] = true;
            }
        }
    }
    let mut best = 0usize;
    let all: Vec<usize> = (0..w).collect();
    bron_kerbosch(&cross, w, &mut Vec::new(), all, Vec::new(), &mut best);
    best
}

fn bron_kerbosch(
    cross: &[bool],
    w: usize,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    best: &mut usize,
) {
    if p.is_empty() && x.is_empty() {
        *best = (*best).max(r.len());
        return;
    }
    if r.len() + p.len() <= *best {
        return;
    }
    let pivot = p.iter().chain(x.iter()).copied().next().unwrap();
    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&v| !cross[pivot * w + v])
        .collect();
    let mut p = p;
    let mut x = x;
    for v in candidates {
        let np: Vec<usize> = p.iter().copied().filter(|&u| cross[v * w + u]).collect();
        let nx: Vec<usize> = x.iter().copied().filter(|&u| cross[v * w + u]).collect();
        r.push(v);
        bron_kerbosch(cross, w, r, np, nx, best);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

/// Report of an exhaustive (or sampled) axiom check.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub ok: bool,
    pub violations: Vec<AxiomViolation>,
    pub truncated: bool,
    pub checked_tuples: u64,
}

/// Witness retention cap; past it the report is flagged truncated.
pub const MAX_VIOLATIONS: usize = 10_000;

impl AxiomReport {
    fn record(&mut self, identity: &'static str, witness: Vec<usize>) {
        if self.violations.len() < MAX_VIOLATIONS {
            self.violations.push(AxiomViolation { identity, witness });
        } else {
            self.truncated = true;
        }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomViolation {
    pub identity: &'static str,
    pub witness: Vec<usize>,
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

pub(crate) fn median3(a: i64, b: i64, c: i64) -> i64 {
    a.max(b).min(a.max(c)).min(b.max(c))
}

pub(crate) fn lattice_id(c: &[i64]) -> String {
    let inner: Vec<String> = c.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

/// All-pairs BFS distances of an undirected graph; errors on disconnection.
pub(crate) fn bfs_all_pairs(adj: &[Vec<usize>]) -> Result<Vec<u32>> {
    let n = adj.len();
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let dv = row[v];
            for &u in &adj[v] {
                if row[u] == u32::MAX {
                    row[u] = dv + 1;
                    queue.push_back(u);
                }
            }
        }
        if let Some(t) = row.iter().position(|&d| d == u32::MAX) {
            return Err(Error::DisconnectedGraph(s, t));
        }
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(dim: u32) -> FiniteMedianAlgebra {
        FiniteMedianAlgebra::majority_bits(dim).unwrap()
    }

    fn path(n: usize) -> FiniteMedianAlgebra {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteMedianAlgebra::from_tree_edges(n, &edges).unwrap()
    }

    #[test]
    fn hypercube_satisfies_axioms() {
        let report = cube(3).verify_axioms();
        assert!(report.ok, "violations: {:?}", report.violations);
    }

    #[test]
    fn two_point_majority_is_median_algebra() {
        let report = cube(1).verify_axioms();
        assert!(report.ok);
    }

    #[test]
    fn constant_first_argument_violates_symmetry() {
        // med(x,y,z) := x on four points
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
        let alg = FiniteMedianAlgebra::from_table(ids, table).unwrap();
        let report = alg.verify_axioms();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.identity == "symmetry"));
    }

    #[test]
    fn closure_of_singleton_and_pair() {
        let c = cube(2);
        assert_eq!(c.median_closure(&[3]).unwrap(), vec![3]);
        // (0,0) and (1,1): any pair is closed under majority
        assert_eq!(c.median_closure(&[0, 3]).unwrap(), vec![0, 3]);
        assert!(matches!(
            c.median_closure(&[]),
            Err(Error::EmptyGeneratingSet)
        ));
    }

    #[test]
    fn closure_adds_the_majority_point() {
        // (0,0,0), (1,1,0), (0,1,1) in {0,1}^3 generate (0,1,0) as well
        let c = cube(3);
        let a = [0b000, 0b011, 0b110]; // bit j = coordinate j
        let closure = c.median_closure(&a).unwrap();
        assert_eq!(closure, vec![0b000, 0b010, 0b011, 0b110]);
    }

    #[test]
    fn interval_examples() {
        let c = cube(2);
        assert_eq!(c.interval(1, 1), vec![1]);
        assert_eq!(c.interval(0, 3), vec![0, 1, 2, 3]);
        let p = path(3);
        assert_eq!(p.interval(0, 2), vec![0, 1, 2]);
    }

    #[test]
    fn wall_counts_for_standard_algebras() {
        for dim in 1..=4 {
            let walls = cube(dim).enumerate_walls().unwrap();
            assert_eq!(walls.len(), dim as usize, "hypercube {dim}");
        }
        assert_eq!(cube(1).enumerate_walls().unwrap().len(), 1);
        let p = path(3);
        let walls = p.enumerate_walls().unwrap();
        assert_eq!(walls.len(), 2);
        let halves: Vec<Vec<usize>> = walls.iter().map(|w| w.half().to_vec()).collect();
        assert!(halves.contains(&vec![0]));
        assert!(halves.contains(&vec![0, 1]));
    }

    #[test]
    fn separating_wall_examples() {
        let c = cube(3);
        let walls = c.enumerate_walls().unwrap();
        assert!(separating_walls(&walls, 5, 5).is_empty());
        // (0,0,0) vs (1,1,0): coordinates 1 and 2 separate
        let sep = separating_walls(&walls, 0b000, 0b011);
        assert_eq!(sep.len(), 2);
        let p = path(3);
        let pwalls = p.enumerate_walls().unwrap();
        assert_eq!(separating_walls(&pwalls, 0, 2).len(), 2);
    }

    #[test]
    fn crossing_examples() {
        let c = cube(2);
        let walls = c.enumerate_walls().unwrap();
        assert_eq!(walls.len(), 2);
        assert!(crossing(&walls[0], &walls[1]).unwrap());
        assert!(matches!(
            crossing(&walls[0], &walls[0]),
            Err(Error::SelfCrossing)
        ));
        let p = path(3);
        let pw = p.enumerate_walls().unwrap();
        assert!(!crossing(&pw[0], &pw[1]).unwrap());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(cube(3).rank().unwrap(), 3);
        assert_eq!(path(5).rank().unwrap(), 1);
        let singleton = FiniteMedianAlgebra::from_table(vec!["x".into()], vec![0]).unwrap();
        assert_eq!(singleton.rank().unwrap(), 0);
    }

    #[test]
    fn wall_decomposition_through_interval_points() {
        // med(x,y,z) = z  =>  W(x|y) = W(x|z) ⊔ W(z|y)
        let c = cube(3);
        let walls = c.enumerate_walls().unwrap();
        for x in 0..c.n() {
            for y in 0..c.n() {
                for &z in &c.interval(x, y) {
                    let xy = separating_walls(&walls, x, y);
                    let xz = separating_walls(&walls, x, z);
                    let zy = separating_walls(&walls, z, y);
                    let mut merged = xz.clone();
                    merged.extend(&zy);
                    merged.sort_unstable();
                    assert_eq!(xy, merged);
                }
            }
        }
    }

    #[test]
    fn wall_triangle_containment() {
        let p = path(6);
        let walls = p.enumerate_walls().unwrap();
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..6 {
                    let xz = separating_walls(&walls, x, z);
                    let mut xy_yz = separating_walls(&walls, x, y);
                    xy_yz.extend(separating_walls(&walls, y, z));
                    assert!(xz.iter().all(|w| xy_yz.contains(w)));
                }
            }
        }
    }

    #[test]
    fn induced_subalgebra_requires_closedness() {
        let c = cube(3);
        assert!(c.induced(&[0, 7]).is_ok());
        // med(001, 010, 100) = 000 is missing
        assert!(matches!(
            c.induced(&[1, 2, 4]),
            Err(Error::NotMedianClosed { .. })
        ));
    }

    #[test]
    fn product_of_paths_is_a_grid() {
        let g = FiniteMedianAlgebra::product(&path(2), &path(2)).unwrap();
        assert!(g.verify_axioms().ok);
        assert_eq!(g.rank().unwrap(), 2);
    }

    #[test]
    fn rule_backed_carriers_may_exceed_the_table_cap() {
        // 2^13 elements: construction and evaluation work, sampled axiom
        // verification passes, and the cubic structural operations refuse
        let big = FiniteMedianAlgebra::majority_bits(13).unwrap();
        assert_eq!(big.n(), 8192);
        assert!(big.med_table().is_none());
        assert_eq!(big.med(0b1010, 0b0110, 0b0011), 0b0010);
        assert!(big.verify_axioms_sampled(5, 5_000).ok);
        assert!(matches!(big.enumerate_walls(), Err(Error::SizeCapExceeded { .. })));
        // tables and trees stay under the hard cap
        assert!(matches!(
            FiniteMedianAlgebra::majority_bits(17),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn malformed_trees_are_rejected() {
        type A = FiniteMedianAlgebra;
        assert!(matches!(A::from_tree_edges(3, &[(0, 1)]), Err(Error::MalformedTree(_))));
        assert!(matches!(
            A::from_tree_edges(3, &[(0, 1), (1, 1)]),
            Err(Error::MalformedTree(_))
        ));
        assert!(matches!(
            A::from_tree_edges(3, &[(0, 1), (0, 1)]),
            Err(Error::MalformedTree(_))
        ));
        // right count but cyclic, hence disconnected somewhere
        assert!(A::from_tree_edges(4, &[(0, 1), (1, 2), (2, 0)]).is_err());
    }

    #[test]
    fn oversized_products_are_rejected() {
        let big = FiniteMedianAlgebra::majority_bits(12).unwrap();
        let pair = FiniteMedianAlgebra::majority_bits(5).unwrap();
        assert!(matches!(
            FiniteMedianAlgebra::product(&big, &pair),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn lattice_wall_fast_path_matches_the_generic_enumeration() {
        let shapes: Vec<Vec<Vec<i64>>> = vec![
            // an L-shaped lattice path
            vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![2, 1], vec![2, 2]],
            // a 3x4 box
            (0..3i64)
                .flat_map(|x| (0..4i64).map(move |y| vec![x, y]))
                .collect(),
            // a staircase of three unit squares
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![1, 1],
                vec![2, 1],
                vec![2, 2],
                vec![1, 2],
            ],
        ];
        for coords in shapes {
            let lattice = FiniteMedianAlgebra::from_lattice_points(coords).unwrap();
            let fast = lattice.enumerate_walls().unwrap();
            // re-base onto an explicit table so the generic edge-scan runs
            let table = lattice.med_table().unwrap().to_vec();
            let generic = FiniteMedianAlgebra::from_table(lattice.ids().to_vec(), table)
                .unwrap()
                .enumerate_walls()
                .unwrap();
            assert_eq!(fast, generic);
        }
    }
}
