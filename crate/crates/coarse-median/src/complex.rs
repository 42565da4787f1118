//! The 1-skeleton of the CAT(0) cube complex attached to a finite median
//! algebra, parallel edge classes, and the standard constructions
//! (hypercubes, paths, trees, grids, products).
//!
//! Higher cubes are never materialized: vertices plus walls determine
//! everything used downstream, so rank and diagonal-cube computations work
//! wall-combinatorially.

use crate::algebra::{bfs_all_pairs, separating_walls, FiniteMedianAlgebra, Wall};
use crate::error::{Error, Result};

/// 1-skeleton of the cube complex of a finite median algebra. Each edge is
/// crossed by exactly one wall, and graph distance equals wall-count
/// distance.
#[derive(Clone, Debug)]
pub struct CubeComplexSkeleton {
    pub vertex_ids: Vec<String>,
    /// Unordered vertex pairs, stored `(min, max)`, lexicographically sorted.
    pub edges: Vec<(usize, usize)>,
    /// For each edge, the index of its unique separating wall in `walls`.
    pub edge_wall: Vec<usize>,
    pub walls: Vec<Wall>,
}

impl CubeComplexSkeleton {
    pub fn n(&self) -> usize {
        self.vertex_ids.len()
    }

    /// Adjacency lists (sorted), derived from the edge list.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// All-pairs graph distances in the skeleton.
    pub fn distances(&self) -> Result<Vec<u32>> {
        bfs_all_pairs(&self.adjacency())
    }
}

/// Build the 1-skeleton: vertices are the elements, edges the pairs
/// separated by exactly one wall. Errors if the result is disconnected
/// (which would mean the input was not a median algebra).
pub fn one_skeleton(m: &FiniteMedianAlgebra) -> Result<CubeComplexSkeleton> {
    let walls = m.enumerate_walls()?;
    one_skeleton_with_walls(m, walls)
}

/// Same as [`one_skeleton`] but reusing a previously computed wall set.
pub fn one_skeleton_with_walls(
    m: &FiniteMedianAlgebra,
    walls: Vec<Wall>,
) -> Result<CubeComplexSkeleton> {
    let n = m.n();
    let mut edges = Vec::new();
    let mut edge_wall = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let sep = separating_walls(&walls, a, b);
            if sep.len() == 1 {
                edges.push((a, b));
                edge_wall.push(sep[0]);
            }
        }
    }
    let skel = CubeComplexSkeleton {
        vertex_ids: m.ids().to_vec(),
        edges,
        edge_wall,
        walls,
    };
    if n > 1 {
        if let Err(Error::DisconnectedGraph(a, b)) = skel.distances() {
            return Err(Error::InternalConsistency {
                context: "one_skeleton",
                witness: format!("skeleton is disconnected between {a} and {b}"),
            });
        }
    }
    Ok(skel)
}

/// Group edges by their wall. Classes partition the edge set; every wall of
/// the algebra carries at least one edge.
pub fn parallel_classes(skel: &CubeComplexSkeleton) -> Vec<Vec<usize>> {
    let mut classes = vec![Vec::new(); skel.walls.len()];
    for (e, &w) in skel.edge_wall.iter().enumerate() {
        classes[w].push(e);
    }
    classes
}

/// The standard finite median algebras used as models and test fixtures.
#[derive(Clone, Debug)]
pub enum StandardModel {
    /// `{0,1}^n` with coordinatewise majority.
    Hypercube(u32),
    /// Path on `n` vertices.
    Path(usize),
    /// Tree with the given number of vertices and edge list.
    Tree(usize, Vec<(usize, usize)>),
    /// `n x m` grid, the product of two paths.
    Grid(usize, usize),
}

impl StandardModel {
    pub fn build(&self) -> Result<FiniteMedianAlgebra> {
        match self {
            StandardModel::Hypercube(n) => FiniteMedianAlgebra::majority_bits(*n),
            StandardModel::Path(n) => path_algebra(*n),
            StandardModel::Tree(n, edges) => FiniteMedianAlgebra::from_tree_edges(*n, edges),
            StandardModel::Grid(n, m) => product(&path_algebra(*n)?, &path_algebra(*m)?),
        }
    }
}

/// Path on `n` vertices as a tree algebra.
pub fn path_algebra(n: usize) -> Result<FiniteMedianAlgebra> {
    if n == 0 {
        return Err(Error::MalformedInput(
            "path must have at least one vertex".into(),
        ));
    }
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    FiniteMedianAlgebra::from_tree_edges(n, &edges)
}

/// Cartesian product with componentwise median.
pub fn product(a: &FiniteMedianAlgebra, b: &FiniteMedianAlgebra) -> Result<FiniteMedianAlgebra> {
    FiniteMedianAlgebra::product(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rank_of_walls;

    #[test]
    fn three_cube_skeleton_is_the_cube_graph() {
        let m = FiniteMedianAlgebra::majority_bits(3).unwrap();
        let skel = one_skeleton(&m).unwrap();
        assert_eq!(skel.edges.len(), 12);
        for &(a, b) in &skel.edges {
            assert_eq!(
                (a ^ b).count_ones(),
                1,
                "edge ({a},{b}) is not a hypercube edge"
            );
        }
    }

    #[test]
    fn path_and_singleton_skeletons() {
        let p = path_algebra(3).unwrap();
        assert_eq!(one_skeleton(&p).unwrap().edges.len(), 2);
        let s = FiniteMedianAlgebra::from_table(vec!["x".into()], vec![0]).unwrap();
        assert!(one_skeleton(&s).unwrap().edges.is_empty());
    }

    #[test]
    fn parallel_class_sizes() {
        let m = FiniteMedianAlgebra::majority_bits(2).unwrap();
        let skel = one_skeleton(&m).unwrap();
        for class in parallel_classes(&skel) {
            assert_eq!(class.len(), 2);
        }
        let m3 = FiniteMedianAlgebra::majority_bits(3).unwrap();
        let skel3 = one_skeleton(&m3).unwrap();
        for class in parallel_classes(&skel3) {
            assert_eq!(class.len(), 4);
        }
        // in a tree every class is a single edge
        let tree =
            FiniteMedianAlgebra::from_tree_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let ts = one_skeleton(&tree).unwrap();
        for class in parallel_classes(&ts) {
            assert_eq!(class.len(), 1);
        }
    }

    #[test]
    fn standard_model_shapes() {
        let h2 = StandardModel::Hypercube(2).build().unwrap();
        assert_eq!(h2.n(), 4);
        assert_eq!(h2.rank().unwrap(), 2);

        let p4 = StandardModel::Path(4).build().unwrap();
        assert_eq!(p4.n(), 4);
        assert_eq!(p4.enumerate_walls().unwrap().len(), 3);

        let g = StandardModel::Grid(2, 3).build().unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.rank().unwrap(), 2);
    }

    #[test]
    fn rank_is_additive_on_small_products() {
        let p2 = path_algebra(2).unwrap();
        let square = product(&p2, &p2).unwrap();
        assert_eq!(square.rank().unwrap(), 2);

        let star = FiniteMedianAlgebra::from_tree_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let prism = product(&star, &p2).unwrap();
        assert_eq!(
            prism.rank().unwrap(),
            star.rank().unwrap() + p2.rank().unwrap()
        );
    }

    #[test]
    fn product_with_singleton_is_isomorphic() {
        let m = FiniteMedianAlgebra::majority_bits(2).unwrap();
        let s = FiniteMedianAlgebra::from_table(vec!["pt".into()], vec![0]).unwrap();
        let prod = product(&m, &s).unwrap();
        assert_eq!(prod.n(), m.n());
        for x in 0..m.n() {
            for y in 0..m.n() {
                for z in 0..m.n() {
                    assert_eq!(prod.med(x, y, z), m.med(x, y, z));
                }
            }
        }
    }

    #[test]
    fn graph_distance_equals_wall_count() {
        for m in [
            FiniteMedianAlgebra::majority_bits(3).unwrap(),
            StandardModel::Grid(3, 4).build().unwrap(),
        ] {
            let skel = one_skeleton(&m).unwrap();
            let dist = skel.distances().unwrap();
            let n = m.n();
            for a in 0..n {
                for b in 0..n {
                    let sep = separating_walls(&skel.walls, a, b).len();
                    assert_eq!(dist[a * n + b] as usize, sep);
                }
            }
        }
    }

    #[test]
    fn walls_all_carry_edges() {
        let g = StandardModel::Grid(2, 4).build().unwrap();
        let skel = one_skeleton(&g).unwrap();
        assert!(parallel_classes(&skel).iter().all(|c| !c.is_empty()));
        assert_eq!(
            parallel_classes(&skel)
                .iter()
                .map(|c| c.len())
                .sum::<usize>(),
            skel.edges.len()
        );
    }

    #[test]
    fn grid_skeleton_reconstructs_the_grid_graph() {
        let (rows, cols) = (3usize, 4usize);
        let g = StandardModel::Grid(rows, cols).build().unwrap();
        let skel = one_skeleton(&g).unwrap();
        // product index (i, j) -> i*cols + j; grid edges differ by one in
        // exactly one factor
        let mut expected = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if j + 1 < cols {
                    expected.push((i * cols + j, i * cols + j + 1));
                }
                if i + 1 < rows {
                    expected.push((i * cols + j, (i + 1) * cols + j));
                }
            }
        }
        expected.sort_unstable();
        let mut got = skel.edges.clone();
        got.sort_unstable();
        assert_eq!(got, expected);
    }

    #[test]
    fn round_trip_hypercube_reconstruction() {
        // the skeleton of majority-{0,1}^n is the n-cube graph, n <= 4
        for dim in 1..=4u32 {
            let m = FiniteMedianAlgebra::majority_bits(dim).unwrap();
            let skel = one_skeleton(&m).unwrap();
            assert_eq!(skel.walls.len(), dim as usize);
            assert_eq!(rank_of_walls(&skel.walls), dim as usize);
            assert_eq!(skel.edges.len(), (dim as usize) << (dim - 1) as usize);
            for &(a, b) in &skel.edges {
                assert_eq!((a ^ b).count_ones(), 1);
            }
        }
    }
}
