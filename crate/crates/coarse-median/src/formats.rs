//! JSON document schemas for the file formats the toolkit reads and writes.
//!
//! All floating values in emitted documents are rounded to 9 decimal digits
//! so that reports are diffable regression artifacts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteMedianAlgebra;
use crate::coarse::{self, CoarseMedianSpace, TieBreak};
use crate::complex::CubeComplexSkeleton;
use crate::error::{Error, Result};
use crate::metrics::FiniteMetric;

/// Round to 9 decimal digits for emission.
pub fn round9(x: f64) -> f64 {
    if x.is_finite() {
        (x * 1e9).round() / 1e9
    } else {
        x
    }
}

// ---------------------------------------------------------------------------
// algebra documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub elements: Vec<String>,
    pub median: MedianSpecDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MedianSpecDoc {
    /// Ordered triples `[i, j, k, m]`; unlisted orderings fall back to any
    /// listed permutation. Every triple must be covered one way or another.
    Table {
        entries: Vec<[usize; 4]>,
    },
    MajorityBits {
        dim: u32,
    },
    Tree {
        edges: Vec<[usize; 2]>,
    },
}

impl AlgebraDoc {
    pub fn build(&self) -> Result<FiniteMedianAlgebra> {
        let n = self.elements.len();
        match &self.median {
            MedianSpecDoc::MajorityBits { dim } => {
                let alg = FiniteMedianAlgebra::majority_bits(*dim)?;
                if !self.elements.is_empty() && self.elements.len() != alg.n() {
                    return Err(Error::MalformedInput(format!(
                        "majority_bits dim {dim} needs {} elements, got {}",
                        alg.n(),
                        self.elements.len()
                    )));
                }
                Ok(alg)
            }
            MedianSpecDoc::Tree { edges } => {
                let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                FiniteMedianAlgebra::from_tree_edges_with_ids(self.elements.clone(), &pairs)
            }
            MedianSpecDoc::Table { entries } => {
                const UNSET: u32 = u32::MAX;
                let mut table = vec![UNSET; n * n * n];
                for e in entries {
                    let [i, j, k, m] = *e;
                    if i >= n || j >= n || k >= n || m >= n {
                        return Err(Error::MalformedInput(format!(
                            "table entry {e:?} out of range"
                        )));
                    }
                    table[(i * n + j) * n + k] = m as u32;
                }
                // fill unset orderings from listed permutations
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            let idx = (x * n + y) * n + z;
                            if table[idx] != UNSET {
                                continue;
                            }
                            let perms = [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)];
                            let found = perms
                                .iter()
                                .map(|&(a, b, c)| table[(a * n + b) * n + c])
                                .find(|&v| v != UNSET);
                            match found {
                                Some(v) => table[idx] = v,
                                None => {
                                    return Err(Error::MalformedInput(format!(
                                        "median table misses triple ({x},{y},{z})"
                                    )))
                                }
                            }
                        }
                    }
                }
                FiniteMedianAlgebra::from_table(self.elements.clone(), table)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// metric and instance documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricDoc {
    pub points: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

impl MetricDoc {
    pub fn build(&self) -> Result<FiniteMetric> {
        let n = self.points.len();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedInput("matrix must be n x n".into()));
        }
        let flat: Vec<f64> = self.matrix.iter().flatten().copied().collect();
        FiniteMetric::new(self.points.clone(), flat)
    }

    pub fn from_metric(m: &FiniteMetric) -> Self {
        let n = m.n();
        let matrix = (0..n)
            .map(|a| (0..n).map(|b| round9(m.get(a, b))).collect())
            .collect();
        MetricDoc {
            points: m.ids().to_vec(),
            matrix,
        }
    }
}

/// A median algebra together with a metric on the same points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub algebra: AlgebraDoc,
    pub metric: MetricDoc,
}

// ---------------------------------------------------------------------------
// skeleton export
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WallDoc {
    pub half: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkeletonDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    pub edge_wall: Vec<usize>,
    pub walls: Vec<WallDoc>,
}

impl SkeletonDoc {
    pub fn from_skeleton(s: &CubeComplexSkeleton) -> Self {
        SkeletonDoc {
            vertices: s.vertex_ids.clone(),
            edges: s.edges.iter().map(|&(a, b)| [a, b]).collect(),
            edge_wall: s.edge_wall.clone(),
            walls: s
                .walls
                .iter()
                .map(|w| WallDoc {
                    half: w.half().to_vec(),
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// graphs and models
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphDoc {
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e[0], e[1])).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelDoc {
    L1Lattice {
        dim: usize,
        #[serde(rename = "box")]
        ranges: Vec<[i64; 2]>,
    },
    EuclideanDisk {
        radius: i64,
    },
    Graph {
        vertices: Vec<String>,
        edges: Vec<[usize; 2]>,
    },
}

impl ModelDoc {
    pub fn build(&self, tie: TieBreak) -> Result<CoarseMedianSpace> {
        match self {
            ModelDoc::L1Lattice { dim, ranges } => {
                if *dim != ranges.len() {
                    return Err(Error::MalformedInput(format!(
                        "dim {dim} disagrees with {} box ranges",
                        ranges.len()
                    )));
                }
                let rs: Vec<(i64, i64)> = ranges.iter().map(|r| (r[0], r[1])).collect();
                coarse::l1_lattice_model(&rs)
            }
            ModelDoc::EuclideanDisk { radius } => coarse::euclidean_disk_model(*radius),
            ModelDoc::Graph { vertices, edges } => {
                let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                coarse::graph_model_from_edges(vertices.len(), &pairs, tie)
            }
        }
    }
}

/// Input for the push/pull subcommands: a model and a self-quasi-isometry
/// given as explicit index maps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransportDoc {
    pub model: ModelDoc,
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

/// Input for the approx subcommand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxInputDoc {
    pub model: ModelDoc,
    /// Point ids of the subset `A`.
    pub subset: Vec<String>,
    /// `"lattice"` or `"tree"`.
    pub resolver: String,
    /// Basepoint id for the tree resolver; must be a member of `subset`.
    pub basepoint: Option<String>,
    #[serde(default)]
    pub exactify: bool,
}

/// Emitted approximation report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxReportDoc {
    #[serde(rename = "M")]
    pub m: SkeletonDoc,
    pub lengths: BTreeMap<String, f64>,
    pub spread: BTreeMap<String, [f64; 2]>,
    pub alpha: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub gamma: f64,
    pub covered: bool,
    pub rank: usize,
    pub quasi_morphism_bound: f64,
    pub exactified: bool,
    pub pi: Vec<usize>,
    pub lambda: Vec<String>,
}

impl ApproxReportDoc {
    pub fn from_report(
        report: &crate::approx::ApproximationReport,
        model: &CoarseMedianSpace,
    ) -> Self {
        let lengths = report
            .lengths
            .lengths()
            .iter()
            .enumerate()
            .map(|(i, &l)| (i.to_string(), round9(l)))
            .collect();
        let spread = report
            .spread
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| (i.to_string(), [round9(lo), round9(hi)]))
            .collect();
        ApproxReportDoc {
            m: SkeletonDoc::from_skeleton(&report.skeleton),
            lengths,
            spread,
            alpha: round9(report.alpha),
            epsilon: round9(report.epsilon),
            beta: round9(report.beta),
            gamma: round9(report.gamma),
            covered: report.covered,
            rank: report.rank,
            quasi_morphism_bound: round9(report.resolution.bound),
            exactified: report.resolution.exactified,
            pi: report.resolution.pi.clone(),
            lambda: report
                .resolution
                .lambda
                .iter()
                .map(|&p| model.ids()[p].clone())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_doc_round_trips_through_json() {
        let doc = AlgebraDoc {
            elements: (0..4).map(|i| i.to_string()).collect(),
            median: MedianSpecDoc::Tree {
                edges: vec![[0, 1], [1, 2], [2, 3]],
            },
        };
        let text = serde_json::to_string(&doc).unwrap();
        let back: AlgebraDoc = serde_json::from_str(&text).unwrap();
        let alg = back.build().unwrap();
        assert!(alg.verify_axioms().ok);
        assert_eq!(alg.n(), 4);
    }

    #[test]
    fn table_doc_fills_symmetric_completion() {
        // 2-point majority given only by sorted triples
        let doc = AlgebraDoc {
            elements: vec!["a".into(), "b".into()],
            median: MedianSpecDoc::Table {
                entries: vec![[0, 0, 0, 0], [0, 0, 1, 0], [0, 1, 1, 1], [1, 1, 1, 1]],
            },
        };
        let alg = doc.build().unwrap();
        assert!(alg.verify_axioms().ok);
        assert_eq!(alg.med(1, 0, 1), 1);
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let doc = AlgebraDoc {
            elements: vec!["a".into(), "b".into()],
            median: MedianSpecDoc::Table {
                entries: vec![[0, 0, 0, 0]],
            },
        };
        assert!(matches!(doc.build(), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn metric_doc_round_trip() {
        let doc = MetricDoc {
            points: vec!["a".into(), "b".into()],
            matrix: vec![vec![0.0, 2.5], vec![2.5, 0.0]],
        };
        let metric = doc.build().unwrap();
        let back = MetricDoc::from_metric(&metric);
        assert_eq!(back.matrix, doc.matrix);
    }

    #[test]
    fn model_doc_dim_mismatch_is_rejected() {
        let doc = ModelDoc::L1Lattice {
            dim: 3,
            ranges: vec![[0, 1], [0, 1]],
        };
        assert!(doc.build(TieBreak::Lex).is_err());
    }
}
