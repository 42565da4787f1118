//! Property-based invariants over randomly drawn small median algebras:
//! interval symmetry, wall decompositions, closure bounds, and the median
//! metric laws of wall-weighted metrics.

use proptest::prelude::*;

use coarse_median::algebra::{separating_walls, FiniteMedianAlgebra};
use coarse_median::complex::{path_algebra, product, StandardModel};
use coarse_median::deform::cat0_metric_with_rows;
use coarse_median::formats::{AlgebraDoc, MedianSpecDoc};
use coarse_median::metrics::{
    unit_wall_instance, verify_median_metric, wall_metric, WallWeighting,
};
use coarse_median::sampling::{random_tree_edges, task_rng};

/// A zoo of small median algebras, drawn by a seed and a family selector.
fn algebra_strategy() -> impl Strategy<Value = FiniteMedianAlgebra> {
    (0u8..6, any::<u64>()).prop_map(|(family, seed)| match family {
        0 => FiniteMedianAlgebra::majority_bits(1 + (seed % 3) as u32).unwrap(),
        1 => path_algebra(2 + (seed % 9) as usize).unwrap(),
        2 => {
            let n = 3 + (seed % 10) as usize;
            let mut rng = task_rng(seed, 0);
            FiniteMedianAlgebra::from_tree_edges(n, &random_tree_edges(n, &mut rng)).unwrap()
        }
        3 => StandardModel::Grid(2 + (seed % 2) as usize, 2 + (seed % 3) as usize)
            .build()
            .unwrap(),
        4 => {
            let mut rng = task_rng(seed, 1);
            let t =
                FiniteMedianAlgebra::from_tree_edges(4, &random_tree_edges(4, &mut rng)).unwrap();
            product(&t, &path_algebra(2).unwrap()).unwrap()
        }
        _ => FiniteMedianAlgebra::majority_bits(2).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn intervals_are_symmetric_and_walls_decompose(alg in algebra_strategy()) {
        let n = alg.n();
        let walls = alg.enumerate_walls().unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(alg.interval(x, y), alg.interval(y, x));
                let xy = separating_walls(&walls, x, y);
                for &z in &alg.interval(x, y) {
                    // z between x and y splits the separating walls in two
                    let xz = separating_walls(&walls, x, z);
                    let zy = separating_walls(&walls, z, y);
                    let mut merged = xz.clone();
                    merged.extend(&zy);
                    merged.sort_unstable();
                    prop_assert_eq!(&xy, &merged);
                }
            }
        }
    }

    #[test]
    fn distinct_points_are_separated(alg in algebra_strategy()) {
        let walls = alg.enumerate_walls().unwrap();
        for x in 0..alg.n() {
            for y in x + 1..alg.n() {
                prop_assert!(!separating_walls(&walls, x, y).is_empty());
            }
        }
    }

    #[test]
    fn triangle_containment_of_separating_walls(alg in algebra_strategy()) {
        let walls = alg.enumerate_walls().unwrap();
        let n = alg.n();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xz = separating_walls(&walls, x, z);
                    let mut through_y = separating_walls(&walls, x, y);
                    through_y.extend(separating_walls(&walls, y, z));
                    prop_assert!(xz.iter().all(|w| through_y.contains(w)));
                }
            }
        }
    }

    #[test]
    fn closures_stay_within_the_double_exponential_bound(
        alg in algebra_strategy(),
        raw in proptest::collection::vec(any::<prop::sample::Index>(), 1..=3),
    ) {
        let gens: Vec<usize> = raw.iter().map(|i| i.index(alg.n())).collect();
        let closure = alg.median_closure(&gens).unwrap();
        let mut unique = gens.clone();
        unique.sort_unstable();
        unique.dedup();
        let bound = 1usize << (1usize << unique.len());
        prop_assert!(closure.len() <= bound);
        for &g in &gens {
            prop_assert!(closure.contains(&g));
        }
        for &x in &closure {
            for &y in &closure {
                for &z in &closure {
                    prop_assert!(closure.contains(&alg.med(x, y, z)));
                }
            }
        }
    }

    #[test]
    fn integer_wall_metrics_are_median_and_additive(
        alg in algebra_strategy(),
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let walls = alg.enumerate_walls().unwrap();
        let mut rng = task_rng(seed, 2);
        let lengths: Vec<f64> = (0..walls.len()).map(|_| rng.gen_range(1..=7) as f64).collect();
        let metric = wall_metric(&alg, &walls, &WallWeighting::new(lengths).unwrap()).unwrap();
        let report = verify_median_metric(&metric);
        prop_assert!(report.ok);
        let n = alg.n();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    prop_assert_eq!(report.median(n, x, y, z), Some(alg.med(x, y, z)));
                    if alg.med(x, y, z) == z {
                        // exact additivity through interval points
                        prop_assert_eq!(metric.get(x, y), metric.get(x, z) + metric.get(z, y));
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_is_a_metric_within_the_sandwich(alg in algebra_strategy()) {
        let inst = unit_wall_instance(&alg).unwrap();
        let (sigma, rows) = cat0_metric_with_rows(&inst).unwrap();
        // metric axioms are re-validated by construction; check the rows
        for row in rows {
            prop_assert!(row.lower <= row.sigma + 1e-9);
            prop_assert!(row.sigma <= row.upper + 1e-9);
        }
        let n = alg.n();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(sigma.get(x, y), sigma.get(y, x));
            }
        }
    }

    #[test]
    fn tree_documents_round_trip(seed in any::<u64>(), n in 2usize..12) {
        let mut rng = task_rng(seed, 3);
        let edges = random_tree_edges(n, &mut rng);
        let doc = AlgebraDoc {
            elements: (0..n).map(|i| i.to_string()).collect(),
            median: MedianSpecDoc::Tree {
                edges: edges.iter().map(|&(a, b)| [a, b]).collect(),
            },
        };
        let text = serde_json::to_string(&doc).unwrap();
        let parsed: AlgebraDoc = serde_json::from_str(&text).unwrap();
        let alg = parsed.build().unwrap();
        prop_assert!(alg.verify_axioms().ok);
        prop_assert_eq!(alg.rank().unwrap(), 1);
    }
}
