//! Wall-weighted metrics, median metric verification, and rectification.
//!
//! Run: `cargo run --example wall_metrics`

use coarse_median::algebra::FiniteMedianAlgebra;
use coarse_median::metrics::{
    check_monotonicity, rectifiability_diagnostics, verify_median_metric, wall_metric,
    FiniteMetric, MetricMedianAlgebraInstance, NestedPairCase, WallWeighting,
};

fn main() {
    // every wall weighting yields a median metric recovering the median
    let cube = FiniteMedianAlgebra::majority_bits(3).unwrap();
    let walls = cube.enumerate_walls().unwrap();
    let weighting = WallWeighting::new(vec![1.0, 2.0, 3.0]).unwrap();
    let d_l = wall_metric(&cube, &walls, &weighting).unwrap();
    println!("d_l(000, 111) with lengths (1,2,3) = {}", d_l.get(0, 7));
    let report = verify_median_metric(&d_l);
    println!("d_l is a median metric: {}", report.ok);

    // the unit triangle is not a median metric space
    let triangle = FiniteMetric::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0],
    )
    .unwrap();
    let tri_report = verify_median_metric(&triangle);
    println!(
        "unit triangle median metric: {} (witness intersection size {:?})",
        tri_report.ok,
        tri_report.witness.map(|w| w.3)
    );

    // the Euclidean square rectifies to the graph metric of the square
    let square = FiniteMedianAlgebra::majority_bits(2).unwrap();
    let pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
    let mut matrix = vec![0.0; 16];
    for a in 0..4 {
        for b in 0..4 {
            let (dx, dy): (f64, f64) = (pts[a].0 - pts[b].0, pts[a].1 - pts[b].1);
            matrix[a * 4 + b] = (dx * dx + dy * dy).sqrt();
        }
    }
    let l2 = FiniteMetric::new(square.ids().to_vec(), matrix).unwrap();
    let inst = MetricMedianAlgebraInstance::new(square, l2).unwrap();
    let rectified = inst.rectified_metric().unwrap();
    println!(
        "l2 square: d(00,11) = {:.9} rectifies to {:.9}",
        inst.metric.get(0, 3),
        rectified.get(0, 3)
    );

    // rectified distances only grow when the subalgebra grows
    let case = NestedPairCase {
        small: vec![0, 3],
        large: vec![0, 1, 2, 3],
        x: 0,
        y: 3,
    };
    let mono = check_monotonicity(&inst, &[case]).unwrap();
    println!(
        "monotonicity (diagonal pair vs full square): {} checked, {} violations",
        mono.checked,
        mono.violations.len()
    );
    println!(
        "  d_mu^{{x,y}}(0,3) = {:.9} <= d_mu^square(0,3) = {:.9}",
        inst.rectified_on_subalgebra(&[0, 3], 0, 3).unwrap(),
        inst.rectified_on_subalgebra(&[0, 1, 2, 3], 0, 3).unwrap()
    );

    let diag = rectifiability_diagnostics(&inst, 16, 7).unwrap();
    println!(
        "rectifiability diagnostics: ratio sup = {:.9}, wall spread sup = {:.9}",
        diag.ratio_sup, diag.spread_sup
    );
}
