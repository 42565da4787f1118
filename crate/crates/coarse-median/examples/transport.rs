//! Transporting coarse medians along quasi-isometries: pushforward,
//! pullback, measured constants, and the composition law.
//!
//! Run: `cargo run --example transport`

use coarse_median::algebra::FiniteMedianAlgebra;
use coarse_median::coarse::{
    algebra_model, closeness_distance, l1_lattice_model, pullback, pushforward, Mode,
    QuasiIsometryPair,
};

fn main() {
    let model = l1_lattice_model(&[(0, 3), (0, 3)]).unwrap();
    let coords = model.lattice_coords().unwrap().to_vec();
    let to_idx = |c: &[i64]| model.lattice_index(c).unwrap();

    // an exact isometric automorphism: reflect both coordinates
    let reflect: Vec<usize> = coords
        .iter()
        .map(|c| to_idx(&[3 - c[0], 3 - c[1]]))
        .collect();
    let qi = QuasiIsometryPair::measure(&model, &model, reflect.clone(), reflect).unwrap();
    println!(
        "reflection qi constants: mult = {}, add = {}, g∘f defect = {}",
        qi.constants.mult, qi.constants.add, qi.constants.back_forth
    );

    let pushed = pushforward(&qi, &model, &model, Mode::Exhaustive).unwrap();
    let est = closeness_distance(&pushed, &model, Mode::Exhaustive).unwrap();
    println!(
        "pushforward along the reflection: closeness to the original = {} (params k = {})",
        est.sup_observed, pushed.params.k
    );

    let back = pullback(&qi, &pushed, &model, Mode::Exhaustive).unwrap();
    let round_trip = closeness_distance(&back, &model, Mode::Exhaustive).unwrap();
    println!(
        "pullback of the pushforward: closeness = {}",
        round_trip.sup_observed
    );

    // a non-trivial quasi-isometry: collapse to the even sublattice
    let snap_even: Vec<usize> = coords
        .iter()
        .map(|c| to_idx(&[c[0] - c[0] % 2, c[1] - c[1] % 2]))
        .collect();
    let qi2 = QuasiIsometryPair::measure(
        &model,
        &model,
        snap_even.clone(),
        (0..model.len()).collect(),
    )
    .unwrap();
    println!(
        "even-snap qi: mult = {:.3}, add = {:.3}, f∘g defect = {}",
        qi2.constants.mult, qi2.constants.add, qi2.constants.forth_back
    );
    let pushed2 = pushforward(&qi2, &model, &model, Mode::Exhaustive).unwrap();
    let est2 = closeness_distance(&pushed2, &model, Mode::Exhaustive).unwrap();
    println!(
        "pushforward along the snap: closeness = {} (a bounded defect, structures agree)",
        est2.sup_observed
    );

    // the square algebra carried as a coarse median space: its antipodal
    // automorphism transports the majority median onto itself
    let square = algebra_model(&FiniteMedianAlgebra::majority_bits(2).unwrap()).unwrap();
    let antipodal = vec![3usize, 2, 1, 0];
    let qi3 = QuasiIsometryPair::measure(&square, &square, antipodal.clone(), antipodal).unwrap();
    let pushed3 = pushforward(&qi3, &square, &square, Mode::Exhaustive).unwrap();
    let est3 = closeness_distance(&pushed3, &square, Mode::Exhaustive).unwrap();
    println!(
        "antipodal transport of the square majority median: closeness = {}",
        est3.sup_observed
    );
}
