//! The rotation counterexample: conjugating the coordinatewise median by a
//! rotation produces a genuinely different coarse median structure on the
//! Euclidean plane — the defect grows linearly with scale.
//!
//! Run: `cargo run --example rotation_gap`

use std::f64::consts::FRAC_PI_4;

use coarse_median::coarse::{
    closeness_distance, conjugate_by_rotation, euclidean_disk_model, euclidean_rotation_gap, Mode,
};

fn main() {
    println!("gap(k, pi/4) against k/sqrt(2):");
    for k in [1u64, 2, 5, 10, 50, 100] {
        let gap = euclidean_rotation_gap(k as f64, FRAC_PI_4);
        println!(
            "  k = {k:3}: gap = {gap:.9}   k/sqrt(2) = {:.9}",
            k as f64 / 2f64.sqrt()
        );
    }
    println!(
        "gap(10, pi/2) = {:.9} (quarter turns permute coordinates)",
        euclidean_rotation_gap(10.0, std::f64::consts::FRAC_PI_2)
    );

    // the same phenomenon on lattice disks: the sup distance between the
    // coordinatewise median and its rotated conjugate grows with the radius,
    // so the two coarse medians are not close
    let mode = Mode::Sampled {
        samples: 4_000,
        seed: 11,
    };
    println!("sampled closeness sup between the l1 median and its pi/4 conjugate:");
    for radius in [10, 20, 40, 80] {
        let disk = euclidean_disk_model(radius).unwrap();
        let rotated = conjugate_by_rotation(&disk, FRAC_PI_4, mode).unwrap();
        let est = closeness_distance(&disk, &rotated, mode).unwrap();
        println!(
            "  radius {radius:3}: sup over {} sampled triples = {:.9}",
            est.sample_count, est.sup_observed
        );
    }

    // the witness triple from the gap formula, on the radius-100 disk
    let disk = euclidean_disk_model(100).unwrap();
    let rotated = conjugate_by_rotation(&disk, FRAC_PI_4, mode).unwrap();
    let p = |x: i64, y: i64| disk.lattice_index(&[x, y]).unwrap();
    let (x, y, o) = (p(100, 0), p(0, 100), p(0, 0));
    let defect = disk.dist(disk.median(x, y, o), rotated.median(x, y, o));
    println!(
        "witness triple ((100,0), (0,100), (0,0)): defect = {defect:.9} (formula: {:.9})",
        100.0 / 2f64.sqrt()
    );
}
