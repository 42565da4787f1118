//! Finite median algebras and the combinatorics of CAT(0) cube complexes,
//! together with the metric machinery built on top of them: wall-weighted
//! metrics, rectification of metrics on median algebras, Bowditch's
//! deformation towards a CAT(0) metric, coarse median models on lattices and
//! hyperbolic graphs, and approximation of finite subsets of a coarse median
//! space by finite median metric spaces with measured distortion.
//!
//! Everything here is finite and constructive. A [`algebra::FiniteMedianAlgebra`]
//! is the universal carrier: walls, cube complexes, metrics and approximation
//! reports are all derived from it by exhaustive (or seeded, sampled)
//! computation. All operations are pure functions over immutable values.
//!
//! The `examples/` directory of this crate contains one runnable example per
//! major capability; `cmedian` is a thin command-line front end over the same
//! library calls.

pub mod algebra;
pub mod approx;
pub mod cli;
pub mod coarse;
pub mod complex;
pub mod deform;
pub mod error;
pub mod formats;
pub mod metrics;
pub mod sampling;

pub use algebra::{AxiomReport, FiniteMedianAlgebra, Wall};
pub use coarse::{ClosenessEstimate, CoarseMedianSpace, QuasiIsometryPair};
pub use complex::CubeComplexSkeleton;
pub use deform::DiagonalCube;
pub use error::Error;
pub use metrics::{FiniteMetric, MetricMedianAlgebraInstance, WallWeighting};

/// Relative comparison tolerance used whenever inputs are not exactly
/// representable integers.
pub const REL_TOL: f64 = 1e-9;

/// Tolerant equality: exact for integral operands, relative 1e-9 otherwise.
pub(crate) fn nearly_eq(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if a.fract() == 0.0 && b.fract() == 0.0 {
        return false;
    }
    (a - b).abs() <= REL_TOL * 1f64.max(a.abs()).max(b.abs())
}

/// `a <= b` up to the shared tolerance policy.
pub(crate) fn nearly_le(a: f64, b: f64) -> bool {
    a <= b || nearly_eq(a, b)
}
