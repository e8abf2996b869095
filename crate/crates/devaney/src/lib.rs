//! Exact-arithmetic analysis of interval dynamical systems.
//!
//! `devaney` decides, to a stated dyadic resolution and with exact
//! counterexamples on failure, where a piecewise-linear interval map sits
//! in the hierarchy
//!
//! ```text
//! transitive  ⇒  strongly indecomposable  ⇒  indecomposable  ⇒  weakly indecomposable
//! ```
//!
//! together with periodic-point density and the Devaney chaos composite.
//! Everything is computed over arbitrary-precision rationals: canonical
//! closed-interval sets, exact map evaluation and images, forward hulls
//! `U* = closure(⋃ f^n(U))`, exact periodic-point enumeration, and cycle
//! decompositions of transitive cores. No floating point touches any
//! verdict; decimals appear only in SVG output.
//!
//! The narrative guide lives in `book/` and doubles as this crate's
//! doc-test suite, so every snippet in it compiles and runs against the
//! current API.
//!
//! ```
//! use devaney::{analyze, builtin, AnalyzeParams, Status};
//!
//! let map = builtin("tent", None).unwrap();
//! let report = analyze(&map, &AnalyzeParams::default().with_resolution(5)).unwrap();
//! assert_eq!(report.devaney.overall.status, Status::Holds);
//! ```

// Exact-arithmetic payloads (big rationals, interval sets) make error and
// witness types large; errors are cold paths here, so no boxing.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod analysis;
pub mod hull;
pub mod interval;
pub mod map;
pub mod orbit;
pub mod periodic;
pub mod rational;
pub mod render;
pub mod verdict;

pub use analysis::{analyze, AnalysisReport, AnalyzeParams, MapDescriptor};
pub use hull::{
    check_devaney, check_indecomposable, check_strong_indecomposable, check_transitive_on,
    check_transitivity, cycle_decomposition, extract_core, forward_hull, sensitivity_sufficient,
    CoreSet, CycleDecomposition, DecompositionOutcome, DevaneyAnalysis, HullError, HullResult,
};
pub use interval::{dyadic_cells, ClosedInterval, IntervalSet};
pub use map::{builtin, parse_plm, print_plm, MapError, MapKind, MapModel, PLMap, StaircaseMap};
pub use orbit::{omega_estimate, orbit, weak_indecomposability_check, OmegaEstimate, OrbitRecord};
pub use periodic::{
    fixed_points_pl, ordering_oracle, periodic_density_check, periodic_points,
    staircase_gap_check, Completeness, FindingKind, PeriodicFinding, PeriodicScan,
};
pub use rational::Rational;
pub use render::{render_cobweb, render_sets};
pub use verdict::{Budget, BudgetUse, Status, Verdict, Witness};

// Every code block in the book runs under `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-sets.md")]
    mod exact_sets {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/orbits.md")]
    mod orbits {}
    #[doc = include_str!("../../../book/src/periodic-points.md")]
    mod periodic_points {}
    #[doc = include_str!("../../../book/src/hulls-and-verdicts.md")]
    mod hulls_and_verdicts {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    mod decomposition {}
    #[doc = include_str!("../../../book/src/constant-map.md")]
    mod constant_map {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
