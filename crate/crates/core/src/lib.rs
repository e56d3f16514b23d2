//! Fixed points of self-maps on multiplicative metric spaces.
//!
//! A multiplicative metric `d: X x X -> [1, inf)` replaces the additive
//! triangle law with `d(x, z) <= d(x, y) d(y, z)`. This crate evaluates such
//! metrics in log form, certifies contraction-type conditions on samples,
//! runs Picard iteration with multiplicative-Cauchy stopping, and checks the
//! resulting orbits against a-priori geometric bounds.
//!
//! * [`metric`] points, the built-in metrics, axiom and ball checks
//! * [`maps`] the catalog of self-maps
//! * [`sequence`] orbit traces and convergence / Cauchy / limit-point checks
//! * [`conditions`] contraction conditions, constant estimation, verdicts
//! * [`solver`] Picard iteration and its diagnostics
//! * [`harness`] experiment configs, built-in fixtures and reports

pub mod conditions;
pub mod harness;
pub mod maps;
pub mod metric;
pub mod sampling;
pub mod sequence;
pub mod solver;

pub use conditions::{
    check_c1, check_c2, check_c3, check_phi, check_strict, classify, delta_of, estimate_constants,
    ClassifyOptions, ConditionId, ConditionReport, PhiSpec, StrictCondition, ZamfirescuConstants,
};
pub use maps::SelfMapSpec;
pub use metric::{
    in_open_ball, star_abs, verify_axioms, verify_reverse_triangle, BaseMetric, BoxDomain,
    LogDistance, MetricKind, MetricSpec, Point, LOG_TOL,
};
pub use sequence::{
    cauchy_indicator, detect_limit_point, is_converged_to, IterationTrace, TraceStatus,
};
pub use solver::{
    apriori_bound, find_periodic_point, picard, uniqueness_probe, verify_bound,
    verify_start_independence, FixedPointResult, SolverConfig,
};
