//! Built-in fixtures reproducing the worked examples and the two
//! counterexamples to "every metric is multiplicative".

use serde::{Deserialize, Serialize};

use super::config::{
    ApproxPoint, EstimateExpectation, Expectations, ExperimentConfig, Outputs, Range, Theorem,
};
use super::run::{run_experiment, ExpectationOutcome, ExperimentReport};
use super::HarnessError;
use crate::conditions::{ConditionId, PhiSpec, ZamfirescuConstants};
use crate::maps::SelfMapSpec;
use crate::metric::{
    verify_axioms, AxiomReport, BaseMetric, BoxDomain, LogPremetric, MetricSpec, Point,
    UsualMetric, LOG_TOL,
};
use crate::sampling::SamplingMode;
use crate::solver::SolverConfig;

pub const FIXTURE_NAMES: [&str; 4] = ["example_3_15", "example_3_16", "example_3_17", "remark_2_5"];

/// `ln eps` used by every fixture.
pub const FIXTURE_LOG_EPS: f64 = 1e-10;
pub const FIXTURE_MAX_ITER: usize = 10_000;
pub const FIXTURE_SEED: u64 = 20_160_501;

fn starts(values: &[&[f64]]) -> Vec<Point> {
    values
        .iter()
        .map(|c| Point::new(c.to_vec()).expect("fixture start"))
        .collect()
}

fn interval(lo: f64, hi: f64) -> BoxDomain {
    BoxDomain::interval(lo, hi).expect("fixture domain")
}

/// Config of an iterative fixture. `remark_2_5` has no config; see
/// [`remark_2_5`].
pub fn fixture_config(name: &str) -> Result<ExperimentConfig, HarnessError> {
    let config = match name {
        "example_3_15" => ExperimentConfig {
            name: name.into(),
            metric: MetricSpec::lifted(BaseMetric::Euclidean, 2.0)?,
            map: SelfMapSpec::Scale { factor: 2.0 / 3.0 },
            domain: BoxDomain::new(vec![(-5.0, 5.0), (-5.0, 5.0)])?,
            sample_size: 60,
            sampling: SamplingMode::Mixed,
            seed: FIXTURE_SEED,
            solver: SolverConfig::with_log_eps(
                FIXTURE_LOG_EPS,
                FIXTURE_MAX_ITER,
                starts(&[&[3.0, 4.0], &[-5.0, 2.0], &[0.1, 0.1]]),
            ),
            confine_to_domain: true,
            constants: Some(ZamfirescuConstants::new(2.0 / 3.0, 0.0, 0.0)?),
            phi: None,
            strict_margin: 0.0,
            uniqueness_candidates: None,
            expect: Expectations {
                axioms: Some(true),
                maps_into_domain: Some(true),
                theorem: Some(Theorem::T2),
                conditions_hold: vec![ConditionId::C1],
                estimate: Some(EstimateExpectation {
                    xi: Some(Range(2.0 / 3.0 - 1e-9, 2.0 / 3.0 + 1e-9)),
                    ..Default::default()
                }),
                converged: Some(true),
                unique_fixed_point: Some(true),
                fixed_point: Some(ApproxPoint {
                    point: Point::new(vec![0.0, 0.0])?,
                    tol: 1e-8,
                }),
                residual_at_most: Some(1e-8),
                bound_holds: Some(true),
                cauchy: Some(true),
            },
            outputs: Outputs::default(),
        },
        "example_3_16" => ExperimentConfig {
            name: name.into(),
            metric: MetricSpec::exp_reciprocal(),
            map: SelfMapSpec::Rational { b: 2.0 },
            domain: interval(0.1, 1.0),
            sample_size: 50,
            sampling: SamplingMode::Grid,
            seed: FIXTURE_SEED,
            solver: SolverConfig::with_log_eps(
                FIXTURE_LOG_EPS,
                FIXTURE_MAX_ITER,
                starts(&[&[0.1], &[0.5], &[1.0]]),
            ),
            confine_to_domain: true,
            constants: Some(ZamfirescuConstants::new(0.0, 0.499, 0.499)?),
            phi: None,
            strict_margin: 0.0,
            uniqueness_candidates: None,
            expect: Expectations {
                axioms: Some(true),
                maps_into_domain: Some(true),
                theorem: Some(Theorem::T2),
                conditions_hold: vec![ConditionId::C2, ConditionId::C3],
                estimate: Some(EstimateExpectation {
                    eta: Some(Range(0.0, 0.499)),
                    lambda: Some(Range(0.0, 0.499)),
                    ..Default::default()
                }),
                converged: Some(true),
                unique_fixed_point: Some(true),
                fixed_point: Some(ApproxPoint {
                    point: Point::scalar(0.4142135624),
                    tol: 1e-8,
                }),
                residual_at_most: None,
                bound_holds: Some(true),
                cauchy: Some(true),
            },
            outputs: Outputs::default(),
        },
        // 1/sqrt(x) sends (1, 2] below 1, so orbits leave the printed domain;
        // conditions are certified on [1, 2] and iterates run unconfined.
        "example_3_17" => ExperimentConfig {
            name: name.into(),
            metric: MetricSpec::exp_abs(2.0)?,
            map: SelfMapSpec::ReciprocalSqrt,
            domain: interval(1.0, 2.0),
            sample_size: 100,
            sampling: SamplingMode::Grid,
            seed: FIXTURE_SEED,
            solver: SolverConfig::with_log_eps(
                FIXTURE_LOG_EPS,
                FIXTURE_MAX_ITER,
                starts(&[&[1.0], &[1.5], &[2.0]]),
            ),
            confine_to_domain: false,
            constants: None,
            phi: Some(PhiSpec::Example317),
            strict_margin: 0.0,
            uniqueness_candidates: Some(starts(&[&[1.0], &[1.5], &[2.0]])),
            expect: Expectations {
                theorem: Some(Theorem::Th3),
                conditions_hold: vec![ConditionId::PHI],
                axioms: Some(true),
                converged: Some(true),
                unique_fixed_point: Some(true),
                fixed_point: Some(ApproxPoint {
                    point: Point::scalar(1.0),
                    tol: 1e-8,
                }),
                bound_holds: Some(true),
                cauchy: Some(true),
                ..Default::default()
            },
            outputs: Outputs::default(),
        },
        _ => return Err(HarnessError::UnknownFixture(name.to_string())),
    };
    config.validate()?;
    Ok(config)
}

/// One triangle inequality evaluated on concrete numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleInstance {
    pub points: [f64; 3],
    /// `d(x, y)` and `d(y, z)`.
    pub legs: [f64; 2],
    /// Sum (additive law) or product (multiplicative law) of the legs.
    pub combined: f64,
    /// `d(x, z)`.
    pub direct: f64,
    /// `combined < direct`, i.e. the law fails.
    pub fails: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemarkReport {
    /// `d*` under the ordinary additive triangle law.
    pub star_product_additive: TriangleInstance,
    /// The usual metric under the multiplicative triangle law.
    pub usual_multiplicative: TriangleInstance,
    /// `verify_axioms` on `{2, 3, 6}` with the usual metric.
    pub usual_axioms: AxiomReport,
    /// `verify_axioms` on `{1/3, 1/2, 3}` with `d*`.
    pub star_product_axioms: AxiomReport,
}

fn triangle<M: LogPremetric>(
    metric: &M,
    [x, y, z]: [f64; 3],
    combine: fn(f64, f64) -> f64,
) -> Result<TriangleInstance, HarnessError> {
    let (px, py, pz) = (Point::scalar(x), Point::scalar(y), Point::scalar(z));
    let legs = [metric.raw_value(&px, &py)?, metric.raw_value(&py, &pz)?];
    let combined = combine(legs[0], legs[1]);
    let direct = metric.raw_value(&px, &pz)?;
    Ok(TriangleInstance {
        points: [x, y, z],
        legs,
        combined,
        direct,
        fails: combined < direct,
    })
}

/// Exact evaluation of both counterexamples.
pub fn remark_2_5() -> Result<(RemarkReport, Vec<ExpectationOutcome>), HarnessError> {
    let star = MetricSpec::star_product();
    let star_pts = [1.0 / 3.0, 0.5, 3.0];
    let usual_pts = [2.0, 3.0, 6.0];
    let report = RemarkReport {
        star_product_additive: triangle(&star, star_pts, |a, b| a + b)?,
        usual_multiplicative: triangle(&UsualMetric, usual_pts, |a, b| a * b)?,
        usual_axioms: verify_axioms(&UsualMetric, &usual_pts.map(Point::scalar), LOG_TOL)?,
        star_product_axioms: verify_axioms(&star, &star_pts.map(Point::scalar), LOG_TOL)?,
    };
    let s = &report.star_product_additive;
    let u = &report.usual_multiplicative;
    let expectations = vec![
        ExpectationOutcome::new(
            "star_product_additive_triangle_fails",
            s.fails && s.legs == [1.5, 6.0] && s.combined == 7.5 && s.direct == 9.0,
            format!(
                "{} + {} = {} < {}",
                s.legs[0], s.legs[1], s.combined, s.direct
            ),
        ),
        ExpectationOutcome::new(
            "usual_multiplicative_triangle_fails",
            u.fails && u.legs == [1.0, 3.0] && u.combined == 3.0 && u.direct == 4.0,
            format!(
                "{} * {} = {} < {}",
                u.legs[0], u.legs[1], u.combined, u.direct
            ),
        ),
        ExpectationOutcome::new(
            "usual_axioms_flag_triangle",
            report.usual_axioms.triangle_violations().count() > 0,
            format!("{} violations", report.usual_axioms.violations.len()),
        ),
        ExpectationOutcome::new(
            "star_product_is_multiplicative",
            report.star_product_axioms.passed(),
            format!("{} violations", report.star_product_axioms.violations.len()),
        ),
    ];
    Ok((report, expectations))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub name: String,
    pub passed: bool,
    pub expectations: Vec<ExpectationOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remark: Option<RemarkReport>,
}

impl FixtureReport {
    pub fn from_experiment(report: ExperimentReport) -> Self {
        FixtureReport {
            name: report.name.clone(),
            passed: report.passed,
            expectations: report.expectations.clone(),
            experiment: Some(report),
            remark: None,
        }
    }
}

/// Runs a fixture with its declared parameters.
pub fn run_fixture(name: &str) -> Result<FixtureReport, HarnessError> {
    if name == "remark_2_5" {
        let (remark, expectations) = remark_2_5()?;
        return Ok(FixtureReport {
            name: name.into(),
            passed: expectations.iter().all(|e| e.passed),
            expectations,
            experiment: None,
            remark: Some(remark),
        });
    }
    let config = fixture_config(name)?;
    Ok(FixtureReport::from_experiment(run_experiment(&config)?))
}
