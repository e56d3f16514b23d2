use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Theorem};
use super::HarnessError;
use crate::conditions::{classify, ClassifyOptions, ConditionReport};
use crate::maps::SelfMapSpec;
use crate::metric::{verify_axioms, verify_reverse_triangle, MetricSpec, Point, LOG_TOL};
use crate::sampling;
use crate::sequence::{cauchy_indicator, TraceStatus};
use crate::solver::{
    continuity_probe, picard, start_independence_from, uniqueness_probe, verify_bound, BoundReport,
    ContinuityObservation, FixedPointResult, Outcome, RunSummary, StartIndependenceReport,
    UniquenessReport, BOUND_TOL,
};

/// Window of trailing iterates used for the post-hoc Cauchy check.
pub const CAUCHY_CHECK_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ExpectationOutcome {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomSummary {
    pub passed: bool,
    pub violations: usize,
    pub reverse_triangle_passed: bool,
    pub reverse_triangle_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub start: Point,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<FixedPointResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Bound check at the certified delta, for converged runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundReport>,
    /// Post-hoc Cauchy indicator over the final window, for converged runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cauchy_indicator: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: u64,
    pub metric: MetricSpec,
    pub map: SelfMapSpec,
    pub sample_size: usize,
    pub axioms: AxiomSummary,
    /// Sample indices whose image left the domain box.
    pub domain_escapes: Vec<usize>,
    pub conditions: ConditionReport,
    pub certified_delta: Option<f64>,
    pub runs: Vec<RunReport>,
    pub start_independence: StartIndependenceReport,
    pub uniqueness: UniquenessReport,
    /// Numerical continuity of `T` at the first converged point.
    pub continuity: Option<ContinuityObservation>,
    pub expectations: Vec<ExpectationOutcome>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn converged_results(&self) -> impl Iterator<Item = &FixedPointResult> {
        self.runs
            .iter()
            .filter_map(|r| r.result.as_ref())
            .filter(|r| r.status == TraceStatus::Converged)
    }
}

/// Sampling, axiom checks and classification only.
pub fn classify_experiment(config: &ExperimentConfig) -> Result<ConditionReport, HarnessError> {
    config.validate()?;
    let sample = sampling::sample(
        &config.domain,
        config.sample_size,
        config.sampling,
        config.seed,
    );
    let options = ClassifyOptions {
        constants: config.constants,
        phi: config.phi.clone(),
        strict_margin: config.strict_margin,
        seed: Some(config.seed),
    };
    Ok(classify(&config.metric, &config.map, &sample, &options)?)
}

/// The full pipeline: axioms, classification, multi-start Picard,
/// uniqueness probe, bound and Cauchy checks, then declared expectations.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let metric = &config.metric;
    let map = &config.map;
    let sample = sampling::sample(
        &config.domain,
        config.sample_size,
        config.sampling,
        config.seed,
    );

    let axiom_report = verify_axioms(metric, &sample, LOG_TOL)?;
    let reverse = verify_reverse_triangle(metric, &sample, LOG_TOL)?;
    let axioms = AxiomSummary {
        passed: axiom_report.passed(),
        violations: axiom_report.violations.len(),
        reverse_triangle_passed: reverse.passed(),
        reverse_triangle_violations: reverse.violations.len(),
    };

    let domain_escapes = sample
        .iter()
        .enumerate()
        .filter(|(_, x)| !map.apply(x).is_ok_and(|tx| config.domain.contains(&tx)))
        .map(|(i, _)| i)
        .collect();

    let options = ClassifyOptions {
        constants: config.constants,
        phi: config.phi.clone(),
        strict_margin: config.strict_margin,
        seed: Some(config.seed),
    };
    let conditions = classify(metric, map, &sample, &options)?;
    let certified_delta = conditions.certified_delta();

    let solver = config.effective_solver();
    let ln_eps = solver.log_eps();
    let mut runs = Vec::new();
    let mut summaries = Vec::new();
    for start in &solver.starts {
        let outcome = picard(metric, map, start, &solver);
        summaries.push(RunSummary::of(start, &outcome));
        runs.push(match outcome {
            Ok(mut result) => {
                let converged = result.status == TraceStatus::Converged;
                let bound = match (converged, certified_delta) {
                    (true, Some(delta)) => {
                        let b = verify_bound(&result, delta, BOUND_TOL)?;
                        result.bound_checks = b.checks.clone();
                        Some(b)
                    }
                    _ => None,
                };
                let cauchy = if converged {
                    let window = CAUCHY_CHECK_WINDOW.min(result.trace.len());
                    Some(cauchy_indicator(&result.trace, window)?)
                } else {
                    None
                };
                RunReport {
                    start: start.clone(),
                    result: Some(result),
                    error: None,
                    bound,
                    cauchy_indicator: cauchy,
                }
            }
            Err(e) => RunReport {
                start: start.clone(),
                result: None,
                error: Some(e.to_string()),
                bound: None,
                cauchy_indicator: None,
            },
        });
    }

    let start_independence = start_independence_from(metric, &summaries, solver.eps)?;
    let candidates = config.uniqueness_candidates.clone().unwrap_or_else(|| {
        let mut c: Vec<Point> = runs
            .iter()
            .filter_map(|r| r.result.as_ref().map(|res| res.point.clone()))
            .collect();
        c.extend(sample.iter().cloned());
        c
    });
    let uniqueness = uniqueness_probe(metric, map, &candidates, solver.eps)?;

    let continuity = runs
        .iter()
        .filter_map(|r| r.result.as_ref())
        .find(|r| r.status == TraceStatus::Converged)
        .map(|r| continuity_probe(metric, map, &r.point));

    let mut report = ExperimentReport {
        name: config.name.clone(),
        seed: config.seed,
        metric: metric.clone(),
        map: map.clone(),
        sample_size: sample.len(),
        axioms,
        domain_escapes,
        conditions,
        certified_delta,
        runs,
        start_independence,
        uniqueness,
        continuity,
        expectations: Vec::new(),
        passed: false,
    };
    report.expectations = evaluate_expectations(config, &report, ln_eps);
    report.passed = report.expectations.iter().all(|e| e.passed);
    Ok(report)
}

fn evaluate_expectations(
    config: &ExperimentConfig,
    report: &ExperimentReport,
    ln_eps: f64,
) -> Vec<ExpectationOutcome> {
    let expect = &config.expect;
    let mut out = Vec::new();
    let results: Vec<Option<&FixedPointResult>> =
        report.runs.iter().map(|r| r.result.as_ref()).collect();

    if let Some(want) = expect.axioms {
        let got = report.axioms.passed && report.axioms.reverse_triangle_passed;
        out.push(ExpectationOutcome::new(
            "axioms",
            got == want,
            format!(
                "{} axiom / {} reverse-triangle violations",
                report.axioms.violations, report.axioms.reverse_triangle_violations
            ),
        ));
    }
    if let Some(want) = expect.maps_into_domain {
        let got = report.domain_escapes.is_empty();
        out.push(ExpectationOutcome::new(
            "maps_into_domain",
            got == want,
            format!(
                "{} sample images outside the domain",
                report.domain_escapes.len()
            ),
        ));
    }
    if let Some(theorem) = expect.theorem {
        let v = &report.conditions.verdicts;
        let (name, verdict) = match theorem {
            Theorem::T2 => ("t2", Some(&v.t2)),
            Theorem::T23 => ("t23", Some(&v.t23)),
            Theorem::Th3 => ("th3", v.th3.as_ref()),
            Theorem::None => ("none", None),
        };
        let passed = match theorem {
            Theorem::None => v.summary == "none",
            _ => verdict.is_some_and(|t| t.applicable),
        };
        let detail = match verdict {
            Some(t) => format!(
                "{name} applicable: {}, {} failing pairs (summary: {})",
                t.applicable, t.failing_pairs, v.summary
            ),
            None if theorem == Theorem::Th3 => "no phi configured".to_string(),
            None => format!("summary: {}", v.summary),
        };
        out.push(ExpectationOutcome::new(
            format!("theorem:{name}"),
            passed,
            detail,
        ));
    }
    for &id in &expect.conditions_hold {
        let total = report.conditions.records(id).count();
        let bad = report.conditions.violations(id);
        out.push(ExpectationOutcome::new(
            format!("conditions_hold:{id}"),
            total > 0 && bad == 0,
            format!("{bad} of {total} pairs violate {id}"),
        ));
    }
    if let Some(want) = &expect.estimate {
        let est = report.conditions.estimate.as_ref();
        let checks = [
            ("xi", want.xi, est.map(|e| e.xi)),
            ("eta", want.eta, est.map(|e| e.eta)),
            ("lambda", want.lambda, est.map(|e| e.lambda)),
        ];
        for (name, range, got) in checks {
            if let Some(range) = range {
                let passed = got.is_some_and(|g| range.contains(g));
                out.push(ExpectationOutcome::new(
                    format!("estimate:{name}"),
                    passed,
                    format!("{name} = {got:?}, expected in [{}, {}]", range.0, range.1),
                ));
            }
        }
    }
    if let Some(want) = expect.converged {
        let got = results
            .iter()
            .all(|r| r.is_some_and(|r| r.status == TraceStatus::Converged));
        let statuses: Vec<&str> = report
            .runs
            .iter()
            .map(|r| r.result.as_ref().map_or("error", |res| res.status.as_str()))
            .collect();
        out.push(ExpectationOutcome::new(
            "converged",
            got == want,
            statuses.join(", "),
        ));
    }
    if let Some(want) = expect.unique_fixed_point {
        let got = report.start_independence.outcome == Outcome::Pass
            && report.uniqueness.outcome == Outcome::Pass;
        out.push(ExpectationOutcome::new(
            "unique_fixed_point",
            got == want,
            format!(
                "start independence {:?} ({}), uniqueness probe {:?} ({} survivors)",
                report.start_independence.outcome,
                report.start_independence.note,
                report.uniqueness.outcome,
                report.uniqueness.survivors.len()
            ),
        ));
    }
    if let Some(target) = &expect.fixed_point {
        let worst = results
            .iter()
            .map(|r| match r {
                Some(r) if r.point.dim() == target.point.dim() => r
                    .point
                    .coords()
                    .iter()
                    .zip(target.point.coords())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max),
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max);
        out.push(ExpectationOutcome::new(
            "fixed_point",
            worst <= target.tol,
            format!(
                "max deviation {worst:e} from {} (tol {:e})",
                target.point, target.tol
            ),
        ));
    }
    if let Some(limit) = expect.residual_at_most {
        let worst = results
            .iter()
            .map(|r| r.map_or(f64::INFINITY, |r| r.residual_logd.value()))
            .fold(0.0, f64::max);
        out.push(ExpectationOutcome::new(
            "residual",
            worst <= limit,
            format!("max residual log-distance {worst:e} (limit {limit:e})"),
        ));
    }
    if let Some(want) = expect.bound_holds {
        let got = report.certified_delta.is_some()
            && report.runs.iter().all(|r| match (&r.result, &r.bound) {
                (Some(res), Some(b)) => res.status == TraceStatus::Converged && b.passed(),
                _ => false,
            });
        out.push(ExpectationOutcome::new(
            "bound_holds",
            got == want,
            format!("certified delta {:?}", report.certified_delta),
        ));
    }
    if let Some(want) = expect.cauchy {
        let worst = report
            .runs
            .iter()
            .filter_map(|r| r.cauchy_indicator)
            .fold(0.0, f64::max);
        let got = worst <= ln_eps;
        out.push(ExpectationOutcome::new(
            "cauchy",
            got == want,
            format!("max windowed indicator {worst:e} vs ln eps {ln_eps:e}"),
        ));
    }
    out
}
