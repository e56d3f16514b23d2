//! Picard iteration with multiplicative-Cauchy stopping, a-priori error
//! bounds, and the multi-start / uniqueness / periodic-point diagnostics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{MapError, SelfMapSpec};
use crate::metric::{BoxDomain, LogDistance, MetricError, MetricSpec, Point};
use crate::sequence::{
    cauchy_indicator, detect_cycle, detect_limit_point, log_eps, IterationTrace, SequenceError,
    TraceStatus,
};

/// Step log-distance past which a run is declared diverged.
pub const DIVERGENCE_LOGD: f64 = 700.0;

/// Tolerance added to a-priori bounds when checking them along a trace.
pub const BOUND_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
    #[error("iterate {iterate} left the domain at {point}: {reason}")]
    DomainEscape {
        iterate: usize,
        point: Point,
        reason: String,
    },
    #[error("delta = {0} is outside [0, 1)")]
    DeltaRange(f64),
    #[error("bound needs m > n, got n = {n}, m = {m}")]
    IndexOrder { n: usize, m: usize },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn default_window() -> usize {
    10
}

fn default_divergence() -> f64 {
    DIVERGENCE_LOGD
}

fn default_cycle_period() -> usize {
    8
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Multiplicative stopping tolerance, `> 1`.
    pub eps: f64,
    pub max_iter: usize,
    pub starts: Vec<Point>,
    #[serde(default)]
    pub check_monotone_residual: bool,
    /// Trailing iterates checked pairwise before declaring convergence.
    #[serde(default = "default_window")]
    pub cauchy_window: usize,
    #[serde(default = "default_divergence")]
    pub divergence_logd: f64,
    #[serde(default = "default_cycle_period")]
    pub cycle_max_period: usize,
    /// Restart once from a detected limit point when a run stalls.
    #[serde(default = "default_true")]
    pub restart_on_stall: bool,
    /// Iterates must stay in this box when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<BoxDomain>,
}

impl SolverConfig {
    pub fn new(eps: f64, max_iter: usize, starts: Vec<Point>) -> Self {
        Self {
            eps,
            max_iter,
            starts,
            check_monotone_residual: false,
            cauchy_window: default_window(),
            divergence_logd: DIVERGENCE_LOGD,
            cycle_max_period: default_cycle_period(),
            restart_on_stall: true,
            domain: None,
        }
    }

    /// Tolerance given by its logarithm, `eps = exp(log_eps)`.
    pub fn with_log_eps(log_eps: f64, max_iter: usize, starts: Vec<Point>) -> Self {
        Self::new(log_eps.exp(), max_iter, starts)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if !self.eps.is_finite() || self.eps <= 1.0 {
            return bad(format!("eps = {} must exceed 1", self.eps));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1".into());
        }
        if self.starts.is_empty() {
            return bad("no starting points".into());
        }
        if self.cauchy_window == 0 {
            return bad("cauchy_window must be at least 1".into());
        }
        if !(self.divergence_logd > 0.0) {
            return bad(format!("divergence_logd = {}", self.divergence_logd));
        }
        if let Some(d) = &self.domain {
            if let Some(s) = self.starts.iter().find(|s| !d.contains(s)) {
                return bad(format!("start {s} is outside the domain"));
            }
        }
        Ok(())
    }

    pub fn log_eps(&self) -> f64 {
        self.eps.ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub n: usize,
    pub observed_logd: f64,
    pub predicted_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub from: Point,
    pub first_status: TraceStatus,
    pub first_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub point: Point,
    /// `log d(z, Tz)` at the returned point.
    pub residual_logd: LogDistance,
    pub iterations: usize,
    pub status: TraceStatus,
    pub trace: IterationTrace,
    pub bound_checks: Vec<BoundCheck>,
    /// Steps `n` with `step[n + 1] >= step[n]` before convergence; only
    /// filled when the monotone check is requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone_violations: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart: Option<RestartRecord>,
}

fn escape(iterate: usize, point: &Point, reason: impl ToString) -> SolverError {
    SolverError::DomainEscape {
        iterate,
        point: point.clone(),
        reason: reason.to_string(),
    }
}

fn apply_checked(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    domain: Option<&BoxDomain>,
    x: &Point,
    iterate: usize,
) -> Result<Point, SolverError> {
    let next = map.apply(x).map_err(|e| match e {
        MapError::Undefined { .. } | MapError::Point(_) => escape(iterate - 1, x, e),
        other => SolverError::InvalidConfig(other.to_string()),
    })?;
    if let Some(d) = domain {
        if !d.contains(&next) {
            return Err(escape(iterate, &next, "outside the declared box"));
        }
    }
    metric
        .check_point(&next)
        .map_err(|e| escape(iterate, &next, e))?;
    Ok(next)
}

fn run(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x0: &Point,
    config: &SolverConfig,
) -> Result<FixedPointResult, SolverError> {
    let ln_eps = config.log_eps();
    let domain = config.domain.as_ref();
    if domain.is_some_and(|d| !d.contains(x0)) {
        return Err(escape(0, x0, "start is outside the declared box"));
    }
    metric.check_point(x0).map_err(|e| escape(0, x0, e))?;

    let mut trace = IterationTrace::new(metric.clone(), x0.clone())?;
    let mut status = TraceStatus::MaxIter;
    let mut residual = None;
    for n in 1..=config.max_iter {
        let next = apply_checked(metric, map, domain, trace.last(), n)?;
        let step = trace.push(next)?.value();
        if !step.is_finite() || step > config.divergence_logd {
            status = TraceStatus::Diverged;
            break;
        }
        if step < ln_eps {
            let window = config.cauchy_window.min(trace.len());
            if cauchy_indicator(&trace, window)? < ln_eps {
                let z = trace.last();
                let tz = apply_checked(metric, map, None, z, n + 1)?;
                let r = metric.log_distance(z, &tz)?;
                if r.value() <= ln_eps {
                    residual = Some(r);
                    status = TraceStatus::Converged;
                    break;
                }
            }
        }
        if detect_cycle(&trace, ln_eps, config.cycle_max_period)?.is_some() {
            status = TraceStatus::CycleDetected;
            break;
        }
    }
    trace.set_status(status);

    let residual = match residual {
        Some(r) => r,
        None => {
            let z = trace.last();
            map.apply(z)
                .ok()
                .and_then(|tz| metric.log_distance(z, &tz).ok())
                .or_else(|| trace.step_logd().last().copied())
                .unwrap_or(LogDistance::ZERO)
        }
    };

    let monotone_violations = config.check_monotone_residual.then(|| {
        let steps = trace.step_logd();
        (0..steps.len().saturating_sub(1))
            .filter(|&i| steps[i].value() > ln_eps && steps[i + 1] >= steps[i])
            .collect()
    });

    Ok(FixedPointResult {
        point: trace.last().clone(),
        residual_logd: residual,
        iterations: trace.len() - 1,
        status,
        trace,
        bound_checks: Vec::new(),
        monotone_violations,
        restart: None,
    })
}

/// Picard iteration `x_{n+1} = T(x_n)` from `x0`.
///
/// Converges once a step falls below `ln eps` and the trailing window of
/// iterates is pairwise within `ln eps`, with the residual `log d(z, Tz)`
/// confirmed. A run that stalls (`max_iter` or a cycle) is restarted once from
/// a detected limit point of its orbit when `restart_on_stall` is set.
pub fn picard(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x0: &Point,
    config: &SolverConfig,
) -> Result<FixedPointResult, SolverError> {
    config.validate()?;
    let first = run(metric, map, x0, config)?;
    let stalled = matches!(
        first.status,
        TraceStatus::MaxIter | TraceStatus::CycleDetected
    );
    if !(stalled && config.restart_on_stall && first.trace.len() >= 2) {
        return Ok(first);
    }
    let Some(z) = detect_limit_point(&first.trace, config.eps)? else {
        return Ok(first);
    };
    log::info!(
        "restarting stalled run ({}) from limit point {z}",
        first.status.as_str()
    );
    let mut second = run(metric, map, &z, config)?;
    second.restart = Some(RestartRecord {
        from: z,
        first_status: first.status,
        first_iterations: first.iterations,
    });
    Ok(second)
}

/// `d1 * (delta^n - delta^m) / (1 - delta)`, the log-form bound on
/// `d(x_n, x_m)`; `m = None` gives the tail bound on `d(x_n, z)`.
pub fn apriori_bound(
    d1: LogDistance,
    delta: f64,
    n: usize,
    m: Option<usize>,
) -> Result<LogDistance, SolverError> {
    if !(0.0..1.0).contains(&delta) {
        return Err(SolverError::DeltaRange(delta));
    }
    let far = match m {
        Some(m) if m <= n => return Err(SolverError::IndexOrder { n, m }),
        Some(m) => delta.powf(m as f64),
        None => 0.0,
    };
    let near = delta.powf(n as f64);
    Ok(LogDistance::new(d1.value() * (near - far) / (1.0 - delta)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// False when the run did not converge; nothing is checked then.
    pub applicable: bool,
    pub delta: f64,
    pub tol: f64,
    pub checks: Vec<BoundCheck>,
    /// Indices `n` where the observed distance exceeded the bound.
    pub violations: Vec<usize>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.applicable && self.violations.is_empty()
    }
}

/// Checks `log d(x_n, z) <= d1 delta^n / (1 - delta) + tol` along a
/// converged run, `z` being its final point.
pub fn verify_bound(
    result: &FixedPointResult,
    delta: f64,
    tol: f64,
) -> Result<BoundReport, SolverError> {
    if !(0.0..1.0).contains(&delta) {
        return Err(SolverError::DeltaRange(delta));
    }
    let mut report = BoundReport {
        applicable: false,
        delta,
        tol,
        checks: Vec::new(),
        violations: Vec::new(),
    };
    let trace = &result.trace;
    if result.status != TraceStatus::Converged || trace.step_logd().is_empty() {
        return Ok(report);
    }
    report.applicable = true;
    let d1 = trace.step_logd()[0];
    let metric = trace.metric();
    for (n, x) in trace.points().iter().enumerate() {
        let observed = metric.log_distance(x, &result.point)?.value();
        let predicted = apriori_bound(d1, delta, n, None)?.value();
        if observed > predicted + tol {
            report.violations.push(n);
        }
        report.checks.push(BoundCheck {
            n,
            observed_logd: observed,
            predicted_bound: predicted,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub start: Point,
    pub status: Option<TraceStatus>,
    pub point: Option<Point>,
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunSummary {
    pub fn of(start: &Point, run: &Result<FixedPointResult, SolverError>) -> Self {
        match run {
            Ok(r) => RunSummary {
                start: start.clone(),
                status: Some(r.status),
                point: Some(r.point.clone()),
                iterations: Some(r.iterations),
                error: None,
            },
            Err(e) => RunSummary {
                start: start.clone(),
                status: None,
                point: None,
                iterations: None,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartIndependenceReport {
    pub outcome: Outcome,
    pub runs: Vec<RunSummary>,
    /// Largest log-distance between final points of converged runs.
    pub max_pair_logd: f64,
    pub threshold: f64,
    pub note: String,
}

/// Agreement check over runs that were already made from several starts.
pub fn start_independence_from(
    metric: &MetricSpec,
    runs: &[RunSummary],
    eps: f64,
) -> Result<StartIndependenceReport, SolverError> {
    let threshold = 2.0 * log_eps(eps)?;
    let mut report = StartIndependenceReport {
        outcome: Outcome::Pass,
        runs: runs.to_vec(),
        max_pair_logd: 0.0,
        threshold,
        note: String::new(),
    };
    if runs.len() < 2 {
        report.note = "single start: vacuous".into();
        return Ok(report);
    }
    if runs
        .iter()
        .any(|r| r.status != Some(TraceStatus::Converged))
    {
        report.outcome = Outcome::Inconclusive;
        report.note = "not every run converged".into();
        return Ok(report);
    }
    let points: Vec<&Point> = runs.iter().filter_map(|r| r.point.as_ref()).collect();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            report.max_pair_logd = report.max_pair_logd.max(metric.log_distance(a, b)?.value());
        }
    }
    if report.max_pair_logd > threshold {
        report.outcome = Outcome::Fail;
        report.note = "runs converged to different points: not a contraction".into();
    }
    Ok(report)
}

/// Runs Picard from every configured start and checks that all limits agree
/// to within `2 ln eps`.
pub fn verify_start_independence(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    config: &SolverConfig,
) -> Result<StartIndependenceReport, SolverError> {
    config.validate()?;
    let runs: Vec<RunSummary> = config
        .starts
        .iter()
        .map(|s| RunSummary::of(s, &picard(metric, map, s, config)))
        .collect();
    start_independence_from(metric, &runs, config.eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub point: Point,
    pub period: usize,
    /// Position of `point` in the orbit of `x0`.
    pub orbit_index: usize,
}

/// Searches the orbit of `x0` for the first `w` with
/// `log d(T^p w, w) < ln eps`, taking the least such `p <= max_period`.
/// Stops quietly if the orbit leaves the map's domain.
pub fn find_periodic_point(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x0: &Point,
    max_period: usize,
    eps: f64,
    max_iter: usize,
) -> Result<Option<PeriodicPoint>, SolverError> {
    let ln_eps = log_eps(eps)?;
    if max_period == 0 {
        return Err(SolverError::InvalidConfig(
            "max_period must be at least 1".into(),
        ));
    }
    let mut orbit = vec![x0.clone()];
    while orbit.len() < max_iter + max_period + 1 {
        match map.apply(orbit.last().expect("nonempty")) {
            Ok(next) if metric.check_point(&next).is_ok() => orbit.push(next),
            _ => break,
        }
    }
    for i in 0..orbit.len() {
        for p in 1..=max_period {
            let Some(later) = orbit.get(i + p) else { break };
            if metric.log_distance(&orbit[i], later)?.value() < ln_eps {
                return Ok(Some(PeriodicPoint {
                    point: orbit[i].clone(),
                    period: p,
                    orbit_index: i,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub outcome: Outcome,
    /// `log d(c, Tc)` per candidate; `None` where `T` was undefined.
    pub residuals: Vec<Option<f64>>,
    /// Indices of candidates with residual `<= ln eps`.
    pub survivors: Vec<usize>,
    pub max_pair_logd: f64,
}

/// Keeps candidates that are fixed to within `ln eps` and passes if they
/// all lie within `2 ln eps` of one another.
pub fn uniqueness_probe(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    candidates: &[Point],
    eps: f64,
) -> Result<UniquenessReport, SolverError> {
    let ln_eps = log_eps(eps)?;
    if candidates.is_empty() {
        return Err(SolverError::InvalidConfig(
            "no uniqueness candidates".into(),
        ));
    }
    let residuals: Vec<Option<f64>> = candidates
        .iter()
        .map(|c| {
            map.apply(c)
                .ok()
                .and_then(|tc| metric.log_distance(c, &tc).ok())
                .map(LogDistance::value)
        })
        .collect();
    let survivors: Vec<usize> = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_some_and(|r| r <= ln_eps))
        .map(|(i, _)| i)
        .collect();
    let mut max_pair_logd = 0.0_f64;
    for (k, &i) in survivors.iter().enumerate() {
        for &j in &survivors[k + 1..] {
            max_pair_logd =
                max_pair_logd.max(metric.log_distance(&candidates[i], &candidates[j])?.value());
        }
    }
    let outcome = if survivors.is_empty() {
        Outcome::Inconclusive
    } else if max_pair_logd <= 2.0 * ln_eps {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(UniquenessReport {
        outcome,
        residuals,
        survivors,
        max_pair_logd,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuitySample {
    pub step: f64,
    pub input_logd: f64,
    pub output_logd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityObservation {
    /// Image distances shrank with the perturbation in every direction.
    pub observed: bool,
    pub samples: Vec<ContinuitySample>,
}

/// Numerical look at continuity of `T` at `z`: perturbs each coordinate by
/// `+-h` for shrinking `h` and records how far the image moves. This is an
/// observation, not a proof.
pub fn continuity_probe(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    z: &Point,
) -> ContinuityObservation {
    const STEPS: [f64; 5] = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10];
    let Ok(tz) = map.apply(z) else {
        return ContinuityObservation {
            observed: false,
            samples: Vec::new(),
        };
    };
    let mut samples = Vec::new();
    let mut observed = true;
    for axis in 0..z.dim() {
        for sign in [1.0, -1.0] {
            let mut outputs = Vec::new();
            for h in STEPS {
                let mut coords = z.coords().to_vec();
                coords[axis] += sign * h * (1.0 + coords[axis].abs());
                let moved = Point::new(coords).ok();
                let sample = moved.and_then(|w| {
                    let tw = map.apply(&w).ok()?;
                    Some(ContinuitySample {
                        step: sign * h,
                        input_logd: metric.log_distance(z, &w).ok()?.value(),
                        output_logd: metric.log_distance(&tz, &tw).ok()?.value(),
                    })
                });
                match sample {
                    Some(s) => {
                        outputs.push(s.output_logd);
                        samples.push(s);
                    }
                    None => observed = false,
                }
            }
            let first = outputs.first().copied().unwrap_or(f64::INFINITY);
            let last = outputs.last().copied().unwrap_or(f64::INFINITY);
            if !(last <= 1e-6 * (1.0 + first)) {
                observed = false;
            }
        }
    }
    ContinuityObservation { observed, samples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BaseMetric;
    use std::f64::consts::E;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    fn exp_abs() -> MetricSpec {
        MetricSpec::exp_abs(E).unwrap()
    }

    fn cfg(starts: Vec<Point>) -> SolverConfig {
        SolverConfig::with_log_eps(1e-10, 500, starts)
    }

    #[test]
    fn apriori_bound_values() {
        let ln2 = LogDistance::new(2f64.ln());
        let b = apriori_bound(ln2, 0.5, 3, None).unwrap().value();
        assert!((b - 0.25 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(apriori_bound(ln2, 0.0, 0, None).unwrap().value(), 2f64.ln());
        assert_eq!(apriori_bound(ln2, 0.0, 1, None).unwrap().value(), 0.0);
        assert_eq!(
            apriori_bound(LogDistance::ZERO, 0.7, 2, Some(9))
                .unwrap()
                .value(),
            0.0
        );
        assert!(matches!(
            apriori_bound(ln2, 1.0, 0, None),
            Err(SolverError::DeltaRange(_))
        ));
        assert!(matches!(
            apriori_bound(ln2, 0.5, 3, Some(3)),
            Err(SolverError::IndexOrder { .. })
        ));
    }

    #[test]
    fn already_fixed_start() {
        let map = SelfMapSpec::Constant { value: p(0.25) };
        let r = picard(&exp_abs(), &map, &p(0.25), &cfg(vec![p(0.25)])).unwrap();
        assert_eq!(r.status, TraceStatus::Converged);
        assert!(r.iterations <= 1);
        assert_eq!(r.residual_logd.value(), 0.0);
    }

    #[test]
    fn translation_diverges_or_stalls() {
        let map = SelfMapSpec::Affine {
            matrix: vec![vec![1.0]],
            offset: vec![1.0],
        };
        let mut c = cfg(vec![p(0.0)]);
        c.max_iter = 50;
        let r = picard(&exp_abs(), &map, &p(0.0), &c).unwrap();
        assert_eq!(r.status, TraceStatus::MaxIter);
        assert!(r.restart.is_none(), "escaping orbit has no limit point");
    }

    #[test]
    fn huge_steps_diverge() {
        let map = SelfMapSpec::Scale { factor: 10.0 };
        let r = picard(&exp_abs(), &map, &p(1.0), &cfg(vec![p(1.0)])).unwrap();
        assert_eq!(r.status, TraceStatus::Diverged);
    }

    #[test]
    fn negation_cycles() {
        let mut c = cfg(vec![p(1.0)]);
        c.restart_on_stall = false;
        let r = picard(&exp_abs(), &SelfMapSpec::Negation, &p(1.0), &c).unwrap();
        assert_eq!(r.status, TraceStatus::CycleDetected);
        let w = find_periodic_point(&exp_abs(), &SelfMapSpec::Negation, &p(1.0), 4, 1.0001, 20)
            .unwrap()
            .unwrap();
        assert_eq!((w.point, w.period), (p(1.0), 2));
    }

    #[test]
    fn stalled_cycle_restarts_once() {
        let r = picard(
            &exp_abs(),
            &SelfMapSpec::Negation,
            &p(1.0),
            &cfg(vec![p(1.0)]),
        )
        .unwrap();
        let restart = r.restart.expect("restart recorded");
        assert_eq!(restart.first_status, TraceStatus::CycleDetected);
        assert_eq!(r.status, TraceStatus::CycleDetected);
    }

    #[test]
    fn periodic_search_on_contraction_and_escape() {
        let map = SelfMapSpec::Scale { factor: 0.5 };
        let w = find_periodic_point(&exp_abs(), &map, &p(1.0), 3, 1.0 + 1e-9, 100)
            .unwrap()
            .unwrap();
        assert_eq!(w.period, 1);
        let shift = SelfMapSpec::Affine {
            matrix: vec![vec![1.0]],
            offset: vec![1.0],
        };
        assert!(find_periodic_point(&exp_abs(), &shift, &p(0.0), 3, 1.5, 50)
            .unwrap()
            .is_none());
    }

    #[test]
    fn domain_escape_names_the_iterate() {
        let mut c = cfg(vec![p(0.5)]);
        c.domain = Some(BoxDomain::interval(0.0, 1.0).unwrap());
        let map = SelfMapSpec::Scale { factor: 3.0 };
        match picard(&exp_abs(), &map, &p(0.5), &c) {
            Err(SolverError::DomainEscape { iterate, point, .. }) => {
                assert_eq!(iterate, 1);
                assert_eq!(point, p(1.5));
            }
            other => panic!("expected escape, got {other:?}"),
        }
        let r = picard(
            &exp_abs(),
            &SelfMapSpec::ReciprocalSqrt,
            &p(-1.0),
            &cfg(vec![p(-1.0)]),
        );
        assert!(matches!(
            r,
            Err(SolverError::DomainEscape { iterate: 0, .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(1.0, 10, vec![p(0.0)]).validate().is_err());
        assert!(SolverConfig::new(1.1, 0, vec![p(0.0)]).validate().is_err());
        assert!(SolverConfig::new(1.1, 10, vec![]).validate().is_err());
    }

    #[test]
    fn identity_depends_on_start() {
        let c = cfg(vec![p(0.0), p(1.0)]);
        let rep = verify_start_independence(&exp_abs(), &SelfMapSpec::Identity, &c).unwrap();
        assert_eq!(rep.outcome, Outcome::Fail);
        let single = cfg(vec![p(0.0)]);
        let rep = verify_start_independence(&exp_abs(), &SelfMapSpec::Identity, &single).unwrap();
        assert_eq!(rep.outcome, Outcome::Pass);
    }

    #[test]
    fn non_converged_start_is_inconclusive() {
        let mut c = cfg(vec![p(1.0), p(2.0)]);
        c.restart_on_stall = false;
        let rep = verify_start_independence(&exp_abs(), &SelfMapSpec::Negation, &c).unwrap();
        assert_eq!(rep.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn uniqueness_outcomes() {
        let m = exp_abs();
        let rep = uniqueness_probe(&m, &SelfMapSpec::Identity, &[p(0.0), p(5.0)], 1.001).unwrap();
        assert_eq!(rep.outcome, Outcome::Fail);
        let rep = uniqueness_probe(&m, &SelfMapSpec::Negation, &[p(1.0), p(2.0)], 1.001).unwrap();
        assert_eq!(rep.outcome, Outcome::Inconclusive);
        let rep = uniqueness_probe(&m, &SelfMapSpec::Negation, &[p(0.0), p(2.0)], 1.001).unwrap();
        assert_eq!(
            (rep.outcome, rep.survivors.clone()),
            (Outcome::Pass, vec![0])
        );
    }

    #[test]
    fn undersized_delta_is_caught() {
        let metric = MetricSpec::lifted(BaseMetric::Euclidean, 2.0).unwrap();
        let map = SelfMapSpec::Scale { factor: 2.0 / 3.0 };
        let x0 = Point::new(vec![3.0, 4.0]).unwrap();
        let r = picard(&metric, &map, &x0, &cfg(vec![x0.clone()])).unwrap();
        assert!(verify_bound(&r, 2.0 / 3.0, BOUND_TOL).unwrap().passed());
        assert!(!verify_bound(&r, 0.1, BOUND_TOL)
            .unwrap()
            .violations
            .is_empty());
    }

    #[test]
    fn monotone_residual_tracking() {
        let mut c = cfg(vec![p(1.0)]);
        c.check_monotone_residual = true;
        let r = picard(&exp_abs(), &SelfMapSpec::Scale { factor: 0.5 }, &p(1.0), &c).unwrap();
        assert_eq!(r.monotone_violations, Some(vec![]));
    }

    #[test]
    fn continuity_of_smooth_map() {
        let obs = continuity_probe(&exp_abs(), &SelfMapSpec::Rational { b: 2.0 }, &p(0.4));
        assert!(obs.observed);
        let table = SelfMapSpec::swap(p(1.0), p(-1.0));
        assert!(!continuity_probe(&exp_abs(), &table, &p(1.0)).observed);
    }
}
