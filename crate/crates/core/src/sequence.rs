//! Orbit traces and the runtime checks run over them: multiplicative
//! convergence, windowed Cauchy certification, limit points and cycles.

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{LogDistance, MetricError, MetricSpec, Point};

/// Log-distance under which two iterates count as the same point when
/// looking for cycles.
pub const CYCLE_TOL: f64 = 1e-14;

/// Fraction of a trace that must sit inside a ball for its center to count
/// as a limit point.
pub const DEFAULT_LIMIT_FRACTION: f64 = 0.25;

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("eps must be a finite real > 1, got {0}")]
    InvalidEps(f64),
    #[error("trace is empty")]
    EmptyTrace,
    #[error("trace needs at least {needed} points, has {len}")]
    TooShort { needed: usize, len: usize },
    #[error("window {window} is invalid for a trace of {len} points")]
    BadWindow { window: usize, len: usize },
    #[error("limit-point fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// `ln eps` for a multiplicative tolerance `eps > 1`.
pub fn log_eps(eps: f64) -> Result<f64, SequenceError> {
    if !eps.is_finite() || eps <= 1.0 {
        return Err(SequenceError::InvalidEps(eps));
    }
    Ok(eps.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Running,
    Converged,
    MaxIter,
    Diverged,
    CycleDetected,
}

impl TraceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceStatus::Running => "running",
            TraceStatus::Converged => "converged",
            TraceStatus::MaxIter => "max_iter",
            TraceStatus::Diverged => "diverged",
            TraceStatus::CycleDetected => "cycle_detected",
        }
    }
}

#[derive(Deserialize)]
struct TraceRecord {
    metric: MetricSpec,
    points: Vec<Point>,
    status: TraceStatus,
}

/// A Picard orbit together with its consecutive log-distances.
///
/// `step_logd[i]` is always `log d(points[i], points[i + 1])`; the trace is
/// only grown through [`IterationTrace::push`], which keeps that in sync.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TraceRecord")]
pub struct IterationTrace {
    metric: MetricSpec,
    points: Vec<Point>,
    step_logd: Vec<LogDistance>,
    status: TraceStatus,
}

impl TryFrom<TraceRecord> for IterationTrace {
    type Error = SequenceError;

    fn try_from(rec: TraceRecord) -> Result<Self, Self::Error> {
        let mut trace = IterationTrace::from_points(rec.metric, rec.points)?;
        trace.status = rec.status;
        Ok(trace)
    }
}

impl IterationTrace {
    pub fn new(metric: MetricSpec, x0: Point) -> Result<Self, SequenceError> {
        metric.check_point(&x0)?;
        Ok(Self {
            metric,
            points: vec![x0],
            step_logd: Vec::new(),
            status: TraceStatus::Running,
        })
    }

    pub fn from_points(metric: MetricSpec, points: Vec<Point>) -> Result<Self, SequenceError> {
        let mut iter = points.into_iter();
        let first = iter.next().ok_or(SequenceError::EmptyTrace)?;
        let mut trace = Self::new(metric, first)?;
        for p in iter {
            trace.push(p)?;
        }
        Ok(trace)
    }

    /// Appends the next iterate and returns its step log-distance.
    pub fn push(&mut self, next: Point) -> Result<LogDistance, SequenceError> {
        let last = self.points.last().expect("trace is never empty");
        let step = self.metric.log_distance(last, &next)?;
        self.points.push(next);
        self.step_logd.push(step);
        Ok(step)
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.metric
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn step_logd(&self) -> &[LogDistance] {
        &self.step_logd
    }

    pub fn status(&self) -> TraceStatus {
        self.status
    }

    pub fn set_status(&mut self, status: TraceStatus) {
        self.status = status;
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("trace is never empty")
    }

    /// Writes the trace as CSV: `n, x0, x1, ..., step_logd`. The step column
    /// of the final row is empty.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), SequenceError> {
        let mut w = csv::Writer::from_writer(out);
        let dim = self.points[0].dim();
        let mut header = vec!["n".to_string()];
        header.extend((0..dim).map(|i| format!("x{i}")));
        header.push("step_logd".into());
        w.write_record(&header)?;
        for (n, p) in self.points.iter().enumerate() {
            let mut row = vec![n.to_string()];
            row.extend(p.coords().iter().map(f64::to_string));
            row.push(
                self.step_logd
                    .get(n)
                    .map(|s| s.value().to_string())
                    .unwrap_or_default(),
            );
            w.write_record(&row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, SequenceError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// First index `n0` such that every point from `n0` on lies in the open ball
/// `B(x; eps)`; `None` if the final point is already outside.
pub fn convergence_index(
    trace: &IterationTrace,
    x: &Point,
    eps: f64,
) -> Result<Option<usize>, SequenceError> {
    let ln_eps = log_eps(eps)?;
    let mut n0 = None;
    for (n, p) in trace.points.iter().enumerate().rev() {
        if trace.metric.log_distance(p, x)?.value() < ln_eps {
            n0 = Some(n);
        } else {
            break;
        }
    }
    Ok(n0)
}

/// Whether the recorded tail of `trace` has settled inside `B(x; eps)`.
pub fn is_converged_to(trace: &IterationTrace, x: &Point, eps: f64) -> Result<bool, SequenceError> {
    Ok(convergence_index(trace, x, eps)?.is_some())
}

/// Largest pairwise log-distance among the final `window` points.
pub fn cauchy_indicator(trace: &IterationTrace, window: usize) -> Result<f64, SequenceError> {
    let len = trace.len();
    if window == 0 || window > len {
        return Err(SequenceError::BadWindow { window, len });
    }
    let tail = &trace.points[len - window..];
    let mut worst = 0.0_f64;
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            worst = worst.max(trace.metric.log_distance(a, b)?.value());
        }
    }
    Ok(worst)
}

/// Full O(N^2) pairwise check over the whole trace.
pub fn cauchy_indicator_full(trace: &IterationTrace) -> Result<f64, SequenceError> {
    cauchy_indicator(trace, trace.len())
}

pub fn detect_limit_point(
    trace: &IterationTrace,
    eps: f64,
) -> Result<Option<Point>, SequenceError> {
    detect_limit_point_with(trace, eps, DEFAULT_LIMIT_FRACTION)
}

/// Earliest trace point whose ball `B(z; eps)` holds at least
/// `ceil(fraction * len)` trace points (itself included).
pub fn detect_limit_point_with(
    trace: &IterationTrace,
    eps: f64,
    fraction: f64,
) -> Result<Option<Point>, SequenceError> {
    let ln_eps = log_eps(eps)?;
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(SequenceError::InvalidFraction(fraction));
    }
    let len = trace.len();
    if len < 2 {
        return Err(SequenceError::TooShort { needed: 2, len });
    }
    let needed = (fraction * len as f64).ceil() as usize;
    for z in &trace.points {
        let mut inside = 0;
        for p in &trace.points {
            if trace.metric.log_distance(z, p)?.value() < ln_eps {
                inside += 1;
            }
        }
        if inside >= needed {
            return Ok(Some(z.clone()));
        }
    }
    Ok(None)
}

/// Period `k in 2..=max_period` with the last point matching the one `k`
/// steps back while the last step is still above `ln_eps`.
pub fn detect_cycle(
    trace: &IterationTrace,
    ln_eps: f64,
    max_period: usize,
) -> Result<Option<usize>, SequenceError> {
    let n = trace.len() - 1;
    match trace.step_logd.last() {
        Some(step) if step.value() > ln_eps => {}
        _ => return Ok(None),
    }
    for k in 2..=max_period.min(n) {
        if trace
            .metric
            .log_distance(&trace.points[n], &trace.points[n - k])?
            .value()
            < CYCLE_TOL
        {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
