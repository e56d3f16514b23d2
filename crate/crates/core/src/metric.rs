//! Points, multiplicative metrics and the log-domain machinery.
//!
//! A multiplicative metric takes values in `[1, inf)` and satisfies the
//! product form of the triangle inequality. Every built-in metric here is
//! evaluated as its natural logarithm, which turns the product law into the
//! ordinary additive one and keeps `a^d` from overflowing for large `d`.
//! [`MetricSpec::distance`] is offered as a convenience and may saturate to
//! `+inf`; everything else in the crate consumes [`MetricSpec::log_distance`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Log-domain tolerance used for equality-type certifications.
pub const LOG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("a point needs at least one coordinate")]
    EmptyPoint,
    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("point {point} is outside the domain of {metric}: {reason}")]
    OutOfDomain {
        metric: &'static str,
        point: Point,
        reason: &'static str,
    },
    #[error("metric base must be a finite real > 1, got {0}")]
    InvalidBase(f64),
    #[error("ball radius must be a finite real > 1, got {0}")]
    InvalidRadius(f64),
    #[error("|.|* is defined for finite positive reals, got {0}")]
    StarAbsDomain(f64),
    #[error("invalid metric spec: {0}")]
    InvalidSpec(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}

/// A point of `R^n`, `n >= 1`, with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, MetricError> {
        if coords.is_empty() {
            return Err(MetricError::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(MetricError::NonFinite { index, value });
        }
        Ok(Self { coords })
    }

    /// One-dimensional point. Panics on a non-finite value.
    pub fn scalar(x: f64) -> Self {
        Self::new(vec![x]).expect("finite scalar")
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = MetricError;

    fn try_from(coords: Vec<f64>) -> Result<Self, Self::Error> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Natural logarithm of a multiplicative distance. Always `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogDistance(f64);

impl LogDistance {
    pub const ZERO: LogDistance = LogDistance(0.0);

    /// Wraps a raw value, clamping tiny negative rounding noise to zero.
    pub fn new(value: f64) -> Self {
        debug_assert!(!(value < -LOG_TOL), "negative log-distance {value}");
        LogDistance(value.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The multiplicative distance `exp(value)`; saturates to `+inf`.
    pub fn to_distance(self) -> f64 {
        self.0.exp()
    }
}

/// `|a|* = max(a, 1/a)` for positive `a`.
pub fn star_abs(a: f64) -> Result<f64, MetricError> {
    if !a.is_finite() || a <= 0.0 {
        return Err(MetricError::StarAbsDomain(a));
    }
    Ok(if a >= 1.0 { a } else { 1.0 / a })
}

/// Ordinary metric on `R^n` that a lifted multiplicative metric exponentiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMetric {
    #[serde(alias = "usual")]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl BaseMetric {
    fn eval(self, x: &[f64], y: &[f64]) -> f64 {
        let diffs = x.iter().zip(y).map(|(a, b)| (a - b).abs());
        match self {
            BaseMetric::Euclidean => {
                // hypot-style scaling keeps large coordinates from overflowing
                let scale = diffs.clone().fold(0.0_f64, f64::max);
                if scale == 0.0 {
                    0.0
                } else {
                    scale * diffs.map(|d| (d / scale).powi(2)).sum::<f64>().sqrt()
                }
            }
            BaseMetric::Manhattan => diffs.sum(),
            BaseMetric::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// `d*(x, y) = prod |x_i / y_i|*` on positive tuples.
    StarProduct,
    /// `a^{d(x, y)}` for an ordinary base metric `d`.
    Lifted,
    /// `a^{sum |x_i - y_i|}`.
    ExpAbs,
    /// `a^{sum |1/x_i - 1/y_i|}` on tuples with nonzero coordinates.
    ExpReciprocal,
    /// `1` on equal points, `a` otherwise.
    Discrete,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::StarProduct,
        MetricKind::Lifted,
        MetricKind::ExpAbs,
        MetricKind::ExpReciprocal,
        MetricKind::Discrete,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::StarProduct => "star_product",
            MetricKind::Lifted => "lifted",
            MetricKind::ExpAbs => "exp_abs",
            MetricKind::ExpReciprocal => "exp_reciprocal",
            MetricKind::Discrete => "discrete",
        }
    }

    fn default_base(self) -> f64 {
        match self {
            MetricKind::Lifted | MetricKind::Discrete => 2.0,
            _ => std::f64::consts::E,
        }
    }
}

#[derive(Deserialize)]
struct RawMetricSpec {
    kind: MetricKind,
    #[serde(default)]
    a: Option<f64>,
    #[serde(default)]
    base: Option<BaseMetric>,
}

/// Descriptor of a built-in multiplicative metric.
///
/// JSON form: `{"kind": string, "a": number?, "base": string?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMetricSpec")]
pub struct MetricSpec {
    kind: MetricKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<BaseMetric>,
}

impl TryFrom<RawMetricSpec> for MetricSpec {
    type Error = MetricError;

    fn try_from(raw: RawMetricSpec) -> Result<Self, Self::Error> {
        MetricSpec::build(raw.kind, raw.a, raw.base)
    }
}

impl MetricSpec {
    pub fn build(
        kind: MetricKind,
        a: Option<f64>,
        base: Option<BaseMetric>,
    ) -> Result<Self, MetricError> {
        match kind {
            MetricKind::StarProduct => {
                if a.is_some() {
                    return Err(MetricError::InvalidSpec(
                        "star_product takes no base `a`".into(),
                    ));
                }
            }
            _ => {
                if let Some(a) = a {
                    if !a.is_finite() || a <= 1.0 {
                        return Err(MetricError::InvalidBase(a));
                    }
                }
            }
        }
        if base.is_some() && kind != MetricKind::Lifted {
            return Err(MetricError::InvalidSpec(format!(
                "`base` only applies to lifted metrics, not {}",
                kind.name()
            )));
        }
        Ok(Self { kind, a, base })
    }

    pub fn star_product() -> Self {
        Self {
            kind: MetricKind::StarProduct,
            a: None,
            base: None,
        }
    }

    pub fn lifted(base: BaseMetric, a: f64) -> Result<Self, MetricError> {
        Self::build(MetricKind::Lifted, Some(a), Some(base))
    }

    pub fn exp_abs(a: f64) -> Result<Self, MetricError> {
        Self::build(MetricKind::ExpAbs, Some(a), None)
    }

    pub fn exp_reciprocal() -> Self {
        Self {
            kind: MetricKind::ExpReciprocal,
            a: None,
            base: None,
        }
    }

    pub fn discrete(a: f64) -> Result<Self, MetricError> {
        Self::build(MetricKind::Discrete, Some(a), None)
    }

    /// A representative instance of each kind, with default parameters.
    pub fn default_for(kind: MetricKind) -> Self {
        let base = (kind == MetricKind::Lifted).then_some(BaseMetric::Euclidean);
        Self {
            kind,
            a: None,
            base,
        }
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    /// Effective base `a` (defaults: 2 for lifted/discrete, e otherwise).
    pub fn base_value(&self) -> f64 {
        self.a.unwrap_or_else(|| self.kind.default_base())
    }

    pub fn base_metric(&self) -> BaseMetric {
        self.base.unwrap_or(BaseMetric::Euclidean)
    }

    /// Same metric with the base replaced.
    pub fn with_base_value(&self, a: f64) -> Result<Self, MetricError> {
        Self::build(self.kind, Some(a), self.base)
    }

    pub fn check_point(&self, p: &Point) -> Result<(), MetricError> {
        let reason = match self.kind {
            MetricKind::StarProduct if p.coords.iter().any(|&c| c <= 0.0) => {
                "coordinates must be positive"
            }
            MetricKind::ExpReciprocal if p.coords.contains(&0.0) => {
                "coordinates must be nonzero"
            }
            _ => return Ok(()),
        };
        Err(MetricError::OutOfDomain {
            metric: self.kind.name(),
            point: p.clone(),
            reason,
        })
    }

    fn check_pair(&self, x: &Point, y: &Point) -> Result<(), MetricError> {
        if x.dim() != y.dim() {
            return Err(MetricError::DimensionMismatch {
                left: x.dim(),
                right: y.dim(),
            });
        }
        self.check_point(x)?;
        self.check_point(y)
    }

    pub fn log_distance(&self, x: &Point, y: &Point) -> Result<LogDistance, MetricError> {
        self.check_pair(x, y)?;
        let (xs, ys) = (x.coords(), y.coords());
        let raw = match self.kind {
            MetricKind::StarProduct => xs
                .iter()
                .zip(ys)
                .map(|(a, b)| (a.ln() - b.ln()).abs())
                .sum(),
            MetricKind::Lifted => self.base_value().ln() * self.base_metric().eval(xs, ys),
            MetricKind::ExpAbs => {
                self.base_value().ln() * xs.iter().zip(ys).map(|(a, b)| (a - b).abs()).sum::<f64>()
            }
            MetricKind::ExpReciprocal => {
                self.base_value().ln()
                    * xs.iter()
                        .zip(ys)
                        .map(|(a, b)| (1.0 / a - 1.0 / b).abs())
                        .sum::<f64>()
            }
            MetricKind::Discrete => {
                if xs == ys {
                    0.0
                } else {
                    self.base_value().ln()
                }
            }
        };
        Ok(LogDistance::new(raw))
    }

    /// Plain multiplicative distance.
    ///
    /// The star product is formed directly from coordinate ratios so that
    /// rational inputs give exact results; every other kind is
    /// `exp(log_distance)` and saturates to `+inf`.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        match self.kind {
            MetricKind::StarProduct => {
                self.check_pair(x, y)?;
                x.coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(a, b)| if a >= b { a / b } else { b / a })
                    .try_fold(1.0, |acc, r| star_abs(r).map(|s| acc * s))
            }
            _ => self.log_distance(x, y).map(LogDistance::to_distance),
        }
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MetricKind::StarProduct => write!(f, "star_product"),
            MetricKind::Lifted => {
                write!(
                    f,
                    "lifted({:?}, a={})",
                    self.base_metric(),
                    self.base_value()
                )
            }
            k => write!(f, "{}(a={})", k.name(), self.base_value()),
        }
    }
}

/// Candidate multiplicative metric, given in log form.
///
/// Values may be negative or `-inf` for functions that are not multiplicative
/// metrics at all; the axiom checkers report those as violations.
pub trait LogPremetric {
    fn raw_log(&self, x: &Point, y: &Point) -> Result<f64, MetricError>;

    /// The untransformed value, `exp(raw_log)` unless overridden.
    fn raw_value(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        self.raw_log(x, y).map(f64::exp)
    }
}

impl LogPremetric for MetricSpec {
    fn raw_log(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        self.log_distance(x, y).map(LogDistance::value)
    }

    fn raw_value(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        self.distance(x, y)
    }
}

/// The usual Euclidean metric `|x - y|` read as if it were multiplicative.
/// It is not one: `d(x, x) = 0 < 1`, and the product triangle law fails.
#[derive(Debug, Clone, Copy, Default)]
pub struct UsualMetric;

impl LogPremetric for UsualMetric {
    fn raw_log(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        self.raw_value(x, y).map(f64::ln)
    }

    fn raw_value(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        if x.dim() != y.dim() {
            return Err(MetricError::DimensionMismatch {
                left: x.dim(),
                right: y.dim(),
            });
        }
        Ok(BaseMetric::Euclidean.eval(x.coords(), y.coords()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// `log d(x, y) < -tol`, i.e. `d < 1`.
    Nonnegativity {
        i: usize,
        j: usize,
        log_d: f64,
    },
    /// `d = 1` on distinct points, or `d != 1` on equal points.
    Identity {
        i: usize,
        j: usize,
        log_d: f64,
    },
    Symmetry {
        i: usize,
        j: usize,
        diff: f64,
    },
    /// `log d(x_i, x_k) > log d(x_i, x_j) + log d(x_j, x_k) + tol`.
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        lhs: f64,
        rhs: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub points: usize,
    pub tol: f64,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn triangle_violations(&self) -> impl Iterator<Item = &AxiomViolation> {
        self.violations
            .iter()
            .filter(|v| matches!(v, AxiomViolation::Triangle { .. }))
    }
}

fn log_matrix<M: LogPremetric + ?Sized>(
    metric: &M,
    sample: &[Point],
) -> Result<Vec<Vec<f64>>, MetricError> {
    sample
        .iter()
        .map(|x| sample.iter().map(|y| metric.raw_log(x, y)).collect())
        .collect()
}

/// Checks the four multiplicative-metric axioms over all pairs and triples
/// of `sample`, in log form.
pub fn verify_axioms<M: LogPremetric + ?Sized>(
    metric: &M,
    sample: &[Point],
    tol: f64,
) -> Result<AxiomReport, MetricError> {
    let logd = log_matrix(metric, sample)?;
    let n = sample.len();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in 0..n {
            let l = logd[i][j];
            if !(l >= -tol) {
                violations.push(AxiomViolation::Nonnegativity { i, j, log_d: l });
            }
            let equal = sample[i] == sample[j];
            if (equal && !(l.abs() <= tol)) || (!equal && !(l > 0.0)) {
                violations.push(AxiomViolation::Identity { i, j, log_d: l });
            }
            if i < j {
                let diff = (l - logd[j][i]).abs();
                if !(diff <= tol) {
                    violations.push(AxiomViolation::Symmetry { i, j, diff });
                }
            }
        }
    }

    for i in 0..n {
        for k in (i + 1)..n {
            let lhs = logd[i][k];
            for j in (0..n).filter(|&j| j != i && j != k) {
                let rhs = logd[i][j] + logd[j][k];
                if !(lhs <= rhs + tol) {
                    violations.push(AxiomViolation::Triangle { i, j, k, lhs, rhs });
                }
            }
        }
    }

    Ok(AxiomReport {
        points: n,
        tol,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseTriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `|log d(x_i, x_k) - log d(x_j, x_k)|`
    pub lhs: f64,
    /// `log d(x_i, x_j)`
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseTriangleReport {
    pub points: usize,
    pub tol: f64,
    pub violations: Vec<ReverseTriangleViolation>,
}

impl ReverseTriangleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|d(x,z)/d(y,z)|* <= d(x,y)` on every triple, as
/// `|log d(x,z) - log d(y,z)| <= log d(x,y) + tol`.
pub fn verify_reverse_triangle<M: LogPremetric + ?Sized>(
    metric: &M,
    sample: &[Point],
    tol: f64,
) -> Result<ReverseTriangleReport, MetricError> {
    let logd = log_matrix(metric, sample)?;
    let n = sample.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i..n {
            let rhs = logd[i][j];
            for k in 0..n {
                let lhs = (logd[i][k] - logd[j][k]).abs();
                // equal points make lhs NaN for -inf inputs; treat as satisfied
                if lhs > rhs + tol {
                    violations.push(ReverseTriangleViolation { i, j, k, lhs, rhs });
                }
            }
        }
    }
    Ok(ReverseTriangleReport {
        points: n,
        tol,
        violations,
    })
}

/// Membership in the open ball `B(center; r) = {x : d(center, x) < r}`.
pub fn in_open_ball(
    metric: &MetricSpec,
    center: &Point,
    r: f64,
    x: &Point,
) -> Result<bool, MetricError> {
    if !r.is_finite() || r <= 1.0 {
        return Err(MetricError::InvalidRadius(r));
    }
    Ok(metric.log_distance(center, x)?.value() < r.ln())
}

/// Axis-aligned box of closed intervals, one per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct BoxDomain {
    bounds: Vec<(f64, f64)>,
}

impl BoxDomain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self, MetricError> {
        if bounds.is_empty() {
            return Err(MetricError::InvalidDomain("no intervals".into()));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(MetricError::InvalidDomain(format!(
                    "interval {i} is [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { bounds })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self, MetricError> {
        Self::new(vec![(lo, hi)])
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(&self.bounds)
                .all(|(c, (lo, hi))| lo <= c && c <= hi)
    }
}

impl TryFrom<Vec<(f64, f64)>> for BoxDomain {
    type Error = MetricError;

    fn try_from(bounds: Vec<(f64, f64)>) -> Result<Self, Self::Error> {
        BoxDomain::new(bounds)
    }
}

impl From<BoxDomain> for Vec<(f64, f64)> {
    fn from(b: BoxDomain) -> Self {
        b.bounds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    #[test]
    fn star_abs_cases() {
        assert_eq!(star_abs(1.0).unwrap(), 1.0);
        assert_eq!(star_abs(0.5).unwrap(), 2.0);
        assert_eq!(star_abs(3.0).unwrap(), 3.0);
        assert!(star_abs(0.0).is_err());
        assert!(star_abs(-2.0).is_err());
        assert!(star_abs(f64::NAN).is_err());
    }

    #[test]
    fn star_product_remark_values_are_exact() {
        let d = MetricSpec::star_product();
        assert_eq!(d.distance(&p(1.0 / 3.0), &p(3.0)).unwrap(), 9.0);
        assert_eq!(d.distance(&p(1.0 / 3.0), &p(0.5)).unwrap(), 1.5);
        assert_eq!(d.distance(&p(0.5), &p(3.0)).unwrap(), 6.0);
        assert_relative_eq!(
            d.log_distance(&p(1.0 / 3.0), &p(3.0)).unwrap().value(),
            9.0_f64.ln(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn identity_is_one() {
        let x = Point::new(vec![0.3, 2.0]).unwrap();
        for kind in MetricKind::ALL {
            let m = MetricSpec::default_for(kind);
            assert_eq!(m.distance(&x, &x).unwrap(), 1.0, "{kind:?}");
            assert_eq!(m.log_distance(&x, &x).unwrap().value(), 0.0);
        }
    }

    #[test]
    fn lifted_euclidean_base_two() {
        let m = MetricSpec::lifted(BaseMetric::Euclidean, 2.0).unwrap();
        let o = Point::new(vec![0.0, 0.0]).unwrap();
        let q = Point::new(vec![3.0, 4.0]).unwrap();
        assert_relative_eq!(m.distance(&o, &q).unwrap(), 32.0, max_relative = 1e-14);
    }

    #[test]
    fn exp_abs_log_distance() {
        let m = MetricSpec::exp_abs(std::f64::consts::E).unwrap();
        assert_relative_eq!(m.log_distance(&p(2.0), &p(5.0)).unwrap().value(), 3.0);
    }

    #[test]
    fn huge_distances_stay_finite_in_log_form() {
        let m = MetricSpec::exp_abs(10.0).unwrap();
        let l = m.log_distance(&p(0.0), &p(1e6)).unwrap();
        assert!(l.value().is_finite());
        assert_eq!(m.distance(&p(0.0), &p(1e6)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn domain_errors() {
        let d = MetricSpec::star_product();
        assert!(matches!(
            d.log_distance(&p(-1.0), &p(1.0)),
            Err(MetricError::OutOfDomain { .. })
        ));
        let two = Point::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            d.log_distance(&p(1.0), &two),
            Err(MetricError::DimensionMismatch { left: 1, right: 2 })
        ));
        assert!(MetricSpec::exp_reciprocal()
            .log_distance(&p(0.0), &p(1.0))
            .is_err());
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn base_must_exceed_one() {
        assert!(MetricSpec::exp_abs(1.0).is_err());
        assert!(MetricSpec::discrete(0.5).is_err());
        assert!(MetricSpec::lifted(BaseMetric::Manhattan, f64::NAN).is_err());
    }

    #[test]
    fn usual_metric_breaks_product_triangle() {
        let sample = [p(2.0), p(3.0), p(6.0)];
        assert_eq!(UsualMetric.raw_value(&sample[0], &sample[1]).unwrap(), 1.0);
        assert_eq!(UsualMetric.raw_value(&sample[1], &sample[2]).unwrap(), 3.0);
        assert_eq!(UsualMetric.raw_value(&sample[0], &sample[2]).unwrap(), 4.0);
        let report = verify_axioms(&UsualMetric, &sample, LOG_TOL).unwrap();
        assert!(report.triangle_violations().any(|v| matches!(
            v,
            AxiomViolation::Triangle {
                i: 0,
                j: 1,
                k: 2,
                ..
            }
        )));
    }

    #[test]
    fn single_point_sample_is_vacuous() {
        let report = verify_axioms(&MetricSpec::star_product(), &[p(2.0)], LOG_TOL).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn discrete_reverse_triangle_on_distinct_triple() {
        let m = MetricSpec::discrete(3.0).unwrap();
        let sample = [p(0.0), p(1.0), p(2.0)];
        let r = verify_reverse_triangle(&m, &sample, 0.0).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn open_ball() {
        let m = MetricSpec::exp_abs(std::f64::consts::E).unwrap();
        let e = std::f64::consts::E;
        assert!(in_open_ball(&m, &p(0.0), 1.0001, &p(0.0)).unwrap());
        assert!(!in_open_ball(&m, &p(0.0), e, &p(2.0)).unwrap());
        assert!(in_open_ball(&m, &p(0.0), e, &p(0.5)).unwrap());
        assert!(matches!(
            in_open_ball(&m, &p(0.0), 1.0, &p(0.5)),
            Err(MetricError::InvalidRadius(_))
        ));
    }

    #[test]
    fn metric_spec_json_shape() {
        let m: MetricSpec =
            serde_json::from_str(r#"{"kind": "lifted", "a": 2.0, "base": "euclidean"}"#).unwrap();
        assert_eq!(m, MetricSpec::lifted(BaseMetric::Euclidean, 2.0).unwrap());
        let json = serde_json::to_string(&MetricSpec::exp_reciprocal()).unwrap();
        assert_eq!(json, r#"{"kind":"exp_reciprocal"}"#);
        assert!(serde_json::from_str::<MetricSpec>(r#"{"kind": "exp_abs", "a": 0.5}"#).is_err());
        assert!(serde_json::from_str::<MetricSpec>(r#"{"kind": "bogus"}"#).is_err());
    }

    #[test]
    fn box_domain() {
        let b = BoxDomain::new(vec![(0.1, 1.0)]).unwrap();
        assert!(b.contains(&p(0.1)) && b.contains(&p(1.0)));
        assert!(!b.contains(&p(1.0001)));
        assert!(BoxDomain::new(vec![(1.0, 0.0)]).is_err());
        let parsed: BoxDomain = serde_json::from_str("[[1.0, 2.0], [-1.0, 1.0]]").unwrap();
        assert_eq!(parsed.dim(), 2);
    }
}
