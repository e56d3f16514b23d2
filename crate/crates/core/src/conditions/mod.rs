//! Contraction conditions and their certification on point samples.
//!
//! Every check is a log-domain inequality `lhs <= rhs` on the quantities of
//! one pair `(x, y)`; the reported slack is `rhs - lhs`. Non-strict checks
//! accept up to [`LOG_TOL`] of rounding and report such slack as 0. The
//! strict conditions require `slack > strict_margin`.
//!
//! | id   | inequality (log form)                                   |
//! |------|---------------------------------------------------------|
//! | C1   | `l(Tx,Ty) <= xi * l(x,y)`                               |
//! | C2   | `l(Tx,Ty) <= eta * (l(x,Tx) + l(y,Ty))`                 |
//! | C3   | `l(Tx,Ty) <= lambda * (l(x,Ty) + l(y,Tx))`              |
//! | SI   | `l(Tx,Ty) < l(x,y)`                                     |
//! | SII  | `l(Tx,Ty) < (l(x,Tx) + l(y,Ty)) / 2`                    |
//! | SIII | `l(Tx,Ty) < (l(x,Ty) + l(y,Tx)) / 2`                    |
//! | PHI  | `l(Tu,Tv) <= (l(u,Tu) + l(v,Tv)) / 2 - log phi(..)`     |

mod phi;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{MapError, SelfMapSpec};
use crate::metric::{MetricError, MetricSpec, Point, LOG_TOL};

pub use phi::{PhiError, PhiSpec, PsiKind, EXAMPLE_317_WEIGHT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConditionError {
    #[error("conditions are stated for distinct points; got x = y = {0}")]
    DegeneratePair(Point),
    #[error("{name} = {value} is outside {range}")]
    ConstantRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("sample needs at least two distinct points")]
    SampleTooSmall,
    #[error("every distinct pair collapsed to log-distance 0")]
    AllPairsDegenerate,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Phi(#[from] PhiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    C1,
    C2,
    C3,
    SI,
    SII,
    SIII,
    PHI,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrictCondition {
    SI,
    SII,
    SIII,
}

impl From<StrictCondition> for ConditionId {
    fn from(s: StrictCondition) -> Self {
        match s {
            StrictCondition::SI => ConditionId::SI,
            StrictCondition::SII => ConditionId::SII,
            StrictCondition::SIII => ConditionId::SIII,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub satisfied: bool,
    pub slack: f64,
}

impl CheckOutcome {
    fn non_strict(slack: f64) -> Self {
        if slack >= -LOG_TOL {
            CheckOutcome {
                satisfied: true,
                slack: slack.max(0.0),
            }
        } else {
            CheckOutcome {
                satisfied: false,
                slack,
            }
        }
    }

    fn strict(slack: f64, margin: f64) -> Self {
        CheckOutcome {
            satisfied: slack > margin,
            slack,
        }
    }
}

/// The constants `(xi, eta, lambda)` of the three-way condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZamfirescuConstants {
    pub xi: f64,
    pub eta: f64,
    pub lambda: f64,
}

fn check_range(
    name: &'static str,
    value: f64,
    upper: f64,
    range: &'static str,
) -> Result<(), ConditionError> {
    if (0.0..upper).contains(&value) {
        Ok(())
    } else {
        Err(ConditionError::ConstantRange { name, value, range })
    }
}

fn check_xi(xi: f64) -> Result<(), ConditionError> {
    check_range("xi", xi, 1.0, "[0, 1)")
}

fn check_eta(eta: f64) -> Result<(), ConditionError> {
    check_range("eta", eta, 0.5, "[0, 1/2)")
}

fn check_lambda(lambda: f64) -> Result<(), ConditionError> {
    check_range("lambda", lambda, 0.5, "[0, 1/2)")
}

impl ZamfirescuConstants {
    pub fn new(xi: f64, eta: f64, lambda: f64) -> Result<Self, ConditionError> {
        let c = Self { xi, eta, lambda };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConditionError> {
        check_xi(self.xi)?;
        check_eta(self.eta)?;
        check_lambda(self.lambda)
    }

    pub fn delta(&self) -> Result<f64, ConditionError> {
        delta_of(self)
    }
}

/// `delta = max{xi, eta/(1-eta), lambda/(1-lambda)}`, the per-step ratio
/// of the orbit's log step lengths.
pub fn delta_of(c: &ZamfirescuConstants) -> Result<f64, ConditionError> {
    c.validate()?;
    Ok(c.xi
        .max(c.eta / (1.0 - c.eta))
        .max(c.lambda / (1.0 - c.lambda)))
}

/// All log-distances a pair's conditions refer to.
#[derive(Debug, Clone, Copy)]
struct PairGeometry {
    xy: f64,
    txty: f64,
    x_tx: f64,
    y_ty: f64,
    x_ty: f64,
    y_tx: f64,
}

impl PairGeometry {
    fn eval(
        metric: &MetricSpec,
        map: &SelfMapSpec,
        x: &Point,
        y: &Point,
    ) -> Result<Self, ConditionError> {
        let tx = map.apply(x)?;
        let ty = map.apply(y)?;
        let l = |a: &Point, b: &Point| metric.log_distance(a, b).map(|d| d.value());
        Ok(Self {
            xy: l(x, y)?,
            txty: l(&tx, &ty)?,
            x_tx: l(x, &tx)?,
            y_ty: l(y, &ty)?,
            x_ty: l(x, &ty)?,
            y_tx: l(y, &tx)?,
        })
    }

    fn c1(&self, xi: f64) -> CheckOutcome {
        CheckOutcome::non_strict(xi * self.xy - self.txty)
    }

    fn c2(&self, eta: f64) -> CheckOutcome {
        CheckOutcome::non_strict(eta * (self.x_tx + self.y_ty) - self.txty)
    }

    fn c3(&self, lambda: f64) -> CheckOutcome {
        CheckOutcome::non_strict(lambda * (self.x_ty + self.y_tx) - self.txty)
    }

    fn strict(&self, which: StrictCondition, margin: f64) -> CheckOutcome {
        let rhs = match which {
            StrictCondition::SI => self.xy,
            StrictCondition::SII => 0.5 * (self.x_tx + self.y_ty),
            StrictCondition::SIII => 0.5 * (self.x_ty + self.y_tx),
        };
        CheckOutcome::strict(rhs - self.txty, margin)
    }

    fn phi(&self, phi: &PhiSpec) -> Result<CheckOutcome, PhiError> {
        let rhs = 0.5 * (self.x_tx + self.y_ty) - phi.log_phi(self.x_tx, self.y_ty)?;
        Ok(CheckOutcome::non_strict(rhs - self.txty))
    }
}

fn distinct_geometry(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x: &Point,
    y: &Point,
) -> Result<PairGeometry, ConditionError> {
    if x == y {
        return Err(ConditionError::DegeneratePair(x.clone()));
    }
    PairGeometry::eval(metric, map, x, y)
}

/// `d(Tx, Ty) <= d(x, y)^xi`.
pub fn check_c1(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x: &Point,
    y: &Point,
    xi: f64,
) -> Result<CheckOutcome, ConditionError> {
    check_xi(xi)?;
    Ok(distinct_geometry(metric, map, x, y)?.c1(xi))
}

/// `d(Tx, Ty) <= (d(x, Tx) d(y, Ty))^eta`.
pub fn check_c2(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x: &Point,
    y: &Point,
    eta: f64,
) -> Result<CheckOutcome, ConditionError> {
    check_eta(eta)?;
    Ok(distinct_geometry(metric, map, x, y)?.c2(eta))
}

/// `d(Tx, Ty) <= (d(x, Ty) d(y, Tx))^lambda`.
pub fn check_c3(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x: &Point,
    y: &Point,
    lambda: f64,
) -> Result<CheckOutcome, ConditionError> {
    check_lambda(lambda)?;
    Ok(distinct_geometry(metric, map, x, y)?.c3(lambda))
}

pub fn check_strict(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    x: &Point,
    y: &Point,
    which: StrictCondition,
    strict_margin: f64,
) -> Result<CheckOutcome, ConditionError> {
    Ok(distinct_geometry(metric, map, x, y)?.strict(which, strict_margin))
}

/// The phi-weak inequality; defined for all `u, v`, including `u = v`.
pub fn check_phi(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    phi: &PhiSpec,
    u: &Point,
    v: &Point,
) -> Result<CheckOutcome, ConditionError> {
    Ok(PairGeometry::eval(metric, map, u, v)?.phi(phi)?)
}

/// Tightest constants a map shows over a sample.
///
/// A value of `+inf` means some pair had a zero denominator with a positive
/// numerator, so that condition cannot hold at any constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub xi: f64,
    pub eta: f64,
    pub lambda: f64,
    pub xi_feasible: bool,
    pub eta_feasible: bool,
    pub lambda_feasible: bool,
    pub pairs_used: usize,
    pub pairs_skipped: usize,
}

impl ConstantEstimate {
    pub fn all_feasible(&self) -> bool {
        self.xi_feasible && self.eta_feasible && self.lambda_feasible
    }

    /// Constants with infeasible entries dropped.
    pub fn enabled(&self) -> EnabledConstants {
        EnabledConstants {
            xi: self.xi_feasible.then_some(self.xi),
            eta: self.eta_feasible.then_some(self.eta),
            lambda: self.lambda_feasible.then_some(self.lambda),
        }
    }
}

#[derive(Default)]
struct RatioSup {
    sup: f64,
    infinite: bool,
}

impl RatioSup {
    fn add(&mut self, num: f64, den: f64) {
        if den > 0.0 {
            self.sup = self.sup.max(num / den);
        } else if num > LOG_TOL {
            self.infinite = true;
        }
    }

    fn value(&self) -> f64 {
        if self.infinite {
            f64::INFINITY
        } else {
            self.sup
        }
    }
}

fn distinct_pairs(sample: &[Point]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..sample.len() {
        for j in (i + 1)..sample.len() {
            if sample[i] != sample[j] {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn estimate_from(
    geoms: &[PairGeometry],
    skipped: usize,
) -> Result<ConstantEstimate, ConditionError> {
    if geoms.is_empty() {
        return Err(ConditionError::AllPairsDegenerate);
    }
    let (mut xi, mut eta, mut lambda) = (
        RatioSup::default(),
        RatioSup::default(),
        RatioSup::default(),
    );
    for g in geoms {
        xi.add(g.txty, g.xy);
        eta.add(g.txty, g.x_tx + g.y_ty);
        lambda.add(g.txty, g.x_ty + g.y_tx);
    }
    let (xi, eta, lambda) = (xi.value(), eta.value(), lambda.value());
    Ok(ConstantEstimate {
        xi,
        eta,
        lambda,
        xi_feasible: xi < 1.0,
        eta_feasible: eta < 0.5,
        lambda_feasible: lambda < 0.5,
        pairs_used: geoms.len(),
        pairs_skipped: skipped,
    })
}

/// Suprema of the three condition ratios over the distinct pairs of
/// `sample`. Pairs whose log-distance collapsed to 0 are skipped.
pub fn estimate_constants(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    sample: &[Point],
) -> Result<ConstantEstimate, ConditionError> {
    let pairs = distinct_pairs(sample);
    if pairs.is_empty() {
        return Err(ConditionError::SampleTooSmall);
    }
    let mut geoms = Vec::with_capacity(pairs.len());
    let mut skipped = 0;
    for (i, j) in pairs {
        let g = PairGeometry::eval(metric, map, &sample[i], &sample[j])?;
        if g.xy == 0.0 {
            log::warn!("skipping pair ({i}, {j}): distinct points at log-distance 0");
            skipped += 1;
        } else {
            geoms.push(g);
        }
    }
    estimate_from(&geoms, skipped)
}

/// Constants in force for a classification; `None` disables a condition.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnabledConstants {
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub lambda: Option<f64>,
}

impl EnabledConstants {
    pub fn declared(c: ZamfirescuConstants) -> Self {
        Self {
            xi: Some(c.xi),
            eta: Some(c.eta),
            lambda: Some(c.lambda),
        }
    }

    /// `delta_of` with disabled conditions contributing 0.
    pub fn delta(&self) -> f64 {
        self.single_delta(ConditionId::C1)
            .unwrap_or(0.0)
            .max(self.single_delta(ConditionId::C2).unwrap_or(0.0))
            .max(self.single_delta(ConditionId::C3).unwrap_or(0.0))
    }

    /// Ratio delivered by one condition alone.
    pub fn single_delta(&self, id: ConditionId) -> Option<f64> {
        match id {
            ConditionId::C1 => self.xi,
            ConditionId::C2 => self.eta.map(|e| e / (1.0 - e)),
            ConditionId::C3 => self.lambda.map(|l| l / (1.0 - l)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Declared constants; estimated from the sample when absent.
    pub constants: Option<ZamfirescuConstants>,
    pub phi: Option<PhiSpec>,
    pub strict_margin: f64,
    /// Seed of the sample, copied into the report.
    pub seed: Option<u64>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            constants: None,
            phi: None,
            strict_margin: 0.0,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub condition: ConditionId,
    pub satisfied: bool,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantSource {
    Declared,
    Estimated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConstants {
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub lambda: Option<f64>,
    pub delta: f64,
    pub source: ConstantSource,
}

impl ReportConstants {
    pub fn enabled(&self) -> EnabledConstants {
        EnabledConstants {
            xi: self.xi,
            eta: self.eta,
            lambda: self.lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub applicable: bool,
    /// Conditions that hold on every pair by themselves.
    pub via: Vec<ConditionId>,
    /// Pairs satisfying none of the theorem's conditions.
    pub failing_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub t2: TheoremVerdict,
    pub t23: TheoremVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub th3: Option<TheoremVerdict>,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub pairs: Vec<PairRecord>,
    pub constants: ReportConstants,
    /// Sample suprema, reported even when constants were declared.
    pub estimate: Option<ConstantEstimate>,
    pub verdicts: Verdicts,
    pub seed: Option<u64>,
    pub skipped_pairs: Vec<(usize, usize)>,
}

impl ConditionReport {
    /// Geometric ratio certified for the orbit: the smallest single-condition
    /// ratio among conditions that cover every pair, else `delta`.
    pub fn certified_delta(&self) -> Option<f64> {
        if !self.verdicts.t2.applicable {
            return None;
        }
        let enabled = self.constants.enabled();
        self.verdicts
            .t2
            .via
            .iter()
            .filter_map(|&id| enabled.single_delta(id))
            .reduce(f64::min)
            .or(Some(self.constants.delta))
    }

    pub fn records(&self, id: ConditionId) -> impl Iterator<Item = &PairRecord> {
        self.pairs.iter().filter(move |r| r.condition == id)
    }

    pub fn violations(&self, id: ConditionId) -> usize {
        self.records(id).filter(|r| !r.satisfied).count()
    }
}

/// Joins condition ids as "C1", "C2 and C3", "C1, C2 and C3".
pub fn format_via(ids: &[ConditionId]) -> String {
    let names: Vec<String> = ids.iter().map(ToString::to_string).collect();
    match names.len() {
        0 => String::new(),
        1 => names[0].clone(),
        n => format!("{} and {}", names[..n - 1].join(", "), names[n - 1]),
    }
}

fn theorem_verdict(
    pair_keys: &[(usize, usize)],
    records: &[PairRecord],
    ids: &[ConditionId],
) -> TheoremVerdict {
    let satisfied: HashSet<(usize, usize, ConditionId)> = records
        .iter()
        .filter(|r| r.satisfied && ids.contains(&r.condition))
        .map(|r| (r.i, r.j, r.condition))
        .collect();
    let ok = |(i, j): (usize, usize), id: ConditionId| satisfied.contains(&(i, j, id));
    let failing_pairs = pair_keys
        .iter()
        .filter(|&&k| !ids.iter().any(|&id| ok(k, id)))
        .count();
    let via = ids
        .iter()
        .copied()
        .filter(|&id| pair_keys.iter().all(|&k| ok(k, id)))
        .collect();
    TheoremVerdict {
        applicable: !pair_keys.is_empty() && failing_pairs == 0,
        via,
        failing_pairs,
    }
}

/// Evaluates every condition on every distinct pair of `sample` (and PHI on
/// `u = v` pairs as well) and aggregates verdicts per theorem.
///
/// Evaluation errors are recorded on the pair and count as failures.
pub fn classify(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    sample: &[Point],
    options: &ClassifyOptions,
) -> Result<ConditionReport, ConditionError> {
    if let Some(c) = &options.constants {
        c.validate()?;
    }
    if let Some(phi) = &options.phi {
        phi.validate()?;
    }
    let pairs = distinct_pairs(sample);
    if pairs.is_empty() {
        return Err(ConditionError::SampleTooSmall);
    }

    let mut geoms: Vec<((usize, usize), Result<PairGeometry, ConditionError>)> = Vec::new();
    let mut skipped_pairs = Vec::new();
    for (i, j) in pairs {
        let g = PairGeometry::eval(metric, map, &sample[i], &sample[j]);
        if matches!(&g, Ok(g) if g.xy == 0.0) {
            log::warn!("skipping pair ({i}, {j}): distinct points at log-distance 0");
            skipped_pairs.push((i, j));
            continue;
        }
        geoms.push(((i, j), g));
    }

    let usable: Vec<PairGeometry> = geoms
        .iter()
        .filter_map(|(_, g)| g.as_ref().ok().copied())
        .collect();
    let estimate = estimate_from(&usable, skipped_pairs.len()).ok();
    let (enabled, source) = match options.constants {
        Some(c) => (EnabledConstants::declared(c), ConstantSource::Declared),
        None => (
            estimate
                .as_ref()
                .map(ConstantEstimate::enabled)
                .unwrap_or_default(),
            ConstantSource::Estimated,
        ),
    };

    let mut records = Vec::new();
    let error_record = |i, j, condition, e: &dyn fmt::Display| PairRecord {
        i,
        j,
        condition,
        satisfied: false,
        slack: f64::NAN,
        error: Some(e.to_string()),
    };
    let zamfirescu = [ConditionId::C1, ConditionId::C2, ConditionId::C3];
    let strict = [
        StrictCondition::SI,
        StrictCondition::SII,
        StrictCondition::SIII,
    ];
    for ((i, j), g) in &geoms {
        let (i, j) = (*i, *j);
        match g {
            Ok(g) => {
                for id in zamfirescu {
                    // disabled conditions are evaluated at their range limit and never pass
                    let (outcome, enabled_here) = match id {
                        ConditionId::C1 => (g.c1(enabled.xi.unwrap_or(1.0)), enabled.xi.is_some()),
                        ConditionId::C2 => {
                            (g.c2(enabled.eta.unwrap_or(0.5)), enabled.eta.is_some())
                        }
                        _ => (
                            g.c3(enabled.lambda.unwrap_or(0.5)),
                            enabled.lambda.is_some(),
                        ),
                    };
                    records.push(PairRecord {
                        i,
                        j,
                        condition: id,
                        satisfied: outcome.satisfied && enabled_here,
                        slack: outcome.slack,
                        error: None,
                    });
                }
                for which in strict {
                    let o = g.strict(which, options.strict_margin);
                    records.push(PairRecord {
                        i,
                        j,
                        condition: which.into(),
                        satisfied: o.satisfied,
                        slack: o.slack,
                        error: None,
                    });
                }
            }
            Err(e) => {
                for id in zamfirescu.into_iter().chain(strict.map(ConditionId::from)) {
                    records.push(error_record(i, j, id, e));
                }
            }
        }
    }

    let pair_keys: Vec<(usize, usize)> = geoms.iter().map(|(k, _)| *k).collect();
    let t2 = theorem_verdict(&pair_keys, &records, &zamfirescu);
    let t23 = theorem_verdict(&pair_keys, &records, &strict.map(ConditionId::from));

    let th3 = options.phi.as_ref().map(|phi| {
        let mut keys = Vec::new();
        for i in 0..sample.len() {
            for j in i..sample.len() {
                keys.push((i, j));
                let outcome = PairGeometry::eval(metric, map, &sample[i], &sample[j])
                    .and_then(|g| g.phi(phi).map_err(ConditionError::from));
                records.push(match outcome {
                    Ok(o) => PairRecord {
                        i,
                        j,
                        condition: ConditionId::PHI,
                        satisfied: o.satisfied,
                        slack: o.slack,
                        error: None,
                    },
                    Err(e) => error_record(i, j, ConditionId::PHI, &e),
                });
            }
        }
        theorem_verdict(&keys, &records, &[ConditionId::PHI])
    });

    let summary = if t2.applicable {
        if t2.via.is_empty() {
            "t2 applicable (mixed conditions)".to_string()
        } else {
            format!("t2 applicable via {}", format_via(&t2.via))
        }
    } else if t23.applicable {
        if t23.via.is_empty() {
            "t23 applicable (mixed conditions)".to_string()
        } else {
            format!("t23 applicable via {}", format_via(&t23.via))
        }
    } else if th3.as_ref().is_some_and(|v| v.applicable) {
        "th3 applicable".to_string()
    } else {
        "none".to_string()
    };

    records.sort_by_key(|r| (r.i, r.j, r.condition));
    Ok(ConditionReport {
        pairs: records,
        constants: ReportConstants {
            xi: enabled.xi,
            eta: enabled.eta,
            lambda: enabled.lambda,
            delta: enabled.delta(),
            source,
        },
        estimate,
        verdicts: Verdicts {
            t2,
            t23,
            th3,
            summary,
        },
        seed: options.seed,
        skipped_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BaseMetric;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    fn p2(x: f64, y: f64) -> Point {
        Point::new(vec![x, y]).unwrap()
    }

    fn lifted2() -> MetricSpec {
        MetricSpec::lifted(BaseMetric::Euclidean, 2.0).unwrap()
    }

    fn exp_abs() -> MetricSpec {
        MetricSpec::exp_abs(std::f64::consts::E).unwrap()
    }

    #[test]
    fn delta_values() {
        let d = |xi, eta, lambda| delta_of(&ZamfirescuConstants { xi, eta, lambda }).unwrap();
        assert_eq!(d(2.0 / 3.0, 0.0, 0.0), 2.0 / 3.0);
        assert_eq!(d(0.0, 0.0, 0.0), 0.0);
        assert!((d(0.5, 0.4, 0.3) - 2.0 / 3.0).abs() < 1e-15);
        assert!(delta_of(&ZamfirescuConstants {
            xi: 1.0,
            eta: 0.0,
            lambda: 0.0
        })
        .is_err());
        assert!(ZamfirescuConstants::new(0.0, 0.5, 0.0).is_err());
        assert!(ZamfirescuConstants::new(0.0, 0.0, -0.1).is_err());
    }

    #[test]
    fn scale_map_meets_c1_with_zero_slack() {
        let map = SelfMapSpec::Scale { factor: 2.0 / 3.0 };
        let o = check_c1(&lifted2(), &map, &p2(3.0, 4.0), &p2(-5.0, 2.0), 2.0 / 3.0).unwrap();
        assert!(o.satisfied);
        assert_eq!(o.slack, 0.0);
    }

    #[test]
    fn constant_map_meets_everything() {
        let map = SelfMapSpec::Constant { value: p(0.5) };
        let m = exp_abs();
        assert!(check_c1(&m, &map, &p(0.0), &p(1.0), 0.0).unwrap().satisfied);
        assert!(check_c3(&m, &map, &p(0.0), &p(1.0), 0.0).unwrap().satisfied);
        let est = estimate_constants(&m, &map, &[p(0.0), p(1.0), p(2.0)]).unwrap();
        assert_eq!((est.xi, est.eta, est.lambda), (0.0, 0.0, 0.0));
    }

    #[test]
    fn identity_fails_everything() {
        let m = exp_abs();
        let id = SelfMapSpec::Identity;
        let o = check_c1(&m, &id, &p(0.0), &p(1.0), 0.9).unwrap();
        assert!(!o.satisfied && o.slack < 0.0);
        assert!(!check_c2(&m, &id, &p(0.0), &p(1.0), 0.49).unwrap().satisfied);
        assert!(
            !check_strict(&m, &id, &p(0.0), &p(1.0), StrictCondition::SI, 0.0)
                .unwrap()
                .satisfied
        );
        let report = classify(
            &m,
            &id,
            &[p(0.0), p(1.0), p(2.5)],
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert_eq!(report.verdicts.summary, "none");
    }

    #[test]
    fn swap_fails_c3() {
        let swap = SelfMapSpec::swap(p(1.0), p(-1.0));
        let o = check_c3(&exp_abs(), &swap, &p(1.0), &p(-1.0), 0.49).unwrap();
        assert!(!o.satisfied);
        assert_eq!(o.slack, -2.0);
    }

    #[test]
    fn degenerate_and_range_errors() {
        let m = exp_abs();
        let id = SelfMapSpec::Identity;
        assert!(matches!(
            check_c1(&m, &id, &p(1.0), &p(1.0), 0.5),
            Err(ConditionError::DegeneratePair(_))
        ));
        assert!(matches!(
            check_c2(&m, &id, &p(1.0), &p(2.0), 0.5),
            Err(ConditionError::ConstantRange { .. })
        ));
        assert!(matches!(
            estimate_constants(&m, &id, &[p(1.0), p(1.0)]),
            Err(ConditionError::SampleTooSmall)
        ));
        // phi is defined on the diagonal
        let fixed = SelfMapSpec::Constant { value: p(1.0) };
        let o = check_phi(&m, &fixed, &PhiSpec::Example317, &p(1.0), &p(1.0)).unwrap();
        assert!(o.satisfied);
        assert_eq!(o.slack, 0.0);
    }

    #[test]
    fn pair_errors_are_recorded_not_fatal() {
        let m = exp_abs();
        let map = SelfMapSpec::ReciprocalSqrt;
        let report = classify(
            &m,
            &map,
            &[p(-1.0), p(1.0), p(2.0)],
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert!(report.pairs.iter().any(|r| r.error.is_some()));
        assert!(!report.verdicts.t2.applicable);
    }

    #[test]
    fn via_formatting() {
        use ConditionId::*;
        assert_eq!(format_via(&[C1]), "C1");
        assert_eq!(format_via(&[C2, C3]), "C2 and C3");
        assert_eq!(format_via(&[C1, C2, C3]), "C1, C2 and C3");
    }

    #[test]
    fn report_json_shape() {
        let map = SelfMapSpec::Scale { factor: 0.5 };
        let opts = ClassifyOptions {
            seed: Some(7),
            ..Default::default()
        };
        let report = classify(&exp_abs(), &map, &[p(0.0), p(1.0), p(3.0)], &opts).unwrap();
        let v: serde_json::Value = serde_json::to_value(&report).unwrap();
        for key in ["pairs", "constants", "verdicts", "seed"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["xi", "eta", "lambda", "delta"] {
            assert!(v["constants"].get(key).is_some(), "missing constants.{key}");
        }
        assert_eq!(v["seed"], 7);
    }
}
