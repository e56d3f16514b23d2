//! Control functions `phi: [1, inf)^2 -> [1, inf)` for the phi-weak
//! contraction, all evaluated on log arguments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::LOG_TOL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhiError {
    #[error("phi is defined on [1, inf)^2; got log-arguments ({0}, {1})")]
    ArgumentBelowOne(f64, f64),
    #[error("invalid phi spec: {0}")]
    InvalidSpec(String),
    #[error("phi fails its boundary certificate at log-arguments ({s}, {t}): log phi = {log_phi}")]
    Boundary { s: f64, t: f64, log_phi: f64 },
}

/// `psi: [1, inf) -> [1, inf)` with `psi(t) = 1` only at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PsiKind {
    /// `psi(t) = t^r`, `r > 0`.
    Power { r: f64 },
    /// `psi(t) = 1 + ln t`.
    OnePlusLog,
}

impl PsiKind {
    fn log_psi(self, log_t: f64) -> f64 {
        match self {
            PsiKind::Power { r } => r * log_t,
            PsiKind::OnePlusLog => log_t.ln_1p(),
        }
    }
}

/// Weight of the worked example's control function. In distance terms it is
/// `phi(s, t) = (s t)^{1e-5}`.
pub const EXAMPLE_317_WEIGHT: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiSpec {
    /// `phi(s, t) = (s t)^{(1 - q)/2}`, `q in [0, 1)`; reduces the phi
    /// inequality to `d(Tu, Tv) <= (d(u,Tu) d(v,Tv))^{q/2}`.
    PowerProduct { q: f64 },
    /// `phi(s, t) = psi(s t)^{1/2}`.
    PsiSqrt { psi: PsiKind },
    /// `phi(d(x,Tx), d(y,Ty)) = 2^{(|x - Tx| + |y - Ty|) 1e-5}` under the
    /// base-2 metric, i.e. `(s t)^{1e-5}`.
    #[serde(rename = "example317")]
    Example317,
    /// Piecewise-linear `log phi` as a function of `ln s + ln t`. Knots are
    /// `(u, log_phi)` with strictly increasing `u`, the first at `(0, 0)`,
    /// and positive values after it; constant past the last knot.
    CustomTable { knots: Vec<(f64, f64)> },
}

impl PhiSpec {
    pub fn validate(&self) -> Result<(), PhiError> {
        let bad = |m: String| Err(PhiError::InvalidSpec(m));
        match self {
            PhiSpec::PowerProduct { q } if !(0.0..1.0).contains(q) => {
                bad(format!("q = {q} is outside [0, 1)"))
            }
            PhiSpec::PsiSqrt {
                psi: PsiKind::Power { r },
            } if !(r.is_finite() && *r > 0.0) => {
                bad(format!("psi exponent r = {r} must be positive"))
            }
            PhiSpec::CustomTable { knots } => {
                match knots.first() {
                    Some(&(u, v)) if u == 0.0 && v == 0.0 => {}
                    _ => return bad("first knot must be (0, 0)".into()),
                }
                if knots.len() < 2 {
                    return bad("need at least two knots".into());
                }
                if knots.iter().any(|(u, v)| !u.is_finite() || !v.is_finite()) {
                    return bad("knots must be finite".into());
                }
                if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return bad("knot abscissae must increase strictly".into());
                }
                if knots[1..].iter().any(|&(_, v)| v <= 0.0) {
                    return bad("log phi must be positive after the first knot".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `log phi(s, t)` from `ln s`, `ln t`.
    pub fn log_phi(&self, log_s: f64, log_t: f64) -> Result<f64, PhiError> {
        if !(log_s >= -LOG_TOL && log_t >= -LOG_TOL) {
            return Err(PhiError::ArgumentBelowOne(log_s, log_t));
        }
        let u = log_s.max(0.0) + log_t.max(0.0);
        Ok(match self {
            PhiSpec::PowerProduct { q } => 0.5 * (1.0 - q) * u,
            PhiSpec::PsiSqrt { psi } => 0.5 * psi.log_psi(u),
            PhiSpec::Example317 => EXAMPLE_317_WEIGHT * u,
            PhiSpec::CustomTable { knots } => interpolate(knots, u),
        })
    }

    pub fn phi(&self, s: f64, t: f64) -> Result<f64, PhiError> {
        if !(s >= 1.0 && t >= 1.0) {
            return Err(PhiError::ArgumentBelowOne(s.ln(), t.ln()));
        }
        self.log_phi(s.ln(), t.ln()).map(f64::exp)
    }

    /// Checks `phi(1, 1) = 1` and `phi > 1` elsewhere on a boundary sample:
    /// both axes and the diagonal, in log coordinates up to `ln 1e6`.
    pub fn certify_boundary(&self) -> Result<(), PhiError> {
        self.validate()?;
        let at_origin = self.log_phi(0.0, 0.0)?;
        if at_origin.abs() > LOG_TOL {
            return Err(PhiError::Boundary {
                s: 0.0,
                t: 0.0,
                log_phi: at_origin,
            });
        }
        let max_log = 1e6_f64.ln();
        for k in 1..=40 {
            let r = max_log * (k as f64 / 40.0).powi(3);
            for (s, t) in [(r, 0.0), (0.0, r), (r, r)] {
                let v = self.log_phi(s, t)?;
                if !(v > 0.0) {
                    return Err(PhiError::Boundary { s, t, log_phi: v });
                }
            }
        }
        Ok(())
    }
}

fn interpolate(knots: &[(f64, f64)], u: f64) -> f64 {
    let last = knots[knots.len() - 1];
    if u >= last.0 {
        return last.1;
    }
    let k = knots.partition_point(|&(x, _)| x <= u);
    let (u0, v0) = knots[k - 1];
    let (u1, v1) = knots[k];
    v0 + (v1 - v0) * (u - u0) / (u1 - u0)
}
