use num_traits::{One, Signed, Zero};

use super::{BoundBreakdown, LogReal};
use crate::elimination::discriminant;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::prime_sums::{f_value, SumMode, SumValue};
use crate::real::{Interval, Precision};

/// Absolute tolerance of the bisection on `u = loglog x`.
pub const THRESHOLD_TOL: f64 = 1e-6;

/// Bisection gives up past this `u`.
const U_CEILING: f64 = 1e9;

/// Smallest `u = loglog x` (to [`THRESHOLD_TOL`], from above) at which the bound drops below 1/2.
#[derive(Debug, Clone)]
pub struct Threshold {
    pub u_star: f64,
    /// The bound evaluated at `x = exp(exp(u_star))`.
    pub rhs: LogReal,
}

impl Threshold {
    /// `log x* = exp(u*)`.
    pub fn log_x_star(&self) -> f64 {
        self.u_star.exp()
    }
}

pub fn certification_threshold(f: &IntPoly, prec: Precision) -> Result<Threshold> {
    let bd = BoundBreakdown::new(f, prec)?;
    threshold_for(&bd)
}

fn threshold_for(bd: &BoundBreakdown) -> Result<Threshold> {
    let prec = bd.precision();
    let eval = |u: f64| -> Option<LogReal> {
        let log_x = Interval::from_f64(u, prec).exp();
        if !bd.log_meets_hypothesis(&log_x) {
            return None;
        }
        bd.rhs(&log_x).ok().filter(|r| r.certainly_below(0.5))
    };
    let floor = bd.log_threshold.ln().hi_f64().max(0.0);
    if let Some(rhs) = eval(floor) {
        return Ok(Threshold { u_star: floor, rhs });
    }
    let mut lo = floor;
    let mut hi = floor.max(1.0) * 2.0;
    while eval(hi).is_none() {
        lo = hi;
        hi *= 2.0;
        if hi > U_CEILING {
            return Err(Error::OutOfRange(format!("no certification threshold below u = {U_CEILING:e}")));
        }
    }
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if eval(mid).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let rhs = eval(hi).expect("upper bisection end certifies");
    Ok(Threshold { u_star: hi, rhs })
}

/// Outcome of [`certify`].
#[derive(Debug, Clone)]
pub struct CertificateReport {
    /// The primitive polynomial actually analysed.
    pub poly: IntPoly,
    pub x: f64,
    pub f_x: SumValue,
    /// Nearest integer to `F(x)`, halves rounded up, never below 1.
    pub k_hat: u64,
    /// The enclosure of `F(x)` contains a half-integer.
    pub tie: bool,
    /// Bound at `x`; `None` when `x` is below the bound's validity threshold.
    pub bound: Option<LogReal>,
    pub breakdown: BoundBreakdown,
    pub certified: bool,
    pub u_star: Option<f64>,
    pub warnings: Vec<String>,
}

/// Estimates the number of distinct irreducible factors of `f` from `F(x)`
/// and reports whether the explicit bound makes the estimate rigorous.
pub fn certify(f: &IntPoly, x: f64, mode: SumMode, prec: Precision) -> Result<CertificateReport> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial { op: "certify" });
    }
    let mut warnings = Vec::new();
    let content = f.content()?;
    let poly = if content.abs().is_one() {
        f.clone()
    } else {
        warnings.push(format!("removed constant factor {content}"));
        f.primitive_part()?
    };
    if discriminant(&poly)?.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let breakdown = BoundBreakdown::new(&poly, prec)?;
    let f_x = f_value(&poly, x, mode, prec)?;

    let enc = f_x.enclosure();
    let round_lo = (enc.lo_f64() + 0.5).floor();
    let round_hi = (enc.hi_f64() + 0.5).floor();
    let tie = round_lo != round_hi;
    let mut k_hat = round_hi.max(0.0) as u64;
    if k_hat == 0 {
        warnings.push("F(x) rounds to 0; reporting 1".into());
        k_hat = 1;
    }

    let bound = if breakdown.x_meets_hypothesis(x) {
        Some(breakdown.rhs(&Interval::from_f64(x, prec).ln())?)
    } else {
        warnings.push(format!("x below {}: no bound available", breakdown.threshold_display()));
        None
    };
    let certified = !tie && bound.as_ref().is_some_and(|b| b.certainly_below(0.5));
    let u_star = threshold_for(&breakdown).ok().map(|t| t.u_star);
    Ok(CertificateReport { poly, x, f_x, k_hat, tie, bound, breakdown, certified, u_star, warnings })
}
