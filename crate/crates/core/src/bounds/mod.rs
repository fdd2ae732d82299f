//! Explicit error terms for the factor-count estimate, evaluated with
//! outward rounding so every reported bound is an overestimate.

mod certify;
mod logreal;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::Value;

pub use certify::{certification_threshold, certify, CertificateReport, Threshold};
pub use logreal::{LogReal, F64_LOG_LIMIT};

use crate::elimination::{d_bold as bold_discriminant, discriminant};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::prime_sums::{mertens_q, SumMode};
use crate::real::{isqrt, Interval, Precision};

/// Arguments up to this size get an exact reciprocal-prime sum; larger ones
/// the explicit Mertens envelope.
pub const MERTENS_DIRECT_LIMIT: u64 = 1_000_000;

fn lit(s: &str, prec: Precision) -> Interval {
    Interval::from_decimal(s, prec)
}

fn int(n: usize, prec: Precision) -> Interval {
    Interval::from_i64(n as i64, prec)
}

/// Encloses `M_Q(n) = sum_{p <= n} 1/p` for a nonnegative integer `n`.
///
/// Beyond [`MERTENS_DIRECT_LIMIT`] uses
/// `loglog n + B - 1/(2 log^2 n) < M_Q(n) < loglog n + B + 1/log^2 n`.
pub fn mertens_q_enclosure(n: &BigInt, prec: Precision) -> Interval {
    if n < &BigInt::from(2) {
        return Interval::zero(prec);
    }
    if let Some(small) = n.to_u64().filter(|&v| v <= MERTENS_DIRECT_LIMIT) {
        return mertens_q(small as f64, SumMode::Float, prec)
            .expect("within sieve range")
            .enclosure()
            .clone();
    }
    let l = Interval::from_bigint(n, prec).ln();
    let ll = l.ln();
    let inv_sq = Interval::from_i64(1, prec).div(&l.mul(&l));
    let lower = ll.add(&lit("0.2614972128", prec)).sub(&inv_sq.div_i64(2));
    let upper = ll.add(&lit("0.2614972129", prec)).add(&inv_sq);
    lower.hull(&upper)
}

/// Bracket `0.36232/sqrt(D) <= kappa <= (e log D / (2(d-1)))^(d-1)` for the
/// residue of the Dedekind zeta function.
pub fn kappa_bounds(d: usize, d_bold: &BigInt, prec: Precision) -> Result<(Interval, Interval)> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { op: "kappa_bounds", degree: d, min: 2 });
    }
    if !d_bold.is_positive() {
        return Err(Error::OutOfRange("D must be at least 1".into()));
    }
    let dd = Interval::from_bigint(d_bold, prec);
    let lower = lit("0.36232", prec).div(&dd.sqrt());
    let e = Interval::from_i64(1, prec).exp();
    let upper = e.mul(&dd.ln()).div(&int(2 * (d - 1), prec)).powi((d - 1) as u32);
    if upper.certainly_lt(&lower) {
        return Err(Error::VacuousBracket {
            lower: format!("{:.6}", lower.lo_f64()),
            upper: format!("{:.6}", upper.hi_f64()),
        });
    }
    Ok((lower, upper))
}

/// `0.015744605 / (d * d! * D^(1/d))`.
pub fn kappa_lower_stark(d: usize, d_bold: &BigInt, prec: Precision) -> Result<Interval> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { op: "kappa_lower_stark", degree: d, min: 2 });
    }
    let fact = (1..=d).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    let root = Interval::from_bigint(d_bold, prec).ln().div(&int(d, prec)).exp();
    let den = Interval::from_bigint(&(fact * BigInt::from(d)), prec).mul(&root);
    Ok(lit("0.015744605", prec).div(&den))
}

/// `d (M_Q(|c|) + M_Q(sqrt D) + 0.64)`.
pub fn a_bound(d: usize, c_abs: &BigInt, d_bold: &BigInt, prec: Precision) -> Interval {
    let sum = mertens_q_enclosure(c_abs, prec)
        .add(&mertens_q_enclosure(&isqrt(d_bold), prec))
        .add(&lit("0.64", prec));
    sum.mul(&int(d, prec))
}

/// `e^(28.2d + 5) (d+1)^((5d+5)/2) |D| (log |D|)^d`, zero when `|D| = 1`.
pub fn lambda_value(d: usize, disc_abs: &BigInt, prec: Precision) -> LogReal {
    if disc_abs <= &BigInt::one() {
        return LogReal::zero(prec);
    }
    let dd = int(d, prec);
    let ln_disc = Interval::from_bigint(disc_abs, prec).ln();
    let log = lit("28.2", prec)
        .mul(&dd)
        .add(&int(5, prec))
        .add(&int(5 * d + 5, prec).div_i64(2).mul(&int(d + 1, prec).ln()))
        .add(&ln_disc)
        .add(&dd.mul(&ln_disc.ln()));
    LogReal::from_log(log)
}

/// `Lambda sqrt(D) / 0.36232`, shared by the `B` and `Upsilon` bounds.
fn lambda_over_kappa(d: usize, disc_abs: &BigInt, d_bold: &BigInt, prec: Precision) -> LogReal {
    let lambda = lambda_value(d, disc_abs, prec);
    if lambda.is_zero() {
        return lambda;
    }
    let half_log_d = Interval::from_bigint(d_bold, prec).ln().div_i64(2);
    lambda.mul(&LogReal::from_log(half_log_d)).div_interval(&lit("0.36232", prec))
}

/// `2/log x * (Lambda sqrt(D)/0.36232 * (0.55 d^2 + 44.86 d) + 2d)`.
pub fn b_bound(d: usize, disc_abs: &BigInt, d_bold: &BigInt, log_x: &Interval, prec: Precision) -> Result<LogReal> {
    if !log_x.is_positive() {
        return Err(Error::NonPositiveLog);
    }
    let dd = int(d, prec);
    let poly = lit("0.55", prec).mul(&dd).mul(&dd).add(&lit("44.86", prec).mul(&dd));
    let inner = lambda_over_kappa(d, disc_abs, d_bold, prec)
        .mul_interval(&poly)
        .add(&LogReal::from_interval(&int(2 * d, prec)));
    Ok(inner.mul_interval(&int(2, prec)).div_interval(log_x))
}

/// `d (gamma + 1.02 d - 0.02 + (d-1)/2 log D)`.
pub fn c_bound(d: usize, d_bold: &BigInt, prec: Precision) -> Interval {
    let dd = int(d, prec);
    let log_term = Interval::from_bigint(d_bold, prec).ln().mul(&int(d.saturating_sub(1), prec)).div_i64(2);
    crate::real::euler_gamma(prec)
        .add(&lit("1.02", prec).mul(&dd))
        .sub(&lit("0.02", prec))
        .add(&log_term)
        .mul(&dd)
}

/// Upper bound on the constant in the first Mertens theorem for a number field of
/// degree `d >= 2`, with the residue replaced by its lower bound `0.36232/sqrt(D)`:
/// `(Lambda sqrt(D)/0.36232)((d+1)^2/(2(d-1)) + 0.55 d(d+1) + 40.31 d) + 1 + d`.
pub fn upsilon_upper(d: usize, disc_abs: &BigInt, d_bold: &BigInt, prec: Precision) -> Result<LogReal> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { op: "upsilon_upper", degree: d, min: 2 });
    }
    let dd = int(d, prec);
    let d1 = int(d + 1, prec);
    let poly = d1
        .mul(&d1)
        .div(&int(2 * (d - 1), prec))
        .add(&lit("0.55", prec).mul(&dd).mul(&d1))
        .add(&lit("40.31", prec).mul(&dd));
    Ok(lambda_over_kappa(d, disc_abs, d_bold, prec)
        .mul_interval(&poly)
        .add(&LogReal::from_interval(&int(d + 1, prec))))
}

/// The `f`-dependent parts of the bound, ready to be evaluated at any `x`.
#[derive(Debug, Clone)]
pub struct BoundBreakdown {
    pub d: usize,
    pub c_abs: BigInt,
    pub disc_abs: BigInt,
    pub d_bold: BigInt,
    /// `d M_Q(|D_f|)`.
    pub mertens_term: Interval,
    pub a_term: Interval,
    pub c_term: Interval,
    pub lambda: LogReal,
    /// Residue bracket; `None` for `d = 1` or when it is vacuous.
    pub kappa: Option<(Interval, Interval)>,
    /// `log max{2, |D_f|, sqrt(D_f)}`.
    pub log_threshold: Interval,
    prec: Precision,
}

impl BoundBreakdown {
    pub fn new(f: &IntPoly, prec: Precision) -> Result<Self> {
        let d = match f.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ConstantPolynomial { op: "main_rhs" }),
        };
        let disc_abs = discriminant(f)?.abs();
        if disc_abs == BigInt::from(0) {
            return Err(Error::RepeatedFactor);
        }
        let d_bold = bold_discriminant(f)?;
        let c_abs = f.leading_coefficient().unwrap().abs();
        let kappa = if d >= 2 { kappa_bounds(d, &d_bold, prec).ok() } else { None };
        let two = Interval::from_i64(2, prec);
        let log_threshold = two
            .max(&Interval::from_bigint(&disc_abs, prec))
            .max(&Interval::from_bigint(&d_bold, prec).sqrt())
            .ln();
        Ok(BoundBreakdown {
            mertens_term: mertens_q_enclosure(&disc_abs, prec).mul(&int(d, prec)),
            a_term: a_bound(d, &c_abs, &d_bold, prec),
            c_term: c_bound(d, &d_bold, prec),
            lambda: lambda_value(d, &disc_abs, prec),
            kappa,
            log_threshold,
            d,
            c_abs,
            disc_abs,
            d_bold,
            prec,
        })
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// `max{2, |D_f|, sqrt(D_f)}` for display.
    pub fn threshold_display(&self) -> String {
        let two = BigInt::from(2);
        let root_wins = &self.disc_abs * &self.disc_abs < self.d_bold && self.d_bold > BigInt::from(4);
        if !root_wins {
            return (&self.disc_abs).max(&two).to_string();
        }
        let root = isqrt(&self.d_bold);
        if &root * &root == self.d_bold {
            root.to_string()
        } else {
            format!("sqrt({})", self.d_bold)
        }
    }

    /// Exact test of `x >= max{2, |D_f|, sqrt(D_f)}`.
    pub fn x_meets_hypothesis(&self, x: f64) -> bool {
        let Some(r) = BigRational::from_float(x) else { return false };
        r >= BigRational::from_integer(BigInt::from(2))
            && r >= BigRational::from_integer(self.disc_abs.clone())
            && &r * &r >= BigRational::from_integer(self.d_bold.clone())
    }

    /// Whether every `x` with `log x` in `log_x` satisfies the hypothesis.
    pub fn log_meets_hypothesis(&self, log_x: &Interval) -> bool {
        self.log_threshold.certainly_le(log_x)
    }

    pub fn b_term(&self, log_x: &Interval) -> Result<LogReal> {
        b_bound(self.d, &self.disc_abs, &self.d_bold, log_x, self.prec)
    }

    /// `(d M_Q(|D_f|) + A + B(x) + C) / loglog x`, without the hypothesis check.
    pub fn rhs(&self, log_x: &Interval) -> Result<LogReal> {
        if !log_x.is_positive() {
            return Err(Error::NonPositiveLog);
        }
        let ll = log_x.ln();
        if !ll.is_positive() {
            return Err(Error::LogLogNonPositive);
        }
        let plain = self.mertens_term.add(&self.a_term).add(&self.c_term);
        let total = LogReal::from_interval(&plain).add(&self.b_term(log_x)?);
        Ok(total.div_interval(&ll))
    }

    /// Components keyed by name, each in the [`LogReal::to_json`] layout.
    pub fn to_json(&self, log_x: Option<&Interval>) -> Value {
        let mut m = BTreeMap::new();
        let lr = |x: &Interval| LogReal::from_interval(x).to_json();
        m.insert("d", Value::String(self.d.to_string()));
        m.insert("c_abs", Value::String(self.c_abs.to_string()));
        m.insert("disc_abs", Value::String(self.disc_abs.to_string()));
        m.insert("d_bold", Value::String(self.d_bold.to_string()));
        m.insert("threshold", Value::String(self.threshold_display()));
        m.insert("mertens_term", lr(&self.mertens_term));
        m.insert("a_term", lr(&self.a_term));
        m.insert("c_term", lr(&self.c_term));
        m.insert("lambda", self.lambda.to_json());
        let (klo, khi) = match &self.kappa {
            Some((lo, hi)) if self.d >= 2 => (lr(lo), lr(hi)),
            _ if self.d == 1 => {
                let one = Interval::from_i64(1, self.prec);
                (lr(&one), lr(&one))
            }
            _ => (Value::Null, Value::Null),
        };
        m.insert("kappa_lo", klo);
        m.insert("kappa_hi", khi);
        if let Some(lx) = log_x {
            m.insert("b_term", self.b_term(lx).map(|b| b.to_json()).unwrap_or(Value::Null));
            m.insert("main_rhs", self.rhs(lx).map(|b| b.to_json()).unwrap_or(Value::Null));
        }
        Value::Object(m.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

/// Right side of the explicit bound at `x`, with its breakdown.
pub fn main_rhs(f: &IntPoly, x: f64, prec: Precision) -> Result<(LogReal, BoundBreakdown)> {
    let bd = BoundBreakdown::new(f, prec)?;
    if !bd.x_meets_hypothesis(x) {
        return Err(Error::BelowThreshold { threshold: bd.threshold_display() });
    }
    let log_x = Interval::from_f64(x, prec).ln();
    let rhs = bd.rhs(&log_x)?;
    Ok((rhs, bd))
}

/// As [`main_rhs`] with `x` given through `log x`, for `x` beyond `f64` range.
pub fn main_rhs_log(f: &IntPoly, log_x: &Interval, prec: Precision) -> Result<(LogReal, BoundBreakdown)> {
    let bd = BoundBreakdown::new(f, prec)?;
    if !bd.log_meets_hypothesis(log_x) {
        return Err(Error::BelowThreshold { threshold: bd.threshold_display() });
    }
    let rhs = bd.rhs(log_x)?;
    Ok((rhs, bd))
}
