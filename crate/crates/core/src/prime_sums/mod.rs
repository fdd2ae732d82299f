//! Sums over rational primes: reciprocal sums, root-count sums, prime zeta values.
//!
//! Every sum is taken in ascending prime order. Per-prime terms may be
//! computed in parallel; the reduction order never depends on the thread
//! count, so results are reproducible bit for bit.

mod sieve;
mod zeta;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

pub use sieve::{primes_upto, sieve, PrimeTable, MAX_SIEVE_LIMIT};
pub use zeta::{prime_zeta, script_p};

use crate::error::{Error, Result};
use crate::modp;
use crate::poly::IntPoly;
use crate::real::{float_to_f64, format_fixed, Interval, Precision};

/// Largest `x` accepted in exact-rational mode.
pub const EXACT_MODE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumMode {
    /// Rational arithmetic; conversion to a real happens only when rendering.
    Exact,
    /// Outward-rounded interval arithmetic.
    Float,
}

/// A computed sum together with a bound on its numerical error.
#[derive(Debug, Clone)]
pub struct SumValue {
    mode: SumMode,
    enclosure: Interval,
    exact: Option<BigRational>,
}

impl SumValue {
    pub fn float(enclosure: Interval) -> Self {
        SumValue { mode: SumMode::Float, enclosure, exact: None }
    }

    pub fn exact(value: BigRational, prec: Precision) -> Self {
        let enclosure = Interval::from_ratio(value.numer(), value.denom(), prec);
        SumValue { mode: SumMode::Exact, enclosure, exact: Some(value) }
    }

    /// A real derived from an exact sum: the mode stays `Exact` but the value
    /// carries the rounding of the final real operation.
    pub(crate) fn derived(mode: SumMode, enclosure: Interval) -> Self {
        SumValue { mode, enclosure, exact: None }
    }

    pub fn mode(&self) -> SumMode {
        self.mode
    }

    pub fn enclosure(&self) -> &Interval {
        &self.enclosure
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn value(&self) -> BigFloat {
        self.enclosure.mid()
    }

    pub fn value_f64(&self) -> f64 {
        self.enclosure.mid_f64()
    }

    /// Zero for an exact rational; otherwise the enclosure half-width.
    pub fn error_radius(&self) -> BigFloat {
        match self.exact {
            Some(_) => BigFloat::from_u8(0, 64),
            None => self.enclosure.radius(),
        }
    }

    pub fn error_radius_f64(&self) -> f64 {
        float_to_f64(&self.error_radius(), astro_float::RoundingMode::Up)
    }

    /// Decimal rendering with `digits` places, rounded half away from zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        match &self.exact {
            Some(r) => ratio_to_fixed(r, digits),
            None => format_fixed(&self.value(), digits),
        }
    }
}

fn ratio_to_fixed(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), digits);
    let num: BigInt = r.numer().abs() * scale * 2 + r.denom();
    let n = num.div_floor(&(r.denom() * BigInt::from(2u8)));
    let s = n.to_string();
    let body = if digits == 0 {
        s
    } else {
        let padded = format!("{:0>width$}", s, width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        format!("{int}.{frac}")
    };
    if r.is_negative() && !n.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 {
        Err(Error::NonPositiveTolerance)
    } else {
        Ok(())
    }
}

/// Integer part of a real sum bound; `None` when the range is empty.
pub(crate) fn prime_bound(x: f64) -> Result<Option<u64>> {
    if x.is_nan() {
        return Err(Error::OutOfRange("x is NaN".into()));
    }
    if x < 2.0 {
        return Ok(None);
    }
    if x > MAX_SIEVE_LIMIT as f64 {
        return Err(Error::OutOfRange(format!("x = {x} exceeds sieve limit {MAX_SIEVE_LIMIT}")));
    }
    Ok(Some(x.floor() as u64))
}

/// Sum of `num/den` over reduced fractions whose denominators are powers of
/// distinct primes (or 1), in the given order.
///
/// In exact mode the fractions are merged pairwise; because the
/// denominators are coprime the result needs no gcd reduction.
pub(crate) fn sum_fractions(terms: &[(u64, u64)], mode: SumMode, prec: Precision) -> SumValue {
    match mode {
        SumMode::Exact => {
            let (n, d) = merge(terms);
            SumValue::exact(BigRational::new_raw(n, d), prec)
        }
        SumMode::Float => {
            let parts: Vec<Interval> = terms
                .par_iter()
                .map(|&(n, d)| Interval::from_i64(n as i64, prec).div_i64(d as i64))
                .collect();
            SumValue::float(parts.iter().fold(Interval::zero(prec), |acc, t| acc.add(t)))
        }
    }
}

fn merge(terms: &[(u64, u64)]) -> (BigInt, BigInt) {
    match terms.len() {
        0 => (BigInt::zero(), BigInt::from(1u8)),
        1 => (BigInt::from(terms[0].0), BigInt::from(terms[0].1)),
        n => {
            let (a, b) = if n > 256 {
                rayon::join(|| merge(&terms[..n / 2]), || merge(&terms[n / 2..]))
            } else {
                (merge(&terms[..n / 2]), merge(&terms[n / 2..]))
            };
            (a.0 * &b.1 + b.0 * &a.1, a.1 * b.1)
        }
    }
}

pub(crate) fn check_mode(mode: SumMode, limit: u64) -> Result<()> {
    if mode == SumMode::Exact && limit > EXACT_MODE_LIMIT {
        return Err(Error::ExactModeLimit { limit: EXACT_MODE_LIMIT });
    }
    Ok(())
}

/// `M_Q(x) = sum_{p <= x} 1/p`.
pub fn mertens_q(x: f64, mode: SumMode, prec: Precision) -> Result<SumValue> {
    let Some(limit) = prime_bound(x)? else {
        return Ok(sum_fractions(&[], mode, prec));
    };
    check_mode(mode, limit)?;
    let table = primes_upto(limit)?;
    let terms: Vec<(u64, u64)> = table.upto(limit).iter().map(|&p| (1, p)).collect();
    Ok(sum_fractions(&terms, mode, prec))
}

/// `omega_f(p)` for every prime `p <= x`, in ascending order of `p`.
pub fn omega_values(f: &IntPoly, x: f64) -> Result<Vec<(u64, u64)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial { op: "omega_sum" });
    }
    let Some(limit) = prime_bound(x)? else {
        return Ok(Vec::new());
    };
    let table = primes_upto(limit)?;
    Ok(table
        .upto(limit)
        .par_iter()
        .map(|&p| (p, modp::omega_mod(&modp::reduce(f, p))))
        .collect())
}

/// `sum_{p <= x} omega_f(p)/p`.
pub fn omega_sum(f: &IntPoly, x: f64, mode: SumMode, prec: Precision) -> Result<SumValue> {
    let values = omega_values(f, x)?;
    check_mode(mode, values.last().map_or(0, |v| v.0))?;
    let terms: Vec<(u64, u64)> = values
        .into_iter()
        .filter(|&(_, w)| w != 0)
        .map(|(p, w)| if w == p { (1, 1) } else { (w, p) })
        .collect();
    Ok(sum_fractions(&terms, mode, prec))
}

/// `log log x`, failing unless `x > e`.
pub fn loglog(x: f64, prec: Precision) -> Result<Interval> {
    if x.is_nan() || x <= std::f64::consts::E {
        return Err(Error::LogLogNonPositive);
    }
    let l = Interval::from_f64(x, prec).ln();
    if !l.ln().is_positive() {
        return Err(Error::LogLogNonPositive);
    }
    Ok(l.ln())
}

/// `F(x) = (sum_{p <= x} omega_f(p)/p) / log log x`.
pub fn f_value(f: &IntPoly, x: f64, mode: SumMode, prec: Precision) -> Result<SumValue> {
    let ll = loglog(x, prec)?;
    let s = omega_sum(f, x, mode, prec)?;
    Ok(SumValue::derived(mode, s.enclosure().div(&ll)))
}

/// `sum_{p <= x} omega_f(p) log p / p`; constant `f` is rejected.
pub fn nagell_sum(f: &IntPoly, x: f64, prec: Precision) -> Result<SumValue> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial { op: "nagell_sum" });
    }
    let values = omega_values(f, x)?;
    let primes: Vec<u64> = values.iter().map(|v| v.0).collect();
    let logs = ln_primes(&primes, prec);
    let sum = values
        .iter()
        .zip(&logs)
        .filter(|(v, _)| v.1 != 0)
        .fold(Interval::zero(prec), |acc, (&(p, w), l)| {
            acc.add(&l.mul_i64(w as i64).div_i64(p as i64))
        });
    Ok(SumValue::float(sum))
}

/// Enclosures of `ln p` for ascending primes, chained through
/// `ln p = ln q + 2 atanh((p - q)/(p + q))` from the previous prime `q`.
pub(crate) fn ln_primes(primes: &[u64], prec: Precision) -> Vec<Interval> {
    let work = prec.with_guard(32);
    let mut out: Vec<Interval> = Vec::with_capacity(primes.len());
    for (i, &p) in primes.iter().enumerate() {
        let l = match i {
            0 => Interval::from_i64(p as i64, work).ln(),
            _ => {
                let q = primes[i - 1];
                out[i - 1].add(&atanh_ratio(p - q, p + q, work).mul_i64(2))
            }
        };
        out.push(l);
    }
    out
}

/// `atanh(a/b)` for `0 < a < b`; the series remainder after the term
/// `y^(2k+1)/(2k+1)` is at most that term over `1 - y^2`.
fn atanh_ratio(a: u64, b: u64, prec: Precision) -> Interval {
    let y = Interval::from_i64(a as i64, prec).div_i64(b as i64);
    let y2 = y.mul(&y);
    let damp = Interval::from_i64(1, prec).sub(&y2);
    let floor = 2f64.powi(-(prec.bits() as i32)).max(1e-300);
    let mut pow = y.clone();
    let mut acc = y.clone();
    let mut k = 1i64;
    loop {
        pow = pow.mul(&y2);
        let term = pow.div_i64(2 * k + 1);
        let rest = term.div(&damp);
        if rest.hi_f64() < floor * acc.lo_f64() {
            return acc.add(&Interval::from_zero_to(&rest)).with_lo(&acc);
        }
        acc = acc.add(&term);
        k += 1;
    }
}
