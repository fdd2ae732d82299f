//! Prime zeta values `P(k) = sum_p p^-k` with rigorous enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;

use super::sieve::{primes_upto, MAX_SIEVE_LIMIT};
use super::{check_tol, SumValue};
use crate::error::{Error, Result};
use crate::real::{Interval, Precision};

/// Cut-off `M` and number of correction terms in the Euler-Maclaurin formula.
const EM_CUTOFF: u32 = 40;
const EM_TERMS: usize = 15;

/// `B_0 .. B_n` as exact rationals.
fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn rising(s: u32, len: u32) -> BigInt {
    (0..len).fold(BigInt::one(), |acc, i| acc * BigInt::from(s + i))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn recip_pow(base: u32, exp: u32) -> BigRational {
    BigRational::new(BigInt::one(), Pow::pow(BigInt::from(base), exp))
}

/// Encloses `zeta(s)` for an integer `s >= 2` by Euler-Maclaurin summation.
///
/// For real `s` the remainder is bounded by the first omitted correction.
pub(crate) fn zeta_int(s: u32, prec: Precision) -> Interval {
    assert!(s >= 2);
    let m = EM_CUTOFF;
    let b = bernoulli(2 * EM_TERMS + 2);
    let mut approx: BigRational = (1..m).map(|j| recip_pow(j, s)).sum();
    approx += recip_pow(m, s - 1) / BigRational::from_integer(BigInt::from(s - 1));
    approx += recip_pow(m, s) / BigRational::from_integer(BigInt::from(2));
    let correction = |i: usize| -> BigRational {
        &b[2 * i] / BigRational::from_integer(factorial(2 * i))
            * BigRational::from_integer(rising(s, 2 * i as u32 - 1))
            * recip_pow(m, s + 2 * i as u32 - 1)
    };
    for i in 1..=EM_TERMS {
        approx += correction(i);
    }
    let err = correction(EM_TERMS + 1).abs();
    let lo = &approx - &err;
    let hi = &approx + &err;
    Interval::from_ratio(lo.numer(), lo.denom(), prec)
        .hull(&Interval::from_ratio(hi.numer(), hi.denom(), prec))
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `P(k) = sum_n mu(n)/n log zeta(kn)`, truncated where `2^(-kN)` falls below `tol/4`.
///
/// `log zeta(s) <= zeta(s) - 1 <= (5/3) 2^-s` for `s >= 4`, so the dropped
/// terms sum to less than `2^(-kN)`.
pub(crate) fn prime_zeta_moebius(k: u32, tol: f64, prec: Precision) -> Interval {
    let n_terms = (((4.0 / tol).log2() / k as f64).ceil() as u64).max(1);
    let work = Precision::new(prec.bits().max((k as u64 * n_terms) as usize) + 32);
    let mut acc = Interval::zero(work);
    for n in 1..=n_terms {
        let mu = mobius(n);
        if mu == 0 {
            continue;
        }
        let term = zeta_int(k * n as u32, work).ln().div_i64(n as i64).mul_i64(mu);
        acc = acc.add(&term);
    }
    let tail = Interval::from_i64(1, work).div(&Interval::from_i64(2, work).powi(k * n_terms as u32));
    acc.widen(tail.hi())
}

type ZetaKey = (u32, u64, usize);

static MEMO: Mutex<Option<HashMap<ZetaKey, Interval>>> = Mutex::new(None);

/// Encloses `P(k)` within `tol`: primes up to a cut-off `B` plus the integral
/// tail `B^(1-k)/(k-1)`; `k = 2` goes through the Moebius identity instead.
pub fn prime_zeta(k: u32, tol: f64, prec: Precision) -> Result<SumValue> {
    check_tol(tol)?;
    if k < 2 {
        return Err(Error::OutOfRange(format!("prime zeta needs k >= 2, got {k}")));
    }
    let key = (k, tol.to_bits(), prec.bits());
    if let Some(v) = MEMO.lock().unwrap_or_else(|e| e.into_inner()).as_ref().and_then(|m| m.get(&key)) {
        return Ok(SumValue::float(v.clone()));
    }
    let value = if k == 2 { prime_zeta_moebius(2, tol, prec) } else { prime_zeta_direct(k, tol, prec)? };
    MEMO.lock()
        .unwrap_or_else(|e| e.into_inner())
        .get_or_insert_with(HashMap::new)
        .insert(key, value.clone());
    Ok(SumValue::float(value))
}

fn prime_zeta_direct(k: u32, tol: f64, prec: Precision) -> Result<Interval> {
    let km1 = (k - 1) as f64;
    let b = ((2.0 / (tol * km1)).powf(1.0 / km1).ceil() as u64).max(2) + 1;
    if b > MAX_SIEVE_LIMIT {
        return Err(Error::OutOfRange(format!("tolerance {tol} too small for P({k})")));
    }
    let table = primes_upto(b)?;
    let terms: Vec<Interval> = table
        .upto(b)
        .par_iter()
        .map(|&p| Interval::from_i64(1, prec).div(&Interval::from_i64(p as i64, prec).powi(k)))
        .collect();
    let head = terms.iter().fold(Interval::zero(prec), |acc, t| acc.add(t));
    let tail = Interval::from_i64(b as i64, prec)
        .powi(k - 1)
        .mul_i64((k - 1) as i64);
    let tail = Interval::from_i64(1, prec).div(&tail);
    Ok(head.add(&tail).with_lo(&head))
}

/// `sum_{2 <= k <= x} P(k)/k` within `tol`.
///
/// Terms past the point where `3 * 2^-K / (K + 1)` drops below `tol/2` are
/// replaced by that bound, using `P(k) <= 3 * 2^-k`.
pub fn script_p(x: f64, tol: f64, prec: Precision) -> Result<SumValue> {
    check_tol(tol)?;
    if x.is_nan() {
        return Err(Error::OutOfRange("x is NaN".into()));
    }
    if x < 2.0 {
        return Ok(SumValue::float(Interval::zero(prec)));
    }
    let top = if x >= u64::MAX as f64 { u64::MAX } else { x.floor() as u64 };
    let mut cut = 2u64;
    while 3.0 * 0.5f64.powi(cut as i32) / (cut + 1) as f64 >= tol / 4.0 {
        cut += 1;
    }
    let last = top.min(cut);
    // independent of x so that memoized terms are shared between calls
    let each = tol / (4.0 * (cut - 1) as f64);
    let terms: Vec<Interval> = (2..=last as u32)
        .into_par_iter()
        .map(|k| prime_zeta(k, each, prec).map(|v| v.enclosure().div_i64(k as i64)))
        .collect::<Result<_>>()?;
    let mut acc = terms.iter().fold(Interval::zero(prec), |acc, t| acc.add(t));
    if top > last {
        let tail = Interval::from_i64(3, prec)
            .div(&Interval::from_i64(2, prec).powi(last as u32))
            .div_i64(last as i64 + 1);
        acc = acc.add(&Interval::from_zero_to(&tail)).with_lo(&acc);
    }
    Ok(SumValue::float(acc))
}
