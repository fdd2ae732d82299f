//! Prime ideals of `K = Q(alpha)`, `h(alpha) = 0`, read off from the
//! factorization of `h` modulo each rational prime.
//!
//! The factorization of `h mod p` describes the ideal `pO_K` whenever `p`
//! does not divide the index `[O_K : Z[alpha]]`. The index squared divides
//! `D_h`, so only primes with `p^2 | D_h` can go wrong. Sums that touch
//! such a prime without a monogenicity assertion are marked untrusted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::bounds::{a_bound, mertens_q_enclosure};
use crate::elimination::{d_bold, discriminant};
use crate::error::{Error, Result};
use crate::modp::{omega_mod, reduce, splitting_pattern};
use crate::poly::IntPoly;
use crate::prime_sums::{check_mode, ln_primes, omega_sum, prime_bound, primes_upto, sum_fractions, SumMode, SumValue};
use crate::real::{isqrt, Interval, Precision};

/// The field defined by a monic irreducible `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub h: IntPoly,
    /// Caller asserts `O_K = Z[alpha]`.
    pub monogenic_asserted: bool,
    pub disc_h: BigInt,
}

impl FieldSpec {
    pub fn new(h: IntPoly, monogenic_asserted: bool) -> Result<Self> {
        if h.degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantPolynomial { op: "FieldSpec" });
        }
        if !h.is_monic() {
            return Err(Error::NonMonic { op: "FieldSpec" });
        }
        let disc_h = discriminant(&h)?;
        if disc_h.is_zero() {
            return Err(Error::RepeatedFactor);
        }
        Ok(FieldSpec { h, monogenic_asserted, disc_h })
    }

    /// `Q` itself, as `h = x - 1`.
    pub fn rationals() -> Self {
        FieldSpec::new(IntPoly::from_i64s(&[-1, 1]), true).expect("x - 1 is a valid field")
    }

    pub fn degree(&self) -> usize {
        self.h.degree().unwrap()
    }

    /// Whether the pattern of `h mod p` is known to give the ideal factorization.
    pub fn dedekind_applies(&self, p: u64) -> bool {
        if self.monogenic_asserted {
            return true;
        }
        let sq = BigInt::from(p) * BigInt::from(p);
        !(&self.disc_h % sq).is_zero()
    }
}

/// A field-side sum together with whether every prime it used was safe.
#[derive(Debug, Clone)]
pub struct FieldSum {
    pub value: SumValue,
    pub trusted: bool,
}

/// Norm exponents `f` of the prime ideals above `p` with `p^f <= limit`.
fn norm_exponents(spec: &FieldSpec, p: u64, limit: u64) -> Result<Vec<u32>> {
    if p.saturating_mul(p) > limit {
        let w = omega_mod(&reduce(&spec.h, p));
        return Ok(vec![1; w as usize]);
    }
    let pattern = splitting_pattern(&spec.h, p)?;
    Ok(pattern
        .parts
        .iter()
        .map(|&(f, _)| f as u32)
        .filter(|&f| p.checked_pow(f).is_some_and(|q| q <= limit))
        .collect())
}

fn field_primes(spec: &FieldSpec, x: f64) -> Result<Vec<(u64, Vec<u32>)>> {
    if x.is_nan() || x < 2.0 {
        return Err(Error::OutOfRange(format!("x = {x} must be at least 2")));
    }
    let limit = prime_bound(x)?.expect("x >= 2");
    let table = primes_upto(limit)?;
    table.upto(limit).par_iter().map(|&p| Ok((p, norm_exponents(spec, p, limit)?))).collect()
}

fn trusted(spec: &FieldSpec, primes: &[(u64, Vec<u32>)]) -> bool {
    primes.iter().all(|&(p, _)| spec.dedekind_applies(p))
}

/// `M_K(x) = sum_{N(P) <= x} 1/N(P)`.
pub fn mertens_k(spec: &FieldSpec, x: f64, mode: SumMode, prec: Precision) -> Result<FieldSum> {
    let primes = field_primes(spec, x)?;
    check_mode(mode, primes.last().map_or(0, |v| v.0))?;
    let terms: Vec<(u64, u64)> = primes
        .iter()
        .filter(|(_, fs)| !fs.is_empty())
        .map(|(p, fs)| {
            // sum of p^-f as a / p^top, then reduced
            let top = *fs.iter().max().unwrap();
            let mut a: u64 = fs.iter().map(|&f| p.pow(top - f)).sum();
            let mut den = p.pow(top);
            while den > 1 && a.is_multiple_of(*p) {
                a /= p;
                den /= p;
            }
            (a, den)
        })
        .collect();
    Ok(FieldSum { value: sum_fractions(&terms, mode, prec), trusted: trusted(spec, &primes) })
}

/// `sum_{N(P) <= x} log N(P) / N(P)`.
pub fn log_weighted_mertens_k(spec: &FieldSpec, x: f64, prec: Precision) -> Result<FieldSum> {
    let primes = field_primes(spec, x)?;
    let ps: Vec<u64> = primes.iter().map(|v| v.0).collect();
    let logs = ln_primes(&ps, prec);
    let mut sum = Interval::zero(prec);
    for ((p, fs), l) in primes.iter().zip(&logs) {
        for &f in fs {
            sum = sum.add(&l.mul_i64(f as i64).div_i64(p.pow(f) as i64));
        }
    }
    Ok(FieldSum { value: SumValue::float(sum), trusted: trusted(spec, &primes) })
}

fn difference(a: &SumValue, b: &SumValue, prec: Precision) -> SumValue {
    match (a.exact_value(), b.exact_value()) {
        (Some(x), Some(y)) => SumValue::exact(x - y, prec),
        _ => SumValue::float(a.enclosure().sub(b.enclosure())),
    }
}

/// Both sides of `sum_{p <= x} omega_g(p)/p = M_K(x) + A_g` and the bound on `A_g`.
#[derive(Debug, Clone)]
pub struct NfmReport {
    pub x: f64,
    pub g: IntPoly,
    /// Monic model of `g` that defines the field.
    pub h: IntPoly,
    pub omega_side: SumValue,
    pub ideal_side: SumValue,
    pub a_g: SumValue,
    pub a_bound: Interval,
    /// `|A_g| <= bound` holds for the whole enclosure.
    pub holds: bool,
    pub trusted: bool,
}

/// Checks `|sum omega_g(p)/p - M_K(x)| <= d (M_Q(|c|) + M_Q(sqrt D_g) + 0.64)`
/// for irreducible `g`, requiring `x > max{2, sqrt D_g}`.
pub fn nfm_check(g: &IntPoly, x: f64, monogenic_asserted: bool, mode: SumMode, prec: Precision) -> Result<NfmReport> {
    let d = match g.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::ConstantPolynomial { op: "nfm_check" }),
    };
    if discriminant(g)?.is_zero() {
        return Err(Error::RepeatedFactor);
    }
    let big_d = d_bold(g)?;
    if !exceeds(x, &BigInt::from(2)) || !exceeds_sqrt(x, &big_d) {
        let root = isqrt(&big_d);
        let shown = if &root * &root == big_d { root.to_string() } else { format!("sqrt({big_d})") };
        return Err(Error::XTooSmall { threshold: format!("max(2, {shown})") });
    }
    let h = g.monicize()?;
    let spec = FieldSpec::new(h.clone(), monogenic_asserted)?;
    let omega_side = omega_sum(g, x, mode, prec)?;
    let ideal = mertens_k(&spec, x, mode, prec)?;
    let a_g = difference(&omega_side, &ideal.value, prec);
    let c_abs = g.leading_coefficient().unwrap().abs();
    let bound = a_bound(d, &c_abs, &big_d, prec);
    let holds = a_g.enclosure().abs().certainly_le(&bound);
    Ok(NfmReport {
        x,
        g: g.clone(),
        h,
        omega_side,
        ideal_side: ideal.value,
        a_g,
        a_bound: bound,
        holds,
        trusted: ideal.trusted,
    })
}

/// `x > n` exactly.
fn exceeds(x: f64, n: &BigInt) -> bool {
    BigRational::from_float(x).is_some_and(|r| r > BigRational::from_integer(n.clone()))
}

/// `x > sqrt(n)` exactly, for `n >= 0`.
fn exceeds_sqrt(x: f64, n: &BigInt) -> bool {
    BigRational::from_float(x).is_some_and(|r| r.is_positive() && &r * &r > BigRational::from_integer(n.clone()))
}

/// Both sides of `|M_K(x) - sum_{p <= x} omega_h(p)/p| < (M_Q(sqrt|D_h|) + 0.64) d`.
#[derive(Debug, Clone)]
pub struct Components1Report {
    pub x: f64,
    pub ideal_side: SumValue,
    pub omega_side: SumValue,
    pub difference: SumValue,
    pub bound: Interval,
    pub holds: bool,
    pub trusted: bool,
}

/// Compares `M_K(x)` with the root-count sum of a monic `h` for `x > sqrt|D_h|`.
pub fn components1_check(
    h: &IntPoly,
    x: f64,
    monogenic_asserted: bool,
    mode: SumMode,
    prec: Precision,
) -> Result<Components1Report> {
    let spec = FieldSpec::new(h.clone(), monogenic_asserted)?;
    let disc_abs = spec.disc_h.abs();
    if !exceeds_sqrt(x, &disc_abs) || x < 2.0 {
        return Err(Error::XTooSmall { threshold: format!("sqrt({disc_abs})") });
    }
    let ideal = mertens_k(&spec, x, mode, prec)?;
    let omega_side = omega_sum(h, x, mode, prec)?;
    let diff = difference(&ideal.value, &omega_side, prec);
    let d = spec.degree() as i64;
    let bound = mertens_q_enclosure(&isqrt(&disc_abs), prec)
        .add(&Interval::from_decimal("0.64", prec))
        .mul_i64(d);
    let holds = diff.enclosure().abs().certainly_lt(&bound);
    Ok(Components1Report {
        x,
        ideal_side: ideal.value,
        omega_side,
        difference: diff,
        bound,
        holds,
        trusted: ideal.trusted,
    })
}
