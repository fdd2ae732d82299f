//! Outward-rounded interval arithmetic on multi-precision floats.
//!
//! Every bound in the crate is evaluated as an [`Interval`] whose endpoints
//! are rounded away from the enclosed value, so `hi()` is always a valid
//! upper bound and `lo()` a valid lower bound. Transcendental results are
//! widened by two ulps on top of the library's directed rounding.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_traits::{Signed, Zero};

/// Mantissa width used when the caller does not choose one.
pub const DEFAULT_PRECISION: usize = 96;

/// Mantissa width in bits. Values below 64 are raised to 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision(usize);

impl Precision {
    pub fn new(bits: usize) -> Self {
        Precision(bits.max(64))
    }

    pub fn bits(self) -> usize {
        self.0
    }

    /// Precision with `extra` guard bits added.
    pub fn with_guard(self, extra: usize) -> Self {
        Precision(self.0 + extra)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION)
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("allocate constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

fn zero(p: usize) -> BigFloat {
    BigFloat::from_u8(0, p)
}

fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(c) if c < 0 => Ordering::Less,
        Some(0) => Ordering::Equal,
        Some(_) => Ordering::Greater,
        None => panic!("comparison with NaN"),
    }
}

fn check(x: BigFloat, what: &str) -> BigFloat {
    assert!(!x.is_nan() && !x.is_inf(), "{what} produced a non-finite value");
    x
}

/// Moves `x` two units in the last place towards +inf (`up`) or -inf.
fn nudge(x: &BigFloat, p: usize, up: bool) -> BigFloat {
    if x.is_zero() {
        return x.clone();
    }
    let e = x.exponent().expect("finite value");
    let mut ulp = BigFloat::from_u8(1, 64);
    ulp.set_exponent(e - p as i32 + 2);
    if up {
        x.add(&ulp, p, RoundingMode::Up)
    } else {
        x.sub(&ulp, p, RoundingMode::Down)
    }
}

/// Converts an integer to a float, rounding in the direction `rm`.
pub fn bigint_to_float(n: &BigInt, p: usize, rm: RoundingMode) -> BigFloat {
    if n.is_zero() {
        return zero(p);
    }
    let mag = n.magnitude();
    let bits = mag.bits();
    let words = bits.div_ceil(Word::BITS as u64);
    let shift = words * Word::BITS as u64 - bits;
    let digits = (mag << shift).to_u64_digits();
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let mut x = BigFloat::from_words(&digits, sign, bits as i32);
    x.set_precision(p, rm).expect("set precision");
    check(x, "integer conversion")
}

/// Largest integer not exceeding `x`.
pub fn float_floor_to_bigint(x: &BigFloat) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let (m, _, sign, e, _) = x.as_raw_parts().expect("finite value");
    let width = (m.len() * Word::BITS as usize) as i64;
    let mant = BigUint::from_slice(
        &m.iter()
            .flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32])
            .collect::<Vec<_>>(),
    );
    let shift = e as i64 - width;
    let (mag, exact) = if shift >= 0 {
        (mant << shift as u64, true)
    } else {
        let s = (-shift) as u64;
        let q = &mant >> s;
        let exact = (&q << s) == mant;
        (q, exact)
    };
    let v = BigInt::from_biguint(IntSign::Plus, mag);
    if sign == Sign::Neg {
        if exact {
            -v
        } else {
            -v - 1
        }
    } else {
        v
    }
}

/// Converts to `f64` rounding in the direction `rm` (`Up` or `Down`);
/// any other mode rounds to nearest.
pub fn float_to_f64(x: &BigFloat, rm: RoundingMode) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    let (m, _, sign, e, _) = x.as_raw_parts().expect("finite value");
    let top = m[m.len() - 1] as f64;
    let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
    let mag = scale2(top + next / 2f64.powi(64), e - 64);
    let mut y = if sign == Sign::Neg { -mag } else { mag };
    if !y.is_finite() {
        return y;
    }
    match rm {
        RoundingMode::Up => {
            while y.is_finite() && cmp(&BigFloat::from_f64(y, 64), x) == Ordering::Less {
                y = y.next_up();
            }
        }
        RoundingMode::Down => {
            while y.is_finite() && cmp(&BigFloat::from_f64(y, 64), x) == Ordering::Greater {
                y = y.next_down();
            }
        }
        _ => {}
    }
    y
}

fn scale2(v: f64, e: i32) -> f64 {
    let mut v = v;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e)
}

/// Renders `x` rounded half away from zero to `decimals` digits after the point.
pub fn format_fixed(x: &BigFloat, decimals: usize) -> String {
    let p = x.precision().unwrap_or(64).max(64) + 64;
    let scale = BigFloat::from_u8(10, p).powi(decimals, p, RoundingMode::ToEven);
    let scaled = x.abs().mul(&scale, p, RoundingMode::ToEven);
    let half = BigFloat::from_f64(0.5, p);
    let n = float_floor_to_bigint(&scaled.add(&half, p, RoundingMode::ToEven));
    let digits = n.to_string();
    let negative = x.is_negative() && !n.is_zero();
    let body = if decimals == 0 {
        digits
    } else {
        let padded = format!("{:0>width$}", digits, width = decimals + 1);
        let (int, frac) = padded.split_at(padded.len() - decimals);
        format!("{int}.{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// A closed interval `[lo, hi]` with outward-rounded endpoints.
#[derive(Clone)]
pub struct Interval {
    lo: BigFloat,
    hi: BigFloat,
    prec: usize,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e}, {:e}]",
            float_to_f64(&self.lo, RoundingMode::Down),
            float_to_f64(&self.hi, RoundingMode::Up)
        )
    }
}

impl Interval {
    fn new(lo: BigFloat, hi: BigFloat, prec: usize) -> Self {
        let lo = check(lo, "interval");
        let hi = check(hi, "interval");
        debug_assert!(cmp(&lo, &hi) != Ordering::Greater, "inverted interval");
        Interval { lo, hi, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::new(zero(prec.bits()), zero(prec.bits()), prec.bits())
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        let x = BigFloat::from_i64(v, prec.bits().max(64));
        Self::new(x.clone(), x, prec.bits())
    }

    /// Exact `f64` as a degenerate interval.
    pub fn from_f64(v: f64, prec: Precision) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        let x = BigFloat::from_f64(v, prec.bits().max(64));
        Self::new(x.clone(), x, prec.bits())
    }

    pub fn from_bigint(n: &BigInt, prec: Precision) -> Self {
        let p = prec.bits();
        Self::new(
            bigint_to_float(n, p, RoundingMode::Down),
            bigint_to_float(n, p, RoundingMode::Up),
            p,
        )
    }

    /// Encloses `num / den`; `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: Precision) -> Self {
        Self::from_bigint(num, prec).div(&Self::from_bigint(den, prec))
    }

    /// Encloses a decimal literal such as `"0.36232"` or `"-1.5e-3"` exactly.
    pub fn from_decimal(lit: &str, prec: Precision) -> Self {
        let (mantissa, exp) = match lit.find(['e', 'E']) {
            Some(i) => (&lit[..i], lit[i + 1..].parse::<i32>().expect("decimal exponent")),
            None => (lit, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
        let shift = exp - frac.len() as i32;
        let ten = BigInt::from(10u8);
        if shift >= 0 {
            Self::from_bigint(&(digits * num_traits::pow(ten, shift as usize)), prec)
        } else {
            Self::from_ratio(&digits, &num_traits::pow(ten, (-shift) as usize), prec)
        }
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn precision(&self) -> Precision {
        Precision(self.prec)
    }

    pub fn lo_f64(&self) -> f64 {
        float_to_f64(&self.lo, RoundingMode::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        float_to_f64(&self.hi, RoundingMode::Up)
    }

    /// Midpoint rounded to nearest.
    pub fn mid(&self) -> BigFloat {
        let p = self.prec + 2;
        self.lo
            .add(&self.hi, p, RoundingMode::ToEven)
            .div(&BigFloat::from_u8(2, 64), p, RoundingMode::ToEven)
    }

    pub fn mid_f64(&self) -> f64 {
        float_to_f64(&self.mid(), RoundingMode::ToEven)
    }

    /// Upper bound on the half-width, also covering the rounding of `mid`.
    pub fn radius(&self) -> BigFloat {
        let p = self.prec;
        let m = self.mid();
        let a = self.hi.sub(&m, p, RoundingMode::Up);
        let b = m.sub(&self.lo, p, RoundingMode::Up);
        if cmp(&a, &b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn contains_f64(&self, v: f64) -> bool {
        let x = BigFloat::from_f64(v, 64);
        cmp(&self.lo, &x) != Ordering::Greater && cmp(&x, &self.hi) != Ordering::Greater
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive() && !self.lo.is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lo.is_zero() || self.lo.is_positive()
    }

    /// `true` when every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        cmp(&self.hi, &other.lo) == Ordering::Less
    }

    /// `true` when every point of `self` is at most every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        cmp(&self.hi, &other.lo) != Ordering::Greater
    }

    fn p2(&self, other: &Interval) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let p = self.p2(other);
        Self::new(
            self.lo.add(&other.lo, p, RoundingMode::Down),
            self.hi.add(&other.hi, p, RoundingMode::Up),
            p,
        )
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let p = self.p2(other);
        Self::new(
            self.lo.sub(&other.hi, p, RoundingMode::Down),
            self.hi.sub(&other.lo, p, RoundingMode::Up),
            p,
        )
    }

    pub fn neg(&self) -> Interval {
        Self::new(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn abs(&self) -> Interval {
        if self.is_nonnegative() {
            self.clone()
        } else if !self.hi.is_positive() || self.hi.is_zero() {
            self.neg()
        } else {
            let hi = if cmp(&self.hi, &self.lo.abs()) == Ordering::Less {
                self.lo.abs()
            } else {
                self.hi.clone()
            };
            Self::new(zero(self.prec), hi, self.prec)
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let p = self.p2(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.mul(b, p, RoundingMode::Down))
            .min_by(cmp)
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| a.mul(b, p, RoundingMode::Up))
            .max_by(cmp)
            .unwrap();
        Self::new(lo, hi, p)
    }

    /// Panics if `other` contains zero.
    pub fn div(&self, other: &Interval) -> Interval {
        let p = self.p2(other);
        let straddles = !other.is_positive()
            && !(other.hi.is_negative() && !other.hi.is_zero());
        assert!(!straddles, "division by an interval containing zero");
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div(b, p, RoundingMode::Down))
            .min_by(cmp)
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div(b, p, RoundingMode::Up))
            .max_by(cmp)
            .unwrap();
        Self::new(lo, hi, p)
    }

    pub fn mul_i64(&self, k: i64) -> Interval {
        self.mul(&Interval::from_i64(k, self.precision()))
    }

    pub fn div_i64(&self, k: i64) -> Interval {
        self.div(&Interval::from_i64(k, self.precision()))
    }

    /// Natural logarithm; panics unless the interval is strictly positive.
    pub fn ln(&self) -> Interval {
        assert!(self.is_positive(), "logarithm of a nonpositive interval");
        let p = self.prec;
        let (lo, hi) = with_consts(|cc| {
            (
                self.lo.ln(p, RoundingMode::Down, cc),
                self.hi.ln(p, RoundingMode::Up, cc),
            )
        });
        Self::new(nudge(&check(lo, "ln"), p, false), nudge(&check(hi, "ln"), p, true), p)
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec;
        let (lo, hi) = with_consts(|cc| {
            (
                self.lo.exp(p, RoundingMode::Down, cc),
                self.hi.exp(p, RoundingMode::Up, cc),
            )
        });
        let lo = nudge(&check(lo, "exp"), p, false);
        let lo = if lo.is_negative() { zero(p) } else { lo };
        Self::new(lo, nudge(&check(hi, "exp"), p, true), p)
    }

    /// Square root; panics on a negative lower endpoint.
    pub fn sqrt(&self) -> Interval {
        assert!(self.is_nonnegative(), "square root of a negative interval");
        let p = self.prec;
        Self::new(
            self.lo.sqrt(p, RoundingMode::Down),
            self.hi.sqrt(p, RoundingMode::Up),
            p,
        )
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut result = Interval::from_i64(1, self.precision());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn max(&self, other: &Interval) -> Interval {
        let pick = |a: &BigFloat, b: &BigFloat| {
            if cmp(a, b) == Ordering::Less {
                b.clone()
            } else {
                a.clone()
            }
        };
        Self::new(pick(&self.lo, &other.lo), pick(&self.hi, &other.hi), self.p2(other))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if cmp(&self.lo, &other.lo) == Ordering::Less { &self.lo } else { &other.lo };
        let hi = if cmp(&self.hi, &other.hi) == Ordering::Less { &other.hi } else { &self.hi };
        Self::new(lo.clone(), hi.clone(), self.p2(other))
    }

    /// Replaces the lower endpoint by `lo` (which must not exceed `hi`).
    pub fn with_lo(&self, lo: &Interval) -> Interval {
        Self::new(lo.lo.clone(), self.hi.clone(), self.prec)
    }

    /// Nonnegative interval `[0, hi]`.
    pub fn from_zero_to(hi: &Interval) -> Interval {
        Self::new(zero(hi.prec), hi.hi.clone(), hi.prec)
    }

    /// Widens by `r` on both sides.
    pub fn widen(&self, r: &BigFloat) -> Interval {
        let p = self.prec;
        Self::new(
            self.lo.sub(r, p, RoundingMode::Down),
            self.hi.add(r, p, RoundingMode::Up),
            p,
        )
    }
}

/// Encloses Euler's constant.
pub fn euler_gamma(prec: Precision) -> Interval {
    Interval::from_decimal("0.5772156649015328606065120900824024310421", prec)
        .hull(&Interval::from_decimal("0.5772156649015328606065120900824024310422", prec))
}

/// Encloses pi.
pub fn pi(prec: Precision) -> Interval {
    let p = prec.bits();
    let (lo, hi) = with_consts(|cc| (cc.pi(p, RoundingMode::Down), cc.pi(p, RoundingMode::Up)));
    Interval::new(nudge(&lo, p, false), nudge(&hi, p, true), p)
}

/// Natural logarithm of a positive integer, enclosed.
pub fn ln_int(n: &BigInt, prec: Precision) -> Interval {
    Interval::from_bigint(n, prec).ln()
}

/// `floor(sqrt(n))` for nonnegative `n`.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative");
    n.sqrt()
}
