use std::fmt;

use astro_float::RoundingMode;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::real::{float_to_f64, format_fixed, Interval, Precision};

/// Largest `log_mag` whose exponential still fits in an `f64`.
pub const F64_LOG_LIMIT: f64 = 709.782_712_893_384;

/// Plain decimal rendering is used inside `[1e-6, 1e15]`, `exp(L)` outside.
const PLAIN_MIN: f64 = 1e-6;
const PLAIN_MAX: f64 = 1e15;

/// A real number stored as a sign and an enclosure of `ln |value|`.
#[derive(Clone, Debug)]
pub struct LogReal {
    sign: i8,
    log_mag: Option<Interval>,
    prec: Precision,
}

impl LogReal {
    pub fn zero(prec: Precision) -> Self {
        LogReal { sign: 0, log_mag: None, prec }
    }

    /// `e^l`.
    pub fn from_log(l: Interval) -> Self {
        let prec = l.precision();
        LogReal { sign: 1, log_mag: Some(l), prec }
    }

    /// Panics if `x` contains zero without being exactly zero.
    pub fn from_interval(x: &Interval) -> Self {
        let prec = x.precision();
        if x.lo().is_zero() && x.hi().is_zero() {
            return Self::zero(prec);
        }
        if x.is_positive() {
            return LogReal { sign: 1, log_mag: Some(x.ln()), prec };
        }
        let neg = x.neg();
        assert!(neg.is_positive(), "sign of {x:?} is not determined");
        LogReal { sign: -1, log_mag: Some(neg.ln()), prec }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn log_mag(&self) -> Option<&Interval> {
        self.log_mag.as_ref()
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn neg(&self) -> LogReal {
        LogReal { sign: -self.sign, ..self.clone() }
    }

    pub fn mul(&self, other: &LogReal) -> LogReal {
        match (&self.log_mag, &other.log_mag) {
            (Some(a), Some(b)) => LogReal { sign: self.sign * other.sign, log_mag: Some(a.add(b)), prec: self.prec },
            _ => LogReal::zero(self.prec),
        }
    }

    /// Panics on division by zero.
    pub fn div(&self, other: &LogReal) -> LogReal {
        let b = other.log_mag.as_ref().expect("division by zero LogReal");
        match &self.log_mag {
            Some(a) => LogReal { sign: self.sign * other.sign, log_mag: Some(a.sub(b)), prec: self.prec },
            None => LogReal::zero(self.prec),
        }
    }

    pub fn mul_interval(&self, x: &Interval) -> LogReal {
        self.mul(&LogReal::from_interval(x))
    }

    pub fn div_interval(&self, x: &Interval) -> LogReal {
        self.div(&LogReal::from_interval(x))
    }

    pub fn add(&self, other: &LogReal) -> LogReal {
        let (a, b) = match (&self.log_mag, &other.log_mag) {
            (None, _) => return other.clone(),
            (_, None) => return self.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        if self.sign == other.sign {
            // log(e^a + e^b) = m + log(e^(a-m) + e^(b-m))
            let m = a.max(b);
            let s = a.sub(&m).exp().add(&b.sub(&m).exp());
            return LogReal { sign: self.sign, log_mag: Some(m.add(&s.ln())), prec: self.prec };
        }
        let (big, small, sign) = if b.certainly_lt(a) {
            (a, b, self.sign)
        } else if a.certainly_lt(b) {
            (b, a, other.sign)
        } else {
            return LogReal::from_interval(&self.to_interval().add(&other.to_interval()));
        };
        let one = Interval::from_i64(1, self.prec);
        let rest = one.sub(&small.sub(big).exp());
        LogReal { sign, log_mag: Some(big.add(&rest.ln())), prec: self.prec }
    }

    /// The value as an ordinary interval (exponent range permitting).
    pub fn to_interval(&self) -> Interval {
        match &self.log_mag {
            None => Interval::zero(self.prec),
            Some(l) => {
                let m = l.exp();
                if self.sign < 0 {
                    m.neg()
                } else {
                    m
                }
            }
        }
    }

    /// Upper end of the value as an `f64`, or an overflow error.
    pub fn upper_f64(&self) -> Result<f64> {
        let Some(l) = &self.log_mag else { return Ok(0.0) };
        let bound = if self.sign > 0 { l.hi_f64() } else { l.lo_f64() };
        if bound > F64_LOG_LIMIT {
            return Err(Error::Overflow(format!("{bound:.6e}")));
        }
        Ok(self.to_interval().hi_f64())
    }

    /// Lower end of the value as an `f64`, or an overflow error.
    pub fn lower_f64(&self) -> Result<f64> {
        self.neg().upper_f64().map(|v| -v)
    }

    /// True when the whole enclosure lies strictly below `v`.
    pub fn certainly_below(&self, v: f64) -> bool {
        let ln_abs = || Interval::from_f64(v.abs(), self.prec).ln();
        match &self.log_mag {
            None => v > 0.0,
            Some(_) if self.sign < 0 && v >= 0.0 => true,
            Some(l) if self.sign < 0 => ln_abs().certainly_lt(l),
            Some(_) if v <= 0.0 => false,
            Some(l) => l.certainly_lt(&ln_abs()),
        }
    }

    /// Upper end of the value, rendered plainly (six significant digits)
    /// inside `[1e-6, 1e15]` and as `exp(L)` with `L` to six significant
    /// digits outside.
    pub fn render(&self) -> String {
        let Some(l) = &self.log_mag else { return "0".into() };
        let edge = if self.sign > 0 { l.hi_f64() } else { l.lo_f64() };
        if edge > PLAIN_MAX.ln() || edge < PLAIN_MIN.ln() {
            let prefix = if self.sign < 0 { "-" } else { "" };
            return format!("{prefix}exp({edge:.5e})");
        }
        let upper = self.to_interval().hi().clone();
        let mag = float_to_f64(&upper, RoundingMode::Up).abs();
        let decimals = (5 - mag.log10().floor() as i32).max(0) as usize;
        format_fixed(&upper, decimals)
    }

    /// `{"sign", "log_mag", "value"}` with numerics as strings; `value` is
    /// null when the magnitude overflows an `f64`.
    pub fn to_json(&self) -> Value {
        match &self.log_mag {
            None => json!({"sign": "0", "log_mag": Value::Null, "value": "0"}),
            Some(l) => {
                let value = match self.upper_f64() {
                    Ok(hi) => Value::String(format!("{hi:e}")),
                    Err(_) => Value::Null,
                };
                json!({
                    "sign": self.sign.to_string(),
                    "log_mag": format_fixed(l.hi(), 12),
                    "value": value,
                })
            }
        }
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
