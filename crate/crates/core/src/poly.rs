//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, coefficient of `x^i` at index `i`.
///
/// The highest stored coefficient is always nonzero; the zero polynomial
/// stores no coefficients and has no degree.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `x - a`.
    pub fn linear_root(a: impl Into<BigInt>) -> Self {
        Self::new(vec![-a.into(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Positive gcd of the coefficients.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ContentOfZero);
        }
        Ok(self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c)))
    }

    /// `self / content(self)`, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Result<IntPoly> {
        let g = self.content()?;
        Ok(IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect()))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `self(c * x)`.
    pub fn scale_variable(&self, c: &BigInt) -> IntPoly {
        let mut power = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &power);
            power *= c;
        }
        IntPoly::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Monic `h` of the same degree with `h(c x) = c^(d-1) g(x)`, where `c`
    /// is the leading coefficient and `d` the degree of `self`.
    pub fn monicize(&self) -> Result<IntPoly> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ConstantPolynomial { op: "monicize" }),
        };
        let c = self.leading_coefficient().unwrap();
        let mut out = vec![BigInt::zero(); d + 1];
        out[d] = BigInt::one();
        for (i, a) in self.coeffs.iter().enumerate().take(d) {
            out[i] = a * Pow::pow(c, (d - 1 - i) as u32);
        }
        Ok(IntPoly::new(out))
    }

    /// Exact division by a nonzero polynomial, if it divides evenly in Z[x].
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.degree().unwrap();
        if n < dd {
            return None;
        }
        let lead = divisor.leading_coefficient().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * b;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    /// JSON array of decimal coefficient strings, ascending powers.
    pub fn to_coeffs_json(&self) -> String {
        let strs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        serde_json::to_string(&strs).expect("serialize coefficients")
    }
}

/// Parses `[a_0, a_1, ..., a_d]`, elements given as decimal strings or JSON integers.
pub fn parse_coeffs_json(text: &str) -> Result<IntPoly> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Coefficients(e.to_string()))?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::Coefficients("expected a JSON array".into()))?;
    let coeffs = items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let s = match v {
                serde_json::Value::String(s) => s.trim().to_string(),
                serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                _ => return Err(Error::Coefficients(format!("element {i} is not an integer"))),
            };
            s.parse::<BigInt>()
                .map_err(|_| Error::Coefficients(format!("element {i} is not an integer: {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly::new(coeffs))
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

    fn sign(&mut self) -> Option<bool> {
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.bump();
                Some(false)
            }
            Some('-') | Some('\u{2212}') => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    /// One term without its sign: `(coefficient, exponent)`.
    fn term(&mut self) -> Result<(BigInt, usize)> {
        self.skip_ws();
        let digits = self.digits();
        let coeff = if digits.is_empty() {
            None
        } else {
            Some(digits.parse::<BigInt>().expect("ascii digits"))
        };
        self.skip_ws();
        let mut has_star = false;
        if self.peek() == Some('*') {
            if coeff.is_none() {
                return self.fail("'*' without a coefficient");
            }
            self.bump();
            has_star = true;
            self.skip_ws();
        }
        if self.peek() == Some('x') {
            self.bump();
            self.skip_ws();
            let exponent = if self.peek() == Some('^') {
                self.bump();
                self.skip_ws();
                let e = self.digits();
                if e.is_empty() {
                    return self.fail("expected exponent after '^'");
                }
                e.parse::<usize>()
                    .or_else(|_| self.fail("exponent too large"))?
            } else {
                1
            };
            Ok((coeff.unwrap_or_else(BigInt::one), exponent))
        } else if has_star {
            self.fail("expected 'x' after '*'")
        } else if let Some(c) = coeff {
            Ok((c, 0))
        } else {
            match self.peek() {
                Some(ch) => self.fail(format!("unexpected character {ch:?}")),
                None => self.fail("expected a term"),
            }
        }
    }
}

/// Parses expressions like `x^4 - 5x^2 + 4` or `3*x - 6`. Like terms are combined.
pub fn parse_poly(text: &str) -> Result<IntPoly> {
    let mut parser = Parser { text, pos: 0 };
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut negative = parser.sign().unwrap_or(false);
    loop {
        let (c, e) = parser.term()?;
        if coeffs.len() <= e {
            coeffs.resize(e + 1, BigInt::zero());
        }
        if negative {
            coeffs[e] -= c;
        } else {
            coeffs[e] += c;
        }
        parser.skip_ws();
        if parser.peek().is_none() {
            break;
        }
        match parser.sign() {
            Some(neg) => negative = neg,
            None => {
                let ch = parser.peek().unwrap();
                return parser.fail(format!("unexpected character {ch:?}"));
            }
        }
    }
    Ok(IntPoly::new(coeffs))
}

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl fmt::Display for IntPoly {
    /// Descending terms with explicit `^`, e.g. `x^4 - 5*x^2 + 4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "x^{e}")?,
                (_, false) => write!(f, "{mag}*x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

/// Product of all polynomials in `factors` (1 for an empty list).
pub fn product<'a>(factors: impl IntoIterator<Item = &'a IntPoly>) -> IntPoly {
    factors
        .into_iter()
        .fold(IntPoly::constant(1), |acc, f| &acc * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(p("x^4+1").degree(), Some(4));
        assert_eq!(p("7").degree(), Some(0));
        assert_eq!(p("0").degree(), None);
    }

    #[test]
    fn content_examples() {
        assert_eq!(p("3x-6").content().unwrap(), BigInt::from(3));
        assert_eq!(p("x^4-5x^2+4").content().unwrap(), BigInt::from(1));
        assert_eq!(p("6x^2+10x+4").content().unwrap(), BigInt::from(2));
        assert_eq!(p("-4x-6").content().unwrap(), BigInt::from(2));
        assert_eq!(IntPoly::zero().content(), Err(Error::ContentOfZero));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^4+1").derivative(), p("4x^3"));
        assert_eq!(p("5").derivative(), IntPoly::zero());
        assert_eq!(p("x^2-2").derivative(), p("2x"));
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(&p("x-1") * &p("x+1"), p("x^2-1"));
        assert_eq!(&p("x^2-2") * &p("x^2+2"), p("x^4-4"));
        assert_eq!(&p("3x^5-x+2") * &IntPoly::zero(), IntPoly::zero());
    }

    #[test]
    fn monicize_examples() {
        assert_eq!(p("3x^2+x+2").monicize().unwrap(), p("x^2+x+6"));
        assert_eq!(p("x^4+1").monicize().unwrap(), p("x^4+1"));
        assert_eq!(p("2x-6").monicize().unwrap(), p("x-6"));
        assert_eq!(p("-2x^2+3").monicize().unwrap(), p("x^2-6"));
        assert!(matches!(p("5").monicize(), Err(Error::ConstantPolynomial { .. })));
        assert!(IntPoly::zero().monicize().is_err());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("x^4 - 5x^2 + 4").coeffs(), IntPoly::from_i64s(&[4, 0, -5, 0, 1]).coeffs());
        assert!(p("0").is_zero());
        assert_eq!(p("3x - 6"), IntPoly::from_i64s(&[-6, 3]));
        assert_eq!(p("  -x^2 +3*x^2 - 7 x + x"), IntPoly::from_i64s(&[0, -6, 2]));
        assert_eq!(p("x \u{2212} 1"), IntPoly::from_i64s(&[-1, 1]));
        let big = p("123456789012345678901234567890x^2 + 1");
        assert_eq!(big.coeff(2).to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn parse_errors_report_offsets() {
        let cases = [("x^", 2), ("3x +", 4), ("2 3", 2), ("x ** 2", 2), ("", 0), ("y+1", 0), ("4*", 2)];
        for (text, offset) in cases {
            match parse_poly(text) {
                Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset, "{text:?}"),
                other => panic!("{text:?} -> {other:?}"),
            }
        }
    }

    #[test]
    fn json_coefficients() {
        let f = parse_coeffs_json(r#"["4", "0", "-5", 0, 1]"#).unwrap();
        assert_eq!(f, p("x^4-5x^2+4"));
        assert_eq!(parse_coeffs_json(&f.to_coeffs_json()).unwrap(), f);
        assert!(parse_coeffs_json(r#"["1.5"]"#).is_err());
        assert!(parse_coeffs_json("{}").is_err());
    }

    #[test]
    fn display_format() {
        assert_eq!(p("x^4-5x^2+4").to_string(), "x^4 - 5*x^2 + 4");
        assert_eq!(p("-x+3").to_string(), "-x^1 + 3");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let f = &p("x^2-2") * &p("3x+1");
        assert_eq!(f.div_exact(&p("3x+1")), Some(p("x^2-2")));
        assert_eq!(f.div_exact(&p("x-5")), None);
        assert_eq!(p("2x+1").div_exact(&p("2")), None);
    }

    fn arb_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-bound..=bound, 0..=max_deg + 1).prop_map(|v| IntPoly::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn monicize_identity(g in arb_poly(8, 100)) {
            prop_assume!(g.degree().unwrap_or(0) >= 1);
            let h = g.monicize().unwrap();
            let c = g.leading_coefficient().unwrap().clone();
            let d = g.degree().unwrap();
            prop_assert!(h.is_monic());
            prop_assert_eq!(h.degree(), Some(d));
            let lhs = h.scale_variable(&c);
            let rhs = g.scale(&Pow::pow(&c, (d - 1) as u32));
            prop_assert!((&lhs - &rhs).is_zero());
        }

        #[test]
        fn primitive_part_has_unit_content(g in arb_poly(8, 1000), k in 1i64..50) {
            prop_assume!(!g.is_zero());
            let scaled = g.scale(&BigInt::from(k));
            prop_assert_eq!(scaled.primitive_part().unwrap().content().unwrap(), BigInt::one());
        }

        #[test]
        fn format_parse_round_trip(g in arb_poly(10, 1_000_000)) {
            prop_assert_eq!(parse_poly(&g.to_string()).unwrap(), g);
        }

        #[test]
        fn multiply_commutes_and_associates(a in arb_poly(5, 30), b in arb_poly(5, 30), c in arb_poly(5, 30)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
            }
        }
    }
}
