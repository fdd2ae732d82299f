//! Resultants, discriminants and the scaled discriminant `|c|^((d-1)(d-2)) |D_f|`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Sylvester matrix of `f` (degree `n`) and `g` (degree `m`).
///
/// The first `m` columns hold the coefficients of `f`, leading coefficient
/// on top, each column shifted down one row from the previous; the last `n`
/// columns hold those of `g` in the same way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylvesterMatrix {
    pub deg_f: usize,
    pub deg_g: usize,
    pub entries: Vec<Vec<BigInt>>,
}

impl SylvesterMatrix {
    pub fn size(&self) -> usize {
        self.deg_f + self.deg_g
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.entries)
    }
}

fn positive_degree(p: &IntPoly) -> Result<usize> {
    match p.degree() {
        Some(d) if d >= 1 => Ok(d),
        _ => Err(Error::PositiveDegreeRequired),
    }
}

pub fn sylvester(f: &IntPoly, g: &IntPoly) -> Result<SylvesterMatrix> {
    let n = positive_degree(f)?;
    let m = positive_degree(g)?;
    Ok(build_sylvester(f, n, g, m))
}

fn build_sylvester(f: &IntPoly, n: usize, g: &IntPoly, m: usize) -> SylvesterMatrix {
    let size = n + m;
    let mut entries = vec![vec![BigInt::zero(); size]; size];
    for col in 0..m {
        for k in 0..=n {
            entries[col + k][col] = f.coeff(n - k);
        }
    }
    for col in 0..n {
        for k in 0..=m {
            entries[col + k][m + col] = g.coeff(m - k);
        }
    }
    SylvesterMatrix { deg_f: n, deg_g: m, entries }
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = matrix.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Resultant of `f` and `g`.
///
/// For positive degrees this is the Sylvester determinant. A nonzero
/// constant argument `b` is accepted with `R(f, b) = b^deg f` and
/// `R(b, g) = b^deg g`; two constants are rejected.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial { op: "resultant" });
    }
    let n = f.degree().unwrap();
    let m = g.degree().unwrap();
    match (n, m) {
        (0, 0) => Err(Error::PositiveDegreeRequired),
        (_, 0) => Ok(Pow::pow(&g.coeff(0), n as u32)),
        (0, _) => Ok(Pow::pow(&f.coeff(0), m as u32)),
        _ => Ok(build_sylvester(f, n, g, m).determinant()),
    }
}

/// `(-1)^(n(n-1)/2) / a_n * R(f, f')`; equal to 1 for linear `f`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::ConstantPolynomial { op: "discriminant" }),
    };
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant(f, &f.derivative())?;
    let lead = f.leading_coefficient().unwrap();
    let (q, rem) = r.div_rem(lead);
    assert!(rem.is_zero(), "R(f, f') not divisible by the leading coefficient");
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
}

/// `|c|^((d-1)(d-2)) |D_f|`, the absolute discriminant of the monicized polynomial.
pub fn d_bold(f: &IntPoly) -> Result<BigInt> {
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return Err(Error::RepeatedFactor);
    }
    let d = f.degree().unwrap();
    let c = f.leading_coefficient().unwrap().abs();
    let exp = ((d - 1) * d.saturating_sub(2)) as u32;
    Ok(Pow::pow(&c, exp) * disc.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Leibniz expansion over all permutations.
    fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
        fn rec(m: &[Vec<BigInt>], row: usize, used: &mut Vec<bool>, sign: i32) -> BigInt {
            let n = m.len();
            if row == n {
                return BigInt::from(sign);
            }
            let mut total = BigInt::zero();
            let mut inversions_before = 0;
            for col in 0..n {
                if used[col] {
                    inversions_before += 1;
                    continue;
                }
                if m[row][col].is_zero() {
                    continue;
                }
                // number of unused columns left of `col` determines the sign flip
                let left_unused = col - inversions_before;
                let s = if left_unused % 2 == 0 { sign } else { -sign };
                used[col] = true;
                total += &m[row][col] * rec(m, row + 1, used, s);
                used[col] = false;
            }
            total
        }
        rec(m, 0, &mut vec![false; m.len()], 1)
    }

    #[test]
    fn sylvester_layout() {
        let s = sylvester(&p("x-2"), &p("x-5")).unwrap();
        assert_eq!(s.entries, vec![vec![big(1), big(1)], vec![big(-2), big(-5)]]);
        let s = sylvester(&p("x^2+1"), &p("x^2-2")).unwrap();
        let expect: Vec<Vec<BigInt>> = [
            [1, 0, 1, 0],
            [0, 1, 0, 1],
            [1, 0, -2, 0],
            [0, 1, 0, -2],
        ]
        .iter()
        .map(|r| r.iter().map(|&v| big(v)).collect())
        .collect();
        assert_eq!(s.entries, expect);
        assert_eq!(sylvester(&p("x^3+x+1"), &p("x^2+3")).unwrap().size(), 5);
        assert_eq!(sylvester(&p("3"), &p("x")), Err(Error::PositiveDegreeRequired));
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p("x-2"), &p("x-5")).unwrap(), big(-3));
        // 4x4 Sylvester determinant through the permutation oracle
        let oracle = leibniz(&sylvester(&p("x^2+1"), &p("x^2-2")).unwrap().entries);
        assert_eq!(oracle, big(9));
        assert_eq!(resultant(&p("x^2+1"), &p("x^2-2")).unwrap(), big(9));
        assert_eq!(resultant(&p("x^2-1"), &p("x-1")).unwrap(), big(0));
    }

    #[test]
    fn constant_argument_convention() {
        assert_eq!(resultant(&p("x^3+2"), &p("5")).unwrap(), big(125));
        assert_eq!(resultant(&p("-2"), &p("x^2+x+1")).unwrap(), big(4));
        assert_eq!(resultant(&p("2"), &p("3")), Err(Error::PositiveDegreeRequired));
        assert!(resultant(&IntPoly::zero(), &p("x")).is_err());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p("x^2+1")).unwrap(), big(-4));
        // sign (-1)^6 = +1 and a_n = 1: D = R(f, f') from the permutation oracle
        let f = p("x^4+1");
        let oracle = leibniz(&sylvester(&f, &f.derivative()).unwrap().entries);
        assert_eq!(oracle, big(256));
        assert_eq!(discriminant(&f).unwrap(), big(256));
        // roots ±1, ±2: product of squared differences
        let roots = [1i64, -1, 2, -2];
        let mut prod = 1i64;
        for i in 0..4 {
            for j in i + 1..4 {
                prod *= (roots[i] - roots[j]).pow(2);
            }
        }
        assert_eq!(prod, 5184);
        assert_eq!(discriminant(&p("x^4-5x^2+4")).unwrap(), big(prod));
        assert_eq!(discriminant(&p("3x+7")).unwrap(), big(1));
        assert!(discriminant(&p("4")).is_err());
    }

    #[test]
    fn d_bold_examples() {
        assert_eq!(d_bold(&p("x^4+1")).unwrap(), big(256));
        assert_eq!(d_bold(&p("x-7")).unwrap(), big(1));
        // D = 0^2 - 4*2*1 = -8, exponent (d-1)(d-2) = 0 for d = 2
        assert_eq!(d_bold(&p("2x^2+1")).unwrap(), big(8));
        // d = 3: exponent 2, D(2x^3+1) = -27 * 4 * 1 = -108
        assert_eq!(discriminant(&p("2x^3+1")).unwrap(), big(-108));
        assert_eq!(d_bold(&p("2x^3+1")).unwrap(), big(4 * 108));
        assert_eq!(d_bold(&p("x^2-2x+1")), Err(Error::RepeatedFactor));
    }

    #[test]
    fn corpus_discriminants_nonzero() {
        for f in corpus::irreducible_corpus() {
            assert!(!discriminant(&f).unwrap().is_zero(), "{f}");
        }
    }

    #[test]
    fn divisor_discriminant_divides() {
        let c = corpus::irreducible_corpus();
        for i in 0..c.len() {
            for j in 0..c.len() {
                if i == j {
                    continue;
                }
                let f = &c[i] * &c[j];
                let df = discriminant(&f).unwrap();
                let dg = discriminant(&c[i]).unwrap();
                assert!((&df % &dg).is_zero(), "{} | {}", c[i], f);
                assert!(dg.abs() <= df.abs());
            }
        }
    }

    fn arb_poly(min_deg: usize, max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
        (min_deg..=max_deg).prop_flat_map(move |d| {
            (prop::collection::vec(-bound..=bound, d), (1..=bound).prop_flat_map(|l| prop_oneof![Just(l), Just(-l)]))
                .prop_map(|(mut v, lead)| {
                    v.push(lead);
                    IntPoly::from_i64s(&v)
                })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(f in arb_poly(1, 3, 20), g in arb_poly(1, 3, 20)) {
            let s = sylvester(&f, &g).unwrap();
            prop_assert_eq!(s.determinant(), leibniz(&s.entries));
        }

        #[test]
        fn multiplicative(f in arb_poly(1, 4, 20), g in arb_poly(1, 4, 20), h in arb_poly(1, 4, 20)) {
            let lhs = resultant(&(&f * &g), &h).unwrap();
            prop_assert_eq!(lhs, resultant(&f, &h).unwrap() * resultant(&g, &h).unwrap());
        }

        #[test]
        fn variable_scaling(f in arb_poly(1, 4, 20), g in arb_poly(1, 4, 20), c in prop_oneof![-5i64..=-1, 1i64..=5]) {
            let c = big(c);
            let (n, m) = (f.degree().unwrap(), g.degree().unwrap());
            let lhs = resultant(&f.scale_variable(&c), &g.scale_variable(&c)).unwrap();
            prop_assert_eq!(lhs, Pow::pow(&c, (n * m) as u32) * resultant(&f, &g).unwrap());
        }

        #[test]
        fn homogeneity(f in arb_poly(1, 4, 20), g in arb_poly(1, 4, 20), a in 1i64..6, b in -6i64..=-1) {
            let (n, m) = (f.degree().unwrap(), g.degree().unwrap());
            let lhs = resultant(&f.scale(&big(a)), &g.scale(&big(b))).unwrap();
            let rhs = Pow::pow(&big(a), m as u32) * Pow::pow(&big(b), n as u32) * resultant(&f, &g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn discriminant_of_product(g in arb_poly(1, 4, 15), h in arb_poly(1, 4, 15)) {
            let r = resultant(&g, &h).unwrap();
            prop_assume!(!r.is_zero());
            let lhs = discriminant(&(&g * &h)).unwrap();
            prop_assert_eq!(lhs, discriminant(&g).unwrap() * discriminant(&h).unwrap() * &r * &r);
        }

        #[test]
        fn discriminant_scaling(f in arb_poly(1, 5, 20), a in prop_oneof![-4i64..=-1, 1i64..=4]) {
            let n = f.degree().unwrap();
            let lhs = discriminant(&f.scale_variable(&big(a))).unwrap();
            prop_assert_eq!(lhs, Pow::pow(&big(a), (n * (n - 1)) as u32) * discriminant(&f).unwrap());
        }

        #[test]
        fn monicized_discriminant(g in arb_poly(1, 6, 30)) {
            let dg = discriminant(&g).unwrap();
            prop_assume!(!dg.is_zero());
            let dh = discriminant(&g.monicize().unwrap()).unwrap();
            prop_assert_eq!(dh.abs(), d_bold(&g).unwrap());
        }
    }
}
