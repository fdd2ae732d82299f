//! Polynomials over `Z/pZ` for word-sized primes `p`: root counts and splitting patterns.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= p - b {
        a - (p - b)
    } else {
        a + b
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for q in SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Polynomial over `Z/pZ`, coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    /// Residues are reduced into `[0, p)`; trailing zeros are dropped.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        let mut out = ModPoly { p, coeffs };
        out.trim();
        out
    }

    fn from_raw(p: u64, coeffs: Vec<u64>) -> Self {
        let mut out = ModPoly { p, coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn one(p: u64) -> Self {
        ModPoly::from_raw(p, vec![1 % p])
    }

    fn x(p: u64) -> Self {
        ModPoly::from_raw(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn eval(&self, a: u64) -> u64 {
        let a = a % self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, a, self.p), c, self.p))
    }

    pub fn make_monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        ModPoly::from_raw(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        ModPoly::from_raw(p, coeffs)
    }

    fn sub(&self, other: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                sub_mod(a, b, self.p)
            })
            .collect();
        ModPoly::from_raw(self.p, coeffs)
    }

    fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::from_raw(self.p, Vec::new());
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        ModPoly::from_raw(p, out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    fn div_rem(&self, divisor: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = inv_mod(divisor.lead(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (ModPoly::from_raw(p, Vec::new()), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = mul_mod(rem[k], inv, p);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = sub_mod(rem[idx], mul_mod(c, b, p), p);
            }
        }
        rem.truncate(dd);
        (ModPoly::from_raw(p, quot), ModPoly::from_raw(p, rem))
    }

    fn rem(&self, divisor: &ModPoly) -> ModPoly {
        self.div_rem(divisor).1
    }

    fn div_exact(&self, divisor: &ModPoly) -> ModPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// `self^e mod modulus` by square-and-multiply.
    fn pow_rem(&self, mut e: u64, modulus: &ModPoly) -> ModPoly {
        let mut base = self.rem(modulus);
        let mut acc = ModPoly::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Inverse of the Frobenius for a polynomial whose derivative vanishes.
    fn pth_root(&self) -> ModPoly {
        let step = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(step).copied().collect();
        ModPoly::from_raw(self.p, coeffs)
    }
}

/// Coefficientwise reduction of `f` into `[0, p)`.
pub fn reduce(f: &IntPoly, p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits in u64"))
        .collect();
    ModPoly::new(p, coeffs)
}

/// Number of residues `a` in `[0, p)` with `f(a) = 0 mod p`.
///
/// Returns `p` when `f` vanishes identically mod `p`; otherwise the degree of
/// `gcd(f mod p, x^p - x)`.
pub fn omega(f: &IntPoly, p: u64) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial { op: "omega" });
    }
    let fbar = reduce(f, p);
    Ok(omega_mod(&fbar))
}

pub(crate) fn omega_mod(fbar: &ModPoly) -> u64 {
    let p = fbar.p;
    match fbar.degree() {
        None => p,
        Some(0) => 0,
        Some(_) => {
            let m = fbar.make_monic();
            let xp = ModPoly::x(p).pow_rem(p, &m);
            let g = m.gcd(&xp.sub(&ModPoly::x(p)));
            g.degree().unwrap_or(0) as u64
        }
    }
}

/// Exhaustive-evaluation version of [`omega`].
pub fn omega_naive(f: &IntPoly, p: u64) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial { op: "omega" });
    }
    let fbar = reduce(f, p);
    Ok((0..p).filter(|&a| fbar.eval(a) == 0).count() as u64)
}

/// Degrees and multiplicities of the irreducible factors of a monic polynomial mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingPattern {
    /// `(degree, multiplicity)` pairs, sorted ascending.
    pub parts: Vec<(usize, usize)>,
}

impl SplittingPattern {
    pub fn total_degree(&self) -> usize {
        self.parts.iter().map(|&(f, e)| f * e).sum()
    }

    pub fn linear_count(&self) -> usize {
        self.parts.iter().filter(|&&(f, _)| f == 1).count()
    }

    pub fn is_squarefree(&self) -> bool {
        self.parts.iter().all(|&(_, e)| e == 1)
    }
}

/// `f = prod g_i^{e_i}` with each `g_i` squarefree, monic, pairwise coprime.
fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let fp = f.derivative();
    if fp.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fp);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while w.degree() != Some(0) {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.make_monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if c.degree().unwrap_or(0) > 0 {
        for (g, m) in squarefree_decomposition(&c.pth_root().make_monic()) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// `(degree, count)` pairs.
fn distinct_degree(g: &ModPoly) -> Vec<(usize, usize)> {
    let p = g.p;
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut h = ModPoly::x(p);
    let mut l = 1;
    while let Some(d) = rest.degree() {
        if d < 2 * l {
            if d > 0 {
                out.push((d, 1));
            }
            break;
        }
        h = h.pow_rem(p, &rest);
        let common = rest.gcd(&h.sub(&ModPoly::x(p)));
        let cd = common.degree().unwrap_or(0);
        if cd > 0 {
            out.push((l, cd / l));
            rest = rest.div_exact(&common);
            h = h.rem(&rest);
        }
        l += 1;
    }
    out
}

/// Factor-degree pattern of `h mod p` for monic `h`.
pub fn splitting_pattern(h: &IntPoly, p: u64) -> Result<SplittingPattern> {
    if !h.is_monic() {
        return Err(Error::NonMonic { op: "splitting_pattern" });
    }
    let hbar = reduce(h, p);
    let mut parts = Vec::new();
    if hbar.degree().unwrap_or(0) > 0 {
        for (g, e) in squarefree_decomposition(&hbar) {
            for (deg, count) in distinct_degree(&g) {
                parts.extend(std::iter::repeat_n((deg, e), count));
            }
        }
    }
    parts.sort_unstable();
    Ok(SplittingPattern { parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::elimination::discriminant;
    use crate::poly::{parse_poly, product};
    use num_traits::Signed;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    fn primes_upto(n: u64) -> Vec<u64> {
        (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
    }

    /// Factor degrees by trial division with every monic polynomial of degree <= deg/2.
    fn brute_pattern(h: &IntPoly, q: u64) -> Vec<(usize, usize)> {
        fn monics(q: u64, deg: usize) -> Vec<ModPoly> {
            let total = q.pow(deg as u32);
            (0..total)
                .map(|mut k| {
                    let mut c = Vec::with_capacity(deg + 1);
                    for _ in 0..deg {
                        c.push(k % q);
                        k /= q;
                    }
                    c.push(1);
                    ModPoly::new(q, c)
                })
                .collect()
        }
        let mut rest = reduce(h, q).make_monic();
        let mut out = Vec::new();
        let mut deg = 1;
        while rest.degree().unwrap() >= 2 * deg {
            for m in monics(q, deg) {
                let mut e = 0;
                loop {
                    let (quot, r) = rest.div_rem(&m);
                    if !r.is_zero() {
                        break;
                    }
                    rest = quot;
                    e += 1;
                }
                if e > 0 {
                    out.push((deg, e));
                }
            }
            deg += 1;
        }
        if rest.degree().unwrap() > 0 {
            out.push((rest.degree().unwrap(), 1));
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&p("3x-6"), 3).is_zero());
        assert_eq!(reduce(&p("x^2+1"), 5).coeffs(), &[1, 0, 1]);
        assert_eq!(reduce(&p("7x^2+10x+3"), 5).coeffs(), &[3, 0, 2]);
        assert_eq!(reduce(&p("-1"), 7).coeffs(), &[6]);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&p("3x-6"), 3).unwrap(), 3);
        assert_eq!(omega(&p("x^2+1"), 5).unwrap(), 2);
        assert_eq!(omega(&p("x^2+1"), 3).unwrap(), 0);
        assert_eq!(omega(&p("6"), 5).unwrap(), 0);
        assert_eq!(omega_naive(&p("x^2+1"), 2).unwrap(), 1);
        assert_eq!(omega_naive(&p("x^4-5x^2+4"), 7).unwrap(), 4);
        assert_eq!(omega_naive(&p("x"), 2).unwrap(), 1);
        assert!(omega(&IntPoly::zero(), 5).is_err());
        assert!(omega_naive(&IntPoly::zero(), 5).is_err());
    }

    #[test]
    fn omega_large_prime() {
        // x^2 + 1 splits exactly when p = 1 mod 4
        assert_eq!(omega(&p("x^2+1"), 1_000_000_007).unwrap(), 0);
        assert_eq!(omega(&p("x^2+1"), 998_244_353).unwrap(), 2);
        assert_eq!(omega(&p("x^2+1"), 18_446_744_073_709_551_557).unwrap(), 2);
    }

    #[test]
    fn miller_rabin() {
        let small = primes_upto(2000);
        for n in 0..2000u64 {
            assert_eq!(is_prime_u64(n), small.contains(&n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn omega_matches_naive_on_random_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let primes = primes_upto(1000);
        for _ in 0..100 {
            let deg = rng.gen_range(0..=6);
            let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-50..=50)).collect();
            c.push(rng.gen_range(1..=50) * if rng.gen_bool(0.5) { 1 } else { -1 });
            let f = IntPoly::from_i64s(&c);
            for &q in &primes {
                assert_eq!(omega(&f, q).unwrap(), omega_naive(&f, q).unwrap(), "{f} mod {q}");
            }
        }
    }

    #[test]
    fn omega_bounded_by_degree_on_corpus() {
        let primes = primes_upto(10_000);
        for f in corpus::irreducible_corpus() {
            let d = f.degree().unwrap() as u64;
            for &q in &primes {
                assert!(omega(&f, q).unwrap() <= d, "{f} mod {q}");
            }
        }
    }

    #[test]
    fn omega_additive_beyond_discriminant() {
        let c = corpus::irreducible_corpus();
        let choices: [&[usize]; 4] = [&[0, 3], &[1, 12], &[3, 13, 16], &[2, 14]];
        for idx in choices {
            let factors: Vec<IntPoly> = idx.iter().map(|&i| c[i].clone()).collect();
            let f = product(&factors);
            let df = discriminant(&f).unwrap().abs().to_u64().unwrap();
            for q in (df + 1..=df + 500).filter(|&q| is_prime_u64(q)) {
                let sum: u64 = factors.iter().map(|g| omega(g, q).unwrap()).sum();
                assert_eq!(omega(&f, q).unwrap(), sum, "{f} mod {q}");
            }
            for q in primes_upto(500) {
                let sum: u64 = factors.iter().map(|g| omega(g, q).unwrap()).sum();
                assert!(omega(&f, q).unwrap() <= sum);
            }
        }
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_pattern(&p("x^2+1"), 5).unwrap().parts, vec![(1, 1), (1, 1)]);
        assert_eq!(splitting_pattern(&p("x^2+1"), 2).unwrap().parts, vec![(1, 2)]);
        assert_eq!(splitting_pattern(&p("x^2+1"), 3).unwrap().parts, vec![(2, 1)]);
        // x^4 + 1 = (x + 1)^4 mod 2 exercises the p-th root branch
        assert_eq!(splitting_pattern(&p("x^4+1"), 2).unwrap().parts, vec![(1, 4)]);
        assert_eq!(splitting_pattern(&p("x^4+1"), 3).unwrap().parts, vec![(2, 1), (2, 1)]);
        assert_eq!(splitting_pattern(&p("x^3-2"), 3).unwrap().parts, vec![(1, 3)]);
        assert_eq!(splitting_pattern(&p("2x^2+1"), 3), Err(Error::NonMonic { op: "splitting_pattern" }));
    }

    #[test]
    fn splitting_matches_trial_division() {
        let polys = [
            "x^2+1", "x^4+1", "x^3-2", "x^4-x^2+1", "x^6+x^3+1", "x^5-x-1", "x^6-2", "x^4+4x^2+2",
            "x^6+3x^5+3x^4+x^3", "x^5+2x^4+x^3",
        ];
        for s in polys {
            let h = p(s);
            for q in [2u64, 3, 5, 7, 11, 13] {
                assert_eq!(splitting_pattern(&h, q).unwrap().parts, brute_pattern(&h, q), "{s} mod {q}");
            }
        }
    }

    #[test]
    fn splitting_degree_sum_and_linear_count() {
        for h in corpus::irreducible_corpus() {
            let d = h.degree().unwrap();
            for q in primes_upto(400) {
                let pat = splitting_pattern(&h, q).unwrap();
                assert_eq!(pat.total_degree(), d, "{h} mod {q}");
                let hbar = reduce(&h, q);
                if hbar.gcd(&hbar.derivative()).degree() == Some(0) {
                    assert_eq!(pat.linear_count() as u64, omega(&h, q).unwrap(), "{h} mod {q}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn omega_agrees_with_naive(c in prop::collection::vec(-50i64..=50, 1..=7), idx in 0usize..168) {
            let f = IntPoly::from_i64s(&c);
            prop_assume!(!f.is_zero());
            let q = primes_upto(1000)[idx];
            prop_assert_eq!(omega(&f, q).unwrap(), omega_naive(&f, q).unwrap());
        }

        #[test]
        fn pattern_degree_sum(c in prop::collection::vec(-30i64..=30, 1..=8), idx in 0usize..25) {
            let mut c = c;
            c.push(1);
            let h = IntPoly::from_i64s(&c);
            let q = primes_upto(100)[idx];
            prop_assert_eq!(splitting_pattern(&h, q).unwrap().total_degree(), h.degree().unwrap());
        }
    }
}
