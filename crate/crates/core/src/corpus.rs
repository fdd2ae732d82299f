//! Small families of polynomials known to be irreducible over Q.

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::IntPoly;

/// The n-th cyclotomic polynomial, by dividing `x^n - 1` by `Φ_d` for proper divisors `d`.
pub fn cyclotomic(n: u32) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut coeffs = vec![BigInt::from(0); n as usize + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[n as usize] = BigInt::one();
    let mut f = IntPoly::new(coeffs);
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        f = f.div_exact(&cyclotomic(d)).expect("cyclotomic divisor");
    }
    f
}

/// `Φ_1..Φ_12`, `x^2 - q` for `q` in {2, 3, 5, 7}, and `x^3 - 2`.
pub fn irreducible_corpus() -> Vec<IntPoly> {
    let mut out: Vec<IntPoly> = (1..=12).map(cyclotomic).collect();
    for q in [2i64, 3, 5, 7] {
        out.push(IntPoly::from_i64s(&[-q, 0, 1]));
    }
    out.push(IntPoly::from_i64s(&[-2, 0, 0, 1]));
    out
}

/// Corpus members whose ring of integers is generated by a root.
pub fn monogenic_corpus() -> Vec<IntPoly> {
    [
        &[-1i64, 1][..],
        &[1, 0, 1],
        &[-2, 0, 1],
        &[1, 1, 1],
        &[-2, 0, 0, 1],
    ]
    .iter()
    .map(|c| IntPoly::from_i64s(c))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).to_string(), "x^1 - 1");
        assert_eq!(cyclotomic(4).to_string(), "x^2 + 1");
        assert_eq!(cyclotomic(6).to_string(), "x^2 - x^1 + 1");
        assert_eq!(cyclotomic(8).to_string(), "x^4 + 1");
        assert_eq!(cyclotomic(12).to_string(), "x^4 - x^2 + 1");
        assert_eq!(irreducible_corpus().len(), 17);
    }
}
