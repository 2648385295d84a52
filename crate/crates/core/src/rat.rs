//! Arbitrary-precision rational helpers.
//!
//! All coefficient arithmetic in this crate is exact. `Rat` is kept
//! reduced with a positive denominator by `num-rational`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

/// (2m - 1)!! = 1 * 3 * 5 * ... * (2m - 1), the number of pairings of 2m points.
pub fn double_factorial_odd(m: u64) -> Rat {
    let mut acc = BigInt::one();
    let mut k = 1u64;
    while k + 1 < 2 * m + 1 {
        acc *= BigInt::from(k);
        k += 2;
    }
    Rat::from_integer(acc)
}

pub fn binomial(n: u64, k: u64) -> Rat {
    if k > n {
        return Rat::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// base^exp with signed exponent; base must be nonzero when exp < 0.
pub fn pow_rat(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        base.pow(exp as i32)
    }
}

/// Splits n > 0 as s * t^2 with s square-free; returns (s, t).
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "square-free split needs a positive integer");
    let mut s = BigInt::one();
    let mut t = BigInt::one();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            t *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += 1;
    }
    // leftover m is prime (or 1)
    s *= m;
    (s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), rat_int(1));
        assert_eq!(factorial(5), rat_int(120));
        assert_eq!(double_factorial_odd(0), rat_int(1));
        assert_eq!(double_factorial_odd(2), rat_int(3));
        assert_eq!(double_factorial_odd(3), rat_int(15));
    }

    #[test]
    fn square_free() {
        let (s, t) = square_free_split(&BigInt::from(72));
        assert_eq!(s, BigInt::from(2));
        assert_eq!(t, BigInt::from(6));
        let (s, t) = square_free_split(&BigInt::from(1));
        assert_eq!(s, BigInt::from(1));
        assert_eq!(t, BigInt::from(1));
    }

    #[test]
    fn signed_pow() {
        assert_eq!(pow_rat(&rat_int(2), -2), rat(1, 4));
        assert_eq!(pow_rat(&rat(2, 3), 3), rat(8, 27));
    }
}
