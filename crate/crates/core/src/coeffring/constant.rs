//! Formal constant monomials and their linear combinations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Coeff, RingElem};
use crate::rat::{pow_rat, square_free_split, Rat};

/// A monomial `N^{n2/2} pi^{pi2/2} 2^{1/2?} i^{0|1}` in canonical form.
///
/// Canonicalization: integer powers of 2 are folded into the rational
/// coefficient (only a residual `2^{1/2}` survives), and `i^2 = -1` is
/// applied so the stored `i`-exponent is 0 or 1 with the sign absorbed.
/// This makes equality of [`ConstScalar`] values decidable structurally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstMonomial {
    /// Doubled exponent of `N`.
    pub n2: i64,
    /// Doubled exponent of `pi`.
    pub pi2: i64,
    /// Residual factor `2^{1/2}`.
    pub sqrt2: bool,
    /// Residual factor `i`.
    pub imag: bool,
}

impl ConstMonomial {
    pub fn unit() -> Self {
        ConstMonomial { n2: 0, pi2: 0, sqrt2: false, imag: false }
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::unit()
    }

    /// Builds the canonical form of `N^{n2/2} pi^{pi2/2} 2^{two2/2} i^{i4}`,
    /// returning the monomial together with the rational factor produced by
    /// canonicalization.
    pub fn normalize(n2: i64, pi2: i64, two2: i64, i4: i64) -> (Self, Rat) {
        let mut factor = Rat::one();
        let q = two2.div_euclid(2);
        let r = two2.rem_euclid(2);
        factor *= pow_rat(&Rat::from_integer(2.into()), q);
        let sqrt2 = r == 1;
        let imag = match i4.rem_euclid(4) {
            0 => false,
            1 => true,
            2 => {
                factor = -factor;
                false
            }
            _ => {
                factor = -factor;
                true
            }
        };
        (ConstMonomial { n2, pi2, sqrt2, imag }, factor)
    }

    /// Product of two canonical monomials, with the rational factor from
    /// re-canonicalization (e.g. `2^{1/2} * 2^{1/2} = 2`, `i * i = -1`).
    pub fn mul(&self, other: &Self) -> (Self, Rat) {
        Self::normalize(
            self.n2 + other.n2,
            self.pi2 + other.pi2,
            i64::from(self.sqrt2) + i64::from(other.sqrt2),
            i64::from(self.imag) + i64::from(other.imag),
        )
    }

    pub fn has_half_power_of_n(&self) -> bool {
        self.n2.rem_euclid(2) == 1
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, sym: &str, doubled: i64, first: &mut bool) -> fmt::Result {
    if doubled == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, " ")?;
    }
    *first = false;
    if doubled == 2 {
        write!(f, "{sym}")
    } else if doubled % 2 == 0 {
        write!(f, "{sym}^{{{}}}", doubled / 2)
    } else {
        write!(f, "{sym}^{{{}/2}}", doubled)
    }
}

impl fmt::Display for ConstMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        fmt_power(f, "N", self.n2, &mut first)?;
        fmt_power(f, "pi", self.pi2, &mut first)?;
        if self.sqrt2 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "2^{{1/2}}")?;
        }
        if self.imag {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "i")?;
        }
        Ok(())
    }
}

/// An exact linear combination of [`ConstMonomial`]s with rational
/// coefficients. Houses every normalization constant of the engine.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConstScalar {
    terms: BTreeMap<ConstMonomial, Rat>,
}

impl ConstScalar {
    pub fn zero() -> Self {
        ConstScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::of_rat(Rat::one())
    }

    pub fn of_rat(r: Rat) -> Self {
        let mut s = Self::zero();
        s.push(ConstMonomial::unit(), r);
        s
    }

    pub fn of_int(n: i64) -> Self {
        Self::of_rat(Rat::from_integer(BigInt::from(n)))
    }

    /// `r * N^{n2/2} pi^{pi2/2} 2^{two2/2} i^{i4}` (raw, pre-canonical exponents).
    pub fn monomial(r: Rat, n2: i64, pi2: i64, two2: i64, i4: i64) -> Self {
        let (m, factor) = ConstMonomial::normalize(n2, pi2, two2, i4);
        let mut s = Self::zero();
        s.push(m, r * factor);
        s
    }

    pub fn n_half_pow(n2: i64) -> Self {
        Self::monomial(Rat::one(), n2, 0, 0, 0)
    }

    pub fn n_pow(k: i64) -> Self {
        Self::n_half_pow(2 * k)
    }

    pub fn pi_half_pow(pi2: i64) -> Self {
        Self::monomial(Rat::one(), 0, pi2, 0, 0)
    }

    pub fn i_pow(k: i64) -> Self {
        Self::monomial(Rat::one(), 0, 0, 0, k)
    }

    fn push(&mut self, m: ConstMonomial, r: Rat) {
        if r.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += r;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rat().map(|r| r.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ConstMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.push(*m, r.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ConstScalar { terms: self.terms.iter().map(|(m, r)| (*m, -r)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ra) in &self.terms {
            for (mb, rb) in &other.terms {
                let (m, factor) = ma.mul(mb);
                out.push(m, ra * rb * factor);
            }
        }
        out
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        ConstScalar { terms: self.terms.iter().map(|(m, c)| (*m, c * r)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Inverse exists exactly for single-monomial values.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, r) = self.terms.iter().next().unwrap();
        if r.is_zero() {
            return None;
        }
        Some(Self::monomial(
            Rat::one() / r,
            -m.n2,
            -m.pi2,
            -i64::from(m.sqrt2),
            -i64::from(m.imag),
        ))
    }

    /// Replaces `N^{p/2}` by `n^{p/2}` for a concrete positive rational `n`.
    ///
    /// The result is exact when `p` is even or `n` is a perfect square.
    /// Otherwise the half power is kept on the square-free part of `n`:
    /// `n = s t^2` contributes the rational `t` times a residual symbol,
    /// which is `2^{1/2}` when `s = 2` and is recorded as `N^{1/2}` (now
    /// denoting `s^{1/2}`) for other square-free `s`. Callers that assert
    /// full cancellation simply check that no `N` power survives.
    pub fn substitute_n(&self, n: &Rat) -> Self {
        assert!(n.is_positive(), "N must be substituted by a positive rational");
        let mut out = Self::zero();
        for (m, r) in &self.terms {
            let q = m.n2.div_euclid(2);
            let rem = m.n2.rem_euclid(2);
            let mut factor = r * pow_rat(n, q);
            let mut n2_left = 0i64;
            let mut two2_extra = 0i64;
            if rem == 1 {
                // sqrt(a/b) = sqrt(a b) / b
                let ab = n.numer() * n.denom();
                let (s, t) = square_free_split(&ab);
                factor *= Rat::new(t, n.denom().clone());
                if s == BigInt::from(2) {
                    two2_extra = 1;
                } else if !s.is_one() {
                    n2_left = 1;
                }
            }
            let (mono, canon) = ConstMonomial::normalize(
                n2_left,
                m.pi2,
                i64::from(m.sqrt2) + two2_extra,
                i64::from(m.imag),
            );
            out.push(mono, factor * canon);
        }
        out
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, r) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(r.clone());
            }
        }
        None
    }

    /// True when some term carries an odd power of `N^{1/2}`.
    pub fn has_half_power_of_n(&self) -> bool {
        self.terms.keys().any(ConstMonomial::has_half_power_of_n)
    }

    /// True when some term carries any power of `N` at all.
    pub fn depends_on_n(&self) -> bool {
        self.terms.keys().any(|m| m.n2 != 0)
    }
}

impl fmt::Display for ConstScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, r)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{r}")?;
            } else if r.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{r} * {m}")?;
            }
        }
        Ok(())
    }
}

impl RingElem for ConstScalar {
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale(&self, r: &Rat) -> Self {
        self.mul_rat(r)
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for ConstScalar {
    fn from_rat(r: &Rat) -> Self {
        Self::of_rat(r.clone())
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn substitute_n(&self, n: &Rat) -> Self {
        ConstScalar::substitute_n(self, n)
    }
    fn as_rat(&self) -> Option<Rat> {
        ConstScalar::as_rat(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn i_cyclicity() {
        let i = ConstScalar::i_pow(1);
        assert_eq!(i.mul(&i), ConstScalar::of_int(-1));
        assert_eq!(i.pow(4), ConstScalar::one());
        assert_eq!(i.pow(3), ConstScalar::i_pow(1).neg());
        // i^{-1} = -i
        assert_eq!(ConstScalar::i_pow(-1), ConstScalar::i_pow(1).neg());
    }

    #[test]
    fn sqrt2_folds_into_rational() {
        let s = ConstScalar::monomial(Rat::one(), 0, 0, 1, 0);
        assert_eq!(s.mul(&s), ConstScalar::of_int(2));
        let c = ConstScalar::monomial(Rat::one(), 0, 0, 3, 0);
        assert_eq!(c, s.mul_rat(&rat_int(2)));
    }

    #[test]
    fn substitute_n_integer_powers() {
        // 2N + N^{-1} at N = 2 gives 9/2
        let x = ConstScalar::n_pow(1)
            .mul_rat(&rat_int(2))
            .add(&ConstScalar::n_pow(-1));
        assert_eq!(x.substitute_n(&rat_int(2)).as_rat().unwrap(), rat(9, 2));
    }

    #[test]
    fn substitute_n_trivial_value() {
        // tau * N^{-1} with tau = 2 pi i^{-1}, at N = 1
        let tau = ConstScalar::monomial(rat_int(2), 0, 2, 0, -1);
        let x = tau.mul(&ConstScalar::n_pow(-1));
        assert_eq!(x.substitute_n(&rat_int(1)), tau);
    }

    #[test]
    fn substitute_n_big_power() {
        // N^{N(N-1)/2} at N = 3 is 27
        let x = ConstScalar::n_pow(3);
        assert_eq!(x.substitute_n(&rat_int(3)).as_rat().unwrap(), rat_int(27));
    }

    #[test]
    fn substitute_n_half_powers() {
        // N^{1/2} at N = 4 is exactly 2
        let h = ConstScalar::n_half_pow(1);
        assert_eq!(h.substitute_n(&rat_int(4)).as_rat().unwrap(), rat_int(2));
        // at N = 2 it becomes 2^{1/2}
        assert_eq!(
            h.substitute_n(&rat_int(2)),
            ConstScalar::monomial(Rat::one(), 0, 0, 1, 0)
        );
        // at N = 8 it becomes 2 * 2^{1/2}
        assert_eq!(
            h.substitute_n(&rat_int(8)),
            ConstScalar::monomial(rat_int(2), 0, 0, 1, 0)
        );
        // at N = 3 the residual square-free half power survives
        assert!(h.substitute_n(&rat_int(3)).has_half_power_of_n());
        // N^{3/2} at N = 9/4 is (9/4) * (3/2)
        assert_eq!(
            ConstScalar::n_half_pow(3)
                .substitute_n(&rat(9, 4))
                .as_rat()
                .unwrap(),
            rat(27, 8)
        );
    }

    #[test]
    fn inverse_of_monomial() {
        let x = ConstScalar::monomial(rat(3, 4), 2, -1, 1, 1);
        let y = x.inverse().unwrap();
        assert_eq!(x.mul(&y), ConstScalar::one());
        assert!(ConstScalar::zero().inverse().is_none());
        assert!(ConstScalar::one()
            .add(&ConstScalar::pi_half_pow(2))
            .inverse()
            .is_none());
    }

    #[test]
    fn display_canonical() {
        let x = ConstScalar::monomial(rat(-3, 4), 3, 2, 1, 1)
            .add(&ConstScalar::of_rat(rat(1, 2)));
        assert_eq!(x.to_string(), "1/2 + -3/4 * N^{3/2} pi 2^{1/2} i");
    }
}
