//! Laurent polynomials in the symbol `N`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Coeff, RingElem};
use crate::rat::{pow_rat, Rat};

/// A Laurent polynomial in `N` with rational coefficients. Negative powers
/// arise from the weight `1/N` carried by every edge of a ribbon graph.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NLaurent {
    terms: BTreeMap<i64, Rat>,
}

impl NLaurent {
    pub fn zero() -> Self {
        NLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::of_rat(Rat::one())
    }

    pub fn of_rat(r: Rat) -> Self {
        Self::monomial(r, 0)
    }

    pub fn of_int(n: i64) -> Self {
        Self::of_rat(Rat::from_integer(n.into()))
    }

    pub fn n_pow(k: i64) -> Self {
        Self::monomial(Rat::one(), k)
    }

    pub fn monomial(r: Rat, k: i64) -> Self {
        let mut s = Self::zero();
        s.push(k, r);
        s
    }

    fn push(&mut self, k: i64, r: Rat) {
        if r.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rat::zero);
        *entry += r;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn powers(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, r) in &other.terms {
            out.push(*k, r.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NLaurent { terms: self.terms.iter().map(|(k, r)| (*k, -r)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ra) in &self.terms {
            for (kb, rb) in &other.terms {
                out.push(ka + kb, ra * rb);
            }
        }
        out
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        NLaurent { terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect() }
    }

    /// Evaluates at a concrete positive `N`; the result is the constant term.
    pub fn substitute_n(&self, n: &Rat) -> Self {
        assert!(n.is_positive(), "N must be substituted by a positive rational");
        let mut acc = Rat::zero();
        for (k, r) in &self.terms {
            acc += r * pow_rat(n, *k);
        }
        Self::of_rat(acc)
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(r) = self.terms.get(&0) {
                return Some(r.clone());
            }
        }
        None
    }
}

impl fmt::Display for NLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power first
        for (idx, (k, r)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{r}")?,
                1 if r.is_one() => write!(f, "N")?,
                1 => write!(f, "{r} * N")?,
                _ if r.is_one() => write!(f, "N^{{{k}}}")?,
                _ => write!(f, "{r} * N^{{{k}}}")?,
            }
        }
        Ok(())
    }
}

impl RingElem for NLaurent {
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

impl Coeff for NLaurent {
    fn from_rat(r: &Rat) -> Self {
        Self::of_rat(r.clone())
    }
    fn inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, r) = self.terms.iter().next().unwrap();
        Some(Self::monomial(Rat::one() / r, -k))
    }
    fn substitute_n(&self, n: &Rat) -> Self {
        NLaurent::substitute_n(self, n)
    }
    fn as_rat(&self) -> Option<Rat> {
        NLaurent::as_rat(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn arithmetic_and_substitution() {
        // 2N + N^{-1}
        let x = NLaurent::monomial(rat_int(2), 1).add(&NLaurent::n_pow(-1));
        assert_eq!(x.substitute_n(&rat_int(2)).as_rat().unwrap(), rat(9, 2));
        assert_eq!(x.to_string(), "2 * N + N^{-1}");
        let y = x.mul(&x);
        assert_eq!(y.coeff(2), rat_int(4));
        assert_eq!(y.coeff(0), rat_int(4));
        assert_eq!(y.coeff(-2), rat_int(1));
    }
}
