//! Truncated graded series in the coupling symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::{Coeff, Coupling, CouplingMonomial, Flavor, RingElem};
use crate::error::{Error, Result};
use crate::rat::{factorial, pow_rat, Rat};

/// A series in the coupling symbols, truncated at a fixed total grade `D`.
/// The truncation order is an explicit parameter everywhere; binary
/// operations insist that both operands carry the same flavor and order.
///
/// Ring operations re-truncate, so no stored monomial ever has grade
/// above `D`. With the engine's normalizations, the grade-0 coefficient
/// of any partition function equals 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingSeries<C: Coeff> {
    flavor: Flavor,
    trunc: u32,
    terms: BTreeMap<CouplingMonomial, C>,
}

/// Graded product of two series; commutative, truncated at the common order.
pub fn series_mul<C: Coeff>(a: &CouplingSeries<C>, b: &CouplingSeries<C>) -> Result<CouplingSeries<C>> {
    a.checked_mul(b)
}

/// `exp(a)` for a series with zero constant term.
pub fn series_exp<C: Coeff>(a: &CouplingSeries<C>) -> Result<CouplingSeries<C>> {
    a.exp()
}

impl<C: Coeff> CouplingSeries<C> {
    pub fn zero(flavor: Flavor, trunc: u32) -> Self {
        CouplingSeries { flavor, trunc, terms: BTreeMap::new() }
    }

    pub fn one(flavor: Flavor, trunc: u32) -> Self {
        Self::constant(flavor, trunc, C::coeff_one())
    }

    pub fn constant(flavor: Flavor, trunc: u32, c: C) -> Self {
        let mut s = Self::zero(flavor, trunc);
        s.push(CouplingMonomial::unit(), c);
        s
    }

    pub fn of_rat(flavor: Flavor, trunc: u32, r: &Rat) -> Self {
        Self::constant(flavor, trunc, C::from_rat(r))
    }

    /// A single term `c * mono`. Monomials beyond the truncation order are
    /// dropped, matching the ring's re-truncation semantics.
    pub fn monomial(flavor: Flavor, trunc: u32, mono: CouplingMonomial, c: C) -> Self {
        assert!(
            mono.admissible(flavor),
            "coupling monomial {mono} is not admissible in the {flavor} flavor"
        );
        let mut s = Self::zero(flavor, trunc);
        s.push(mono, c);
        s
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CouplingMonomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&CouplingMonomial::unit())
                .map(|c| *c == C::coeff_one())
                .unwrap_or(false)
    }

    pub fn coeff(&self, mono: &CouplingMonomial) -> C {
        self.terms.get(mono).cloned().unwrap_or_else(C::coeff_zero)
    }

    pub fn grade0(&self) -> C {
        self.coeff(&CouplingMonomial::unit())
    }

    pub fn max_grade(&self) -> u32 {
        self.terms.keys().map(CouplingMonomial::grade).max().unwrap_or(0)
    }

    fn push(&mut self, mono: CouplingMonomial, c: C) {
        if c.is_ring_zero() || mono.grade() > self.trunc {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Occupied(mut e) => {
                let sum = e.get().ring_add(&c);
                if sum.is_ring_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_term(&mut self, mono: CouplingMonomial, c: C) {
        assert!(
            mono.admissible(self.flavor),
            "coupling monomial {mono} is not admissible in the {} flavor",
            self.flavor
        );
        self.push(mono, c);
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch(
                self.flavor.to_string(),
                other.flavor.to_string(),
            ));
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.push(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CouplingSeries {
            flavor: self.flavor,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.ring_neg())).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = Self::zero(self.flavor, self.trunc);
        for (ma, ca) in &self.terms {
            let ga = ma.grade();
            for (mb, cb) in &other.terms {
                if ga + mb.grade() > self.trunc {
                    continue;
                }
                out.push(ma.mul(mb), ca.ring_mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.flavor, self.trunc);
        for (m, v) in &self.terms {
            out.push(m.clone(), v.ring_mul(c));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        let mut out = Self::zero(self.flavor, self.trunc);
        for (m, v) in &self.terms {
            out.push(m.clone(), v.scale(r));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(self.flavor, self.trunc);
        for _ in 0..k {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    /// `exp` of a series whose constant term vanishes. Exponentials of
    /// constants belong to [`super::ConstScalar`], not here.
    pub fn exp(&self) -> Result<Self> {
        if !self.grade0().is_ring_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = Self::one(self.flavor, self.trunc);
        let mut power = Self::one(self.flavor, self.trunc);
        for i in 1..=self.trunc {
            power = power.checked_mul(self)?;
            if power.is_zero() {
                break;
            }
            out = out.checked_add(&power.scale_rat(&(Rat::one() / factorial(u64::from(i)))))?;
        }
        Ok(out)
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.grade0() != C::coeff_one() {
            return Err(Error::NonzeroConstantTerm);
        }
        let t = self.checked_sub(&Self::one(self.flavor, self.trunc))?;
        let mut out = Self::zero(self.flavor, self.trunc);
        let mut power = Self::one(self.flavor, self.trunc);
        for m in 1..=self.trunc {
            power = power.checked_mul(&t)?;
            if power.is_zero() {
                break;
            }
            let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
            out = out.checked_add(&power.scale_rat(&(sign / Rat::from_integer(m.into()))))?;
        }
        Ok(out)
    }

    /// Multiplicative inverse; needs an invertible grade-0 coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.grade0();
        let c0_inv = c0
            .inv()
            .ok_or_else(|| Error::NonInvertibleSeries(c0.to_string()))?;
        // 1 / (c0 (1 + t)) = c0^{-1} sum (-t)^m with t of positive grade
        let t = self
            .scale(&c0_inv)
            .checked_sub(&Self::one(self.flavor, self.trunc))?;
        let mut out = Self::one(self.flavor, self.trunc);
        let mut power = Self::one(self.flavor, self.trunc);
        for _ in 1..=self.trunc {
            power = power.checked_mul(&t)?.neg();
            if power.is_zero() {
                break;
            }
            out = out.checked_add(&power)?;
        }
        Ok(out.scale(&c0_inv))
    }

    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        self.checked_mul(&den.inverse()?)
    }

    /// Re-truncates to a lower order.
    pub fn truncate(&self, d: u32) -> Self {
        let mut out = Self::zero(self.flavor, d);
        for (m, c) in &self.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }

    /// Divides every monomial by `c^r`, lowering the truncation order to
    /// `out_trunc`. Errors if some monomial does not carry `c^r`; the
    /// callers use this to assert that formal inverse powers of a leading
    /// coupling cancel out of final results.
    pub fn divide_coupling_pow(&self, c: Coupling, r: u32, out_trunc: u32) -> Result<Self> {
        let mut out = Self::zero(self.flavor, out_trunc);
        for (m, coeff) in &self.terms {
            let divided = m.try_div_pow(c, r).ok_or_else(|| {
                Error::Internal(format!(
                    "monomial {m} is not divisible by {c}^{r}; a formal inverse power would survive"
                ))
            })?;
            out.push(divided, coeff.clone());
        }
        Ok(out)
    }

    /// Binds one coupling symbol to a rational value. The truncation
    /// order is unchanged; the result is a series in the remaining symbols.
    pub fn bind(&self, c: Coupling, v: &Rat) -> Self {
        let mut out = Self::zero(self.flavor, self.trunc);
        for (m, coeff) in &self.terms {
            let e = m.exp(c);
            let m2 = m.try_div_pow(c, e).unwrap();
            out.push(m2, coeff.scale(&pow_rat(v, i64::from(e))));
        }
        out
    }

    /// Substitutes a concrete positive rational for `N` in every coefficient.
    pub fn substitute_n(&self, n: &Rat) -> Self {
        let mut out = Self::zero(self.flavor, self.trunc);
        for (m, coeff) in &self.terms {
            out.push(m.clone(), coeff.substitute_n(n));
        }
        out
    }

    /// The same series over plain rationals; errors if some coefficient
    /// still carries a formal constant.
    pub fn rationalized(&self) -> Result<CouplingSeries<Rat>> {
        let mut out = CouplingSeries::<Rat>::zero(self.flavor, self.trunc);
        for (m, coeff) in &self.terms {
            let r = coeff.as_rat().ok_or_else(|| {
                Error::Internal(format!(
                    "coefficient of {m} retains formal constants: {coeff}"
                ))
            })?;
            out.push(m.clone(), r);
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for CouplingSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let cs = c.to_string();
            let wrapped = if cs.contains(" + ") { format!("({cs})") } else { cs };
            if m.is_unit() {
                write!(f, "{wrapped}")?;
            } else if wrapped == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{wrapped} * {m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> RingElem for CouplingSeries<C> {
    fn ring_add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("series addition on incompatible operands")
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("series product on incompatible operands")
    }
    fn scale(&self, r: &Rat) -> Self {
        self.scale_rat(r)
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::ConstScalar;
    use crate::rat::{rat, rat_int};

    type S = CouplingSeries<ConstScalar>;

    fn lam(k: u32) -> CouplingMonomial {
        CouplingMonomial::single(Coupling::Lambda(k), 1)
    }

    fn one_plus(k: u32, trunc: u32) -> S {
        let mut s = S::one(Flavor::OneMatrix, trunc);
        s.add_term(lam(k), ConstScalar::one());
        s
    }

    #[test]
    fn mul_truncates() {
        // (1 + l4)(1 - l4) at D = 1 is 1
        let a = one_plus(4, 1);
        let mut b = S::one(Flavor::OneMatrix, 1);
        b.add_term(lam(4), ConstScalar::of_int(-1));
        assert!(a.checked_mul(&b).unwrap().is_one());
    }

    #[test]
    fn mul_identity() {
        let s = one_plus(3, 2);
        assert_eq!(series_mul(&s, &S::one(Flavor::OneMatrix, 2)).unwrap(), s);
    }

    #[test]
    fn mul_binomial() {
        // (1 + l3)^2 at D = 2
        let s = one_plus(3, 2);
        let sq = s.pow(2).unwrap();
        assert_eq!(sq.coeff(&CouplingMonomial::unit()), ConstScalar::one());
        assert_eq!(sq.coeff(&lam(3)), ConstScalar::of_int(2));
        assert_eq!(
            sq.coeff(&CouplingMonomial::single(Coupling::Lambda(3), 2)),
            ConstScalar::one()
        );
    }

    #[test]
    fn mul_rejects_mismatch() {
        let a = S::one(Flavor::OneMatrix, 2);
        let b = S::one(Flavor::OneMatrix, 3);
        assert!(matches!(series_mul(&a, &b), Err(Error::TruncationMismatch(2, 3))));
        let c = S::one(Flavor::TwoMatrix, 2);
        assert!(matches!(series_mul(&a, &c), Err(Error::FlavorMismatch(_, _))));
    }

    #[test]
    fn exp_of_zero() {
        let z = S::zero(Flavor::OneMatrix, 3);
        assert!(series_exp(&z).unwrap().is_one());
    }

    #[test]
    fn exp_definition() {
        // exp(c l4) at D = 2 with c = 3/2
        let c = rat(3, 2);
        let a = S::monomial(Flavor::OneMatrix, 2, lam(4), ConstScalar::of_rat(c.clone()));
        let e = a.exp().unwrap();
        assert_eq!(e.grade0(), ConstScalar::one());
        assert_eq!(e.coeff(&lam(4)), ConstScalar::of_rat(c.clone()));
        assert_eq!(
            e.coeff(&CouplingMonomial::single(Coupling::Lambda(4), 2)),
            ConstScalar::of_rat(&c * &c / rat_int(2))
        );
    }

    #[test]
    fn exp_linear_truncation() {
        // exp(l3 + l4) at D = 1
        let mut a = S::zero(Flavor::OneMatrix, 1);
        a.add_term(lam(3), ConstScalar::one());
        a.add_term(lam(4), ConstScalar::one());
        let e = a.exp().unwrap();
        let mut expect = S::one(Flavor::OneMatrix, 1);
        expect.add_term(lam(3), ConstScalar::one());
        expect.add_term(lam(4), ConstScalar::one());
        assert_eq!(e, expect);
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = S::one(Flavor::OneMatrix, 2);
        assert!(matches!(series_exp(&s), Err(Error::NonzeroConstantTerm)));
    }

    #[test]
    fn inverse_round_trip() {
        let mut s = S::one(Flavor::TwoMatrix, 3);
        s.add_term(
            CouplingMonomial::single(Coupling::Alpha(3), 1),
            ConstScalar::of_rat(rat(5, 3)),
        );
        s.add_term(
            CouplingMonomial::single(Coupling::Beta(3), 1),
            ConstScalar::of_int(-2),
        );
        let inv = s.inverse().unwrap();
        assert!(s.checked_mul(&inv).unwrap().is_one());
    }

    #[test]
    fn bind_substitutes_rationals() {
        let mut s = S::one(Flavor::OneMatrix, 2);
        s.add_term(lam(4), ConstScalar::of_rat(rat(9, 4)));
        let bound = s.bind(Coupling::Lambda(4), &rat_int(2));
        assert_eq!(bound.grade0(), ConstScalar::of_rat(rat(11, 2)));
    }

    #[test]
    fn canonical_display() {
        let mut s = S::one(Flavor::TwoMatrix, 2);
        let ab = CouplingMonomial::single(Coupling::Alpha(3), 1).mul_pow(Coupling::Beta(3), 1);
        s.add_term(ab, ConstScalar::of_rat(rat(5, 3)));
        assert_eq!(s.to_string(), "1 + 5/3 * a3 b3");
    }
}
