//! Exact coefficient arithmetic.
//!
//! Three coefficient rings live here:
//!
//! * [`ConstScalar`]: rationals times formal monomials in `N^{1/2}`,
//!   `pi^{1/2}`, `2^{1/2}` and `i`. Every normalization constant of the
//!   engine is an exact element of this ring, so identities between
//!   prefactors are decided by structural equality, never numerically.
//! * [`NLaurent`]: Laurent polynomials in `N` with rational coefficients,
//!   the value ring of the ribbon-graph expansion where `N` stays symbolic.
//! * [`CouplingSeries`]: truncated graded series in the coupling symbols,
//!   generic over the two rings above (and over plain rationals once all
//!   formal constants have cancelled).
//!
//! Canonical text form: series terms are sorted by (grade, monomial), each
//! term prints as `coeff * mono`, rationals print as `p/q`, and constant
//! monomials as space-separated factors `N^{a} pi^{b} 2^{1/2} i` with
//! half-integer exponents written in braces, e.g. `N^{-3/2}`. This format
//! is stable and is what reports and golden tests consume.

mod constant;
mod coupling;
mod nlaurent;
mod series;

pub use constant::{ConstMonomial, ConstScalar};
pub use coupling::{Coupling, CouplingMonomial, Flavor};
pub use nlaurent::NLaurent;
pub use series::{series_exp, series_mul, CouplingSeries};

use crate::rat::Rat;

/// Commutative-ring surface shared by every coefficient type, including
/// series used as coefficients of polynomials.
pub trait RingElem: Clone + PartialEq + Eq + std::fmt::Debug + std::fmt::Display {
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn scale(&self, r: &Rat) -> Self;
    fn is_ring_zero(&self) -> bool;

    fn ring_sub(&self, other: &Self) -> Self {
        self.ring_add(&other.ring_neg())
    }
}

/// A scalar ring that can sit at the bottom of a [`CouplingSeries`].
pub trait Coeff: RingElem {
    fn from_rat(r: &Rat) -> Self;
    /// Multiplicative inverse when one exists in the ring.
    fn inv(&self) -> Option<Self>;
    /// Replace the symbol `N` by a concrete positive rational.
    fn substitute_n(&self, n: &Rat) -> Self;
    /// The value as a plain rational, if no formal symbol is left.
    fn as_rat(&self) -> Option<Rat>;

    fn coeff_one() -> Self {
        Self::from_rat(&Rat::from_integer(1.into()))
    }
    fn coeff_zero() -> Self {
        Self::from_rat(&Rat::from_integer(0.into()))
    }
}

impl RingElem for Rat {
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn is_ring_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

impl Coeff for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_ring_zero() {
            None
        } else {
            Some(Self::from_integer(1.into()) / self)
        }
    }
    fn substitute_n(&self, _n: &Rat) -> Self {
        self.clone()
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}
