//! Polynomial potentials `V(x) = sum_k c_k x^k / k`.
//!
//! Each term's coefficient `c_k` is a rational multiple of an optional
//! coupling symbol. Potentials that multiply (sit inside `exp(N V(x))` as a
//! factor) must carry a symbol on every term so that the expansion is
//! graded and truncation terminates. Potentials in operator position
//! (`V(d/dx)` and friends) terminate by lowering degree and may be purely
//! rational, e.g. the Gaussian `x^2/2`.

use crate::coeffring::{Coupling, Flavor};
use crate::error::{Error, Result};
use crate::rat::{rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialTerm {
    /// Valency `k >= 1`.
    pub valency: u32,
    /// Rational multiplier of the coupling (1 when the coupling is bare).
    pub scalar: Rat,
    /// Coupling symbol, or `None` for a structurally rational term.
    pub coupling: Option<Coupling>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Potential {
    terms: Vec<PotentialTerm>,
}

impl Potential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(terms: Vec<PotentialTerm>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for t in &terms {
            if t.valency == 0 {
                return Err(Error::InvalidPotential("valency must be >= 1".into()));
            }
            if !seen.insert(t.valency) {
                return Err(Error::InvalidPotential(format!(
                    "duplicate valency {}",
                    t.valency
                )));
            }
        }
        Ok(Potential { terms })
    }

    /// A single symbolic term `c x^k / k`.
    pub fn symbolic(c: Coupling, k: u32) -> Self {
        Potential {
            terms: vec![PotentialTerm { valency: k, scalar: Rat::from_integer(1.into()), coupling: Some(c) }],
        }
    }

    /// `lambda_k x^k / k` for the one-matrix family.
    pub fn lambda(k: u32) -> Self {
        Self::symbolic(Coupling::Lambda(k), k)
    }

    /// `alpha_k x^k / k` for the first two-matrix potential.
    pub fn alpha(k: u32) -> Self {
        Self::symbolic(Coupling::Alpha(k), k)
    }

    /// `beta_k x^k / k` for the second two-matrix potential.
    pub fn beta(k: u32) -> Self {
        Self::symbolic(Coupling::Beta(k), k)
    }

    /// The rational Gaussian term `x^2 / 2`.
    pub fn gaussian() -> Self {
        Potential {
            terms: vec![PotentialTerm { valency: 2, scalar: rat(1, 1), coupling: None }],
        }
    }

    pub fn join(&self, other: &Potential) -> Result<Potential> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Potential::new(terms)
    }

    pub fn terms(&self) -> &[PotentialTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree `p` of the polynomial (0 for the zero potential).
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.valency).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<&PotentialTerm> {
        self.terms.iter().max_by_key(|t| t.valency)
    }

    pub fn max_valency(&self) -> u32 {
        self.degree()
    }

    /// Errors unless every term carries a coupling symbol; expansions of
    /// `exp(N V)` in multiplication position require a graded coupling on
    /// each vertex to terminate.
    pub fn require_symbolic(&self) -> Result<()> {
        for t in &self.terms {
            if t.coupling.is_none() {
                return Err(Error::InvalidPotential(format!(
                    "term of valency {} has no coupling symbol; it cannot be graded",
                    t.valency
                )));
            }
        }
        Ok(())
    }

    /// Checks that all symbols are admissible for the given flavor.
    pub fn check_flavor(&self, flavor: Flavor) -> Result<()> {
        for t in &self.terms {
            if let Some(c) = t.coupling {
                if !c.allowed_in(flavor) {
                    return Err(Error::InvalidPotential(format!(
                        "coupling {c} is not admissible in the {flavor} flavor"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let v = Potential::lambda(3).join(&Potential::lambda(4)).unwrap();
        assert_eq!(v.degree(), 4);
        assert!(v.require_symbolic().is_ok());
        assert!(v.check_flavor(Flavor::OneMatrix).is_ok());
        assert!(v.check_flavor(Flavor::TwoMatrix).is_err());
        assert!(Potential::gaussian().require_symbolic().is_err());
        assert!(Potential::lambda(3).join(&Potential::lambda(3)).is_err());
    }
}
