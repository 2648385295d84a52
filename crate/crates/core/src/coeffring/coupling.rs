//! Coupling symbols and graded monomials in them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Which family of models a series or trace monomial belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Flavor {
    OneMatrix,
    TwoMatrix,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::OneMatrix => write!(f, "one-matrix"),
            Flavor::TwoMatrix => write!(f, "two-matrix"),
        }
    }
}

/// A coupling symbol. `Lambda(k)` belongs to one-matrix potentials,
/// `Alpha(k)` / `Beta(k)` to the two potentials of the two-matrix family,
/// and `Kappa` is a free formal parameter used by operator identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coupling {
    Lambda(u32),
    Alpha(u32),
    Beta(u32),
    Kappa,
}

impl Coupling {
    pub fn allowed_in(&self, flavor: Flavor) -> bool {
        match self {
            Coupling::Lambda(_) => flavor == Flavor::OneMatrix,
            Coupling::Alpha(_) | Coupling::Beta(_) => flavor == Flavor::TwoMatrix,
            Coupling::Kappa => true,
        }
    }

    /// Parses the text form used by configs: `l3`, `a3`, `b4`, `c`.
    pub fn parse(s: &str) -> Option<Coupling> {
        if s == "c" {
            return Some(Coupling::Kappa);
        }
        let (head, tail) = s.split_at(1);
        let k: u32 = tail.parse().ok()?;
        if k == 0 {
            return None;
        }
        match head {
            "l" => Some(Coupling::Lambda(k)),
            "a" => Some(Coupling::Alpha(k)),
            "b" => Some(Coupling::Beta(k)),
            _ => None,
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Lambda(k) => write!(f, "l{k}"),
            Coupling::Alpha(k) => write!(f, "a{k}"),
            Coupling::Beta(k) => write!(f, "b{k}"),
            Coupling::Kappa => write!(f, "c"),
        }
    }
}

/// A monomial in the coupling symbols. Its grade is the total exponent,
/// which counts interaction vertices in every expansion of this crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CouplingMonomial {
    exps: BTreeMap<Coupling, u32>,
}

impl CouplingMonomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn single(c: Coupling, e: u32) -> Self {
        let mut m = Self::unit();
        if e > 0 {
            m.exps.insert(c, e);
        }
        m
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn grade(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn exp(&self, c: Coupling) -> u32 {
        self.exps.get(&c).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> impl Iterator<Item = (&Coupling, &u32)> {
        self.exps.iter()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, e) in &other.exps {
            *out.exps.entry(*c).or_insert(0) += e;
        }
        out
    }

    pub fn mul_pow(&self, c: Coupling, e: u32) -> Self {
        self.mul(&Self::single(c, e))
    }

    /// Divides by `c^e`; `None` when the exponent is too small.
    pub fn try_div_pow(&self, c: Coupling, e: u32) -> Option<Self> {
        if e == 0 {
            return Some(self.clone());
        }
        let have = self.exp(c);
        if have < e {
            return None;
        }
        let mut out = self.clone();
        if have == e {
            out.exps.remove(&c);
        } else {
            out.exps.insert(c, have - e);
        }
        Some(out)
    }

    /// True when all exponents are over couplings admissible for `flavor`.
    pub fn admissible(&self, flavor: Flavor) -> bool {
        self.exps.keys().all(|c| c.allowed_in(flavor))
    }
}

impl PartialOrd for CouplingMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded order: first by grade, then lexicographically by exponents.
/// Series serialization inherits this ordering, which makes it canonical.
impl Ord for CouplingMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl fmt::Display for CouplingMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (idx, (c, e)) in self.exps.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{e}")?;
            }
        }
        Ok(())
    }
}
