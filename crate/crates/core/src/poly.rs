//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! This is the workhorse behind both the matrix-entry calculus and the
//! eigenvalue calculus: variables are commuting scalar indeterminates,
//! exponent vectors have fixed length, and coefficients are any
//! [`RingElem`]. Zero coefficients are never stored.
//!
//! Everything here is a polynomial, never a series in the variables:
//! once the coupling series are truncated at grade `D`, all exponential
//! factors reduce to polynomials of bounded degree, so evaluation at zero
//! and derivatives are exact and no variable-level truncation is needed.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::coeffring::RingElem;
use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<C: RingElem> {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, C>,
}

impl<C: RingElem> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.push(vec![0; nvars], c);
        p
    }

    /// `c * x_i`.
    pub fn var(nvars: usize, i: usize, c: C) -> Self {
        Self::monomial(nvars, &[(i, 1)], c)
    }

    /// `c * prod x_i^{e_i}` for the listed (variable, exponent) pairs.
    pub fn monomial(nvars: usize, exps: &[(usize, u16)], c: C) -> Self {
        let mut key = vec![0u16; nvars];
        for &(i, e) in exps {
            assert!(i < nvars, "variable index out of range");
            key[i] += e;
        }
        let mut p = Self::zero(nvars);
        p.push(key, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &C)> {
        self.terms.iter()
    }

    pub fn push(&mut self, key: Vec<u16>, c: C) {
        debug_assert_eq!(key.len(), self.nvars);
        if c.is_ring_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
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

    pub fn coeff(&self, key: &[u16]) -> Option<&C> {
        self.terms.get(key)
    }

    /// Constant term, i.e. the value at all variables = 0.
    pub fn eval_zero(&self) -> Option<&C> {
        self.terms.get(&vec![0u16; self.nvars] as &Vec<u16>)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.iter().map(|&e| u32::from(e)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|k| k[i]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.ring_neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let c = ca.ring_mul(cb);
                if c.is_ring_zero() {
                    continue;
                }
                let key: Vec<u16> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.push(key, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            out.push(k.clone(), v.ring_mul(c));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.scale(r))).collect(),
        }
    }

    pub fn map_coeffs<D: RingElem>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            out.push(k.clone(), f(v));
        }
        out
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            let e = k[i];
            if e == 0 {
                continue;
            }
            let mut key = k.clone();
            key[i] = e - 1;
            out.push(key, v.scale(&Rat::from_integer(i64::from(e).into())));
        }
        out
    }

    /// Applies `prod_i (d/dx_i)^{orders[i]}` in one pass.
    pub fn derive_multi(&self, orders: &[u16]) -> Self {
        debug_assert_eq!(orders.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        'term: for (k, v) in &self.terms {
            let mut factor = Rat::from_integer(1.into());
            let mut key = k.clone();
            for (i, &o) in orders.iter().enumerate() {
                if o == 0 {
                    continue;
                }
                if key[i] < o {
                    continue 'term;
                }
                // falling factorial e (e-1) ... (e-o+1)
                for step in 0..o {
                    factor *= Rat::from_integer(i64::from(key[i] - step).into());
                }
                key[i] -= o;
            }
            out.push(key, v.scale(&factor));
        }
        out
    }

    /// Multiplies by `x_i^e`.
    pub fn mul_var_pow(&self, i: usize, e: u16) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            let mut key = k.clone();
            key[i] += e;
            out.push(key, v.clone());
        }
        out
    }

    /// Sets `x_i = 0`.
    pub fn set_var_zero(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            if k[i] == 0 {
                out.push(k.clone(), v.clone());
            }
        }
        out
    }

    /// Substitutes every variable by a single common one, giving a
    /// one-variable polynomial. This is the coincident-point evaluation.
    pub fn collapse_to_single(&self) -> MPoly<C> {
        let mut out = MPoly::zero(1);
        for (k, v) in &self.terms {
            let total: u16 = k.iter().sum();
            out.push(vec![total], v.clone());
        }
        out
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            let mut key = k.clone();
            key.swap(i, j);
            out.push(key, v.clone());
        }
        out
    }

    /// Embeds this polynomial into a larger variable space; `map[v]` is the
    /// index of old variable `v` in the new space.
    pub fn remap_vars(&self, new_nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(new_nvars);
        for (k, v) in &self.terms {
            let mut key = vec![0u16; new_nvars];
            for (old, &new) in map.iter().enumerate() {
                key[new] += k[old];
            }
            out.push(key, v.clone());
        }
        out
    }

    /// Exact division by the binomial `x_j - x_i`. Errors if the remainder
    /// is nonzero, which callers treat as "input was not antisymmetric".
    pub fn divide_linear(&self, j: usize, i: usize) -> Result<Self> {
        assert_ne!(i, j);
        let n = self.degree_in(j);
        // slice the polynomial by the degree in x_j
        let mut slices: Vec<MPoly<C>> = vec![MPoly::zero(self.nvars); usize::from(n) + 1];
        for (k, v) in &self.terms {
            let d = usize::from(k[j]);
            let mut key = k.clone();
            key[j] = 0;
            slices[d].push(key, v.clone());
        }
        // synthetic division by (x_j - x_i): b_{d-1} = a_d + x_i b_d
        let mut quotient_slices: Vec<MPoly<C>> = vec![MPoly::zero(self.nvars); usize::from(n)];
        let mut carry = MPoly::zero(self.nvars);
        for d in (1..=usize::from(n)).rev() {
            let b = slices[d].add(&carry.mul_var_pow(i, 1));
            carry = b.clone();
            quotient_slices[d - 1] = b;
        }
        let remainder = slices[0].add(&carry.mul_var_pow(i, 1));
        if !remainder.is_zero() {
            return Err(Error::NonzeroRemainder(format!(
                "division by x{j} - x{i} leaves {} terms",
                remainder.num_terms()
            )));
        }
        let mut out = Self::zero(self.nvars);
        for (d, slice) in quotient_slices.iter().enumerate() {
            out = out.add(&slice.mul_var_pow(j, d as u16));
        }
        Ok(out)
    }
}

impl<C: RingElem> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let cs = c.to_string();
            let wrapped = if cs.contains(" + ") { format!("({cs})") } else { cs };
            let mono: Vec<String> = k
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{wrapped}")?;
            } else if wrapped == "1" {
                write!(f, "{}", mono.join(" "))?;
            } else {
                write!(f, "{wrapped} * {}", mono.join(" "))?;
            }
        }
        Ok(())
    }
}
