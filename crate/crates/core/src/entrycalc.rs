//! Matrix-entry differential calculus at small concrete size.
//!
//! Entries `M_ab` are independent commuting indeterminates (no Hermiticity
//! constraint), so `d M_ab / d M_cd = delta_ac delta_bd` and the pair
//! operator `Tr (d/dM)^2 = sum_ab d/dM_ab d/dM_ba` reproduces the Gaussian
//! propagator exactly. Traces are expanded eagerly over entries.
//!
//! The partition-function drivers decompose `exp(N Tr V)` over vertex
//! multisets: for each multiset the surviving bracket is a pure rational
//! count (the operator exponential contributes exactly one term, fixed by
//! degree matching), and the coupling monomial, `N` power and rational
//! weight are assembled outside the entry-level loop. `N` powers stay
//! integral in every surviving term; this is checked and is the entry-level
//! form of the half-power cancellation.

use crate::caps::Caps;
use crate::coeffring::{CouplingSeries, Flavor};
use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::potential::Potential;
use crate::rat::{factorial, pow_rat, rat, Rat};
use crate::wick::{for_multisets, multiset_weight};

/// Which entry alphabet a trace refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixId {
    M,
    A,
    B,
}

/// A polynomial in the `n^2` (or `2 n^2`) matrix entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryPoly {
    size: usize,
    two_flavor: bool,
    poly: MPoly<Rat>,
}

fn var_index(two_flavor: bool, id: MatrixId, a: usize, b: usize, n: usize) -> usize {
    let off = match (two_flavor, id) {
        (false, MatrixId::M) => 0,
        (true, MatrixId::A) => 0,
        (true, MatrixId::B) => n * n,
        (two, id) => panic!("matrix {id:?} not present in a two_flavor={two} polynomial"),
    };
    off + a * n + b
}

/// All index tuples `(i_1, ..., i_k)` over `0..n`.
fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for i in 0..n {
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// `Tr(X^k)` expanded over entries, as a raw polynomial.
fn trace_poly(nvars: usize, two_flavor: bool, id: MatrixId, k: u32, n: usize) -> MPoly<Rat> {
    let mut out = MPoly::zero(nvars);
    for tuple in index_tuples(n, k as usize) {
        let mut key = vec![0u16; nvars];
        for p in 0..k as usize {
            let a = tuple[p];
            let b = tuple[(p + 1) % k as usize];
            key[var_index(two_flavor, id, a, b, n)] += 1;
        }
        out.push(key, Rat::from_integer(1.into()));
    }
    out
}

/// Applies `Tr (d/dX)^k = sum_{i_1..i_k} d/dX_{i1 i2} ... d/dX_{ik i1}`.
fn apply_trace_deriv_raw(
    nvars: usize,
    two_flavor: bool,
    id: MatrixId,
    k: u32,
    n: usize,
    p: &MPoly<Rat>,
) -> MPoly<Rat> {
    let mut out = MPoly::zero(nvars);
    for tuple in index_tuples(n, k as usize) {
        let mut orders = vec![0u16; nvars];
        for q in 0..k as usize {
            let a = tuple[q];
            let b = tuple[(q + 1) % k as usize];
            orders[var_index(two_flavor, id, a, b, n)] += 1;
        }
        out = out.add(&p.derive_multi(&orders));
    }
    out
}

/// One application of the pair operator `sum_ab d/dX_ab d/dY_ba`.
fn apply_pair_op(
    nvars: usize,
    two_flavor: bool,
    x: MatrixId,
    y: MatrixId,
    n: usize,
    p: &MPoly<Rat>,
) -> MPoly<Rat> {
    let mut out = MPoly::zero(nvars);
    for a in 0..n {
        for b in 0..n {
            let mut orders = vec![0u16; nvars];
            orders[var_index(two_flavor, x, a, b, n)] += 1;
            orders[var_index(two_flavor, y, b, a, n)] += 1;
            out = out.add(&p.derive_multi(&orders));
        }
    }
    out
}

impl EntryPoly {
    pub fn constant(size: usize, two_flavor: bool, c: Rat) -> Self {
        let nvars = if two_flavor { 2 * size * size } else { size * size };
        EntryPoly { size, two_flavor, poly: MPoly::constant(nvars, c) }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn poly(&self) -> &MPoly<Rat> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn total_degree(&self) -> u32 {
        self.poly.total_degree()
    }

    /// Coefficient of the product of listed entries, e.g. `&[(M, 0, 1), (M, 1, 0)]`.
    pub fn entry_coeff(&self, entries: &[(MatrixId, usize, usize)]) -> Rat {
        let nvars = self.poly.nvars();
        let mut key = vec![0u16; nvars];
        for &(id, a, b) in entries {
            key[var_index(self.two_flavor, id, a, b, self.size)] += 1;
        }
        self.poly.coeff(&key).cloned().unwrap_or_else(|| Rat::from_integer(0.into()))
    }

    pub fn eval_zero(&self) -> Rat {
        self.poly
            .eval_zero()
            .cloned()
            .unwrap_or_else(|| Rat::from_integer(0.into()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.size, self.two_flavor), (other.size, other.two_flavor));
        EntryPoly { size: self.size, two_flavor: self.two_flavor, poly: self.poly.add(&other.poly) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.size, self.two_flavor), (other.size, other.two_flavor));
        EntryPoly { size: self.size, two_flavor: self.two_flavor, poly: self.poly.mul(&other.poly) }
    }
}

/// The trace polynomial `Tr(X^k)` at size `n`.
pub fn trace_power(id: MatrixId, k: u32, n: usize) -> EntryPoly {
    assert!(k >= 1 && n >= 1);
    let two_flavor = id != MatrixId::M;
    let nvars = if two_flavor { 2 * n * n } else { n * n };
    EntryPoly { size: n, two_flavor, poly: trace_poly(nvars, two_flavor, id, k, n) }
}

/// Applies the trace-derivative operator `Tr (d/dX)^k` to `p`.
pub fn apply_trace_deriv(id: MatrixId, k: u32, p: &EntryPoly) -> EntryPoly {
    let nvars = p.poly.nvars();
    EntryPoly {
        size: p.size,
        two_flavor: p.two_flavor,
        poly: apply_trace_deriv_raw(nvars, p.two_flavor, id, k, p.size, &p.poly),
    }
}

fn check_caps(n: usize, degree: u32, caps: &Caps) -> Result<()> {
    if n > caps.max_matrix_size {
        return Err(Error::CapExceeded(format!(
            "matrix size {n} exceeds the cap {}",
            caps.max_matrix_size
        )));
    }
    if degree > caps.max_entry_degree {
        return Err(Error::CapExceeded(format!(
            "entry degree {degree} exceeds the cap {}",
            caps.max_entry_degree
        )));
    }
    Ok(())
}

fn rat_series(flavor: Flavor, d: u32) -> CouplingSeries<Rat> {
    CouplingSeries::zero(flavor, d)
}

/// `[exp((1/2N) Tr (d/dM)^2) exp(N Tr V(M))]_{M=0}` at size `n`, as a
/// series in the couplings with `N` already evaluated at `n`.
pub fn z_diff_one(n: usize, v: &Potential, d: u32, caps: &Caps) -> Result<CouplingSeries<Rat>> {
    v.require_symbolic()?;
    v.check_flavor(Flavor::OneMatrix)?;
    check_caps(n, v.max_valency() * d, caps)?;
    let n_rat = Rat::from_integer((n as i64).into());
    let nvars = n * n;
    let terms = v.terms();
    let mut out = rat_series(Flavor::OneMatrix, d);
    for_multisets(terms, d, &mut |ns| {
        let (r, mono, vertices) = multiset_weight(terms, ns)?;
        let ell: u32 = terms.iter().zip(ns).map(|(t, &c)| t.valency * c).sum();
        if ell % 2 == 1 {
            return Ok(());
        }
        let t_apps = ell / 2;
        // build prod_k Tr(M^k)^{n_k}
        let mut p = MPoly::constant(nvars, Rat::from_integer(1.into()));
        for (term, &count) in terms.iter().zip(ns) {
            if count == 0 {
                continue;
            }
            let tr = trace_poly(nvars, false, MatrixId::M, term.valency, n);
            for _ in 0..count {
                p = p.mul(&tr);
            }
        }
        for _ in 0..t_apps {
            p = apply_pair_op(nvars, false, MatrixId::M, MatrixId::M, n, &p);
        }
        let count = p.eval_zero().cloned().unwrap_or_else(|| Rat::from_integer(0.into()));
        if count == Rat::from_integer(0.into()) {
            return Ok(());
        }
        // weights: (N lambda_k / k)^{n_k}/n_k!, operator (1/2N)^t / t!
        let value = r
            * count
            * pow_rat(&rat(1, 2), i64::from(t_apps))
            / factorial(u64::from(t_apps))
            * pow_rat(&n_rat, i64::from(vertices) - i64::from(t_apps));
        out.add_term(mono, value);
        Ok(())
    })?;
    Ok(out)
}

/// `[exp(N Tr V(d/dM)) exp((1/2N) Tr M^2)]_{M=0}`: same value as
/// [`z_diff_one`] with matrices and derivatives exchanged.
pub fn z_diff_one_swapped(
    n: usize,
    v: &Potential,
    d: u32,
    caps: &Caps,
) -> Result<CouplingSeries<Rat>> {
    v.require_symbolic()?;
    v.check_flavor(Flavor::OneMatrix)?;
    check_caps(n, v.max_valency() * d, caps)?;
    let n_rat = Rat::from_integer((n as i64).into());
    let nvars = n * n;
    let terms = v.terms();
    let tr_m2 = trace_poly(nvars, false, MatrixId::M, 2, n);
    let mut out = rat_series(Flavor::OneMatrix, d);
    for_multisets(terms, d, &mut |ns| {
        let (r, mono, vertices) = multiset_weight(terms, ns)?;
        let ell: u32 = terms.iter().zip(ns).map(|(t, &c)| t.valency * c).sum();
        if ell % 2 == 1 {
            return Ok(());
        }
        let t_apps = ell / 2;
        // (Tr M^2)^t / (t! (2N)^t), then the derivative vertices
        let mut p = MPoly::constant(nvars, Rat::from_integer(1.into()));
        for _ in 0..t_apps {
            p = p.mul(&tr_m2);
        }
        for (term, &count) in terms.iter().zip(ns) {
            for _ in 0..count {
                p = apply_trace_deriv_raw(nvars, false, MatrixId::M, term.valency, n, &p);
            }
        }
        let count = p.eval_zero().cloned().unwrap_or_else(|| Rat::from_integer(0.into()));
        if count == Rat::from_integer(0.into()) {
            return Ok(());
        }
        let value = r
            * count
            * pow_rat(&rat(1, 2), i64::from(t_apps))
            / factorial(u64::from(t_apps))
            * pow_rat(&n_rat, i64::from(vertices) - i64::from(t_apps));
        out.add_term(mono, value);
        Ok(())
    })?;
    Ok(out)
}

/// `[exp((1/N) Tr d/dA d/dB) exp(N Tr V1(A)) exp(N Tr V2(B))]_{A=B=0}`.
pub fn z_diff_two(
    n: usize,
    v1: &Potential,
    v2: &Potential,
    d: u32,
    caps: &Caps,
) -> Result<CouplingSeries<Rat>> {
    v1.require_symbolic()?;
    v2.require_symbolic()?;
    let kmax = v1.max_valency().max(v2.max_valency());
    check_caps(n, kmax * d, caps)?;
    let n_rat = Rat::from_integer((n as i64).into());
    let nvars = 2 * n * n;
    let t1 = v1.terms();
    let t2 = v2.terms();
    let mut pairs = Vec::new();
    for_multisets(t1, d, &mut |ns1| {
        let used: u32 = ns1.iter().sum();
        for_multisets(t2, d - used, &mut |ns2| {
            pairs.push((ns1.to_vec(), ns2.to_vec()));
            Ok(())
        })
    })?;
    let mut out = rat_series(Flavor::TwoMatrix, d);
    for (ns1, ns2) in pairs {
        let la: u32 = t1.iter().zip(&ns1).map(|(t, &c)| t.valency * c).sum();
        let lb: u32 = t2.iter().zip(&ns2).map(|(t, &c)| t.valency * c).sum();
        if la != lb {
            continue;
        }
        let (r1, mono1, vert1) = multiset_weight(t1, &ns1)?;
        let (r2, mono2, vert2) = multiset_weight(t2, &ns2)?;
        let mut p = MPoly::constant(nvars, Rat::from_integer(1.into()));
        for (term, &count) in t1.iter().zip(&ns1) {
            if count == 0 {
                continue;
            }
            let tr = trace_poly(nvars, true, MatrixId::A, term.valency, n);
            for _ in 0..count {
                p = p.mul(&tr);
            }
        }
        for (term, &count) in t2.iter().zip(&ns2) {
            if count == 0 {
                continue;
            }
            let tr = trace_poly(nvars, true, MatrixId::B, term.valency, n);
            for _ in 0..count {
                p = p.mul(&tr);
            }
        }
        for _ in 0..la {
            p = apply_pair_op(nvars, true, MatrixId::A, MatrixId::B, n, &p);
        }
        let count = p.eval_zero().cloned().unwrap_or_else(|| Rat::from_integer(0.into()));
        if count == Rat::from_integer(0.into()) {
            continue;
        }
        let value = r1 * r2 * count / factorial(u64::from(la))
            * pow_rat(&n_rat, i64::from(vert1 + vert2) - i64::from(la));
        out.add_term(mono1.mul(&mono2), value);
    }
    Ok(out)
}

fn z_diff_two_onematrix_impl(
    n: usize,
    v1: &Potential,
    v2: &Potential,
    d: u32,
    caps: &Caps,
    rescaled: bool,
) -> Result<CouplingSeries<Rat>> {
    v1.require_symbolic()?;
    v2.require_symbolic()?;
    let kmax = v1.max_valency().max(v2.max_valency());
    check_caps(n, kmax * d, caps)?;
    let n_rat = Rat::from_integer((n as i64).into());
    let nvars = n * n;
    let t1 = v1.terms();
    let t2 = v2.terms();
    let mut pairs = Vec::new();
    for_multisets(t1, d, &mut |ns1| {
        let used: u32 = ns1.iter().sum();
        for_multisets(t2, d - used, &mut |ns2| {
            pairs.push((ns1.to_vec(), ns2.to_vec()));
            Ok(())
        })
    })?;
    let mut out = rat_series(Flavor::TwoMatrix, d);
    for (ns1, ns2) in pairs {
        let la: u32 = t1.iter().zip(&ns1).map(|(t, &c)| t.valency * c).sum();
        let lb: u32 = t2.iter().zip(&ns2).map(|(t, &c)| t.valency * c).sum();
        let (r1, mono1, vert1) = multiset_weight(t1, &ns1)?;
        let (r2, mono2, vert2) = multiset_weight(t2, &ns2)?;
        let mut p = MPoly::constant(nvars, Rat::from_integer(1.into()));
        for (term, &count) in t2.iter().zip(&ns2) {
            if count == 0 {
                continue;
            }
            let tr = trace_poly(nvars, false, MatrixId::M, term.valency, n);
            for _ in 0..count {
                p = p.mul(&tr);
            }
        }
        for (term, &count) in t1.iter().zip(&ns1) {
            for _ in 0..count {
                p = apply_trace_deriv_raw(nvars, false, MatrixId::M, term.valency, n, &p);
            }
        }
        let count = p.eval_zero().cloned().unwrap_or_else(|| Rat::from_integer(0.into()));
        if count == Rat::from_integer(0.into()) {
            continue;
        }
        // With the 1/sqrt(N) scaling every vertex of valency k carries
        // N^{1 - k/2}; a surviving bracket forces l(a) = l(b), so the total
        // power of N is integral. The rescaled variant folds M = sqrt(N) B
        // into the weights, carrying N^{1-k} per derivative vertex and N
        // per matrix vertex; the exponent identity below is exact.
        if la != lb {
            return Err(Error::Internal(format!(
                "surviving half-integer power of N: l(a)={la}, l(b)={lb}"
            )));
        }
        let power = if rescaled {
            i64::from(vert1) - i64::from(la) + i64::from(vert2)
        } else {
            i64::from(vert1 + vert2) - i64::from(la + lb) / 2
        };
        let value = r1 * r2 * count * pow_rat(&n_rat, power);
        out.add_term(mono1.mul(&mono2), value);
    }
    Ok(out)
}

/// The single-matrix form of the coupled model:
/// `[exp(N Tr V1(N^{-1/2} d/dM)) exp(N Tr V2(N^{-1/2} M))]_{M=0}`.
pub fn z_diff_two_onematrix(
    n: usize,
    v1: &Potential,
    v2: &Potential,
    d: u32,
    caps: &Caps,
) -> Result<CouplingSeries<Rat>> {
    z_diff_two_onematrix_impl(n, v1, v2, d, caps, false)
}

/// Same quantity with the internal rescaling `M = sqrt(N) B` folded into
/// the weights; no Jacobian appears. Used to check scaling invariance.
pub fn z_diff_two_onematrix_rescaled(
    n: usize,
    v1: &Potential,
    v2: &Potential,
    d: u32,
    caps: &Caps,
) -> Result<CouplingSeries<Rat>> {
    z_diff_two_onematrix_impl(n, v1, v2, d, caps, true)
}

/// Verifies the operator identity
/// `(Tr d/dA d/dB)^{l(a)} prod_k Tr(A^k)^{a_k} = l(a)! prod_k Tr(d/dB)^k^{a_k}`
/// by applying both sides to every B-entry monomial up to the needed degree.
pub fn check_central_point(n: usize, a: &[(u32, u32)], caps: &Caps) -> Result<bool> {
    let ell: u32 = a.iter().map(|&(k, c)| k * c).sum();
    if ell > caps.max_half_edges {
        return Err(Error::CapExceeded(format!(
            "{ell} derivative assignments exceed the cap {}",
            caps.max_half_edges
        )));
    }
    check_caps(n, ell + 1, caps)?;
    let nvars = 2 * n * n;
    // prod_k Tr(A^k)^{a_k}
    let mut pa = MPoly::constant(nvars, Rat::from_integer(1.into()));
    for &(k, c) in a {
        let tr = trace_poly(nvars, true, MatrixId::A, k, n);
        for _ in 0..c {
            pa = pa.mul(&tr);
        }
    }
    // basis of B monomials up to degree l(a) + 1
    let bvars: Vec<usize> = (n * n..2 * n * n).collect();
    let mut basis: Vec<Vec<u16>> = vec![vec![0u16; nvars]];
    for _ in 0..ell + 1 {
        let mut next = Vec::new();
        for key in &basis {
            for &v in &bvars {
                let mut k2 = key.clone();
                k2[v] += 1;
                next.push(k2);
            }
        }
        basis.extend(next.clone());
        basis = {
            let mut seen = std::collections::BTreeSet::new();
            basis.into_iter().filter(|k| seen.insert(k.clone())).collect()
        };
    }
    for key in basis {
        let f = MPoly::monomial(
            nvars,
            &key.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect::<Vec<_>>(),
            Rat::from_integer(1.into()),
        );
        // left: (Tr dA dB)^l (PA * f), then A = 0
        let mut lhs = pa.mul(&f);
        for _ in 0..ell {
            lhs = apply_pair_op(nvars, true, MatrixId::A, MatrixId::B, n, &lhs);
        }
        for av in 0..n * n {
            lhs = lhs.set_var_zero(av);
        }
        // right: l! prod_k (Tr (d/dB)^k)^{a_k} f
        let mut rhs = f;
        for &(k, c) in a {
            for _ in 0..c {
                rhs = apply_trace_deriv_raw(nvars, true, MatrixId::B, k, n, &rhs);
            }
        }
        rhs = rhs.scale_rat(&factorial(u64::from(ell)));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Coupling, CouplingMonomial};
    use crate::rat::rat_int;
    use crate::wick::{z_integral, ModelPotentials};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn trace_power_small() {
        // Tr(M) at n=2
        let t = trace_power(MatrixId::M, 1, 2);
        assert_eq!(t.entry_coeff(&[(MatrixId::M, 0, 0)]), rat_int(1));
        assert_eq!(t.entry_coeff(&[(MatrixId::M, 1, 1)]), rat_int(1));
        assert_eq!(t.poly().num_terms(), 2);
        // Tr(M^2) at n=1
        let t = trace_power(MatrixId::M, 2, 1);
        assert_eq!(t.entry_coeff(&[(MatrixId::M, 0, 0), (MatrixId::M, 0, 0)]), rat_int(1));
        assert_eq!(t.poly().num_terms(), 1);
        // Tr(M^2) at n=2: M11^2 + 2 M12 M21 + M22^2
        let t = trace_power(MatrixId::M, 2, 2);
        assert_eq!(t.entry_coeff(&[(MatrixId::M, 0, 0), (MatrixId::M, 0, 0)]), rat_int(1));
        assert_eq!(t.entry_coeff(&[(MatrixId::M, 0, 1), (MatrixId::M, 1, 0)]), rat_int(2));
        assert_eq!(t.entry_coeff(&[(MatrixId::M, 1, 1), (MatrixId::M, 1, 1)]), rat_int(1));
        assert_eq!(t.poly().num_terms(), 3);
    }

    #[test]
    fn trace_deriv_examples() {
        // Tr(d/dM)^2 on Tr(M^2) at n=2 is the constant 2 n^2 = 8
        let t = trace_power(MatrixId::M, 2, 2);
        let d = apply_trace_deriv(MatrixId::M, 2, &t);
        assert_eq!(d.eval_zero(), rat_int(8));
        assert_eq!(d.total_degree(), 0);
        // Tr(d/dM) on Tr(M) is n
        for n in 1..=3 {
            let t = trace_power(MatrixId::M, 1, n);
            assert_eq!(apply_trace_deriv(MatrixId::M, 1, &t).eval_zero(), rat_int(n as i64));
        }
        // on a constant: 0
        let one = EntryPoly::constant(2, false, rat_int(1));
        assert!(apply_trace_deriv(MatrixId::M, 2, &one).is_zero());
    }

    #[test]
    fn z_diff_one_trivial() {
        let z = z_diff_one(2, &Potential::zero(), 3, &caps()).unwrap();
        assert!(z.is_one());
    }

    #[test]
    fn z_diff_one_quartic() {
        // n=1: 1 + (3/4) l4; n=2: 1 + (9/4) l4, matching the pairing oracle
        let v = Potential::lambda(4);
        let mono = CouplingMonomial::single(Coupling::Lambda(4), 1);
        let z1 = z_diff_one(1, &v, 1, &caps()).unwrap();
        assert_eq!(z1.coeff(&mono), rat(3, 4));
        let z2 = z_diff_one(2, &v, 1, &caps()).unwrap();
        assert_eq!(z2.coeff(&mono), rat(9, 4));
        // against the integral side, N substituted
        for n in 1..=2u32 {
            let zi = z_integral(&ModelPotentials::One(v.clone()), 1, &caps()).unwrap();
            let zi = zi.substitute_n(&rat_int(i64::from(n))).rationalized().unwrap();
            let zd = z_diff_one(n as usize, &v, 1, &caps()).unwrap();
            assert_eq!(zi, zd);
        }
    }

    #[test]
    fn z_diff_one_swapped_matches() {
        let v = Potential::lambda(4);
        let z = z_diff_one_swapped(1, &v, 1, &caps()).unwrap();
        assert_eq!(z.coeff(&CouplingMonomial::single(Coupling::Lambda(4), 1)), rat(3, 4));
        let v = Potential::lambda(3);
        for n in 1..=2usize {
            let a = z_diff_one(n, &v, 2, &caps()).unwrap();
            let b = z_diff_one_swapped(n, &v, 2, &caps()).unwrap();
            assert_eq!(a, b);
            let zi = z_integral(&ModelPotentials::One(v.clone()), 2, &caps())
                .unwrap()
                .substitute_n(&rat_int(n as i64))
                .rationalized()
                .unwrap();
            assert_eq!(a, zi);
        }
    }

    #[test]
    fn z_diff_two_cubic() {
        let v1 = Potential::alpha(3);
        let v2 = Potential::beta(3);
        let mono =
            CouplingMonomial::single(Coupling::Alpha(3), 1).mul_pow(Coupling::Beta(3), 1);
        // n=1: (N^2+1)/3 at N=1 is 2/3
        let z = z_diff_two(1, &v1, &v2, 2, &caps()).unwrap();
        assert_eq!(z.coeff(&mono), rat(2, 3));
        // n=2: 5/3
        let z = z_diff_two(2, &v1, &v2, 2, &caps()).unwrap();
        assert_eq!(z.coeff(&mono), rat(5, 3));
    }

    #[test]
    fn z_diff_two_onematrix_matches() {
        let v1 = Potential::alpha(3);
        let v2 = Potential::beta(3);
        for n in 1..=2usize {
            let two = z_diff_two(n, &v1, &v2, 2, &caps()).unwrap();
            let one = z_diff_two_onematrix(n, &v1, &v2, 2, &caps()).unwrap();
            assert_eq!(two, one);
            let rescaled = z_diff_two_onematrix_rescaled(n, &v1, &v2, 2, &caps()).unwrap();
            assert_eq!(one, rescaled, "rescaling needs no Jacobian");
        }
        // quartic V1 / quadratic V2
        let v1 = Potential::alpha(4);
        let v2 = Potential::beta(2);
        let two = z_diff_two(2, &v1, &v2, 2, &caps()).unwrap();
        let one = z_diff_two_onematrix(2, &v1, &v2, 2, &caps()).unwrap();
        assert_eq!(two, one);
        let zi = z_integral(&ModelPotentials::Two(v1, v2), 2, &caps())
            .unwrap()
            .substitute_n(&rat_int(2))
            .rationalized()
            .unwrap();
        assert_eq!(two, zi);
    }

    #[test]
    fn central_point_identity() {
        // single assignment
        assert!(check_central_point(2, &[(1, 1)], &caps()).unwrap());
        // k=2 on Tr(B^2): both sides 2 n^2
        assert!(check_central_point(2, &[(2, 1)], &caps()).unwrap());
        // k=3
        assert!(check_central_point(2, &[(3, 1)], &caps()).unwrap());
        // a product of vertices
        assert!(check_central_point(2, &[(1, 1), (2, 1)], &caps()).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        let v = Potential::lambda(4);
        assert!(matches!(
            z_diff_one(7, &v, 1, &caps()),
            Err(Error::CapExceeded(_))
        ));
    }
}
