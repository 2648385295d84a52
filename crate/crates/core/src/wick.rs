//! Formal Gaussian integration via Wick's theorem.
//!
//! The expectation of a product of traces against the Gaussian weight is a
//! sum over pairings of half-edges. Each pairing closes the trace indices
//! into faces; counting faces yields the weight `N^{F - E}`, and the
//! Euler relation `chi = V - E + F = 2K - 2g` grades every pairing by the
//! genus of its ribbon graph. The one-matrix flavor pairs half-edges of a
//! single kind, the two-matrix flavor matches A half-edges to B half-edges
//! bijectively, which makes the graphs bipartite.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::caps::Caps;
use crate::coeffring::{ConstScalar, Coupling, CouplingMonomial, CouplingSeries, Flavor, NLaurent};
use crate::error::{Error, Result};
use crate::potential::{Potential, PotentialTerm};
use crate::rat::{factorial, pow_rat, Rat};

/// A product of traces: `prod_k Tr(M^k)^{n_k}`, or
/// `prod_k Tr(A^k)^{a_k} Tr(B^k)^{b_k}` in the two-matrix flavor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceMonomial {
    One { counts: BTreeMap<u32, u32> },
    Two { a: BTreeMap<u32, u32>, b: BTreeMap<u32, u32> },
}

fn counts_of(entries: &[(u32, u32)]) -> BTreeMap<u32, u32> {
    let mut m = BTreeMap::new();
    for &(k, n) in entries {
        if n > 0 {
            assert!(k >= 1, "trace valency must be >= 1");
            *m.entry(k).or_insert(0) += n;
        }
    }
    m
}

impl TraceMonomial {
    /// `prod Tr(M^k)^{n}` from (valency, count) pairs.
    pub fn one(entries: &[(u32, u32)]) -> Self {
        TraceMonomial::One { counts: counts_of(entries) }
    }

    /// Two-flavor product from (valency, count) pairs for A and B.
    pub fn two(a: &[(u32, u32)], b: &[(u32, u32)]) -> Self {
        TraceMonomial::Two { a: counts_of(a), b: counts_of(b) }
    }

    pub fn flavor(&self) -> Flavor {
        match self {
            TraceMonomial::One { .. } => Flavor::OneMatrix,
            TraceMonomial::Two { .. } => Flavor::TwoMatrix,
        }
    }

    /// Total half-edge count (both kinds together).
    pub fn half_edges(&self) -> u32 {
        let (la, lb) = self.half_edge_split();
        la + lb
    }

    /// `(l(a), l(b))` for the two-matrix flavor, `(l, 0)` otherwise.
    pub fn half_edge_split(&self) -> (u32, u32) {
        match self {
            TraceMonomial::One { counts } => (counts.iter().map(|(k, n)| k * n).sum(), 0),
            TraceMonomial::Two { a, b } => (
                a.iter().map(|(k, n)| k * n).sum(),
                b.iter().map(|(k, n)| k * n).sum(),
            ),
        }
    }

    /// Whether the Gaussian expectation is structurally zero.
    pub fn vanishes(&self) -> bool {
        match self {
            TraceMonomial::One { .. } => self.half_edges() % 2 == 1,
            TraceMonomial::Two { .. } => {
                let (la, lb) = self.half_edge_split();
                la != lb
            }
        }
    }

    /// Lays out half-edges in vertex cycles: returns (vertex id per
    /// half-edge, rotation permutation sigma).
    fn layout(&self) -> (Vec<usize>, Vec<usize>) {
        let mut vertex_of: Vec<usize> = Vec::new();
        let mut rotation: Vec<usize> = Vec::new();
        let mut next_vertex = 0usize;
        let mut lay = |counts: &BTreeMap<u32, u32>,
                       vertex_of: &mut Vec<usize>,
                       rotation: &mut Vec<usize>,
                       next_vertex: &mut usize| {
            for (&k, &n) in counts {
                for _ in 0..n {
                    let vid = *next_vertex;
                    *next_vertex += 1;
                    let start = rotation.len();
                    for h in 0..k as usize {
                        vertex_of.push(vid);
                        rotation.push(start + (h + 1) % k as usize);
                    }
                }
            }
        };
        match self {
            TraceMonomial::One { counts } => {
                lay(counts, &mut vertex_of, &mut rotation, &mut next_vertex)
            }
            TraceMonomial::Two { a, b } => {
                lay(a, &mut vertex_of, &mut rotation, &mut next_vertex);
                lay(b, &mut vertex_of, &mut rotation, &mut next_vertex);
            }
        }
        (vertex_of, rotation)
    }
}

/// A Wick pairing: a fixed-point-free involution on half-edge labels. In
/// the two-matrix flavor it matches A half-edges to B half-edges only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub matching: Vec<usize>,
}

impl Pairing {
    pub fn is_involution(&self) -> bool {
        self.matching
            .iter()
            .enumerate()
            .all(|(h, &m)| m != h && self.matching[m] == h)
    }
}

/// Counts of a ribbon graph: vertices, edges, faces, connected components
/// and genus, tied together by `chi = V - E + F = 2K - 2g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RibbonData {
    pub v: u32,
    pub e: u32,
    pub f: u32,
    pub k: u32,
    pub g: u32,
}

impl RibbonData {
    pub fn chi(&self) -> i64 {
        i64::from(self.v) - i64::from(self.e) + i64::from(self.f)
    }

    /// The weight `N^{F - E}` the pairing contributes.
    pub fn n_weight(&self) -> NLaurent {
        NLaurent::n_pow(i64::from(self.f) - i64::from(self.e))
    }
}

/// Streaming enumeration of perfect matchings on `0..n`, pairing the
/// lowest free label with every larger free label. Yields (n-1)!! items.
struct MatchingIter {
    n: usize,
    stack: Vec<(usize, usize)>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl MatchingIter {
    fn new(n: usize) -> Self {
        MatchingIter {
            n,
            stack: Vec::new(),
            used: vec![false; n],
            started: false,
            done: n % 2 == 1,
        }
    }

    fn lowest_free(&self) -> Option<usize> {
        self.used.iter().position(|&u| !u)
    }

    /// Completes the partial matching by always pairing the two lowest
    /// free labels; always possible for an even number of free labels.
    fn descend(&mut self) {
        while let Some(f) = self.lowest_free() {
            self.used[f] = true;
            let j = self.lowest_free().expect("odd number of free half-edges");
            self.used[j] = true;
            self.stack.push((f, j));
        }
    }

    fn emit(&self) -> Pairing {
        let mut matching = vec![0usize; self.n];
        for &(a, b) in &self.stack {
            matching[a] = b;
            matching[b] = a;
        }
        Pairing { matching }
    }

    /// Backtracks to the deepest frame with an untried partner.
    fn advance(&mut self) -> bool {
        while let Some((f, j)) = self.stack.pop() {
            self.used[j] = false;
            if let Some(j2) = (j + 1..self.n).find(|&c| !self.used[c]) {
                self.used[j2] = true;
                self.stack.push((f, j2));
                self.descend();
                return true;
            }
            self.used[f] = false;
        }
        false
    }
}

impl Iterator for MatchingIter {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.n == 0 {
                self.done = true;
                return Some(Pairing { matching: Vec::new() });
            }
            self.descend();
            return Some(self.emit());
        }
        if self.advance() {
            Some(self.emit())
        } else {
            self.done = true;
            None
        }
    }
}

/// Enumerates the Wick pairings of `t` as a lazy stream: `(l-1)!!`
/// pairings in the one-matrix flavor, `l(a)!` A-to-B matchings in the
/// two-matrix flavor. Parity or balance violations yield an empty stream;
/// exceeding the half-edge cap is a resource error.
pub fn enumerate_pairings(
    t: &TraceMonomial,
    caps: &Caps,
) -> Result<Box<dyn Iterator<Item = Pairing>>> {
    let total = t.half_edges();
    if total > caps.max_half_edges {
        return Err(Error::CapExceeded(format!(
            "{total} half-edges exceed the enumeration cap {}",
            caps.max_half_edges
        )));
    }
    if t.vanishes() {
        return Ok(Box::new(std::iter::empty()));
    }
    match t {
        TraceMonomial::One { .. } => Ok(Box::new(MatchingIter::new(total as usize))),
        TraceMonomial::Two { .. } => {
            let (la, _) = t.half_edge_split();
            let la = la as usize;
            let iter = (0..la).permutations(la).map(move |perm| {
                let mut matching = vec![0usize; 2 * la];
                for (i, &p) in perm.iter().enumerate() {
                    matching[i] = la + p;
                    matching[la + p] = i;
                }
                Pairing { matching }
            });
            Ok(Box::new(iter))
        }
    }
}

fn count_cycles(perm: &[usize]) -> u32 {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            h = perm[h];
        }
    }
    cycles
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
    fn components(&mut self) -> u32 {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count() as u32
    }
}

/// Face, component and genus counts for one pairing. Faces are the cycles
/// of `sigma . alpha`; components come from a union-find over vertices.
/// The Euler relation is asserted with an integer genus `g >= 0`.
pub fn ribbon_data(t: &TraceMonomial, p: &Pairing) -> Result<RibbonData> {
    let (vertex_of, rotation) = t.layout();
    let total = vertex_of.len();
    assert_eq!(p.matching.len(), total, "pairing does not fit the trace monomial");
    debug_assert!(p.is_involution());

    let composed: Vec<usize> = (0..total).map(|h| rotation[p.matching[h]]).collect();
    let f = count_cycles(&composed);

    let v = vertex_of.last().map(|&x| x as u32 + 1).unwrap_or(0);
    let e = (total / 2) as u32;
    let mut uf = UnionFind::new(v as usize);
    for h in 0..total {
        uf.union(vertex_of[h], vertex_of[p.matching[h]]);
    }
    let k = uf.components();

    let chi = i64::from(v) - i64::from(e) + i64::from(f);
    let two_g = 2 * i64::from(k) - chi;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(Error::Internal(format!(
            "Euler relation failed: V={v} E={e} F={f} K={k} gives 2g={two_g}"
        )));
    }
    Ok(RibbonData { v, e, f, k, g: (two_g / 2) as u32 })
}

/// The Gaussian expectation of a trace monomial: the sum of `N^{F-E}`
/// over all Wick pairings, zero when parity or balance fails. Panics past
/// the default half-edge cap; use [`try_gaussian_expectation`] to control
/// the cap explicitly.
pub fn gaussian_expectation(t: &TraceMonomial) -> NLaurent {
    try_gaussian_expectation(t, &Caps::default()).expect("half-edge cap exceeded")
}

pub fn try_gaussian_expectation(t: &TraceMonomial, caps: &Caps) -> Result<NLaurent> {
    if t.half_edges() == 0 {
        return Ok(NLaurent::one());
    }
    let mut acc = NLaurent::zero();
    for p in enumerate_pairings(t, caps)? {
        let data = ribbon_data(t, &p)?;
        acc = acc.add(&data.n_weight());
    }
    Ok(acc)
}

/// The full ribbon census of a trace monomial: one row per pairing.
pub fn census(t: &TraceMonomial, caps: &Caps) -> Result<Vec<RibbonData>> {
    if t.half_edges() == 0 {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for p in enumerate_pairings(t, caps)? {
        rows.push(ribbon_data(t, &p)?);
    }
    Ok(rows)
}

/// One- or two-matrix model data for the integral-side expansion.
#[derive(Clone, Debug)]
pub enum ModelPotentials {
    One(Potential),
    Two(Potential, Potential),
}

impl ModelPotentials {
    pub fn flavor(&self) -> Flavor {
        match self {
            ModelPotentials::One(_) => Flavor::OneMatrix,
            ModelPotentials::Two(_, _) => Flavor::TwoMatrix,
        }
    }
}

/// Enumerates multisets `{n_t >= 0}` over `terms` with total count at most
/// `budget`, invoking `f` on each (including the empty one).
pub(crate) fn for_multisets(
    terms: &[PotentialTerm],
    budget: u32,
    f: &mut impl FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    fn rec(
        terms: &[PotentialTerm],
        budget: u32,
        idx: usize,
        cur: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]) -> Result<()>,
    ) -> Result<()> {
        if idx == terms.len() {
            return f(cur);
        }
        for n in 0..=budget {
            cur.push(n);
            rec(terms, budget - n, idx + 1, cur, f)?;
            cur.pop();
        }
        Ok(())
    }
    let mut cur = Vec::new();
    rec(terms, budget, 0, &mut cur, f)
}

/// Weight of a vertex multiset: `prod_t (scalar_t / k_t)^{n_t} / n_t!` as a
/// rational, the coupling monomial `prod_t sym_t^{n_t}`, and the total
/// vertex count (each vertex also carries one power of `N`).
pub(crate) fn multiset_weight(
    terms: &[PotentialTerm],
    ns: &[u32],
) -> Result<(Rat, CouplingMonomial, u32)> {
    let mut r = Rat::from_integer(1.into());
    let mut mono = CouplingMonomial::unit();
    let mut vertices = 0u32;
    for (t, &n) in terms.iter().zip(ns) {
        if n == 0 {
            continue;
        }
        vertices += n;
        let base = &t.scalar / Rat::from_integer(i64::from(t.valency).into());
        r *= pow_rat(&base, i64::from(n)) / factorial(u64::from(n));
        match t.coupling {
            Some(c) => mono = mono.mul_pow(c, n),
            None => {
                return Err(Error::InvalidPotential(
                    "graded expansion needs a coupling symbol on every term".into(),
                ))
            }
        }
    }
    Ok((r, mono, vertices))
}

fn valency_counts(terms: &[PotentialTerm], ns: &[u32]) -> Vec<(u32, u32)> {
    terms
        .iter()
        .zip(ns)
        .filter(|(_, &n)| n > 0)
        .map(|(t, &n)| (t.valency, n))
        .collect()
}

/// The partition function as a formal integral: the sum over vertex
/// multisets of grade at most `d` of the multiset weight times the
/// Gaussian expectation of the corresponding trace monomial. `N` stays
/// symbolic; the grade-0 term is 1.
pub fn z_integral(model: &ModelPotentials, d: u32, caps: &Caps) -> Result<CouplingSeries<NLaurent>> {
    let flavor = model.flavor();
    let mut out = CouplingSeries::zero(flavor, d);
    match model {
        ModelPotentials::One(v) => {
            v.require_symbolic()?;
            v.check_flavor(flavor)?;
            let terms = v.terms();
            for_multisets(terms, d, &mut |ns| {
                let t = TraceMonomial::one(&valency_counts(terms, ns));
                if t.vanishes() {
                    return Ok(());
                }
                let (r, mono, vertices) = multiset_weight(terms, ns)?;
                let expectation = try_gaussian_expectation(&t, caps)?;
                let coeff = expectation.mul(&NLaurent::monomial(r, i64::from(vertices)));
                out.add_term(mono, coeff);
                Ok(())
            })?;
        }
        ModelPotentials::Two(v1, v2) => {
            v1.require_symbolic()?;
            v2.require_symbolic()?;
            let t1 = v1.terms();
            let t2 = v2.terms();
            let mut pairs: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
            for_multisets(t1, d, &mut |ns1| {
                let used: u32 = ns1.iter().sum();
                for_multisets(t2, d - used, &mut |ns2| {
                    pairs.push((ns1.to_vec(), ns2.to_vec()));
                    Ok(())
                })
            })?;
            for (ns1, ns2) in pairs {
                let t = TraceMonomial::two(&valency_counts(t1, &ns1), &valency_counts(t2, &ns2));
                if t.vanishes() {
                    continue;
                }
                let (r1, mono1, vert1) = multiset_weight(t1, &ns1)?;
                let (r2, mono2, vert2) = multiset_weight(t2, &ns2)?;
                let expectation = try_gaussian_expectation(&t, caps)?;
                let coeff =
                    expectation.mul(&NLaurent::monomial(&r1 * &r2, i64::from(vert1 + vert2)));
                out.add_term(mono1.mul(&mono2), coeff);
            }
        }
    }
    Ok(out)
}

/// Which formal moment rule to use for the pair integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentKind {
    Real,
    Imaginary,
}

/// The formal two-variable moment: for the real kind
/// `delta_{n,m} (2 pi / i) (scale N)^{-(n+1)} n!`, and for the imaginary
/// kind `delta_{n,m} 2 pi i (i scale N)^{-(n+1)} n!`.
pub fn formal_pair_moment(n: u32, m: u32, kind: MomentKind, scale: &Rat) -> ConstScalar {
    if n != m {
        return ConstScalar::zero();
    }
    let np1 = i64::from(n) + 1;
    let r = Rat::from_integer(2.into()) * factorial(u64::from(n)) * pow_rat(scale, -np1);
    match kind {
        MomentKind::Real => ConstScalar::monomial(r, -2 * np1, 2, 0, -1),
        MomentKind::Imaginary => ConstScalar::monomial(r, -2 * np1, 2, 0, 1 - np1),
    }
}

/// The `(i, j)` entry of the coupled moment table
/// `int e^{-Nxy} x^i e^{N V1(x)} y^j e^{N V2(y)}`, expanded through the
/// formal moment rules to grade `d`. For the imaginary kind the `x` slot
/// is read as `i p`, so each `x` power contributes a factor `i`.
pub fn hankel_pair_entry(
    v1: &Potential,
    v2: &Potential,
    i: u32,
    j: u32,
    d: u32,
    kind: MomentKind,
) -> Result<CouplingSeries<ConstScalar>> {
    v1.require_symbolic()?;
    v2.require_symbolic()?;
    let t1 = v1.terms();
    let t2 = v2.terms();
    let mut pairs: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for_multisets(t1, d, &mut |ns1| {
        let used: u32 = ns1.iter().sum();
        for_multisets(t2, d - used, &mut |ns2| {
            pairs.push((ns1.to_vec(), ns2.to_vec()));
            Ok(())
        })
    })?;
    let mut out = CouplingSeries::zero(Flavor::TwoMatrix, d);
    for (ns1, ns2) in pairs {
        let (r1, mono1, vert1) = multiset_weight(t1, &ns1)?;
        let (r2, mono2, vert2) = multiset_weight(t2, &ns2)?;
        let la: u32 = t1.iter().zip(&ns1).map(|(t, &n)| t.valency * n).sum();
        let lb: u32 = t2.iter().zip(&ns2).map(|(t, &n)| t.valency * n).sum();
        let xp = i + la;
        let yp = j + lb;
        let mut moment = formal_pair_moment(xp, yp, kind, &Rat::from_integer(1.into()));
        if kind == MomentKind::Imaginary {
            moment = moment.mul(&ConstScalar::i_pow(i64::from(xp)));
        }
        if moment.is_zero() {
            continue;
        }
        let coeff = moment
            .mul(&ConstScalar::n_pow(i64::from(vert1 + vert2)))
            .mul_rat(&(&r1 * &r2));
        out.add_term(mono1.mul(&mono2), coeff);
    }
    Ok(out)
}

/// Verifies, term by term to grade `d`, that the imaginary-kind expansion
/// of the `(i, j)` moment entry equals `i` times the real-kind expansion.
pub fn check_imaginary_change_of_variables(
    v1: &Potential,
    v2: &Potential,
    i: u32,
    j: u32,
    d: u32,
) -> Result<bool> {
    let real = hankel_pair_entry(v1, v2, i, j, d, MomentKind::Real)?;
    let imag = hankel_pair_entry(v1, v2, i, j, d, MomentKind::Imaginary)?;
    Ok(imag == real.scale(&ConstScalar::i_pow(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    /// Independent face counter: composes two explicit permutations and
    /// counts cycles, sharing no code with `ribbon_data`.
    fn oracle_faces(rotation: &[usize], matching: &[usize]) -> u32 {
        let n = rotation.len();
        let mut seen = vec![false; n];
        let mut faces = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            faces += 1;
            let mut h = s;
            while !seen[h] {
                seen[h] = true;
                h = rotation[matching[h]];
            }
        }
        faces
    }

    #[test]
    fn pairing_counts() {
        let caps = Caps::default();
        let t2 = TraceMonomial::one(&[(2, 1)]);
        assert_eq!(enumerate_pairings(&t2, &caps).unwrap().count(), 1);
        let t4 = TraceMonomial::one(&[(4, 1)]);
        assert_eq!(enumerate_pairings(&t4, &caps).unwrap().count(), 3);
        let t33 = TraceMonomial::two(&[(3, 1)], &[(3, 1)]);
        assert_eq!(enumerate_pairings(&t33, &caps).unwrap().count(), 6);
        // parity violation: empty stream
        let t3 = TraceMonomial::one(&[(3, 1)]);
        assert_eq!(enumerate_pairings(&t3, &caps).unwrap().count(), 0);
        // balance violation: empty stream
        let t34 = TraceMonomial::two(&[(3, 1)], &[(4, 1)]);
        assert_eq!(enumerate_pairings(&t34, &caps).unwrap().count(), 0);
        // cap: resource error
        let big = TraceMonomial::one(&[(18, 1)]);
        assert!(matches!(enumerate_pairings(&big, &caps), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn pairings_are_involutions_with_euler_relation() {
        let caps = Caps::default();
        for t in [
            TraceMonomial::one(&[(4, 1), (2, 1)]),
            TraceMonomial::one(&[(3, 2)]),
            TraceMonomial::two(&[(3, 1), (2, 1)], &[(3, 1), (2, 1)]),
        ] {
            for p in enumerate_pairings(&t, &caps).unwrap() {
                assert!(p.is_involution());
                let d = ribbon_data(&t, &p).unwrap();
                assert_eq!(d.chi(), 2 * i64::from(d.k) - 2 * i64::from(d.g));
                if let TraceMonomial::Two { .. } = t {
                    let (la, _) = t.half_edge_split();
                    for h in 0..la as usize {
                        assert!(p.matching[h] >= la as usize, "A pairs to B only");
                    }
                }
            }
        }
    }

    #[test]
    fn ribbon_data_trace_m2() {
        // one vertex of valency 2, its unique pairing: V=1, E=1, F=2, g=0
        let t = TraceMonomial::one(&[(2, 1)]);
        let p = enumerate_pairings(&t, &Caps::default())
            .unwrap()
            .next()
            .unwrap();
        let d = ribbon_data(&t, &p).unwrap();
        assert_eq!((d.v, d.e, d.f, d.k, d.g), (1, 1, 2, 1, 0));
        assert_eq!(oracle_faces(&[1, 0], &p.matching), 2);
    }

    #[test]
    fn ribbon_data_trace_m4_census() {
        // Tr(M^4): rotation (0 1 2 3); the crossing pairing has F=1, g=1,
        // the two planar ones have F=3, g=0.
        let t = TraceMonomial::one(&[(4, 1)]);
        let rotation = [1, 2, 3, 0];
        let mut genus_counts = [0u32; 2];
        for p in enumerate_pairings(&t, &Caps::default()).unwrap() {
            let d = ribbon_data(&t, &p).unwrap();
            assert_eq!(d.f, oracle_faces(&rotation, &p.matching));
            genus_counts[d.g as usize] += 1;
            if p.matching == vec![2, 3, 0, 1] {
                assert_eq!((d.f, d.g), (1, 1), "crossing pairing lives on the torus");
            }
        }
        assert_eq!(genus_counts, [2, 1]);
    }

    #[test]
    fn ribbon_data_two_matrix_cyclic() {
        // Tr(A^3) Tr(B^3): the orientation-compatible matching
        // 0-3, 1-5, 2-4 glues two triangles into a sphere: F=3, g=0.
        let t = TraceMonomial::two(&[(3, 1)], &[(3, 1)]);
        let p = Pairing { matching: vec![3, 5, 4, 0, 2, 1] };
        let d = ribbon_data(&t, &p).unwrap();
        assert_eq!((d.f, d.k, d.g), (3, 1, 0));
        assert_eq!(d.chi(), 2);
        // the in-phase matching i -> 3 + i closes into a torus instead
        let q = Pairing { matching: vec![3, 4, 5, 0, 1, 2] };
        let d = ribbon_data(&t, &q).unwrap();
        assert_eq!((d.f, d.k, d.g), (1, 1, 1));
    }

    #[test]
    fn gaussian_expectation_values() {
        // odd half-edge count vanishes
        assert!(gaussian_expectation(&TraceMonomial::one(&[(3, 1)])).is_zero());
        // Tr(M^4): brute force over the 3 pairings gives 2N + N^{-1}
        let e4 = gaussian_expectation(&TraceMonomial::one(&[(4, 1)]));
        let expect = NLaurent::monomial(rat_int(2), 1).add(&NLaurent::n_pow(-1));
        assert_eq!(e4, expect);
        // Tr(A^3) Tr(B^3): 6 matchings give 3 + 3 N^{-2}
        let e33 = gaussian_expectation(&TraceMonomial::two(&[(3, 1)], &[(3, 1)]));
        let expect = NLaurent::of_int(3).add(&NLaurent::monomial(rat_int(3), -2));
        assert_eq!(e33, expect);
    }

    #[test]
    fn bivalent_products_planar_dominance() {
        // (Tr M^2)^m: every pairing has genus 0; the top power N^m has
        // coefficient 1 (the all-self-paired configuration), and N = 1
        // counts all (2m-1)!! pairings.
        for m in 1..=4u32 {
            let t = TraceMonomial::one(&[(2, m)]);
            let e = gaussian_expectation(&t);
            assert_eq!(e.coeff(i64::from(m)), rat_int(1));
            assert!(e.powers().all(|(&k, _)| k <= i64::from(m)));
            assert_eq!(
                e.substitute_n(&rat_int(1)).as_rat().unwrap(),
                crate::rat::double_factorial_odd(u64::from(m))
            );
            for p in enumerate_pairings(&t, &Caps::default()).unwrap() {
                assert_eq!(ribbon_data(&t, &p).unwrap().g, 0);
            }
        }
    }

    #[test]
    fn z_integral_trivial() {
        let z = z_integral(&ModelPotentials::One(Potential::zero()), 3, &Caps::default()).unwrap();
        assert!(z.is_one());
    }

    #[test]
    fn z_integral_quartic() {
        // V = l4 x^4/4 at D = 1: 1 + l4 (2N^2 + 1)/4
        let z = z_integral(&ModelPotentials::One(Potential::lambda(4)), 1, &Caps::default())
            .unwrap();
        let mono = CouplingMonomial::single(Coupling::Lambda(4), 1);
        let expect = NLaurent::monomial(rat(1, 2), 2).add(&NLaurent::of_rat(rat(1, 4)));
        assert_eq!(z.coeff(&mono), expect);
        assert_eq!(z.grade0(), NLaurent::one());
    }

    #[test]
    fn z_integral_cubic_cubic() {
        // V1 = a3 x^3/3, V2 = b3 x^3/3 at D = 2: 1 + a3 b3 (N^2 + 1)/3
        let z = z_integral(
            &ModelPotentials::Two(Potential::alpha(3), Potential::beta(3)),
            2,
            &Caps::default(),
        )
        .unwrap();
        let mono =
            CouplingMonomial::single(Coupling::Alpha(3), 1).mul_pow(Coupling::Beta(3), 1);
        let expect = NLaurent::monomial(rat(1, 3), 2).add(&NLaurent::of_rat(rat(1, 3)));
        assert_eq!(z.coeff(&mono), expect);
        assert_eq!(z.num_terms(), 2);
    }

    #[test]
    fn z_integral_bipartite() {
        // no surviving monomial with l(a) != l(b)
        let v1 = Potential::alpha(2).join(&Potential::alpha(3)).unwrap();
        let v2 = Potential::beta(2).join(&Potential::beta(3)).unwrap();
        let z = z_integral(&ModelPotentials::Two(v1, v2), 3, &Caps::default()).unwrap();
        assert!(z.num_terms() > 1);
        for (m, _) in z.terms() {
            let la: u32 = m
                .exps()
                .map(|(c, e)| match c {
                    Coupling::Alpha(k) => k * e,
                    _ => 0,
                })
                .sum();
            let lb: u32 = m
                .exps()
                .map(|(c, e)| match c {
                    Coupling::Beta(k) => k * e,
                    _ => 0,
                })
                .sum();
            assert_eq!(la, lb, "unbalanced monomial {m} survived");
        }
    }

    #[test]
    fn free_energy_genus_grading() {
        // log Z carries only powers N^{2-2g}, g >= 0
        let v = Potential::lambda(3).join(&Potential::lambda(4)).unwrap();
        let z = z_integral(&ModelPotentials::One(v), 3, &Caps::default()).unwrap();
        let f = z.log().unwrap();
        assert!(f.num_terms() > 2);
        for (mono, coeff) in f.terms() {
            for (&p, _) in coeff.powers() {
                assert!(p <= 2 && p % 2 == 0, "power N^{p} in free energy at {mono}");
            }
        }
    }

    #[test]
    fn formal_moments() {
        let one = rat_int(1);
        // (0,0) real: 2 pi / (i N)
        assert_eq!(
            formal_pair_moment(0, 0, MomentKind::Real, &one),
            ConstScalar::monomial(rat_int(2), -2, 2, 0, -1)
        );
        // off-diagonal vanishes
        assert!(formal_pair_moment(1, 2, MomentKind::Real, &one).is_zero());
        // (2,2) real: (2 pi / i) 2! N^{-3}
        assert_eq!(
            formal_pair_moment(2, 2, MomentKind::Real, &one),
            ConstScalar::monomial(rat_int(4), -6, 2, 0, -1)
        );
        // imaginary (0,0): 2 pi / N
        assert_eq!(
            formal_pair_moment(0, 0, MomentKind::Imaginary, &one),
            ConstScalar::monomial(rat_int(2), -2, 2, 0, 0)
        );
        // scale enters as (scale N)^{-(n+1)}
        assert_eq!(
            formal_pair_moment(1, 1, MomentKind::Real, &rat(2, 1)),
            ConstScalar::monomial(rat(1, 2), -4, 2, 0, -1)
        );
    }

    #[test]
    fn imaginary_change_of_variables() {
        let zero = Potential::zero();
        assert!(check_imaginary_change_of_variables(&zero, &zero, 0, 0, 1).unwrap());
        assert!(check_imaginary_change_of_variables(&zero, &zero, 0, 1, 1).unwrap());
        let v1 = Potential::alpha(3);
        let v2 = Potential::beta(3);
        for i in 0..=2 {
            for j in 0..=2 {
                assert!(check_imaginary_change_of_variables(&v1, &v2, i, j, 2).unwrap());
            }
        }
    }
}
