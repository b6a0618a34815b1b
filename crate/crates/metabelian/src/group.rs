//! The free metabelian group `F_d/F_d''` in triangular normal form.
//!
//! Elements are pairs `(q, f)` denoting `ĥ(q)·f`, where `q` lives in the
//! abelianization, `ĥ` is the ascending-index section `q ↦ a_1^{k_1}···a_d^{k_d}`,
//! and `f` lies in the derived subgroup `N`, written additively in the unique
//! triangular coordinates: `f = Σ x_{ij}^{φ_{ij}}` with `φ_{ij}` supported on
//! variables of index ≤ j. Triangularity plus the rewriting moves
//!
//! ```text
//! x_{ij}^{φ s_k}    = x_{ij}^φ + x_{ik}^{(s_j-1)φ} + x_{jk}^{(1-s_i)φ}
//! x_{ij}^{φ s_k^-1} = x_{ij}^φ + x_{ik}^{(1-s_j)s_k^-1 φ} + x_{jk}^{(s_i-1)s_k^-1 φ}
//! ```
//!
//! (for `i < j < k`) make structural equality of coordinates a complete
//! equality test, which solves the word problem.

use std::collections::BTreeMap;

use crate::laurent::LaurentPoly;
use crate::{Coefficient, Error, Result};

/// A word in the free generators: ordered list of (generator index, exponent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    rank: usize,
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(rank: usize, letters: Vec<(usize, i64)>) -> Result<Self> {
        for &(i, e) in &letters {
            if i < 1 || i > rank {
                return Err(Error::IndexOutOfRange(i, rank));
            }
            if e == 0 {
                return Err(Error::InvalidParameter("zero exponent in word".into()));
            }
        }
        Ok(Word { rank, letters })
    }

    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn inverse(&self) -> Self {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { rank: self.rank, letters })
    }

    /// `[w1, w2] = w1^-1 w2^-1 w1 w2` as a word.
    pub fn commutator(w1: &Word, w2: &Word) -> Result<Self> {
        w1.inverse().concat(&w2.inverse())?.concat(w1)?.concat(w2)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::new();
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { rank: self.rank, letters }
    }
}

/// Element of the abelianization `Q ≅ Z^d`, written multiplicatively.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QElement {
    exponents: Vec<i64>,
}

impl QElement {
    pub fn new(exponents: Vec<i64>) -> Self {
        QElement { exponents }
    }

    pub fn identity(rank: usize) -> Self {
        QElement { exponents: vec![0; rank] }
    }

    pub fn generator(rank: usize, i: usize, k: i64) -> Result<Self> {
        if i < 1 || i > rank {
            return Err(Error::IndexOutOfRange(i, rank));
        }
        let mut e = vec![0; rank];
        e[i - 1] = k;
        Ok(QElement { exponents: e })
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    pub fn mul(&self, other: &QElement) -> QElement {
        QElement {
            exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> QElement {
        QElement { exponents: self.exponents.iter().map(|k| -k).collect() }
    }

    /// The monomial `s^q` as a Laurent polynomial.
    pub fn monomial<C: Coefficient>(&self) -> LaurentPoly<C> {
        LaurentPoly::monomial(self.rank(), self.exponents.clone(), C::one()).expect("rank matches")
    }
}

/// Unnormalized `Z[Q]`-combination of the basic commutators `x_{ij}`.
///
/// Polynomials may use all `d` variables; [`normalize`] rewrites the sum
/// into triangular coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct RawNCombination<C> {
    rank: usize,
    terms: Vec<(usize, usize, LaurentPoly<C>)>,
}

impl<C: Coefficient> std::fmt::Debug for RawNCombination<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RawNCombination")
            .field("rank", &self.rank)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<C: Coefficient> RawNCombination<C> {
    pub fn zero(rank: usize) -> Self {
        RawNCombination { rank, terms: Vec::new() }
    }

    pub fn new(rank: usize, terms: Vec<(usize, usize, LaurentPoly<C>)>) -> Result<Self> {
        let mut out = Self::zero(rank);
        for (i, j, p) in terms {
            out.push(i, j, p)?;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(usize, usize, LaurentPoly<C>)] {
        &self.terms
    }

    pub fn push(&mut self, i: usize, j: usize, p: LaurentPoly<C>) -> Result<()> {
        if !(1 <= i && i < j && j <= self.rank) {
            return Err(Error::BadPair(i, j));
        }
        if p.rank() != self.rank {
            return Err(Error::RankMismatch(p.rank(), self.rank));
        }
        if !p.is_zero() {
            self.terms.push((i, j, p));
        }
        Ok(())
    }

    pub fn add(&self, other: &RawNCombination<C>) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        RawNCombination {
            rank: self.rank,
            terms: self.terms.iter().map(|(i, j, p)| (*i, *j, -p)).collect(),
        }
    }

    /// Multiply every coordinate by `p` (the module action of `Z[Q]`,
    /// before normalization).
    pub fn mul_poly(&self, p: &LaurentPoly<C>) -> Self {
        RawNCombination {
            rank: self.rank,
            terms: self.terms.iter().map(|(i, j, q)| (*i, *j, q * p)).collect(),
        }
    }
}

/// Triangular coordinates of an element of the derived subgroup `N`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NElement<C> {
    rank: usize,
    coords: BTreeMap<(usize, usize), LaurentPoly<C>>,
}

impl<C: Coefficient> NElement<C> {
    pub fn zero(rank: usize) -> Self {
        NElement { rank, coords: BTreeMap::new() }
    }

    /// The basic commutator `x_{ij} = [a_i, a_j]`.
    pub fn basic(rank: usize, i: usize, j: usize) -> Result<Self> {
        let mut out = Self::zero(rank);
        out.insert_triangular(i, j, LaurentPoly::one(rank))?;
        Ok(out)
    }

    /// Build from already-triangular coordinates; rejects non-triangular input.
    pub fn from_triangular(rank: usize, parts: Vec<(usize, usize, LaurentPoly<C>)>) -> Result<Self> {
        let mut out = Self::zero(rank);
        for (i, j, p) in parts {
            out.insert_triangular(i, j, p)?;
        }
        Ok(out)
    }

    fn insert_triangular(&mut self, i: usize, j: usize, p: LaurentPoly<C>) -> Result<()> {
        if !(1 <= i && i < j && j <= self.rank) {
            return Err(Error::BadPair(i, j));
        }
        if p.rank() != self.rank {
            return Err(Error::RankMismatch(p.rank(), self.rank));
        }
        if !poly_uses_only_up_to(&p, j) {
            return Err(Error::InvalidParameter(format!(
                "coordinate ({i},{j}) uses a variable above s{j}"
            )));
        }
        if p.is_zero() {
            return Ok(());
        }
        let entry = self.coords.entry((i, j)).or_insert_with(|| LaurentPoly::zero(self.rank));
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.coords.remove(&(i, j));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, i: usize, j: usize) -> Option<&LaurentPoly<C>> {
        self.coords.get(&(i, j))
    }

    pub fn coords(&self) -> impl Iterator<Item = (&(usize, usize), &LaurentPoly<C>)> {
        self.coords.iter()
    }

    pub fn add(&self, other: &NElement<C>) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.clone();
        for ((i, j), p) in &other.coords {
            out.insert_triangular(*i, *j, p.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        NElement {
            rank: self.rank,
            coords: self.coords.iter().map(|(k, p)| (*k, -p)).collect(),
        }
    }

    pub fn sub(&self, other: &NElement<C>) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        NElement {
            rank: self.rank,
            coords: self.coords.iter().map(|(key, p)| (*key, p.scale(k))).collect(),
        }
    }

    pub fn to_raw(&self) -> RawNCombination<C> {
        RawNCombination {
            rank: self.rank,
            terms: self.coords.iter().map(|(&(i, j), p)| (i, j, p.clone())).collect(),
        }
    }
}

impl<C: Coefficient> std::fmt::Debug for NElement<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::parse::render_nelement(self))
    }
}

fn poly_uses_only_up_to<C: Coefficient>(p: &LaurentPoly<C>, j: usize) -> bool {
    p.terms().all(|(e, _)| e.iter().skip(j).all(|&x| x == 0))
}

/// Rewriting strategy used by [`normalize_with`]. Both strategies compute
/// the same triangular coordinates; keeping two around gives a testable
/// face to the uniqueness of the normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Peel one power of the largest out-of-range variable at a time.
    PeelLargest,
    /// Eliminate the full power of the smallest out-of-range variable,
    /// processing coordinate pairs in increasing (j, i) order.
    FullPowerSmallest,
}

/// Rewrite a raw combination into triangular coordinates.
pub fn normalize<C: Coefficient>(raw: &RawNCombination<C>) -> NElement<C> {
    normalize_with(raw, Strategy::PeelLargest)
}

pub fn normalize_with<C: Coefficient>(raw: &RawNCombination<C>, strategy: Strategy) -> NElement<C> {
    match strategy {
        Strategy::PeelLargest => normalize_peel(raw),
        Strategy::FullPowerSmallest => normalize_full_power(raw),
    }
}

/// Largest 1-based variable index above `j` with a nonzero exponent.
fn largest_bad_var(exp: &[i64], j: usize) -> Option<usize> {
    (j..exp.len()).rev().find(|&k0| exp[k0] != 0).map(|k0| k0 + 1)
}

fn smallest_bad_var(exp: &[i64], j: usize) -> Option<usize> {
    (j..exp.len()).find(|&k0| exp[k0] != 0).map(|k0| k0 + 1)
}

fn normalize_peel<C: Coefficient>(raw: &RawNCombination<C>) -> NElement<C> {
    let d = raw.rank();
    let mut out = NElement::zero(d);
    let mut stack: Vec<(usize, usize, LaurentPoly<C>)> = raw.terms().to_vec();
    while let Some((i, j, p)) = stack.pop() {
        let mut good = LaurentPoly::zero(d);
        for (exp, c) in p.terms() {
            match largest_bad_var(exp, j) {
                None => good.add_term(exp.clone(), c.clone()),
                Some(k) => {
                    let e = exp[k - 1];
                    let mu = LaurentPoly::monomial(d, exp.clone(), c.clone()).expect("rank");
                    let one = LaurentPoly::one(d);
                    if e > 0 {
                        // x_{ij}^{φ s_k} = x_{ij}^φ + x_{ik}^{(s_j-1)φ} + x_{jk}^{(1-s_i)φ}
                        let phi = mu.shift_var(k, -1);
                        let sj1 = &LaurentPoly::variable(d, j) - &one;
                        let onesi = &one - &LaurentPoly::variable(d, i);
                        stack.push((i, j, phi.clone()));
                        stack.push((i, k, &sj1 * &phi));
                        stack.push((j, k, &onesi * &phi));
                    } else {
                        // x_{ij}^{φ s_k^-1} = x_{ij}^φ + x_{ik}^{(1-s_j)μ} + x_{jk}^{(s_i-1)μ}
                        // with μ = φ s_k^-1 the original monomial.
                        let phi = mu.shift_var(k, 1);
                        let onesj = &one - &LaurentPoly::variable(d, j);
                        let si1 = &LaurentPoly::variable(d, i) - &one;
                        stack.push((i, j, phi));
                        stack.push((i, k, &onesj * &mu));
                        stack.push((j, k, &si1 * &mu));
                    }
                }
            }
        }
        if !good.is_zero() {
            out.insert_triangular(i, j, good).expect("triangular by construction");
        }
    }
    out
}

fn normalize_full_power<C: Coefficient>(raw: &RawNCombination<C>) -> NElement<C> {
    let d = raw.rank();
    // Accumulate coordinates keyed by (j, i) so the scan order is increasing j.
    let mut coords: BTreeMap<(usize, usize), LaurentPoly<C>> = BTreeMap::new();
    let add = |coords: &mut BTreeMap<(usize, usize), LaurentPoly<C>>, i: usize, j: usize, p: LaurentPoly<C>| {
        if p.is_zero() {
            return;
        }
        let entry = coords.entry((j, i)).or_insert_with(|| LaurentPoly::zero(d));
        *entry = &*entry + &p;
        if entry.is_zero() {
            coords.remove(&(j, i));
        }
    };
    for (i, j, p) in raw.terms() {
        add(&mut coords, *i, *j, p.clone());
    }
    loop {
        // First coordinate in (j, i) order holding a non-triangular monomial.
        let mut found = None;
        'scan: for (&(j, i), p) in &coords {
            for (exp, c) in p.terms() {
                if let Some(k) = smallest_bad_var(exp, j) {
                    found = Some((i, j, exp.clone(), c.clone(), k));
                    break 'scan;
                }
            }
        }
        let Some((i, j, exp, c, k)) = found else { break };
        let e = exp[k - 1];
        let mu = LaurentPoly::monomial(d, exp, c).expect("rank");
        // Remove the offending monomial, then add the full-power expansion.
        add(&mut coords, i, j, -&mu);
        let mut w = mu.clone();
        w = w.shift_var(k, -e);
        let one = LaurentPoly::one(d);
        let (gamma, head): (LaurentPoly<C>, LaurentPoly<C>) = if e > 0 {
            // x^{s_k^e w} = x^w + x_{ik}^{(s_j-1)γ w} + x_{jk}^{(1-s_i)γ w},
            // γ = 1 + s_k + ... + s_k^{e-1}
            (LaurentPoly::geom_unit(d, k, 1, e as u64), w.clone())
        } else {
            // x^{s_k^e w} = x^w + x_{ik}^{(1-s_j)γ' w} + x_{jk}^{(s_i-1)γ' w},
            // γ' = s_k^-1 + ... + s_k^{e}
            let mut g = LaurentPoly::zero(d);
            for l in e..0 {
                g = &g + &LaurentPoly::var_pow(d, k, l);
            }
            (g, w.clone())
        };
        add(&mut coords, i, j, head);
        let (pik, pjk) = if e > 0 {
            let sj1 = &LaurentPoly::variable(d, j) - &one;
            let onesi = &one - &LaurentPoly::variable(d, i);
            (&(&sj1 * &gamma) * &w, &(&onesi * &gamma) * &w)
        } else {
            let onesj = &one - &LaurentPoly::variable(d, j);
            let si1 = &LaurentPoly::variable(d, i) - &one;
            (&(&onesj * &gamma) * &w, &(&si1 * &gamma) * &w)
        };
        add(&mut coords, i, k, pik);
        add(&mut coords, j, k, pjk);
    }
    let mut out = NElement::zero(d);
    for ((j, i), p) in coords {
        out.insert_triangular(i, j, p).expect("triangular after rewriting");
    }
    out
}

/// Right action of `q ∈ Q` on `f ∈ N`.
pub fn act<C: Coefficient>(f: &NElement<C>, q: &QElement) -> Result<NElement<C>> {
    if f.rank() != q.rank() {
        return Err(Error::RankMismatch(f.rank(), q.rank()));
    }
    Ok(normalize(&f.to_raw().mul_poly(&q.monomial())))
}

/// Right action of `p ∈ Z[Q]` on `f ∈ N`.
pub fn act_poly<C: Coefficient>(f: &NElement<C>, p: &LaurentPoly<C>) -> Result<NElement<C>> {
    if f.rank() != p.rank() {
        return Err(Error::RankMismatch(f.rank(), p.rank()));
    }
    Ok(normalize(&f.to_raw().mul_poly(p)))
}

/// The three-term Jacobi relator
/// `x_{ij}^{1-s_k} + x_{ik}^{s_j-1} + x_{jk}^{1-s_i}` for `i < j < k`.
pub fn jacobi_relator<C: Coefficient>(rank: usize, i: usize, j: usize, k: usize) -> Result<RawNCombination<C>> {
    if !(1 <= i && i < j && j < k && k <= rank) {
        return Err(Error::BadTriple(i, j, k));
    }
    let one = LaurentPoly::one(rank);
    let mut raw = RawNCombination::zero(rank);
    raw.push(i, j, &one - &LaurentPoly::variable(rank, k))?;
    raw.push(i, k, &LaurentPoly::variable(rank, j) - &one)?;
    raw.push(j, k, &one - &LaurentPoly::variable(rank, i))?;
    Ok(raw)
}

/// Canonical section `q ↦ a_1^{k_1}···a_d^{k_d}`.
pub fn hat_section(q: &QElement) -> Word {
    let letters = q
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i0, &k)| (i0 + 1, k))
        .collect();
    Word { rank: q.rank(), letters }
}

/// Normal form of an element of `F_d/F_d''`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupElement<C> {
    q: QElement,
    f: NElement<C>,
}

impl<C: Coefficient> GroupElement<C> {
    pub fn identity(rank: usize) -> Self {
        GroupElement { q: QElement::identity(rank), f: NElement::zero(rank) }
    }

    pub fn new(q: QElement, f: NElement<C>) -> Result<Self> {
        if q.rank() != f.rank() {
            return Err(Error::RankMismatch(q.rank(), f.rank()));
        }
        Ok(GroupElement { q, f })
    }

    /// An element of the derived subgroup, `(identity, f)`.
    pub fn from_n(f: NElement<C>) -> Self {
        GroupElement { q: QElement::identity(f.rank()), f }
    }

    pub fn rank(&self) -> usize {
        self.q.rank()
    }

    pub fn q(&self) -> &QElement {
        &self.q
    }

    pub fn f(&self) -> &NElement<C> {
        &self.f
    }

    pub fn is_identity(&self) -> bool {
        self.q.is_identity() && self.f.is_zero()
    }
}

impl<C: Coefficient> std::fmt::Debug for GroupElement<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(q = {:?}, f = {:?})", self.q.exponents(), self.f)
    }
}

/// `[a_i^{ei}, a_j^{ej}]` for unit exponents, as a raw (pair, polynomial)
/// contribution; `None` when `i = j`.
fn letter_comm<C: Coefficient>(
    rank: usize,
    i: usize,
    ei: i64,
    j: usize,
    ej: i64,
) -> Option<((usize, usize), LaurentPoly<C>)> {
    debug_assert!(ei.abs() == 1 && ej.abs() == 1);
    if i == j {
        return None;
    }
    if i > j {
        // [g, h] = -[h, g] in additive notation
        let ((a, b), p) = letter_comm::<C>(rank, j, ej, i, ei)?;
        return Some(((a, b), -&p));
    }
    // [a_i, a_j] = x_{ij}; [g^-1, h] = -[g, h]^{ḡ^-1}; [g, h^-1] = -[g, h]^{h̄^-1}
    let mut p = LaurentPoly::one(rank);
    if ei < 0 {
        p = -&p.shift_var(i, -1);
    }
    if ej < 0 {
        p = -&p.shift_var(j, -1);
    }
    Some(((i, j), p))
}

/// Expansion of `[a_i^{ei}, ĥ(q)]` over the letters of the section word,
/// restricted to letters with index in `j_range`:
///
/// `Σ_{j in range, q_j ≠ 0} Σ_{l=0}^{|q_j|-1} [a_i^{ei}, a_j^{δ_j}]^{s_j^{δ_j l}·tail_j}`
///
/// where `tail_j = Π_{j' > j} s_{j'}^{q_{j'}}` runs over the full section
/// word regardless of the restriction.
fn letter_comm_with_section<C: Coefficient>(
    i: usize,
    ei: i64,
    q: &QElement,
    j_max: usize,
) -> RawNCombination<C> {
    let d = q.rank();
    let exps = q.exponents();
    let mut raw = RawNCombination::zero(d);
    for j in 1..=j_max.min(d) {
        let kj = exps[j - 1];
        if kj == 0 {
            continue;
        }
        let delta = kj.signum();
        let Some(((a, b), base)) = letter_comm::<C>(d, i, ei, j, delta) else { continue };
        let gamma = LaurentPoly::geom_unit(d, j, delta, kj.unsigned_abs());
        let mut tail = vec![0i64; d];
        tail[j..].copy_from_slice(&exps[j..]);
        let conj = LaurentPoly::monomial(d, tail, C::one()).expect("rank");
        raw.push(a, b, &(&base * &gamma) * &conj).expect("valid pair");
    }
    raw
}

/// Defect of the section tail: `[ĥ(q_{>i}), a_i^ε]` as a raw combination.
fn tail_defect<C: Coefficient>(q: &QElement, i: usize, eps: i64) -> RawNCombination<C> {
    let d = q.rank();
    // [B, a_i^ε] = -[a_i^ε, B]; expand [a_i^ε, ĥ(r)] over letters j > i only.
    let exps = q.exponents();
    let mut raw = RawNCombination::zero(d);
    for j in (i + 1)..=d {
        let kj = exps[j - 1];
        if kj == 0 {
            continue;
        }
        let delta = kj.signum();
        let Some(((a, b), base)) = letter_comm::<C>(d, i, eps, j, delta) else { continue };
        let gamma = LaurentPoly::geom_unit(d, j, delta, kj.unsigned_abs());
        let mut tail = vec![0i64; d];
        tail[j..].copy_from_slice(&exps[j..]);
        let conj = LaurentPoly::monomial(d, tail, C::one()).expect("rank");
        raw.push(a, b, &(&base * &gamma) * &conj).expect("valid pair");
    }
    raw.neg()
}

/// Reduce a word to its unique normal form `(q, f)`; solves the word problem.
pub fn reduce<C: Coefficient>(w: &Word) -> GroupElement<C> {
    let d = w.rank();
    let mut q = QElement::identity(d);
    let mut f = NElement::zero(d);
    for &(i, e) in w.letters() {
        let eps = e.signum();
        for _ in 0..e.unsigned_abs() {
            let defect = tail_defect::<C>(&q, i, eps);
            let conj = LaurentPoly::var_pow(d, i, eps);
            let raw = defect.add(&f.to_raw().mul_poly(&conj)).expect("same rank");
            f = normalize(&raw);
            let mut new_exp = q.exponents().to_vec();
            new_exp[i - 1] += eps;
            q = QElement::new(new_exp);
        }
    }
    GroupElement { q, f }
}

/// Group multiplication of normal forms.
pub fn mul<C: Coefficient>(g1: &GroupElement<C>, g2: &GroupElement<C>) -> Result<GroupElement<C>> {
    if g1.rank() != g2.rank() {
        return Err(Error::RankMismatch(g1.rank(), g2.rank()));
    }
    let d = g1.rank();
    let mut q = g1.q.clone();
    let mut f = g1.f.clone();
    // g1 · ĥ(q2): push the letters of the section word through the state.
    for &(i, e) in hat_section(&g2.q).letters() {
        let eps = e.signum();
        for _ in 0..e.unsigned_abs() {
            let defect = tail_defect::<C>(&q, i, eps);
            let conj = LaurentPoly::var_pow(d, i, eps);
            let raw = defect.add(&f.to_raw().mul_poly(&conj)).expect("same rank");
            f = normalize(&raw);
            let mut new_exp = q.exponents().to_vec();
            new_exp[i - 1] += eps;
            q = QElement::new(new_exp);
        }
    }
    // ... · f2 appends without conjugation.
    let f = f.add(&g2.f)?;
    Ok(GroupElement { q, f })
}

/// Group inverse of a normal form.
pub fn inv<C: Coefficient>(g: &GroupElement<C>) -> GroupElement<C> {
    // g^-1 = f^-1 ĥ(q)^-1 = ĥ(q)^-1 · (-f)^{q^-1}
    let section_inv = reduce::<C>(&hat_section(&g.q).inverse());
    let tail = act(&g.f.neg(), &g.q.inv()).expect("same rank");
    GroupElement {
        q: section_inv.q,
        f: section_inv.f.add(&tail).expect("same rank"),
    }
}

/// Structural equality of normal forms.
pub fn eq<C: Coefficient>(g1: &GroupElement<C>, g2: &GroupElement<C>) -> Result<bool> {
    if g1.rank() != g2.rank() {
        return Err(Error::RankMismatch(g1.rank(), g2.rank()));
    }
    Ok(g1 == g2)
}

/// `[g, h] = g^-1 h^-1 g h`, which lies in `N` since `Q` is abelian.
pub fn commutator<C: Coefficient>(g: &GroupElement<C>, h: &GroupElement<C>) -> Result<NElement<C>> {
    let lhs = mul(&inv(g), &inv(h))?;
    let rhs = mul(g, h)?;
    let c = mul(&lhs, &rhs)?;
    debug_assert!(c.q.is_identity());
    Ok(c.f)
}

/// `[g, a_i^{ε}]` for a general normal form `g = ĥ(r)·f`:
/// `[g, a] = -[a, ĥ(r)] + f^{s_i^ε - 1}`.
fn one_letter_comm<C: Coefficient>(g: &GroupElement<C>, i: usize, eps: i64) -> NElement<C> {
    let d = g.rank();
    let expansion = letter_comm_with_section::<C>(i, eps, &g.q, d).neg();
    let shift = &LaurentPoly::var_pow(d, i, eps) - &LaurentPoly::one(d);
    let raw = expansion.add(&g.f.to_raw().mul_poly(&shift)).expect("same rank");
    normalize(&raw)
}

/// `[g, ĥ(q)]` evaluated by the double-sum expansion over the letters of
/// the section word:
///
/// `Σ_{i: k_i ≥ 1} Σ_{l=0}^{k_i-1} [g, a_i^{ε_i}]^{s_i^{ε_i l}·s_{i+1}^{ε_{i+1}k_{i+1}}···s_d^{ε_d k_d}}`
pub fn commutator_expand<C: Coefficient>(g: &GroupElement<C>, q: &QElement) -> Result<NElement<C>> {
    if g.rank() != q.rank() {
        return Err(Error::RankMismatch(g.rank(), q.rank()));
    }
    let d = g.rank();
    let exps = q.exponents();
    let mut acc = RawNCombination::zero(d);
    for i in 1..=d {
        let ki = exps[i - 1];
        if ki == 0 {
            continue;
        }
        let eps = ki.signum();
        let inner = one_letter_comm(g, i, eps);
        let gamma = LaurentPoly::geom_unit(d, i, eps, ki.unsigned_abs());
        let mut tail = vec![0i64; d];
        tail[i..].copy_from_slice(&exps[i..]);
        let conj = LaurentPoly::monomial(d, tail, C::one()).expect("rank");
        acc = acc.add(&inner.to_raw().mul_poly(&(&gamma * &conj)))?;
    }
    Ok(normalize(&acc))
}

/// The conjugation defect `f_q` with `a_i · ĥ(q) = ĥ(q·s_i) · f_q`:
///
/// `f_q = Σ_{j ≤ i: k_j ≥ 1} Σ_{l=0}^{k_j-1} [a_i, a_j^{ε_j}]^{s_j^{ε_j l}·s_{j+1}^{ε_{j+1}k_{j+1}}···s_d^{ε_d k_d}}`
pub fn conj_defect<C: Coefficient>(rank: usize, i: usize, q: &QElement) -> Result<NElement<C>> {
    if i < 1 || i > rank {
        return Err(Error::IndexOutOfRange(i, rank));
    }
    if q.rank() != rank {
        return Err(Error::RankMismatch(q.rank(), rank));
    }
    let raw = letter_comm_with_section::<C>(i, 1, q, i);
    Ok(normalize(&raw))
}

/// Kill every generator of index above `k` (the natural retraction).
pub fn project<C: Coefficient>(g: &GroupElement<C>, k: usize) -> Result<GroupElement<C>> {
    if k > g.rank() || k == 0 {
        return Err(Error::InvalidRank(k));
    }
    let q = QElement::new(g.q.exponents()[..k].to_vec());
    let mut f = NElement::zero(k);
    for (&(i, j), p) in &g.f.coords {
        if j <= k {
            // Triangularity bounds the variables of p by j ≤ k.
            f.insert_triangular(i, j, p.resize_rank(k)?)?;
        }
    }
    Ok(GroupElement { q, f })
}

/// Pad with trivial generators up to rank `k`.
pub fn embed<C: Coefficient>(g: &GroupElement<C>, k: usize) -> Result<GroupElement<C>> {
    if k < g.rank() {
        return Err(Error::InvalidRank(k));
    }
    let mut exps = g.q.exponents().to_vec();
    exps.resize(k, 0);
    let q = QElement::new(exps);
    let mut f = NElement::zero(k);
    for (&(i, j), p) in &g.f.coords {
        f.insert_triangular(i, j, p.resize_rank(k)?)?;
    }
    Ok(GroupElement { q, f })
}
