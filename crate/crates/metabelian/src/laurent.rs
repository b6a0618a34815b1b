//! Sparse multivariate Laurent polynomials over an exact integer ring.
//!
//! Elements of `Z[s_1^{±1},...,s_d^{±1}]` are finitely supported maps from
//! exponent vectors to nonzero coefficients. Terms are kept in a `BTreeMap`
//! so the lexicographic order on exponent vectors (variable 1 most
//! significant) is canonical: equality is structural.
//!
//! The module also provides division by a monic univariate divisor with the
//! canonical centered-box remainder, and the multivariate extension over
//! pairwise distinct variables. The remainder is unique; the quotients are
//! representation dependent and only the reconstruction identity is
//! contractual.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};


use crate::{Coefficient, Error, Result};

/// Exponent vector of a monomial; entry `i` is the exponent of `s_{i+1}`.
pub type ExponentVector = Vec<i64>;

/// Sparse Laurent polynomial of a fixed ambient rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly<C> {
    rank: usize,
    terms: BTreeMap<ExponentVector, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, C::one())
    }

    pub fn constant(rank: usize, c: C) -> Self {
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(vec![0; rank], c);
        }
        p
    }

    /// The monomial `c * s^exp`. Zero coefficients yield the zero polynomial.
    pub fn monomial(rank: usize, exp: ExponentVector, c: C) -> Result<Self> {
        if exp.len() != rank {
            return Err(Error::RankMismatch(exp.len(), rank));
        }
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        Ok(p)
    }

    /// The generator `s_var` (1-based) raised to `pow`.
    pub fn var_pow(rank: usize, var: usize, pow: i64) -> Self {
        assert!(var >= 1 && var <= rank, "variable index out of range");
        let mut exp = vec![0; rank];
        exp[var - 1] = pow;
        let mut p = Self::zero(rank);
        p.terms.insert(exp, C::one());
        p
    }

    /// The generator `s_var` (1-based).
    pub fn variable(rank: usize, var: usize) -> Self {
        Self::var_pow(rank, var, 1)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> Option<&C> {
        self.terms.get(exp)
    }

    pub fn add_term(&mut self, exp: ExponentVector, c: C) {
        debug_assert_eq!(exp.len(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_rank(&self, other: &Self) {
        assert_eq!(self.rank, other.rank, "rank mismatch in polynomial arithmetic");
    }

    /// Rank-checked addition.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(self + other)
    }

    /// Rank-checked multiplication.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(self * other)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.rank);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&C::from_i64(k).expect("small constant"))
    }

    /// Multiply by the monomial `c * s^exp` without building a polynomial.
    pub fn mul_monomial(&self, exp: &[i64], c: &C) -> Self {
        debug_assert_eq!(exp.len(), self.rank);
        let mut out = Self::zero(self.rank);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            let shifted: Vec<i64> = e.iter().zip(exp).map(|(a, b)| a + b).collect();
            out.terms.insert(shifted, v.clone() * c.clone());
        }
        out
    }

    /// Shift the exponent of a single variable (1-based) by `k`.
    pub fn shift_var(&self, var: usize, k: i64) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, v) in &self.terms {
            let mut e2 = e.clone();
            e2[var - 1] += k;
            out.terms.insert(e2, v.clone());
        }
        out
    }

    /// Minimum and maximum exponent of `var` (1-based) over the support.
    pub fn degree_span(&self, var: usize) -> Result<(i64, i64)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if var < 1 || var > self.rank {
            return Err(Error::IndexOutOfRange(var, self.rank));
        }
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for e in self.terms.keys() {
            lo = lo.min(e[var - 1]);
            hi = hi.max(e[var - 1]);
        }
        Ok((lo, hi))
    }

    /// True when every exponent outside `var` is zero.
    pub fn is_univariate_in(&self, var: usize) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().enumerate().all(|(i, &x)| i == var - 1 || x == 0))
    }

    /// True when both extreme coefficients of the univariate polynomial lie
    /// in `{+1, -1}`.
    pub fn is_monic(&self, var: usize) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_univariate_in(var) {
            return Err(Error::NotUnivariate(var));
        }
        let (lo, hi) = self.degree_span(var)?;
        let at = |k: i64| -> bool {
            let mut e = vec![0; self.rank];
            e[var - 1] = k;
            self.terms.get(&e).map(|c| c.abs().is_one()).unwrap_or(false)
        };
        Ok(at(lo) && at(hi))
    }

    /// Coefficient of `s_var^k` in a polynomial univariate in `var`.
    fn univar_coeff(&self, var: usize, k: i64) -> C {
        let mut e = vec![0; self.rank];
        e[var - 1] = k;
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    /// The slice of terms whose `var`-exponent equals `k`, with that
    /// exponent zeroed out.
    fn slice_at(&self, var: usize, k: i64) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, c) in &self.terms {
            if e[var - 1] == k {
                let mut e2 = e.clone();
                e2[var - 1] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// True iff every monomial satisfies the per-variable window constraint.
    pub fn in_window(&self, w: &Window) -> Result<bool> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(self.rank, w.rank()));
        }
        Ok(self
            .terms
            .keys()
            .all(|e| e.iter().enumerate().all(|(i, &x)| w.allows(i + 1, x))))
    }

    /// Substitute `s_var = 1`: zero the exponent of `var` and merge collisions.
    pub fn subst_one(&self, var: usize) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[var - 1] = 0;
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Geometric unit sum `1 + s_var^e + ... + s_var^{e(k-1)}` with `e = ±1`;
    /// zero when `k = 0`.
    pub fn geom_unit(rank: usize, var: usize, sign: i64, k: u64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        let mut out = Self::zero(rank);
        for l in 0..k as i64 {
            let mut e = vec![0; rank];
            e[var - 1] = sign * l;
            out.add_term(e, C::one());
        }
        out
    }

    /// Telescoping sum `γ(k)` with `s_var^k - 1 = (s_var - 1)·γ(k)`:
    /// `1 + s + ... + s^{k-1}` for `k > 0`, `-(s^{-1} + ... + s^{k})` for
    /// `k < 0`, zero for `k = 0`.
    pub fn telescope(rank: usize, var: usize, k: i64) -> Self {
        let mut out = Self::zero(rank);
        if k > 0 {
            for l in 0..k {
                let mut e = vec![0; rank];
                e[var - 1] = l;
                out.add_term(e, C::one());
            }
        } else {
            for l in k..0 {
                let mut e = vec![0; rank];
                e[var - 1] = l;
                out.add_term(e, C::zero() - C::one());
            }
        }
        out
    }

    /// Re-embed into a different ambient rank. Growing pads with zeros;
    /// shrinking requires the dropped exponents to be zero.
    pub fn resize_rank(&self, new_rank: usize) -> Result<Self> {
        let mut out = Self::zero(new_rank);
        for (e, c) in &self.terms {
            if e.iter().skip(new_rank).any(|&x| x != 0) {
                return Err(Error::InvalidRank(new_rank));
            }
            let mut e2 = e.clone();
            e2.resize(new_rank, 0);
            out.terms.insert(e2, c.clone());
        }
        Ok(out)
    }
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        self.assert_same_rank(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self.assert_same_rank(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), C::zero() - c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero(self.rank);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), C::zero() - c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        self.assert_same_rank(rhs);
        let mut out = LaurentPoly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> std::fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::parse::render_poly(self))
    }
}

/// Per-variable half-open exponent windows `(-⌈n_i/2⌉, ⌊n_i/2⌋]`.
///
/// `None` marks an unbounded variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    bounds: Vec<Option<u64>>,
}

impl Window {
    pub fn new(bounds: Vec<Option<u64>>) -> Result<Self> {
        if bounds.iter().any(|b| matches!(b, Some(0))) {
            return Err(Error::InvalidParameter("window sizes must be positive".into()));
        }
        Ok(Window { bounds })
    }

    pub fn unbounded(rank: usize) -> Self {
        Window { bounds: vec![None; rank] }
    }

    pub fn rank(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[Option<u64>] {
        &self.bounds
    }

    /// Allowed exponent range `[lo, hi]` for window size `n`.
    pub fn range(n: u64) -> (i64, i64) {
        let hi = (n / 2) as i64;
        (hi - n as i64 + 1, hi)
    }

    /// Whether exponent `e` of variable `var` (1-based) is allowed.
    pub fn allows(&self, var: usize, e: i64) -> bool {
        match self.bounds[var - 1] {
            None => true,
            Some(n) => {
                let (lo, hi) = Self::range(n);
                lo <= e && e <= hi
            }
        }
    }
}

/// Division of `psi` by a monic univariate `phi` with the canonical box
/// remainder: `psi = theta*phi + lambda` with every `var`-exponent of
/// `lambda` inside the window of size `deg(phi)`.
///
/// The remainder is computed by iterated extreme-term elimination: the top
/// slice above the window is cancelled against the top coefficient of `phi`
/// (which is ±1), then the bottom slice below the window against the bottom
/// coefficient. Top elimination strictly lowers the maximal `var`-exponent,
/// and bottom elimination cannot re-enter the region above the window.
pub fn div_rem_single<C: Coefficient>(
    psi: &LaurentPoly<C>,
    phi: &LaurentPoly<C>,
    var: usize,
) -> Result<(LaurentPoly<C>, LaurentPoly<C>)> {
    if psi.rank() != phi.rank() {
        return Err(Error::RankMismatch(psi.rank(), phi.rank()));
    }
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if var < 1 || var > psi.rank() {
        return Err(Error::IndexOutOfRange(var, psi.rank()));
    }
    if !phi.is_univariate_in(var) {
        return Err(Error::NotUnivariate(var));
    }
    let (lo_deg, hi_deg) = phi.degree_span(var)?;
    let n = (hi_deg - lo_deg) as u64;
    if n == 0 {
        return Err(Error::DegreeZeroDivisor);
    }
    if !phi.is_monic(var)? {
        return Err(Error::NotMonic(var));
    }
    let (wlo, whi) = Window::range(n);
    let top = phi.univar_coeff(var, hi_deg);
    let bot = phi.univar_coeff(var, lo_deg);

    let mut rem = psi.clone();
    let mut theta = LaurentPoly::zero(psi.rank());

    loop {
        let Ok((_, max_e)) = rem.degree_span(var) else { break };
        if max_e <= whi {
            break;
        }
        let mut t = rem.slice_at(var, max_e);
        if top.is_negative() {
            t = -&t;
        }
        let t = t.shift_var(var, max_e - hi_deg);
        rem = &rem - &(&t * phi);
        theta = &theta + &t;
    }
    loop {
        let Ok((min_e, _)) = rem.degree_span(var) else { break };
        if min_e >= wlo {
            break;
        }
        let mut t = rem.slice_at(var, min_e);
        if bot.is_negative() {
            t = -&t;
        }
        let t = t.shift_var(var, min_e - lo_deg);
        rem = &rem - &(&t * phi);
        theta = &theta + &t;
    }
    Ok((theta, rem))
}

/// Division by a family of monic univariate divisors on pairwise distinct
/// variables. Returns one quotient per divisor (in input order) and the
/// unique remainder in the combined window.
pub fn div_rem_multi<C: Coefficient>(
    psi: &LaurentPoly<C>,
    divisors: &[(LaurentPoly<C>, usize)],
) -> Result<(Vec<LaurentPoly<C>>, LaurentPoly<C>)> {
    for (k, (_, v)) in divisors.iter().enumerate() {
        if divisors[..k].iter().any(|(_, v2)| v2 == v) {
            return Err(Error::DuplicateVariable(*v));
        }
    }
    let mut lambda = psi.clone();
    let mut thetas = Vec::with_capacity(divisors.len());
    for (phi, var) in divisors {
        let (theta, rem) = div_rem_single(&lambda, phi, *var)?;
        thetas.push(theta);
        lambda = rem;
    }
    Ok((thetas, lambda))
}

/// The combined window associated with a divisor family: size `deg(phi_k)`
/// on each `var_k`, unbounded elsewhere.
pub fn divisor_window<C: Coefficient>(
    rank: usize,
    divisors: &[(LaurentPoly<C>, usize)],
) -> Result<Window> {
    let mut bounds = vec![None; rank];
    for (phi, var) in divisors {
        let (lo, hi) = phi.degree_span(*var)?;
        bounds[var - 1] = Some((hi - lo) as u64);
    }
    Window::new(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Int, Poly};
    use num_traits::One;

    fn s(var: usize) -> Poly {
        Poly::variable(2, var)
    }

    #[test]
    fn additive_inverse() {
        let p = s(1);
        assert!((&p + &(-&p)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one(2);
        let p = &one + &s(1);
        let q = &one - &s(1);
        let mut expect = Poly::one(2);
        expect.add_term(vec![2, 0], -Int::one());
        assert_eq!(&p * &q, expect);
    }

    #[test]
    fn scale_by_zero() {
        let p = &s(1) + &s(2);
        assert!(p.scale_i64(0).is_zero());
    }

    #[test]
    fn degree_span_examples() {
        // s^{-3} - s^2
        let mut p = Poly::zero(1);
        p.add_term(vec![-3], Int::one());
        p.add_term(vec![2], -Int::one());
        assert_eq!(p.degree_span(1).unwrap(), (-3, 2));

        let mut q = Poly::zero(1);
        q.add_term(vec![0], Int::one());
        q.add_term(vec![1], Int::one());
        q.add_term(vec![2], Int::one());
        assert_eq!(q.degree_span(1).unwrap(), (0, 2));

        // s1*s2^3 has degree 0 in s2's span sense only over its support
        let m = Poly::monomial(2, vec![1, 3], Int::one()).unwrap();
        assert_eq!(m.degree_span(2).unwrap(), (3, 3));
    }

    #[test]
    fn degree_of_zero_polynomial_is_an_error() {
        assert_eq!(Poly::zero(1).degree_span(1), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn monic_examples() {
        let mut p = Poly::zero(1);
        p.add_term(vec![0], Int::one());
        p.add_term(vec![1], Int::one());
        p.add_term(vec![2], Int::one());
        assert!(p.is_monic(1).unwrap());

        let mut q = Poly::zero(1);
        q.add_term(vec![0], Int::from(2));
        q.add_term(vec![1], Int::one());
        assert!(!q.is_monic(1).unwrap());

        let mut r = Poly::zero(1);
        r.add_term(vec![-3], Int::one());
        r.add_term(vec![2], -Int::one());
        assert!(r.is_monic(1).unwrap());

        let m = Poly::monomial(2, vec![1, 3], Int::one()).unwrap();
        assert_eq!(m.is_monic(2), Err(Error::NotUnivariate(2)));
    }

    #[test]
    fn window_membership() {
        let w = Window::new(vec![Some(2)]).unwrap();
        assert!(Poly::zero(1).in_window(&w).unwrap());
        let s1 = Poly::variable(1, 1);
        assert!(s1.in_window(&w).unwrap());
        let sinv = Poly::var_pow(1, 1, -1);
        assert!(!sinv.in_window(&w).unwrap());
    }

    #[test]
    fn window_ranges() {
        assert_eq!(Window::range(1), (0, 0));
        assert_eq!(Window::range(2), (0, 1));
        assert_eq!(Window::range(3), (-1, 1));
        assert_eq!(Window::range(4), (-1, 2));
    }

    #[test]
    fn div_single_zero_dividend() {
        let phi = &Poly::one(1) + &Poly::variable(1, 1);
        let (theta, lambda) = div_rem_single(&Poly::zero(1), &phi, 1).unwrap();
        assert!(theta.is_zero());
        assert!(lambda.is_zero());
    }

    #[test]
    fn div_single_cubic() {
        // s^3 = (s-1)(1+s+s^2) + 1
        let psi = Poly::var_pow(1, 1, 3);
        let mut phi = Poly::one(1);
        phi.add_term(vec![1], Int::one());
        phi.add_term(vec![2], Int::one());
        let (theta, lambda) = div_rem_single(&psi, &phi, 1).unwrap();
        assert_eq!(lambda, Poly::one(1));
        let mut expect_theta = Poly::variable(1, 1);
        expect_theta.add_term(vec![0], -Int::one());
        assert_eq!(&(&theta * &phi) + &lambda, psi);
        assert_eq!(theta, expect_theta);
    }

    #[test]
    fn div_single_negative_power() {
        // s^{-2} = s^{-2}(1 - s^2) + 1
        let psi = Poly::var_pow(1, 1, -2);
        let mut phi = Poly::one(1);
        phi.add_term(vec![2], -Int::one());
        let (theta, lambda) = div_rem_single(&psi, &phi, 1).unwrap();
        assert_eq!(lambda, Poly::one(1));
        assert_eq!(theta, Poly::var_pow(1, 1, -2));
    }

    #[test]
    fn div_single_rejects_bad_divisors() {
        let psi = Poly::variable(1, 1);
        assert_eq!(div_rem_single(&psi, &Poly::zero(1), 1), Err(Error::ZeroPolynomial));
        let unit = Poly::var_pow(1, 1, 3);
        assert_eq!(div_rem_single(&psi, &unit, 1), Err(Error::DegreeZeroDivisor));
        let mut nonmonic = Poly::one(1);
        nonmonic.add_term(vec![1], Int::from(2));
        assert_eq!(div_rem_single(&psi, &nonmonic, 1), Err(Error::NotMonic(1)));
    }

    #[test]
    fn div_multi_already_reduced() {
        let psi = Poly::variable(2, 1);
        let mut phi = Poly::one(2);
        phi.add_term(vec![2, 0], -Int::one());
        let (thetas, lambda) = div_rem_multi(&psi, &[(phi, 1)]).unwrap();
        assert_eq!(lambda, psi);
        assert!(thetas[0].is_zero());
    }

    #[test]
    fn div_multi_order_independent() {
        // psi = s1^2 s2, divisors 1-s1^2 (var 1) and 1+s2 (var 2): lambda = -1
        let psi = Poly::monomial(2, vec![2, 1], Int::one()).unwrap();
        let mut phi1 = Poly::one(2);
        phi1.add_term(vec![2, 0], -Int::one());
        let mut phi2 = Poly::one(2);
        phi2.add_term(vec![0, 1], Int::one());

        let fwd = [(phi1.clone(), 1), (phi2.clone(), 2)];
        let rev = [(phi2.clone(), 2), (phi1.clone(), 1)];
        let (thetas, lambda) = div_rem_multi(&psi, &fwd).unwrap();
        let (_, lambda_rev) = div_rem_multi(&psi, &rev).unwrap();
        let expect = Poly::constant(2, -Int::one());
        assert_eq!(lambda, expect);
        assert_eq!(lambda_rev, expect);

        // reconstruction
        let mut acc = lambda.clone();
        for (t, (phi, _)) in thetas.iter().zip(fwd.iter()) {
            acc = &acc + &(t * phi);
        }
        assert_eq!(acc, psi);
    }

    #[test]
    fn div_multi_duplicate_variables_rejected() {
        let psi = Poly::variable(2, 1);
        let mut phi = Poly::one(2);
        phi.add_term(vec![1, 0], Int::one());
        let err = div_rem_multi(&psi, &[(phi.clone(), 1), (phi, 1)]);
        assert_eq!(err, Err(Error::DuplicateVariable(1)));
    }

    #[test]
    fn subst_one_examples() {
        let mut p = Poly::one(2);
        p.add_term(vec![0, 1], -Int::one());
        assert!(p.subst_one(2).is_zero());

        let mut q = Poly::zero(2);
        q.add_term(vec![1, 1], Int::one());
        q.add_term(vec![1, 2], Int::one());
        let mut expect = Poly::zero(2);
        expect.add_term(vec![1, 0], Int::from(2));
        assert_eq!(q.subst_one(2), expect);

        let r = Poly::variable(2, 1);
        assert_eq!(r.subst_one(2), r);
    }

    #[test]
    fn telescope_identity() {
        for k in -5i64..=5 {
            let gamma: Poly = Poly::telescope(1, 1, k);
            let lhs = &Poly::var_pow(1, 1, k) - &Poly::one(1);
            let factor = &Poly::variable(1, 1) - &Poly::one(1);
            assert_eq!(&factor * &gamma, lhs, "k = {k}");
        }
    }
}
