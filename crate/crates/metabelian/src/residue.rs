//! The periodized submodule `O` and its box complement `M` inside the
//! derived subgroup, for parameters `(d, c, m)`.
//!
//! Coordinatewise, `O_{i,j}` is the ideal generated by `1 - s_k^{2m}`
//! (`k` in `[c+1, j]` off the pair) and `1 + s_k + ... + s_k^{2m-1}`
//! (`k` on the pair), and `M_{i,j}` is the span of monomials inside the
//! matching box window. Division with canonical remainder realizes the
//! projection `N → N/O` as an honest map `N → M`.

use crate::group::{NElement, QElement};
use crate::laurent::{div_rem_multi, LaurentPoly, Window};
use crate::{Coefficient, Error, Result};

/// Parameters `(d, c, n, t)` with derived modulus `m = n·t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueSpec {
    d: usize,
    c: usize,
    n: u64,
    t: u64,
}

impl ResidueSpec {
    pub fn new(d: usize, c: usize, n: u64, t: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidRank(d));
        }
        if c < 1 || c > d {
            return Err(Error::InvalidParameter(format!(
                "split index {c} outside [1, {d}]"
            )));
        }
        if n == 0 || t == 0 {
            return Err(Error::InvalidParameter("n and t must be positive".into()));
        }
        Ok(ResidueSpec { d, c, n, t })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// The modulus `m = n·t`.
    pub fn m(&self) -> u64 {
        self.n * self.t
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if 1 <= i && i < j && j <= self.d {
            Ok(())
        } else {
            Err(Error::BadPair(i, j))
        }
    }

    /// Generators of the coordinate ideal `O_{i,j}`, one per variable in
    /// `[c+1, j]`: `1 - s_k^{2m}` off the pair, `1 + s_k + ... + s_k^{2m-1}`
    /// on it. Each is monic in its variable, so canonical division applies.
    pub fn o_generators<C: Coefficient>(&self, i: usize, j: usize) -> Result<Vec<(LaurentPoly<C>, usize)>> {
        self.check_pair(i, j)?;
        let m = self.m();
        let mut out = Vec::new();
        for k in (self.c + 1)..=j {
            let p = if k == i || k == j {
                LaurentPoly::geom_unit(self.d, k, 1, 2 * m)
            } else {
                &LaurentPoly::one(self.d) - &LaurentPoly::var_pow(self.d, k, 2 * m as i64)
            };
            out.push((p, k));
        }
        Ok(out)
    }

    /// Box window cutting out `M_{i,j}`: unbounded below the split and
    /// above `j`, size `2m` off the pair, `2m - 1` on it.
    pub fn m_window(&self, i: usize, j: usize) -> Result<Window> {
        self.check_pair(i, j)?;
        let m = self.m();
        let mut bounds = vec![None; self.d];
        for k in (self.c + 1)..=j {
            bounds[k - 1] = Some(if k == i || k == j { 2 * m - 1 } else { 2 * m });
        }
        Window::new(bounds)
    }
}

/// Per-coordinate division quotients certifying `f - residue(f) ∈ O`.
pub type ResidueWitness<C> = Vec<(usize, usize, Vec<(LaurentPoly<C>, LaurentPoly<C>)>)>;

/// Canonical representative of `f` modulo `O`, with the quotients against
/// the `O`-generators: `f = residue + Σ_{(i,j)} x_{ij}^{Σ θ·φ}`.
pub fn residue_witnessed<C: Coefficient>(
    f: &NElement<C>,
    spec: &ResidueSpec,
) -> Result<(NElement<C>, ResidueWitness<C>)> {
    if f.rank() != spec.d {
        return Err(Error::RankMismatch(f.rank(), spec.d));
    }
    let mut out = NElement::zero(spec.d);
    let mut witness = Vec::new();
    for (&(i, j), p) in f.coords() {
        let gens = spec.o_generators::<C>(i, j)?;
        let (thetas, lambda) = div_rem_multi(p, &gens)?;
        out = out.add(&NElement::from_triangular(spec.d, vec![(i, j, lambda)])?)?;
        let parts: Vec<_> = thetas
            .into_iter()
            .zip(gens)
            .filter(|(theta, _)| !theta.is_zero())
            .map(|(theta, (phi, _))| (theta, phi))
            .collect();
        if !parts.is_empty() {
            witness.push((i, j, parts));
        }
    }
    Ok((out, witness))
}

/// Canonical representative of `f` modulo `O`; lies in `M`, idempotent,
/// `Z`-linear, and zero exactly on `O`.
pub fn residue<C: Coefficient>(f: &NElement<C>, spec: &ResidueSpec) -> Result<NElement<C>> {
    residue_witnessed(f, spec).map(|(r, _)| r)
}

pub fn in_o<C: Coefficient>(f: &NElement<C>, spec: &ResidueSpec) -> Result<bool> {
    Ok(residue(f, spec)?.is_zero())
}

pub fn in_m<C: Coefficient>(f: &NElement<C>, spec: &ResidueSpec) -> Result<bool> {
    if f.rank() != spec.d {
        return Err(Error::RankMismatch(f.rank(), spec.d));
    }
    for (&(i, j), p) in f.coords() {
        if !p.in_window(&spec.m_window(i, j)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All `m^d` lattice points with each coordinate in `(-⌈m/2⌉, ⌊m/2⌋]`,
/// in lexicographic order.
pub fn ball(d: usize, m: u64) -> Result<Vec<QElement>> {
    if m == 0 {
        return Err(Error::InvalidParameter("ball radius must be positive".into()));
    }
    let (lo, hi) = Window::range(m);
    let mut out = Vec::new();
    let mut current = vec![lo; d];
    loop {
        out.push(QElement::new(current.clone()));
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if current[k] < hi {
                current[k] += 1;
                for x in &mut current[k + 1..] {
                    *x = lo;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{act_poly, normalize};
    use crate::parse::{parse_nelement, parse_poly};
    use crate::{Int, NElem, Poly};

    fn spec(d: usize, c: usize, n: u64, t: u64) -> ResidueSpec {
        ResidueSpec::new(d, c, n, t).unwrap()
    }

    fn nel(d: usize, text: &str) -> NElem {
        normalize(&parse_nelement::<Int>(text, d).unwrap())
    }

    fn poly(d: usize, text: &str) -> Poly {
        parse_poly(text, d).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(ResidueSpec::new(1, 1, 1, 1).is_err());
        assert!(ResidueSpec::new(2, 0, 1, 1).is_err());
        assert!(ResidueSpec::new(2, 3, 1, 1).is_err());
        assert!(ResidueSpec::new(2, 1, 0, 1).is_err());
        assert_eq!(spec(3, 1, 2, 3).m(), 6);
    }

    #[test]
    fn o_generator_examples() {
        let gens = spec(2, 1, 1, 1).o_generators::<Int>(1, 2).unwrap();
        assert_eq!(gens, vec![(poly(2, "1 + s2"), 2)]);

        let gens = spec(3, 1, 1, 1).o_generators::<Int>(1, 3).unwrap();
        assert_eq!(
            gens,
            vec![(poly(3, "1 - s2^2"), 2), (poly(3, "1 + s3"), 3)]
        );

        // j ≤ c: empty
        assert!(spec(3, 2, 1, 1).o_generators::<Int>(1, 2).unwrap().is_empty());
        assert!(spec(2, 1, 1, 1).o_generators::<Int>(2, 1).is_err());
    }

    #[test]
    fn m_window_examples() {
        let w = spec(2, 1, 1, 1).m_window(1, 2).unwrap();
        assert_eq!(w.bounds(), &[None, Some(1)]);

        let w = spec(3, 1, 1, 1).m_window(1, 3).unwrap();
        assert_eq!(w.bounds(), &[None, Some(2), Some(1)]);

        let w = spec(3, 2, 1, 1).m_window(1, 2).unwrap();
        assert_eq!(w.bounds(), &[None, None, None]);
    }

    #[test]
    fn residue_examples() {
        let sp = spec(2, 1, 1, 1);
        // s2 = (1+s2) - 1
        let f = nel(2, "x[1,2]^(s2)");
        assert_eq!(residue(&f, &sp).unwrap(), nel(2, "x[1,2]^(-1)"));
        // s2^2 = (s2-1)(1+s2) + 1
        let f = nel(2, "x[1,2]^(s2^2)");
        assert_eq!(residue(&f, &sp).unwrap(), nel(2, "x[1,2]"));
        assert_eq!(residue(&f, &sp).unwrap(), residue(&nel(2, "x[1,2]"), &sp).unwrap());
        // c = d: O = 0
        let sp = spec(2, 2, 1, 1);
        let f = nel(2, "x[1,2]^(s2^5 - 3*s1)");
        assert_eq!(residue(&f, &sp).unwrap(), f);
    }

    #[test]
    fn witness_reconstructs_difference() {
        let sp = spec(3, 1, 1, 2);
        let f = nel(3, "x[1,2]^(s2^7 - 2*s1*s2^3) + x[1,3]^(s3^4*s2^-5) + x[2,3]^(s1^3)");
        let (r, witness) = residue_witnessed(&f, &sp).unwrap();
        assert!(in_m(&r, &sp).unwrap());
        let mut diff = NElem::zero(3);
        for (i, j, parts) in &witness {
            for (theta, phi) in parts {
                let term = NElem::from_triangular(3, vec![(*i, *j, theta * phi)]).unwrap();
                diff = diff.add(&term).unwrap();
            }
        }
        assert_eq!(f.sub(&r).unwrap(), diff);
    }

    #[test]
    fn membership_examples() {
        let sp = spec(2, 1, 1, 1);
        assert!(in_o(&nel(2, "x[1,2]^(1 - s2^2)"), &sp).unwrap());
        assert!(in_o(&NElem::zero(2), &sp).unwrap());
        assert!(!in_o(&nel(2, "x[1,2]"), &sp).unwrap());
        assert!(in_m(&nel(2, "x[1,2]^(s1^99)"), &sp).unwrap());
        assert!(!in_m(&nel(2, "x[1,2]^(s2)"), &sp).unwrap());
        // M ∩ O = 0 on a small instance
        let f = nel(2, "x[1,2]^(3)");
        assert!(in_m(&f, &sp).unwrap() && !in_o(&f, &sp).unwrap());
    }

    #[test]
    fn periodized_action_is_trivial() {
        let sp = spec(3, 1, 1, 1);
        let f = nel(3, "x[1,2]^(s1 - s2^3) + x[2,3]^(2*s3^2)");
        for i in 2..=3 {
            let shift = Poly::var_pow(3, i, 2 * sp.m() as i64);
            let g = act_poly(&f, &shift).unwrap();
            assert_eq!(residue(&g, &sp).unwrap(), residue(&f, &sp).unwrap(), "i={i}");
            // 1 - s_i^{2m} lands in O
            let killer = &Poly::one(3) - &shift;
            assert!(in_o(&act_poly(&f, &killer).unwrap(), &sp).unwrap());
        }
    }

    #[test]
    fn residue_linear_and_idempotent() {
        let sp = spec(3, 2, 1, 1);
        let f = nel(3, "x[1,3]^(s3^3 - s1*s3^-2)");
        let g = nel(3, "x[2,3]^(5*s3^2) + x[1,2]^(s1*s2)");
        let lhs = residue(&f.add(&g).unwrap(), &sp).unwrap();
        let rhs = residue(&f, &sp).unwrap().add(&residue(&g, &sp).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let r = residue(&f, &sp).unwrap();
        assert_eq!(residue(&r, &sp).unwrap(), r);
    }

    #[test]
    fn ball_examples() {
        assert_eq!(ball(2, 1).unwrap(), vec![QElement::identity(2)]);
        let b = ball(2, 2).unwrap();
        let got: Vec<_> = b.iter().map(|q| q.exponents().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(ball(3, 4).unwrap().len(), 64);
        // window (-⌈3/2⌉, ⌊3/2⌋] = {-1, 0, 1}
        let b = ball(1, 3).unwrap();
        let got: Vec<_> = b.iter().map(|q| q.exponents()[0]).collect();
        assert_eq!(got, vec![-1, 0, 1]);
    }
}
