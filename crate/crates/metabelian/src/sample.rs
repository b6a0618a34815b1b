//! Seeded random generators for verification suites and property tests.
//!
//! Everything derives from an explicit ChaCha stream so failures reproduce
//! from the reported seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{normalize, NElement, QElement, RawNCombination, Word};
use crate::laurent::LaurentPoly;
use crate::Coefficient;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream for trial `k` of a named suite.
pub fn trial_rng(seed: u64, suite: &str, k: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    rng_from_seed(seed ^ h.rotate_left(17) ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn rand_coeff<C: Coefficient>(rng: &mut impl Rng, max_abs: i64) -> C {
    C::from_i64(rng.gen_range(-max_abs..=max_abs)).expect("small coefficient")
}

pub fn rand_poly<C: Coefficient>(
    rng: &mut impl Rng,
    rank: usize,
    max_terms: usize,
    max_exp: i64,
    max_coeff: i64,
) -> LaurentPoly<C> {
    let nterms = rng.gen_range(0..=max_terms);
    let mut p = LaurentPoly::zero(rank);
    for _ in 0..nterms {
        let exp: Vec<i64> = (0..rank).map(|_| rng.gen_range(-max_exp..=max_exp)).collect();
        p.add_term(exp, rand_coeff(rng, max_coeff));
    }
    p
}

/// Nonzero variant of [`rand_poly`].
pub fn rand_poly_nonzero<C: Coefficient>(
    rng: &mut impl Rng,
    rank: usize,
    max_terms: usize,
    max_exp: i64,
    max_coeff: i64,
) -> LaurentPoly<C> {
    loop {
        let p = rand_poly(rng, rank, max_terms.max(1), max_exp, max_coeff);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Monic univariate divisor in `var`: extreme coefficients ±1, inner
/// coefficients bounded, degree exactly `degree`, with a random Laurent
/// offset.
pub fn rand_monic<C: Coefficient>(
    rng: &mut impl Rng,
    rank: usize,
    var: usize,
    degree: u64,
    max_coeff: i64,
) -> LaurentPoly<C> {
    assert!(degree >= 1);
    let lo = rng.gen_range(-3..=3i64);
    let hi = lo + degree as i64;
    let lo_c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let hi_c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut p = LaurentPoly::zero(rank);
    let exp_at = |e: i64| {
        let mut exp = vec![0i64; rank];
        exp[var - 1] = e;
        exp
    };
    p.add_term(exp_at(lo), C::from_i64(lo_c).expect("unit"));
    p.add_term(exp_at(hi), C::from_i64(hi_c).expect("unit"));
    for e in (lo + 1)..hi {
        p.add_term(exp_at(e), rand_coeff(rng, max_coeff));
    }
    p
}

pub fn rand_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<(usize, i64)> = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..=rank);
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            (i, e)
        })
        .collect();
    Word::new(rank, letters).expect("valid letters")
}

pub fn rand_qelement(rng: &mut impl Rng, rank: usize, max_exp: i64) -> QElement {
    QElement::new((0..rank).map(|_| rng.gen_range(-max_exp..=max_exp)).collect())
}

pub fn rand_raw<C: Coefficient>(
    rng: &mut impl Rng,
    rank: usize,
    max_terms: usize,
    max_exp: i64,
    max_coeff: i64,
) -> RawNCombination<C> {
    let nterms = rng.gen_range(0..=max_terms);
    let mut raw = RawNCombination::zero(rank);
    for _ in 0..nterms {
        let i = rng.gen_range(1..rank);
        let j = rng.gen_range(i + 1..=rank);
        let p = rand_poly(rng, rank, 3, max_exp, max_coeff);
        raw.push(i, j, p).expect("valid pair");
    }
    raw
}

pub fn rand_nelement<C: Coefficient>(
    rng: &mut impl Rng,
    rank: usize,
    max_terms: usize,
    max_exp: i64,
    max_coeff: i64,
) -> NElement<C> {
    normalize(&rand_raw(rng, rank, max_terms, max_exp, max_coeff))
}
