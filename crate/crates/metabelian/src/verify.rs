//! Seeded verification suites exercising the documented invariants of every
//! module. Each trial draws an independent random stream from the master
//! seed, so reports are reproducible and order-independent.

use crate::folner::{
    adaptedness_ratio, box_overlap_ratio, coords_in_basis, i_window, lattice_basis,
    t_contains_exact, t_contains_witness, z_set, MembershipMode, Trilean, WitnessedN,
};
use crate::group::{
    act, act_poly, commutator, commutator_expand, conj_defect, embed, hat_section, inv,
    jacobi_relator, mul, normalize, normalize_with, project, reduce, QElement, Strategy, Word,
};
use crate::jsonio;
use crate::laurent::{div_rem_multi, divisor_window};
use crate::parse;
use crate::residue::{ball, in_m, in_o, residue, residue_witnessed, ResidueSpec};
use crate::sample;
use crate::{Element, Int, NElem, Poly, Rational, RawN, Result};

use rand::Rng;

pub const SUITES: &[&str] = &[
    "division",
    "normalize",
    "group",
    "freeness",
    "residue",
    "folner",
    "roundtrip",
    "retraction",
];

/// Outcome of one suite: trial count, failure count, and the first few
/// failure messages (each carrying its trial index for replay).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: u64,
    pub failed: u64,
    pub messages: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, trials: u64) -> Self {
        SuiteReport { suite: suite.into(), trials, failed: 0, messages: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, trial: u64, msg: impl Into<String>) {
        self.failed += 1;
        if self.messages.len() < 10 {
            self.messages.push(format!("trial {trial}: {}", msg.into()));
        }
    }
}

/// Run one named suite, or every suite for `"all"`.
pub fn run(suite: &str, trials: u64, seed: u64) -> Result<Vec<SuiteReport>> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(crate::Error::InvalidParameter(format!(
            "unknown suite '{suite}' (expected one of {} or all)",
            SUITES.join(", ")
        )));
    };
    Ok(names.into_iter().map(|n| run_one(n, trials, seed)).collect())
}

fn run_one(name: &str, trials: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(name, trials);
    for k in 0..trials {
        let mut rng = sample::trial_rng(seed, name, k);
        let outcome = match name {
            "division" => division_trial(&mut rng),
            "normalize" => normalize_trial(&mut rng),
            "group" => group_trial(&mut rng),
            "freeness" => freeness_trial(&mut rng),
            "residue" => residue_trial(&mut rng),
            "folner" => folner_trial(&mut rng, k),
            "roundtrip" => roundtrip_trial(&mut rng),
            "retraction" => retraction_trial(&mut rng),
            _ => unreachable!("suite names validated in run"),
        };
        if let Err(msg) = outcome {
            report.record(k, msg);
        }
    }
    report
}

type Trial = std::result::Result<(), String>;

fn fail(msg: impl Into<String>) -> Trial {
    Err(msg.into())
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (k, x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, x.clone());
            out.push(tail);
        }
    }
    out
}

fn division_trial(rng: &mut impl Rng) -> Trial {
    let d = rng.gen_range(1..=4usize);
    let ndiv = rng.gen_range(1..=3.min(d));
    let mut vars: Vec<usize> = (1..=d).collect();
    for k in (1..vars.len()).rev() {
        vars.swap(k, rng.gen_range(0..=k));
    }
    vars.truncate(ndiv);
    let divisors: Vec<(Poly, usize)> = vars
        .iter()
        .map(|&v| {
            let deg = rng.gen_range(1..=6u64);
            (sample::rand_monic::<Int>(rng, d, v, deg, 9), v)
        })
        .collect();
    let psi: Poly = sample::rand_poly(rng, d, 6, 8, 9);
    let (thetas, lambda) = div_rem_multi(&psi, &divisors).map_err(|e| e.to_string())?;
    // reconstruction
    let mut acc = lambda.clone();
    for (theta, (phi, _)) in thetas.iter().zip(&divisors) {
        acc = &acc + &(theta * phi);
    }
    if acc != psi {
        return fail("reconstruction identity failed");
    }
    let window = divisor_window(d, &divisors).map_err(|e| e.to_string())?;
    if !lambda.in_window(&window).map_err(|e| e.to_string())? {
        return fail("remainder left the window");
    }
    // order independence of the remainder
    for perm in permutations(&divisors) {
        let (_, l2) = div_rem_multi(&psi, &perm).map_err(|e| e.to_string())?;
        if l2 != lambda {
            return fail("remainder depends on divisor order");
        }
    }
    // remainders are absorbing
    let (thetas2, l3) = div_rem_multi(&lambda, &divisors).map_err(|e| e.to_string())?;
    if l3 != lambda || thetas2.iter().any(|t| !t.is_zero()) {
        return fail("windowed input not returned unchanged");
    }
    // linearity of the remainder
    let psi2: Poly = sample::rand_poly(rng, d, 6, 8, 9);
    let a = Int::from(rng.gen_range(-5..=5i64));
    let b = Int::from(rng.gen_range(-5..=5i64));
    let combo = &psi.scale(&a) + &psi2.scale(&b);
    let (_, lc) = div_rem_multi(&combo, &divisors).map_err(|e| e.to_string())?;
    let (_, l2) = div_rem_multi(&psi2, &divisors).map_err(|e| e.to_string())?;
    if lc != &lambda.scale(&a) + &l2.scale(&b) {
        return fail("remainder is not linear");
    }
    Ok(())
}

fn normalize_trial(rng: &mut impl Rng) -> Trial {
    let d = rng.gen_range(2..=5usize);
    let raw: RawN = sample::rand_raw(rng, d, 4, 3, 9);
    let a = normalize_with(&raw, Strategy::PeelLargest);
    let b = normalize_with(&raw, Strategy::FullPowerSmallest);
    if a != b {
        return fail("rewriting strategies disagree");
    }
    if normalize(&a.to_raw()) != a {
        return fail("normalize is not idempotent");
    }
    // Jacobi relators vanish, also after multiplying by a random polynomial
    if d >= 3 {
        let i = rng.gen_range(1..=d - 2);
        let j = rng.gen_range(i + 1..=d - 1);
        let k = rng.gen_range(j + 1..=d);
        let rel: RawN = jacobi_relator(d, i, j, k).map_err(|e| e.to_string())?;
        if !normalize(&rel).is_zero() {
            return fail("jacobi relator does not vanish");
        }
        let p: Poly = sample::rand_poly(rng, d, 3, 2, 5);
        let shifted = raw.add(&rel.mul_poly(&p)).map_err(|e| e.to_string())?;
        if normalize(&shifted) != a {
            return fail("normal form changed by a relator multiple");
        }
    }
    Ok(())
}

fn group_trial(rng: &mut impl Rng) -> Trial {
    let d = rng.gen_range(2..=4usize);
    let w1 = sample::rand_word(rng, d, 12);
    let w2 = sample::rand_word(rng, d, 12);
    let w3 = sample::rand_word(rng, d, 12);
    let g1: Element = reduce(&w1);
    let g2: Element = reduce(&w2);
    let g3: Element = reduce(&w3);
    let e = Element::identity(d);
    let ab_c = mul(&mul(&g1, &g2).map_err(|x| x.to_string())?, &g3).map_err(|x| x.to_string())?;
    let a_bc = mul(&g1, &mul(&g2, &g3).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
    if ab_c != a_bc {
        return fail("associativity failed");
    }
    if mul(&g1, &e).map_err(|x| x.to_string())? != g1 || mul(&e, &g1).map_err(|x| x.to_string())? != g1 {
        return fail("identity law failed");
    }
    if !mul(&g1, &inv(&g1)).map_err(|x| x.to_string())?.is_identity() {
        return fail("inverse law failed");
    }
    // reduce is a homomorphism
    let cat = w1.concat(&w2).map_err(|x| x.to_string())?;
    if reduce::<Int>(&cat) != mul(&g1, &g2).map_err(|x| x.to_string())? {
        return fail("reduce is not a homomorphism");
    }
    // metabelian law
    let w4 = sample::rand_word(rng, d, 12);
    let c1 = Word::commutator(&w1, &w2).map_err(|x| x.to_string())?;
    let c2 = Word::commutator(&w3, &w4).map_err(|x| x.to_string())?;
    let outer = Word::commutator(&c1, &c2).map_err(|x| x.to_string())?;
    if !reduce::<Int>(&outer).is_identity() {
        return fail("metabelian law failed");
    }
    // commutator via expansion vs via multiplication
    let q = sample::rand_qelement(rng, d, 2);
    let lhs = commutator_expand(&g1, &q).map_err(|x| x.to_string())?;
    let hq: Element = reduce(&hat_section(&q));
    let rhs = commutator(&g1, &hq).map_err(|x| x.to_string())?;
    if lhs != rhs {
        return fail("commutator expansion disagrees with the definition");
    }
    // conjugation defect contract
    let i = rng.gen_range(1..=d);
    let fq = conj_defect::<Int>(d, i, &q).map_err(|x| x.to_string())?;
    let ai: Element = reduce(&Word::new(d, vec![(i, 1)]).map_err(|x| x.to_string())?);
    let hq0 = Element::new(q.clone(), NElem::zero(d)).map_err(|x| x.to_string())?;
    let lhs = mul(&ai, &hq0).map_err(|x| x.to_string())?;
    let si = QElement::generator(d, i, 1).map_err(|x| x.to_string())?;
    let rhs = Element::new(q.mul(&si), fq).map_err(|x| x.to_string())?;
    if lhs != rhs {
        return fail("conjugation defect contract failed");
    }
    Ok(())
}

fn freeness_trial(rng: &mut impl Rng) -> Trial {
    // at rank 2 the derived subgroup is a free module: normalization must
    // agree with plain coefficient addition on the single pair (1,2)
    let raw: RawN = sample::rand_raw(rng, 2, 5, 4, 9);
    let mut total = Poly::zero(2);
    for (_, _, p) in raw.terms() {
        total = &total + p;
    }
    let expect = NElem::from_triangular(2, vec![(1, 2, total)]).map_err(|e| e.to_string())?;
    if normalize(&raw) != expect {
        return fail("rank-2 normalization differs from the free-module sum");
    }
    Ok(())
}

fn random_spec(rng: &mut impl Rng) -> ResidueSpec {
    let d = rng.gen_range(2..=3usize);
    let c = rng.gen_range(1..=2.min(d));
    let n = rng.gen_range(1..=2u64);
    let t = rng.gen_range(1..=2u64);
    ResidueSpec::new(d, c, n, t).expect("valid parameters")
}

fn residue_trial(rng: &mut impl Rng) -> Trial {
    let sp = random_spec(rng);
    let d = sp.d();
    let f: NElem = sample::rand_nelement(rng, d, 4, 5, 9);
    let (r, witness) = residue_witnessed(&f, &sp).map_err(|e| e.to_string())?;
    if !in_m(&r, &sp).map_err(|e| e.to_string())? {
        return fail("residue left M");
    }
    // witness reconstruction of f - r
    let mut diff = NElem::zero(d);
    for (i, j, parts) in &witness {
        for (theta, phi) in parts {
            let term = NElem::from_triangular(d, vec![(*i, *j, theta * phi)])
                .map_err(|e| e.to_string())?;
            diff = diff.add(&term).map_err(|e| e.to_string())?;
        }
    }
    if f.sub(&r).map_err(|e| e.to_string())? != diff {
        return fail("witness does not reconstruct f - residue(f)");
    }
    if residue(&r, &sp).map_err(|e| e.to_string())? != r {
        return fail("residue is not idempotent");
    }
    // O-invariance: shifting by generator multiples does not move the residue
    let mut g = f.clone();
    for _ in 0..2 {
        let i = rng.gen_range(1..d);
        let j = rng.gen_range(i + 1..=d);
        let gens = sp.o_generators::<Int>(i, j).map_err(|e| e.to_string())?;
        if let Some((phi, _)) = gens.first() {
            let p: Poly = sample::rand_poly(rng, d, 2, 2, 3);
            let shift = NElem::from_triangular(d, vec![(i, j, &p * phi)])
                .map_err(|e| e.to_string())?;
            g = g.add(&shift).map_err(|e| e.to_string())?;
        }
    }
    if residue(&g, &sp).map_err(|e| e.to_string())? != r {
        return fail("residue moved under an O-shift");
    }
    // M ∩ O = 0
    if in_m(&f, &sp).map_err(|e| e.to_string())? && in_o(&f, &sp).map_err(|e| e.to_string())? && !f.is_zero() {
        return fail("nonzero element in both M and O");
    }
    // V-triviality and the O-membership lemma for i > c
    for i in (sp.c() + 1)..=d {
        let shift = Poly::var_pow(d, i, 2 * sp.m() as i64);
        let fv = act_poly(&f, &shift).map_err(|e| e.to_string())?;
        if residue(&fv, &sp).map_err(|e| e.to_string())? != r {
            return fail("periodized shift changed the residue");
        }
        let killer = &Poly::one(d) - &shift;
        if !in_o(&act_poly(&f, &killer).map_err(|e| e.to_string())?, &sp).map_err(|e| e.to_string())? {
            return fail("1 - s_i^{2m} multiple escaped O");
        }
    }
    // ball containment: basic commutators shifted across ball(d, 2m-1) stay in M
    let qs = ball(d, 2 * sp.m() - 1).map_err(|e| e.to_string())?;
    for i in 1..d {
        for j in (i + 1)..=d {
            let x = NElem::basic(d, i, j).map_err(|e| e.to_string())?;
            for v in &qs {
                if !in_m(&act(&x, v).map_err(|e| e.to_string())?, &sp).map_err(|e| e.to_string())? {
                    return fail("ball containment failed");
                }
            }
        }
    }
    // U-invariance of M
    for k in 1..=sp.c() {
        for e in [1i64, -1] {
            let shifted = act(&r, &QElement::generator(d, k, e).map_err(|x| x.to_string())?)
                .map_err(|x| x.to_string())?;
            if !in_m(&shifted, &sp).map_err(|x| x.to_string())? {
                return fail("M is not U-invariant");
            }
        }
    }
    Ok(())
}

fn folner_trial(rng: &mut impl Rng, trial: u64) -> Trial {
    let sp = random_spec(rng);
    let d = sp.d();
    let basis = lattice_basis::<Int>(&sp);
    let z = z_set(&sp);
    // every Z member reconstructs from the basis
    let k = rng.gen_range(0..z.len());
    let f: NElem = z.member(k);
    let coords = coords_in_basis(&f, &basis).map_err(|e| e.to_string())?;
    let mut acc = NElem::zero(d);
    for (c, row) in coords.iter().zip(0..basis.rank()) {
        acc = acc.add(&basis.row_element(row).scale(c)).map_err(|e| e.to_string())?;
    }
    if acc != f {
        return fail("Z member does not reconstruct from the basis");
    }
    // witness soundness against exact search on a small combination
    let c1 = Int::from(rng.gen_range(-2..=2i64));
    let combo = f.scale(&c1);
    if let Some(w) = WitnessedN::from_monomials(&combo, &sp) {
        if t_contains_witness(&w, &sp).map_err(|e| e.to_string())?
            && t_contains_exact(&combo, &sp, 50_000).map_err(|e| e.to_string())? == Trilean::False
        {
            return fail("witnessed membership contradicted by exact search");
        }
    }
    // overlap ratio closed form vs brute force on random basis coordinates
    let side = rng.gen_range(1..=6u64);
    let take = basis.rank().min(2);
    let cs: Vec<i64> = (0..take).map(|_| rng.gen_range(-7..=7i64)).collect();
    let mut probe = NElem::zero(d);
    for (c, row) in cs.iter().zip(0..take) {
        probe = probe
            .add(&basis.row_element(row).scale(&Int::from(*c)))
            .map_err(|e| e.to_string())?;
    }
    let got = box_overlap_ratio(&basis, side, &probe).map_err(|e| e.to_string())?;
    let mut expect = Rational::new(Int::from(1), Int::from(1));
    let mut full_coords = vec![0i64; basis.rank()];
    full_coords[..take].copy_from_slice(&cs);
    for c in full_coords {
        let keep = (side as i64 - c.abs()).max(0);
        expect *= Rational::new(Int::from(keep), Int::from(side));
    }
    if got != expect {
        return fail("overlap ratio disagrees with the per-axis count");
    }
    // conjugation defect identity over the transversal window (spot check)
    let window = i_window(&sp);
    let q = &window[rng.gen_range(0..window.len())];
    let i = rng.gen_range(1..=d);
    let ai: Element = reduce(&Word::new(d, vec![(i, 1)]).map_err(|e| e.to_string())?);
    let hq = Element::new(q.clone(), NElem::zero(d)).map_err(|e| e.to_string())?;
    let lhs = mul(&ai, &hq).map_err(|e| e.to_string())?;
    let si = QElement::generator(d, i, 1).map_err(|e| e.to_string())?;
    let fq = conj_defect::<Int>(d, i, q).map_err(|e| e.to_string())?;
    if lhs != Element::new(q.mul(&si), fq).map_err(|e| e.to_string())? {
        return fail("defect identity failed on the window");
    }
    // adaptedness closed form, checked once per run
    if trial == 0 {
        let expect = [(1u64, 3i64, 4i64), (2, 13, 16), (3, 31, 36), (4, 57, 64)];
        for (n, num, den) in expect {
            let sp = ResidueSpec::new(2, 1, n, 1).expect("valid");
            let g: Element = reduce(&Word::new(2, vec![(2, 1)]).map_err(|e| e.to_string())?);
            let got = adaptedness_ratio(&g, &[WitnessedN::zero(2)], &sp, MembershipMode::Witness)
                .map_err(|e| e.to_string())?;
            if got != Rational::new(Int::from(num), Int::from(den)) {
                return fail(format!("adaptedness ratio wrong at n={n}"));
            }
        }
    }
    Ok(())
}

fn roundtrip_trial(rng: &mut impl Rng) -> Trial {
    let d = rng.gen_range(2..=4usize);
    let w = sample::rand_word(rng, d, 10);
    let text = parse::render_word(&w);
    let back = parse::parse_word(&text, d).map_err(|e| e.to_string())?;
    if back != w || parse::render_word(&back) != text {
        return fail("word round-trip failed");
    }
    let p: Poly = sample::rand_poly(rng, d, 6, 5, 9);
    let text = parse::render_poly(&p);
    let back: Poly = parse::parse_poly(&text, d).map_err(|e| e.to_string())?;
    if back != p || parse::render_poly(&back) != text {
        return fail("polynomial round-trip failed");
    }
    let f: NElem = sample::rand_nelement(rng, d, 4, 3, 9);
    let text = parse::render_nelement(&f);
    let back = normalize(&parse::parse_nelement::<Int>(&text, d).map_err(|e| e.to_string())?);
    if back != f {
        return fail("N-element round-trip failed");
    }
    // JSON round-trips
    if jsonio::poly_from_json::<Int>(&jsonio::poly_to_json(&p)).map_err(|e| e.to_string())? != p {
        return fail("polynomial JSON round-trip failed");
    }
    let g: Element = reduce(&w);
    if jsonio::element_from_json::<Int>(&jsonio::element_to_json(&g)).map_err(|e| e.to_string())? != g {
        return fail("element JSON round-trip failed");
    }
    Ok(())
}

fn retraction_trial(rng: &mut impl Rng) -> Trial {
    let d = rng.gen_range(2..=4usize);
    let w = sample::rand_word(rng, d, 10);
    let g: Element = reduce(&w);
    let e = embed(&g, d + 3).map_err(|x| x.to_string())?;
    if project(&e, d).map_err(|x| x.to_string())? != g {
        return fail("project(embed(g)) != g");
    }
    // projection is a homomorphism
    let w2 = sample::rand_word(rng, d, 10);
    let g2: Element = reduce(&w2);
    let k = rng.gen_range(2..=d);
    let lhs = project(&mul(&g, &g2).map_err(|x| x.to_string())?, k).map_err(|x| x.to_string())?;
    let rhs = mul(
        &project(&g, k).map_err(|x| x.to_string())?,
        &project(&g2, k).map_err(|x| x.to_string())?,
    )
    .map_err(|x| x.to_string())?;
    if lhs != rhs {
        return fail("projection is not a homomorphism");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_briefly() {
        for report in run("all", 8, 20260826).unwrap() {
            assert!(report.passed(), "{}: {:?}", report.suite, report.messages);
        }
    }

    #[test]
    fn determinism_of_reports() {
        let a = run("group", 5, 42).unwrap();
        let b = run("group", 5, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run("nope", 1, 1).is_err());
    }
}
