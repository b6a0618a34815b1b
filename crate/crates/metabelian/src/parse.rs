//! Text grammars for words, Laurent polynomials and derived-subgroup elements.
//!
//! ```text
//! poly := term (('+'|'-') term)*
//! term := integer ('*' mono)* | mono ('*' mono)*
//! mono := 's' index ('^' integer)?
//!
//! word := item*          (whitespace-separated; empty or "e" is the identity)
//! item := atom ('^' integer)?
//! atom := 'a' index | '(' word ')' | '[' word ',' word ']'
//!
//! nelem := nterm (('+'|'-') nterm)*
//! nterm := 'x[' i ',' j ']' ('^' '(' poly ')')?
//! ```
//!
//! Rendering is canonical: terms in ascending lexicographic order, unit
//! coefficients folded into the sign.

use crate::group::{NElement, RawNCombination, Word};
use crate::laurent::LaurentPoly;
use crate::{Coefficient, Error, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { bytes: text.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    /// Unsigned decimal digits as a string slice.
    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii"))
    }

    fn index(&mut self) -> Result<usize> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.err("index too large"))
    }

    fn integer_i64(&mut self) -> Result<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let d = self.digits()?;
        let v: i64 = d.parse().map_err(|_| self.err("integer too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn integer_coeff<C: Coefficient>(&mut self) -> Result<C> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let d = self.digits()?;
        let v = C::from_str(d).map_err(|_| self.err("bad integer"))?;
        Ok(if neg { -v } else { v })
    }
}

fn check_index(cur: &Cursor, i: usize, rank: usize) -> Result<usize> {
    if i < 1 || i > rank {
        return Err(cur.err(format!("index {i} out of range for rank {rank}")));
    }
    Ok(i)
}

// ---------------------------------------------------------------------------
// polynomials

fn parse_mono(cur: &mut Cursor, rank: usize) -> Result<(usize, i64)> {
    cur.expect(b's')?;
    let i = cur.index()?;
    let i = check_index(cur, i, rank)?;
    let e = if cur.eat(b'^') { cur.integer_i64()? } else { 1 };
    Ok((i, e))
}

fn parse_term<C: Coefficient>(cur: &mut Cursor, rank: usize, negate: bool) -> Result<LaurentPoly<C>> {
    cur.skip_ws();
    let mut coeff = match cur.peek() {
        Some(b's') => C::one(),
        Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' => cur.integer_coeff()?,
        _ => return Err(cur.err("expected a term")),
    };
    if negate {
        coeff = -coeff;
    }
    let mut exp = vec![0i64; rank];
    // first factor may have been the integer; the rest are '*'-joined monos
    if cur.peek() == Some(b's') {
        let (i, e) = parse_mono(cur, rank)?;
        exp[i - 1] += e;
    }
    loop {
        let save = cur.pos;
        cur.skip_ws();
        if cur.eat(b'*') {
            cur.skip_ws();
            let (i, e) = parse_mono(cur, rank)?;
            exp[i - 1] += e;
        } else {
            cur.pos = save;
            break;
        }
    }
    LaurentPoly::monomial(rank, exp, coeff)
}

fn parse_poly_at<C: Coefficient>(cur: &mut Cursor, rank: usize) -> Result<LaurentPoly<C>> {
    cur.skip_ws();
    let mut out = LaurentPoly::zero(rank);
    let first_neg = cur.eat(b'-');
    out = &out + &parse_term(cur, rank, first_neg)?;
    loop {
        let save = cur.pos;
        cur.skip_ws();
        let neg = if cur.eat(b'+') {
            false
        } else if cur.eat(b'-') {
            true
        } else {
            cur.pos = save;
            break;
        };
        out = &out + &parse_term(cur, rank, neg)?;
    }
    Ok(out)
}

pub fn parse_poly<C: Coefficient>(text: &str, rank: usize) -> Result<LaurentPoly<C>> {
    let mut cur = Cursor::new(text);
    let p = parse_poly_at(&mut cur, rank)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.err("trailing input"));
    }
    Ok(p)
}

pub fn render_poly<C: Coefficient>(p: &LaurentPoly<C>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (exp, coeff)) in p.terms().enumerate() {
        let neg = coeff.is_negative();
        let mag = coeff.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let monos: Vec<String> = exp
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i0, &e)| {
                if e == 1 {
                    format!("s{}", i0 + 1)
                } else {
                    format!("s{}^{}", i0 + 1, e)
                }
            })
            .collect();
        if monos.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&monos.join("*"));
        } else {
            out.push_str(&mag.to_string());
            out.push('*');
            out.push_str(&monos.join("*"));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// words

fn parse_word_at(cur: &mut Cursor, rank: usize, terminators: &[u8]) -> Result<Word> {
    let mut acc = Word::identity(rank);
    loop {
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(c) if terminators.contains(&c) => break,
            _ => {}
        }
        let atom = parse_atom(cur, rank)?;
        let atom = if cur.eat(b'^') { atom.pow(cur.integer_i64()?) } else { atom };
        acc = acc.concat(&atom)?;
    }
    Ok(acc)
}

fn parse_atom(cur: &mut Cursor, rank: usize) -> Result<Word> {
    match cur.peek() {
        Some(b'a') => {
            cur.pos += 1;
            let i = cur.index()?;
            let i = check_index(cur, i, rank)?;
            Word::new(rank, vec![(i, 1)])
        }
        Some(b'e') => {
            cur.pos += 1;
            Ok(Word::identity(rank))
        }
        Some(b'(') => {
            cur.pos += 1;
            let w = parse_word_at(cur, rank, &[b')'])?;
            cur.expect(b')')?;
            Ok(w)
        }
        Some(b'[') => {
            cur.pos += 1;
            let w1 = parse_word_at(cur, rank, &[b','])?;
            cur.expect(b',')?;
            let w2 = parse_word_at(cur, rank, &[b']'])?;
            cur.expect(b']')?;
            Word::commutator(&w1, &w2)
        }
        _ => Err(cur.err("expected 'a', 'e', '(' or '['")),
    }
}

pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    let mut cur = Cursor::new(text);
    let w = parse_word_at(&mut cur, rank, &[])?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.err("trailing input"));
    }
    Ok(w)
}

pub fn render_word(w: &Word) -> String {
    if w.letters().is_empty() {
        return "e".to_string();
    }
    w.letters()
        .iter()
        .map(|&(i, e)| if e == 1 { format!("a{i}") } else { format!("a{i}^{e}") })
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// derived-subgroup elements

fn parse_nterm<C: Coefficient>(
    cur: &mut Cursor,
    rank: usize,
    negate: bool,
) -> Result<(usize, usize, LaurentPoly<C>)> {
    cur.skip_ws();
    cur.expect(b'x')?;
    cur.expect(b'[')?;
    cur.skip_ws();
    let i = cur.index()?;
    let i = check_index(cur, i, rank)?;
    cur.skip_ws();
    cur.expect(b',')?;
    cur.skip_ws();
    let j = cur.index()?;
    let j = check_index(cur, j, rank)?;
    cur.skip_ws();
    cur.expect(b']')?;
    if i >= j {
        return Err(cur.err(format!("pair ({i},{j}) is not ordered")));
    }
    let mut p = if cur.eat(b'^') {
        cur.expect(b'(')?;
        let p = parse_poly_at(cur, rank)?;
        cur.skip_ws();
        cur.expect(b')')?;
        p
    } else {
        LaurentPoly::one(rank)
    };
    if negate {
        p = -&p;
    }
    Ok((i, j, p))
}

pub fn parse_nelement<C: Coefficient>(text: &str, rank: usize) -> Result<RawNCombination<C>> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let mut raw = RawNCombination::zero(rank);
    if cur.at_end() {
        return Ok(raw);
    }
    // "0" denotes the zero element
    if cur.peek() == Some(b'0') {
        cur.pos += 1;
        cur.skip_ws();
        if cur.at_end() {
            return Ok(raw);
        }
        return Err(cur.err("trailing input"));
    }
    let first_neg = cur.eat(b'-');
    let (i, j, p) = parse_nterm(&mut cur, rank, first_neg)?;
    raw.push(i, j, p)?;
    loop {
        let save = cur.pos;
        cur.skip_ws();
        let neg = if cur.eat(b'+') {
            false
        } else if cur.eat(b'-') {
            true
        } else {
            cur.pos = save;
            break;
        };
        let (i, j, p) = parse_nterm(&mut cur, rank, neg)?;
        raw.push(i, j, p)?;
    }
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.err("trailing input"));
    }
    Ok(raw)
}

pub fn render_nelement<C: Coefficient>(f: &NElement<C>) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    f.coords()
        .map(|(&(i, j), p)| {
            if p.is_one() {
                format!("x[{i},{j}]")
            } else {
                format!("x[{i},{j}]^({})", render_poly(p))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Int, Poly};

    fn poly(text: &str, rank: usize) -> Poly {
        parse_poly(text, rank).unwrap()
    }

    #[test]
    fn poly_examples() {
        let p = poly("1 - s2^2", 2);
        assert_eq!(p.coeff(&[0, 0]), Some(&Int::from(1)));
        assert_eq!(p.coeff(&[0, 2]), Some(&Int::from(-1)));
        assert_eq!(p.num_terms(), 2);

        let p = poly("3*s1^2*s2^-1 + s3", 3);
        assert_eq!(p.coeff(&[2, -1, 0]), Some(&Int::from(3)));
        assert_eq!(p.coeff(&[0, 0, 1]), Some(&Int::from(1)));

        assert_eq!(poly("0", 2), Poly::zero(2));
        assert_eq!(poly("-1", 1), -&Poly::one(1));
        assert_eq!(poly("s1*s1^-1", 1), Poly::one(1));
    }

    #[test]
    fn poly_errors() {
        assert!(parse_poly::<Int>("s3", 2).is_err());
        assert!(parse_poly::<Int>("1 +", 2).is_err());
        assert!(parse_poly::<Int>("x", 2).is_err());
        assert!(parse_poly::<Int>("1 - s2^2 junk", 2).is_err());
        assert!(matches!(
            parse_poly::<Int>("s0", 2),
            Err(crate::Error::Parse { .. })
        ));
    }

    #[test]
    fn poly_roundtrip() {
        for text in ["0", "1 - s2^2", "3*s1^2*s2^-1 + s3", "-s1 + 2", "-2*s1^-3"] {
            let p: Poly = parse_poly(text, 3).unwrap();
            let q: Poly = parse_poly(&render_poly(&p), 3).unwrap();
            assert_eq!(p, q, "{text}");
        }
        // canonical forms
        assert_eq!(render_poly(&poly("- s2^2 + 1", 2)), "1 - s2^2");
        assert_eq!(render_poly(&poly("-1*s1", 1)), "-s1");
        assert_eq!(render_poly(&Poly::zero(2)), "0");
    }

    #[test]
    fn word_examples() {
        let w = parse_word("a1 a2^-1", 2).unwrap();
        assert_eq!(w.letters(), &[(1, 1), (2, -1)]);

        let w = parse_word("[a1,a2]^3", 2).unwrap();
        let c = Word::commutator(
            &parse_word("a1", 2).unwrap(),
            &parse_word("a2", 2).unwrap(),
        )
        .unwrap();
        assert_eq!(w, c.pow(3));

        assert_eq!(parse_word("e", 2).unwrap(), Word::identity(2));
        assert_eq!(parse_word("", 2).unwrap(), Word::identity(2));
        assert_eq!(parse_word("(a1 a2)^-1", 2).unwrap().letters(), &[(2, -1), (1, -1)]);
    }

    #[test]
    fn word_errors() {
        assert!(parse_word("a3", 2).is_err());
        assert!(parse_word("a1^", 2).is_err());
        assert!(parse_word("[a1 a2]", 2).is_err());
        assert!(parse_word("(a1", 2).is_err());
        assert!(parse_word("b1", 2).is_err());
    }

    #[test]
    fn word_render_roundtrip() {
        for text in ["e", "a1 a2^-1", "a1^2 a2^-3 a1"] {
            let w = parse_word(text, 2).unwrap();
            assert_eq!(parse_word(&render_word(&w), 2).unwrap(), w);
        }
        assert_eq!(render_word(&Word::identity(2)), "e");
    }

    #[test]
    fn nelement_examples() {
        let raw = parse_nelement::<Int>("x[1,2]^(1 - s2^2)", 2).unwrap();
        assert_eq!(raw.terms().len(), 1);
        let (i, j, p) = &raw.terms()[0];
        assert_eq!((*i, *j), (1, 2));
        assert_eq!(*p, poly("1 - s2^2", 2));

        let raw = parse_nelement::<Int>("x[1,2] - x[1,3]^(s2)", 3).unwrap();
        assert_eq!(raw.terms().len(), 2);
        assert_eq!(raw.terms()[1].2, poly("-s2", 3));

        assert!(parse_nelement::<Int>("0", 3).unwrap().terms().is_empty());
        assert!(parse_nelement::<Int>("x[2,1]", 3).is_err());
        assert!(parse_nelement::<Int>("x[1,4]", 3).is_err());
    }

    #[test]
    fn nelement_render_roundtrip() {
        use crate::group::normalize;
        for text in ["0", "x[1,2]", "x[1,2]^(-1)", "x[1,2]^(1 + s2) + x[1,3]^(2*s1^-1)"] {
            let f = normalize(&parse_nelement::<Int>(text, 3).unwrap());
            let g = normalize(&parse_nelement::<Int>(&render_nelement(&f), 3).unwrap());
            assert_eq!(f, g, "{text}");
        }
    }
}
