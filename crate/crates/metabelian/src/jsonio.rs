//! JSON views of polynomials, group elements and rationals.
//!
//! Coefficients are emitted as JSON numbers with full precision (the
//! `arbitrary_precision` backend keeps them as decimal strings internally),
//! so round-trips are exact for unbounded integers.

use serde_json::{json, Map, Number, Value};

use crate::group::{GroupElement, NElement, QElement};
use crate::laurent::LaurentPoly;
use crate::{Coefficient, Error, Result};

fn jerr(msg: impl Into<String>) -> Error {
    Error::Parse { pos: 0, msg: msg.into() }
}

fn int_to_json<C: Coefficient>(c: &C) -> Value {
    Value::Number(Number::from_string_unchecked(c.to_string()))
}

fn int_from_json<C: Coefficient>(v: &Value) -> Result<C> {
    let Value::Number(n) = v else {
        return Err(jerr("expected an integer"));
    };
    C::from_str(&n.to_string()).map_err(|_| jerr("expected an integer"))
}

fn usize_from_json(v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| jerr("expected a nonnegative integer"))
}

fn i64_from_json(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| jerr("expected a machine integer"))
}

pub fn poly_to_json<C: Coefficient>(p: &LaurentPoly<C>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(exp, c)| json!({ "exp": exp, "coef": int_to_json(c) }))
        .collect();
    json!({ "rank": p.rank(), "terms": terms })
}

pub fn poly_from_json<C: Coefficient>(v: &Value) -> Result<LaurentPoly<C>> {
    let obj = v.as_object().ok_or_else(|| jerr("expected a polynomial object"))?;
    let rank = usize_from_json(obj.get("rank").ok_or_else(|| jerr("missing rank"))?)?;
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| jerr("missing terms array"))?;
    let mut p = LaurentPoly::zero(rank);
    for t in terms {
        let t = t.as_object().ok_or_else(|| jerr("expected a term object"))?;
        let exp = t
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| jerr("missing exp"))?
            .iter()
            .map(i64_from_json)
            .collect::<Result<Vec<i64>>>()?;
        if exp.len() != rank {
            return Err(Error::RankMismatch(exp.len(), rank));
        }
        let coef = int_from_json(t.get("coef").ok_or_else(|| jerr("missing coef"))?)?;
        p.add_term(exp, coef);
    }
    Ok(p)
}

pub fn nelement_to_json<C: Coefficient>(f: &NElement<C>) -> Value {
    let parts: Vec<Value> = f
        .coords()
        .map(|(&(i, j), p)| json!({ "i": i, "j": j, "poly": poly_to_json(p) }))
        .collect();
    Value::Array(parts)
}

pub fn element_to_json<C: Coefficient>(g: &GroupElement<C>) -> Value {
    json!({
        "d": g.rank(),
        "q": g.q().exponents(),
        "n": nelement_to_json(g.f()),
    })
}

pub fn element_from_json<C: Coefficient>(v: &Value) -> Result<GroupElement<C>> {
    let obj = v.as_object().ok_or_else(|| jerr("expected an element object"))?;
    let d = usize_from_json(obj.get("d").ok_or_else(|| jerr("missing d"))?)?;
    let q = obj
        .get("q")
        .and_then(Value::as_array)
        .ok_or_else(|| jerr("missing q"))?
        .iter()
        .map(i64_from_json)
        .collect::<Result<Vec<i64>>>()?;
    if q.len() != d {
        return Err(Error::RankMismatch(q.len(), d));
    }
    let parts = obj
        .get("n")
        .and_then(Value::as_array)
        .ok_or_else(|| jerr("missing n"))?;
    let mut triples = Vec::new();
    for part in parts {
        let part = part.as_object().ok_or_else(|| jerr("expected a coordinate object"))?;
        let i = usize_from_json(part.get("i").ok_or_else(|| jerr("missing i"))?)?;
        let j = usize_from_json(part.get("j").ok_or_else(|| jerr("missing j"))?)?;
        let poly = poly_from_json(part.get("poly").ok_or_else(|| jerr("missing poly"))?)?;
        triples.push((i, j, poly));
    }
    let f = NElement::from_triangular(d, triples)?;
    GroupElement::new(QElement::new(q), f)
}

pub fn rational_to_json<C: Coefficient>(r: &num_rational::Ratio<C>) -> Value {
    json!({ "num": int_to_json(r.numer()), "den": int_to_json(r.denom()) })
}

/// Wrap a payload with the schema version tag used by every CLI output.
pub fn with_schema(mut payload: Map<String, Value>) -> Value {
    payload.insert("schema".into(), json!(1));
    Value::Object(payload)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::reduce;
    use crate::parse::{parse_poly, parse_word};
    use crate::{Int, Poly, Rational};

    #[test]
    fn poly_roundtrip() {
        for text in ["0", "1 - s2^2", "3*s1^2*s2^-1 + s3"] {
            let p: Poly = parse_poly(text, 3).unwrap();
            let v = poly_to_json(&p);
            assert_eq!(poly_from_json::<Int>(&v).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn huge_coefficients_survive() {
        let big: Int = Int::from(10).pow(40) + Int::from(7);
        let mut p = Poly::zero(1);
        p.add_term(vec![-3], big.clone());
        let v = poly_to_json(&p);
        let text = serde_json::to_string(&v).unwrap();
        let back: Poly = poly_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.coeff(&[-3]), Some(&big));
    }

    #[test]
    fn element_roundtrip() {
        let g = reduce::<Int>(&parse_word("a2 a1^2 a2^-1 a1", 3).unwrap());
        let v = element_to_json(&g);
        assert_eq!(element_from_json::<Int>(&v).unwrap(), g);
    }

    #[test]
    fn documented_reduce_shape() {
        let g = reduce::<Int>(&parse_word("a2 a1", 2).unwrap());
        let v = element_to_json(&g);
        assert_eq!(v["d"], serde_json::json!(2));
        assert_eq!(v["q"], serde_json::json!([1, 1]));
        let n = v["n"].as_array().unwrap();
        assert_eq!(n.len(), 1);
        assert_eq!(n[0]["i"], serde_json::json!(1));
        assert_eq!(n[0]["j"], serde_json::json!(2));
        let p = poly_from_json::<Int>(&n[0]["poly"]).unwrap();
        assert_eq!(p, parse_poly::<Int>("-1", 2).unwrap());
    }

    #[test]
    fn rational_shape() {
        let r = Rational::new(Int::from(3), Int::from(4));
        let v = rational_to_json(&r);
        assert_eq!(v["num"].to_string(), "3");
        assert_eq!(v["den"].to_string(), "4");
    }
}
