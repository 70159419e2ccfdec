//! JSON forms of p-adic numbers, matrices, decompositions and characters.
//!
//! A p-adic number is written `{"val": v, "digits": [d0, d1, …]}` (little
//! endian digits of the unit; `O(p^A)` is `{"val": A, "digits": []}`) and
//! may be read from a rational string `"num/den"` or an integer as well.

use serde_json::{json, Value};

use crate::decomp::RBDecomposition;
use crate::error::{Error, Result};
use crate::matrix::PMatrix;
use crate::padic::PAdic;
use crate::residue::{KKElem, ResidueField};
use crate::series::{CharComponent, Character};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn padic_to_json(x: &PAdic) -> Value {
    match x.valuation() {
        Some(v) => json!({"val": v, "digits": x.digits()}),
        None => json!({"val": x.abs_prec(), "digits": []}),
    }
}

pub fn padic_from_json(v: &Value, p: u32, prec: u32) -> Result<PAdic> {
    match v {
        Value::String(s) => PAdic::parse_rational(s, p, prec),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| bad(format!("{n} is not an integer")))?;
            PAdic::from_i64(i, p, prec)
        }
        Value::Object(obj) => {
            let val = obj
                .get("val")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("digit object needs an integer \"val\""))?;
            let digits = obj
                .get("digits")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("digit object needs a \"digits\" array"))?
                .iter()
                .map(|d| {
                    d.as_u64()
                        .and_then(|d| u32::try_from(d).ok())
                        .ok_or_else(|| bad(format!("bad digit {d}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            PAdic::from_digits(p, val, &digits)
        }
        other => Err(bad(format!("not a p-adic number: {other}"))),
    }
}

pub fn matrix_to_json(m: &PMatrix) -> Value {
    Value::Array(
        m.rows()
            .map(|row| Value::Array(row.iter().map(padic_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, p: u32, prec: u32) -> Result<PMatrix> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(bad("empty matrix"));
    }
    let rows = rows
        .iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
            if row.len() != n {
                return Err(Error::DimensionMismatch(n, row.len()));
            }
            row.iter().map(|x| padic_from_json(x, p, prec)).collect()
        })
        .collect::<Result<Vec<Vec<PAdic>>>>()?;
    PMatrix::from_rows(rows)
}

pub fn decomposition_to_json(d: &RBDecomposition, precision: u32) -> Value {
    json!({
        "w": d.w.to_string(),
        "r": matrix_to_json(&d.r),
        "b": matrix_to_json(&d.b),
        "precision": precision,
    })
}

pub fn kk_to_json(x: &KKElem) -> Value {
    Value::String(x.to_string())
}

fn kk_from_str(field: &std::sync::Arc<ResidueField>, s: &str) -> Result<KKElem> {
    let coeffs = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<i64>()
                .map(|x| x.rem_euclid(field.characteristic() as i64) as u32)
                .map_err(|_| bad(format!("bad field element {s:?}")))
        })
        .collect::<Result<Vec<u32>>>()?;
    field.from_coeffs(&coeffs)
}

/// `{"p":3, "m":1, "chi":[{"c":"1","e":0}, …], "modulus":[…]}`; the modulus
/// (monic, low degree first) is required when `m > 1`.
pub fn character_from_json(v: &Value) -> Result<Character> {
    let p = v
        .get("p")
        .and_then(Value::as_u64)
        .and_then(|p| u32::try_from(p).ok())
        .ok_or_else(|| bad("character needs an integer \"p\""))?;
    let m = v.get("m").and_then(Value::as_u64).unwrap_or(1);
    let field = match v.get("modulus") {
        Some(Value::Array(coeffs)) => {
            let coeffs = coeffs
                .iter()
                .map(|c| {
                    c.as_u64()
                        .and_then(|c| u32::try_from(c).ok())
                        .ok_or_else(|| bad("modulus coefficients must be integers"))
                })
                .collect::<Result<Vec<u32>>>()?;
            ResidueField::new(p, coeffs)?
        }
        Some(_) => return Err(bad("\"modulus\" must be an array")),
        None if m == 1 => ResidueField::prime(p)?,
        None => return Err(bad("m > 1 needs a \"modulus\"")),
    };
    if field.degree() as u64 != m {
        return Err(bad(format!("modulus has degree {}, m = {m}", field.degree())));
    }
    let comps = v
        .get("chi")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("character needs a \"chi\" array"))?
        .iter()
        .map(|c| {
            let cv = match c.get("c") {
                Some(Value::String(s)) => kk_from_str(&field, s)?,
                Some(Value::Number(n)) => field.from_i64(
                    n.as_i64().ok_or_else(|| bad("\"c\" must be an integer"))?,
                ),
                _ => return Err(bad("component needs \"c\"")),
            };
            let e = c
                .get("e")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("component needs an integer \"e\""))?;
            Ok(CharComponent { c: cv, e })
        })
        .collect::<Result<Vec<_>>>()?;
    Character::new(field, comps)
}

pub fn character_to_json(chi: &Character) -> Value {
    let field = chi.field();
    let mut out = json!({
        "p": field.characteristic(),
        "m": field.degree(),
        "chi": chi
            .components()
            .iter()
            .map(|c| json!({"c": c.c.to_string(), "e": c.e}))
            .collect::<Vec<_>>(),
    });
    if field.degree() > 1 {
        out["modulus"] = json!(field.modulus());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padic_round_trip() {
        let x = PAdic::parse_rational("9/2", 3, 4).unwrap();
        let v = padic_to_json(&x);
        assert_eq!(v, json!({"val": 2, "digits": [2, 1, 1, 1]}));
        assert_eq!(padic_from_json(&v, 3, 4).unwrap(), x);
        let z = PAdic::zero(5, 8);
        assert_eq!(padic_to_json(&z), json!({"val": 8, "digits": []}));
        assert_eq!(padic_from_json(&json!({"val": 8, "digits": []}), 5, 8).unwrap(), z);
        assert_eq!(padic_from_json(&json!(-3), 5, 8).unwrap(), PAdic::from_i64(-3, 5, 8).unwrap());
        assert!(padic_from_json(&json!("1/0"), 5, 8).is_err());
        assert!(padic_from_json(&json!([1]), 5, 8).is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let v = json!([["9", "0", "1"], ["1", "0", "0"], ["3", "1", "0"]]);
        let m = matrix_from_json(&v, 3, 10).unwrap();
        assert_eq!(matrix_from_json(&matrix_to_json(&m), 3, 10).unwrap(), m);
        assert!(matrix_from_json(&json!([["1", "2"], ["3"]]), 3, 10).is_err());
    }

    #[test]
    fn character_round_trip() {
        let v = json!({"p": 3, "m": 1, "chi": [{"c": "1", "e": 0}, {"c": "1", "e": 1}, {"c": "1", "e": 0}]});
        let chi = character_from_json(&v).unwrap();
        assert_eq!(chi.n(), 3);
        assert_eq!(character_to_json(&chi), v);
        let f9 = json!({"p": 3, "m": 2, "modulus": [1, 0, 1], "chi": [{"c": "0,1", "e": 1}]});
        let chi9 = character_from_json(&f9).unwrap();
        assert_eq!(character_from_json(&character_to_json(&chi9)).unwrap(), chi9);
        assert!(character_from_json(&json!({"p": 3, "m": 2, "chi": []})).is_err());
    }
}
