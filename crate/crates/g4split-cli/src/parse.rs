use g4split::exactmath::{parse_rational, BinaryForm, Rationals};
use g4split::{Error, Result};
use num_rational::BigRational;
use serde_json::Value;

/// "1,2,3", "(1:2:3)" or "[1, -2/3]".
pub fn rationals(s: &str) -> Result<Vec<BigRational>> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    if t.trim().is_empty() {
        return Err(Error::InvalidInput("empty coordinate list".into()));
    }
    t.split([',', ':']).map(parse_rational).collect()
}

/// Ascending coefficient list c0, c1, ... as a binary form of that degree.
pub fn form(s: &str) -> Result<BinaryForm<Rationals>> {
    let c = rationals(s)?;
    BinaryForm::new(Rationals, c.len() - 1, c)
}

pub fn rational_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::InvalidInput(format!("expected an exact scalar, got {v}"))),
    }
}

pub fn rationals_json(v: &Value) -> Result<Vec<BigRational>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidInput(format!("expected an array, got {v}")))?
        .iter()
        .map(rational_json)
        .collect()
}

pub fn form_json(v: &Value) -> Result<BinaryForm<Rationals>> {
    let c = rationals_json(v)?;
    if c.is_empty() {
        return Err(Error::InvalidInput("empty form".into()));
    }
    BinaryForm::new(Rationals, c.len() - 1, c)
}

pub fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value> {
    let mut cur = v;
    for k in path {
        cur = cur
            .get(k)
            .ok_or_else(|| Error::InvalidInput(format!("report has no field {}", path.join("."))))?;
    }
    Ok(cur)
}
