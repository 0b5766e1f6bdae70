//! Ideal literals and the canonical ideal JSON form.
//!
//! A literal is a comma-separated list of monomials in `x1..xd`, e.g.
//! `x1^3, x1*x2, x2^2`. The `*` is optional, `1` is the unit monomial, a lone
//! `0` is the zero ideal and the whole list may be wrapped in parentheses.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monomial::{normalize, ExponentVector, MonomialIdeal};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, "number out of range"))
    }
}

/// Parses an ideal literal. Without `dim`, the dimension is the largest
/// variable index that occurs (at least 1).
pub fn parse_ideal(literal: &str, dim: Option<usize>) -> Result<MonomialIdeal> {
    let mut c = Cursor {
        src: literal.as_bytes(),
        pos: 0,
    };
    let wrapped = c.peek() == Some(b'(');
    if wrapped {
        c.pos += 1;
    }
    // Each monomial as (variable index, exponent) factors, with the position
    // of the first factor for error reporting.
    let mut monomials: Vec<Vec<(usize, u64, usize)>> = Vec::new();
    let mut zero = false;
    let mut max_var = 0usize;
    loop {
        let mut factors = Vec::new();
        let start = {
            c.skip_ws();
            c.pos
        };
        match c.peek() {
            Some(b'0') if monomials.is_empty() => {
                c.pos += 1;
                zero = true;
            }
            Some(b'1') => {
                c.pos += 1;
            }
            Some(b'x') | Some(b'X') => loop {
                let fpos = {
                    c.skip_ws();
                    c.pos
                };
                match c.peek() {
                    Some(b'x') | Some(b'X') => c.pos += 1,
                    _ => return Err(Error::parse(fpos, "expected a variable `x<i>`")),
                }
                let idx_pos = c.pos;
                let idx = c.number()?;
                if idx == 0 {
                    return Err(Error::parse(idx_pos, "variables are numbered from x1"));
                }
                let idx = idx as usize;
                let mut exp = 1;
                if c.peek() == Some(b'^') {
                    c.pos += 1;
                    exp = c.number()?;
                }
                max_var = max_var.max(idx);
                factors.push((idx, exp, fpos));
                match c.peek() {
                    Some(b'*') => {
                        c.pos += 1;
                    }
                    Some(b'x') | Some(b'X') => {}
                    _ => break,
                }
            },
            Some(_) => return Err(Error::parse(start, "expected a monomial")),
            None => return Err(Error::parse(start, "unexpected end of input")),
        }
        if !zero {
            monomials.push(factors);
        }
        match c.peek() {
            Some(b',') if !zero => {
                c.pos += 1;
            }
            Some(b')') if wrapped => {
                c.pos += 1;
                if c.peek().is_some() {
                    return Err(Error::parse(c.pos, "trailing characters after `)`"));
                }
                break;
            }
            None if !wrapped => break,
            None => return Err(Error::parse(c.pos, "missing `)`")),
            Some(_) => return Err(Error::parse(c.pos, "expected `,` or end of input")),
        }
    }
    let d = match dim {
        Some(d) => d,
        None => max_var.max(1),
    };
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut gens = Vec::with_capacity(monomials.len());
    for factors in monomials {
        let mut v = vec![0u64; d];
        for (idx, exp, pos) in factors {
            if idx > d {
                return Err(Error::parse(
                    pos,
                    format!("variable x{idx} exceeds dimension {d}"),
                ));
            }
            v[idx - 1] += exp;
        }
        gens.push(ExponentVector::new(v));
    }
    normalize(gens, d)
}

/// Canonical JSON `{"d": d, "gens": [[...], ...]}`.
pub fn ideal_to_json(ideal: &MonomialIdeal) -> Value {
    let gens: Vec<Value> = ideal
        .gens()
        .iter()
        .map(|g| Value::from(g.coords().to_vec()))
        .collect();
    json!({ "d": ideal.dim(), "gens": gens })
}

/// Reads an ideal from its canonical JSON object or from a literal string.
/// `dim` supplies the dimension of a literal.
pub fn ideal_from_json(v: &Value, dim: Option<usize>) -> Result<MonomialIdeal> {
    match v {
        Value::String(s) => parse_ideal(s, dim),
        Value::Object(map) => {
            for k in map.keys() {
                if k != "d" && k != "gens" {
                    return Err(Error::InvalidArgument(format!("unknown ideal key `{k}`")));
                }
            }
            let d = map
                .get("d")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidArgument("ideal needs an integer `d`".into()))?
                as usize;
            let gens = map
                .get("gens")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidArgument("ideal needs a `gens` array".into()))?;
            let mut out = Vec::with_capacity(gens.len());
            for g in gens {
                let row = g
                    .as_array()
                    .ok_or_else(|| Error::InvalidArgument("generator must be an array".into()))?;
                let coords: Option<Vec<u64>> = row.iter().map(Value::as_u64).collect();
                let coords = coords.ok_or_else(|| {
                    Error::InvalidArgument("exponents must be nonnegative integers".into())
                })?;
                out.push(ExponentVector::new(coords));
            }
            normalize(out, d)
        }
        _ => Err(Error::InvalidArgument(
            "ideal must be a literal string or an object".into(),
        )),
    }
}
