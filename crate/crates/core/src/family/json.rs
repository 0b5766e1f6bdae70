//! FamilySpec JSON.
//!
//! ```json
//! {"index": "p-power", "p": 2, "kind": "generalized_bracket",
//!  "ideal": {"d": 2, "gens": [[1, 0], [0, 1]]}}
//! ```
//!
//! Composite kinds nest full family objects under `base`, `a` and `b`; a
//! nested family without `index` inherits the parent's. Unknown keys are
//! rejected.

use num_rational::BigRational;
use serde_json::{Map, Value};

use super::{ExponentPolynomial, FamilyKind, FamilySpec, IndexKind};
use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;
use crate::parse::{ideal_from_json, ideal_to_json};
use crate::rational::{from_f64, parse_rational};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidFamily(msg.into())
}

fn check_keys(map: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    const COMMON: [&str; 4] = ["index", "p", "kind", "d"];
    for k in map.keys() {
        if !COMMON.contains(&k.as_str()) && !allowed.contains(&k.as_str()) {
            let kind = map.get("kind").and_then(Value::as_str).unwrap_or("?");
            return Err(invalid(format!("unknown key `{k}` for kind `{kind}`")));
        }
    }
    Ok(())
}

fn get<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| invalid(format!("missing `{key}`")))
}

fn get_u64(map: &Map<String, Value>, key: &str) -> Result<u64> {
    get(map, key)?
        .as_u64()
        .ok_or_else(|| invalid(format!("`{key}` must be a nonnegative integer")))
}

fn alpha_from(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                // The decimal text as written, so 1.41421356 stays 141421356/10^8.
                parse_rational(&n.to_string()).or_else(|_| from_f64(n.as_f64().unwrap_or(f64::NAN)))
            }
        }
        _ => Err(invalid("`alpha` must be a string or a number")),
    }
}

fn index_from(map: &Map<String, Value>, inherited: Option<IndexKind>) -> Result<IndexKind> {
    match map.get("index") {
        None => Ok(inherited.unwrap_or(IndexKind::Natural)),
        Some(Value::String(s)) => match s.as_str() {
            "natural" => Ok(IndexKind::Natural),
            "p-power" | "p_power" => Ok(IndexKind::PPower(get_u64(map, "p")?)),
            other => Err(invalid(format!("unknown index kind `{other}`"))),
        },
        Some(_) => Err(invalid("`index` must be a string")),
    }
}

/// Parses a family object.
pub fn family_from_json(v: &Value) -> Result<FamilySpec> {
    parse_family(v, None, None)
}

fn parse_family(v: &Value, inherited: Option<IndexKind>, dim: Option<usize>) -> Result<FamilySpec> {
    let map = v
        .as_object()
        .ok_or_else(|| invalid("family must be an object"))?;
    let index = index_from(map, inherited)?;
    let dim = map
        .get("d")
        .and_then(Value::as_u64)
        .map(|d| d as usize)
        .or(dim);
    let kind_name = get(map, "kind")?
        .as_str()
        .ok_or_else(|| invalid("`kind` must be a string"))?;
    let ideal = |key: &str| -> Result<MonomialIdeal> { ideal_from_json(get(map, key)?, dim) };
    let child = |key: &str| -> Result<Box<FamilySpec>> {
        Ok(Box::new(parse_family(get(map, key)?, Some(index), dim)?))
    };
    let kind = match kind_name {
        "powers" => {
            check_keys(map, &["ideal"])?;
            FamilyKind::Powers(ideal("ideal")?)
        }
        "bracket" => {
            check_keys(map, &["ideal"])?;
            FamilyKind::Bracket(ideal("ideal")?)
        }
        "generalized_bracket" => {
            check_keys(map, &["ideal"])?;
            let p = get_u64(map, "p")?;
            FamilyKind::GeneralizedBracket {
                ideal: ideal("ideal")?,
                p,
            }
        }
        "floor_power" => {
            check_keys(map, &["ideal", "alpha"])?;
            FamilyKind::FloorPower {
                ideal: ideal("ideal")?,
                alpha: alpha_from(get(map, "alpha")?)?,
            }
        }
        "colon_of" => {
            check_keys(map, &["base", "j"])?;
            FamilyKind::ColonOf {
                base: child("base")?,
                divisor: ideal("j")?,
            }
        }
        "closure_of" => {
            check_keys(map, &["base"])?;
            FamilyKind::ClosureOf(child("base")?)
        }
        "product_of" | "sum_of" | "intersect_of" => {
            check_keys(map, &["a", "b"])?;
            let (a, b) = (child("a")?, child("b")?);
            match kind_name {
                "product_of" => FamilyKind::ProductOf(a, b),
                "sum_of" => FamilyKind::SumOf(a, b),
                _ => FamilyKind::IntersectOf(a, b),
            }
        }
        "explicit" => {
            check_keys(map, &["ideals", "start"])?;
            let list = get(map, "ideals")?
                .as_array()
                .ok_or_else(|| invalid("`ideals` must be an array"))?;
            let ideals = list
                .iter()
                .map(|i| ideal_from_json(i, dim))
                .collect::<Result<Vec<_>>>()?;
            let start = match (map.get("start"), index) {
                (Some(_), _) => get_u64(map, "start")?,
                (None, IndexKind::Natural) => 1,
                (None, IndexKind::PPower(_)) => 0,
            };
            if matches!(index, IndexKind::PPower(_)) && start != 0 {
                return Err(invalid("p-power explicit lists start at e = 0"));
            }
            FamilyKind::Explicit { start, ideals }
        }
        "parametric" => {
            check_keys(map, &["exponents"])?;
            let d = dim.ok_or_else(|| invalid("parametric family needs `d`"))?;
            let rows = get(map, "exponents")?
                .as_array()
                .ok_or_else(|| invalid("`exponents` must be an array"))?;
            let mut gens = Vec::with_capacity(rows.len());
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| invalid("each generator must be an array"))?;
                let mut g = Vec::with_capacity(row.len());
                for e in row {
                    let coeffs = match e {
                        Value::Number(_) => vec![e.as_u64()],
                        Value::Array(cs) => cs.iter().map(Value::as_u64).collect(),
                        _ => vec![None],
                    };
                    let coeffs: Option<Vec<u64>> = coeffs.into_iter().collect();
                    g.push(ExponentPolynomial(coeffs.ok_or_else(|| {
                        invalid("exponent coefficients must be nonnegative integers")
                    })?));
                }
                gens.push(g);
            }
            FamilyKind::Parametric { dim: d, gens }
        }
        other => return Err(invalid(format!("unknown family kind `{other}`"))),
    };
    FamilySpec::new(index, kind)
}

/// Serializes a family to its JSON object. Ideals use the canonical form.
pub fn family_to_json(spec: &FamilySpec) -> Value {
    let mut m = Map::new();
    match spec.index {
        IndexKind::Natural => {
            m.insert("index".into(), "natural".into());
        }
        IndexKind::PPower(p) => {
            m.insert("index".into(), "p-power".into());
            m.insert("p".into(), p.into());
        }
    }
    m.insert("kind".into(), spec.kind_name().into());
    match &spec.kind {
        FamilyKind::Powers(i) | FamilyKind::Bracket(i) => {
            m.insert("ideal".into(), ideal_to_json(i));
        }
        FamilyKind::GeneralizedBracket { ideal, p } => {
            m.insert("p".into(), (*p).into());
            m.insert("ideal".into(), ideal_to_json(ideal));
        }
        FamilyKind::FloorPower { ideal, alpha } => {
            m.insert("ideal".into(), ideal_to_json(ideal));
            m.insert("alpha".into(), alpha.to_string().into());
        }
        FamilyKind::ColonOf { base, divisor } => {
            m.insert("base".into(), family_to_json(base));
            m.insert("j".into(), ideal_to_json(divisor));
        }
        FamilyKind::ClosureOf(base) => {
            m.insert("base".into(), family_to_json(base));
        }
        FamilyKind::ProductOf(a, b) | FamilyKind::SumOf(a, b) | FamilyKind::IntersectOf(a, b) => {
            m.insert("a".into(), family_to_json(a));
            m.insert("b".into(), family_to_json(b));
        }
        FamilyKind::Explicit { start, ideals } => {
            m.insert("start".into(), (*start).into());
            m.insert(
                "ideals".into(),
                Value::Array(ideals.iter().map(ideal_to_json).collect()),
            );
        }
        FamilyKind::Parametric { dim, gens } => {
            m.insert("d".into(), (*dim).into());
            let rows: Vec<Value> = gens
                .iter()
                .map(|g| Value::Array(g.iter().map(|e| Value::from(e.0.clone())).collect()))
                .collect();
            m.insert("exponents".into(), Value::Array(rows));
        }
    }
    Value::Object(m)
}
