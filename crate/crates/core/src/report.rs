//! Report objects and their JSON, CSV and text renderings.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::asymptotics::SequencePoint;
use crate::error::{Error, Result};
use crate::rational::decimal_string;

/// Digits after the decimal point in rendered rationals.
pub const DECIMAL_DIGITS: usize = 12;

pub const CSV_HEADER: &str = "index,colength,a_n_num,a_n_den";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::UnknownFormat(other.into())),
        }
    }
}

/// `{"num": .., "den": .., "decimal": ..}` with the decimal rounded to 12 digits.
pub fn rational_json(r: &BigRational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "decimal": decimal_string(r, DECIMAL_DIGITS),
    })
}

/// Outcome of a verification harness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub claim: String,
    pub witness_range: String,
    pub lhs: Value,
    pub rhs: Value,
    pub tolerance: f64,
    pub pass: bool,
    /// Set when the evidence neither confirms nor refutes the claim.
    /// An inconclusive report is not a failure.
    pub inconclusive: bool,
    pub details: Value,
}

impl Report {
    pub fn new(
        claim: impl Into<String>,
        witness_range: impl Into<String>,
        lhs: Value,
        rhs: Value,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        Report {
            claim: claim.into(),
            witness_range: witness_range.into(),
            lhs,
            rhs,
            tolerance,
            pass,
            inconclusive: false,
            details: Value::Object(Map::new()),
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn status(&self) -> &'static str {
        match (self.pass, self.inconclusive) {
            (_, true) => "INCONCLUSIVE",
            (true, false) => "PASS",
            (false, false) => "FAIL",
        }
    }
}

/// CSV rows for a colength sequence.
pub fn sequence_csv(points: &[SequencePoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.index,
            p.colength,
            p.a_n.numer(),
            p.a_n.denom()
        );
    }
    out
}

pub fn sequence_json(points: &[SequencePoint]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                json!({
                    "index": p.index,
                    "colength": p.colength.to_string(),
                    "a_n": rational_json(&p.a_n),
                })
            })
            .collect(),
    )
}

/// Left-aligned columns separated by two spaces.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(w - c.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(rule.iter().map(String::as_str).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn sequence_text(points: &[SequencePoint]) -> String {
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                p.index.to_string(),
                p.colength.to_string(),
                p.a_n.to_string(),
                decimal_string(&p.a_n, DECIMAL_DIGITS),
            ]
        })
        .collect();
    text_table(&["index", "colength", "a_n", "decimal"], &rows)
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("decimal") && m.contains_key("num") => format!(
            "{}/{} ({})",
            m["num"].as_str().unwrap_or("?"),
            m["den"].as_str().unwrap_or("?"),
            m["decimal"].as_str().unwrap_or("?")
        ),
        other => other.to_string(),
    }
}

pub fn report_text(r: &Report) -> String {
    let rows = vec![
        vec!["claim".to_string(), r.claim.clone()],
        vec!["witness_range".into(), r.witness_range.clone()],
        vec!["lhs".into(), value_text(&r.lhs)],
        vec!["rhs".into(), value_text(&r.rhs)],
        vec!["tolerance".into(), r.tolerance.to_string()],
        vec!["status".into(), r.status().into()],
    ];
    text_table(&["field", "value"], &rows)
}

/// Renders a report. CSV is only defined for sequences.
pub fn emit_report(r: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json_string(&serde_json::to_value(r).map_err(internal)?)),
        Format::Text => Ok(report_text(r)),
        Format::Csv => Err(Error::UnknownFormat(
            "csv (only sequence output has a CSV form)".into(),
        )),
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_else(|_| "null".into());
    s.push('\n');
    s
}

fn internal(e: serde_json::Error) -> Error {
    Error::Internal(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ratio;
    use num_bigint::BigUint;

    #[test]
    fn formats() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!(matches!(
            "xml".parse::<Format>(),
            Err(Error::UnknownFormat(_))
        ));
    }

    #[test]
    fn rationals() {
        let v = rational_json(&from_ratio(2, 3));
        assert_eq!(v, json!({"num":"2","den":"3","decimal":"0.666666666667"}));
    }

    #[test]
    fn csv_header_and_rows() {
        let pts = vec![SequencePoint {
            index: 10,
            colength: BigUint::from(55u32),
            a_n: from_ratio(55, 100),
        }];
        assert_eq!(
            sequence_csv(&pts),
            "index,colength,a_n_num,a_n_den\n10,55,11,20\n"
        );
        let t = sequence_text(&pts);
        assert!(t.starts_with("index  colength  a_n    decimal\n"));
        assert!(t.contains("10     55        11/20  0.550000000000"));
    }

    #[test]
    fn report_json_keys() {
        let r = Report::new("c", "n <= 1", json!(1), json!(2), 0.0, true);
        let s = emit_report(&r, Format::Json).unwrap();
        let keys: Vec<String> = serde_json::from_str::<Value>(&s)
            .unwrap()
            .as_object()
            .unwrap()
            .keys()
            .cloned()
            .collect();
        assert_eq!(
            keys,
            [
                "claim",
                "witness_range",
                "lhs",
                "rhs",
                "tolerance",
                "pass",
                "inconclusive",
                "details"
            ]
        );
        assert!(emit_report(&r, Format::Csv).is_err());
        assert!(emit_report(&r, Format::Text).unwrap().contains("PASS"));
    }
}
