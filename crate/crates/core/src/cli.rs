//! Command-line surface.
//!
//! Exit status: 0 on success or PASS, 1 when a verification FAILs, 2 on any
//! input or evaluation error. `ACOLEN_THREADS` overrides `--threads`.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::asymptotics::{
    colength_sequence, height_sample, hilbert_kunz, hilbert_samuel, hyperplane_grid,
    limit_estimate, lipschitz_audit, newton_multiplicity, trajectory_classify, verify_brosowsky,
    verify_minkowski, verify_positivity, verify_volume_multiplicity, LimitEstimate, LimitPlan,
};
use crate::charp::{
    frobenius_converse_check, frobenius_cover_check, ok_basis, verify_ok_basis_in_box,
    DECOMPOSITION_BOX,
};
use crate::error::{Error, Result};
use crate::family::{classify, family_from_json, family_to_json, FamilyEvaluator, FamilySpec};
use crate::monomial::{ColengthMethod, MonomialIdeal};
use crate::newton::{integral_closure, NewtonPolyhedron};
use crate::parse::{ideal_to_json, parse_ideal};
use crate::rational::{decimal_string, from_biguint_ratio, parse_rational};
use crate::report::{
    emit_report, rational_json, report_text, sequence_csv, sequence_json, sequence_text,
    text_table, to_json_string, Format, Report, CSV_HEADER, DECIMAL_DIGITS,
};

pub const THREADS_ENV: &str = "ACOLEN_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "acolen",
    version,
    about = "Exact colengths and asymptotic colength limits of monomial ideal families"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads (0 = rayon default). ACOLEN_THREADS takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Text => Format::Text,
        }
    }
}

#[derive(Debug, Args)]
pub struct IdealArg {
    /// Ideal literal such as "x1^2, x1*x2, x2^3".
    #[arg(long)]
    pub ideal: String,
    /// Ambient dimension; defaults to the largest variable index.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    /// Family JSON, inline (starting with `{`) or a file path.
    #[arg(long)]
    pub family: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Slicing,
    Box,
    InclusionExclusion,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum IdealOp {
    Sum,
    Product,
    Intersect,
    Colon,
    Power,
    Bracket,
    GeneralizedBracket,
    Closure,
    Threshold,
    Newton,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MultiplicityKind {
    Samuel,
    Kunz,
    Volume,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ℓ(R/I).
    Colength {
        #[command(flatten)]
        ideal: IdealArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Slicing)]
        method: MethodArg,
    },
    /// Ideal arithmetic.
    IdealOp {
        #[arg(long, value_enum)]
        op: IdealOp,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Bounded family classification.
    Classify {
        #[command(flatten)]
        family: FamilyArg,
        /// Index bound N (natural) or exponent bound E (p-power).
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 2)]
        witness_degree: u64,
    },
    /// Exact a_n = ℓ(R/I_n)/n^d.
    Sequence {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, conflicts_with = "indices")]
        bound: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<u64>>,
    },
    /// liminf, limsup and limit estimates.
    Limit {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, conflicts_with = "indices")]
        bound: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<u64>>,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    /// Classifies a point by the membership pattern of ⌊n x⌋.
    Trajectory {
        #[command(flatten)]
        family: FamilyArg,
        /// Rational coordinates such as "3/10,3/10".
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Height function samples and the Lipschitz audit.
    Height {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 9)]
        steps: usize,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    /// Hilbert-Samuel, Hilbert-Kunz or Newton-volume multiplicity.
    Multiplicity {
        #[command(flatten)]
        ideal: IdealArg,
        #[arg(long, value_enum, default_value_t = MultiplicityKind::Samuel)]
        kind: MultiplicityKind,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = crate::asymptotics::multiplicity::DEFAULT_HS_MAX)]
        n_max: u64,
    },
    /// Verification harnesses.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// ℓ(R/𝔪^[p^e-1]) against its closed form.
    PaperExample {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        emax: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    Minkowski {
        #[arg(long)]
        family_a: String,
        #[arg(long)]
        family_b: String,
        /// Index bound N (natural) or exponent bound E (p-power).
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    Volmult {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = crate::asymptotics::verify::DEFAULT_VOLMULT_TOLERANCE)]
        tolerance: f64,
    },
    Positivity {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    Brosowsky {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    Okbasis {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        /// Also run the Frobenius containment checks on this ideal.
        #[arg(long)]
        ideal: Option<String>,
    },
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if outcome.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn thread_count(flag: usize) -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{THREADS_ENV}={v} is not a thread count"))
        }),
        _ => Ok(flag),
    }
}

struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            failed: false,
        }
    }
}

fn load_family(arg: &str) -> Result<FamilySpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Error::InvalidArgument(format!("cannot read family file `{arg}`: {e}")))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| {
        Error::InvalidFamily(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    family_from_json(&v)
}

fn no_csv(what: &str) -> Error {
    Error::UnknownFormat(format!("csv (not available for {what})"))
}

fn kv_text(rows: Vec<(&str, String)>) -> String {
    let rows: Vec<Vec<String>> = rows
        .into_iter()
        .map(|(k, v)| vec![k.to_string(), v])
        .collect();
    text_table(&["field", "value"], &rows)
}

fn report_outcome(r: &Report, format: Format) -> Result<Outcome> {
    Ok(Outcome {
        text: emit_report(r, format)?,
        failed: !r.pass && !r.inconclusive,
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let format: Format = cli.format.into();
    match &cli.command {
        Command::Colength { ideal, method } => {
            let i = parse_ideal(&ideal.ideal, ideal.d)?;
            let m = match method {
                MethodArg::Slicing => ColengthMethod::Slicing,
                MethodArg::Box => ColengthMethod::BoxEnumeration,
                MethodArg::InclusionExclusion => ColengthMethod::InclusionExclusion,
            };
            let res = i.colength_with(m)?;
            let value = res
                .value
                .finite()
                .map(ToString::to_string)
                .unwrap_or_else(|| "infinite".into());
            match format {
                Format::Text => Ok(Outcome::ok(format!("{value}\n"))),
                Format::Json => Ok(Outcome::ok(to_json_string(&json!({
                    "ideal": i.to_literal(),
                    "d": i.dim(),
                    "colength": value,
                    "method": res.method.as_str(),
                })))),
                Format::Csv => Err(no_csv("colength")),
            }
        }
        Command::IdealOp { op, a, b, n, p, d } => {
            ideal_op(*op, a, b.as_deref(), *n, *p, *d, format)
        }
        Command::Classify {
            family,
            bound,
            witness_degree,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            let rep = classify(&f, *bound, *witness_degree)?;
            let v = serde_json::to_value(&rep).map_err(|e| Error::Internal(e.to_string()))?;
            match format {
                Format::Json => Ok(Outcome::ok(to_json_string(&v))),
                Format::Text => {
                    let rows = v
                        .as_object()
                        .map(|m| {
                            m.iter()
                                .map(|(k, val)| vec![k.clone(), summarize(val)])
                                .collect::<Vec<_>>()
                        })
                        .unwrap_or_default();
                    Ok(Outcome::ok(text_table(&["check", "result"], &rows)))
                }
                Format::Csv => Err(no_csv("classify")),
            }
        }
        Command::Sequence {
            family,
            bound,
            indices,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            let idx = plan_indices(&f, *bound, indices.as_deref())?;
            let pts = colength_sequence(&f, &idx)?;
            Ok(Outcome::ok(match format {
                Format::Csv => sequence_csv(&pts),
                Format::Json => to_json_string(&sequence_json(&pts)),
                Format::Text => sequence_text(&pts),
            }))
        }
        Command::Limit {
            family,
            bound,
            indices,
            tolerance,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            let plan = LimitPlan::new(&plan_indices(&f, *bound, indices.as_deref())?, *tolerance)?;
            let est = limit_estimate(&f, &plan)?;
            match format {
                Format::Json => Ok(Outcome::ok(to_json_string(&limit_json(&est)))),
                Format::Csv => Ok(Outcome::ok(sequence_csv(&est.points))),
                Format::Text => Ok(Outcome::ok(limit_text(&est))),
            }
        }
        Command::Trajectory {
            family,
            point,
            from,
            to,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            let x: Vec<BigRational> = point
                .split(',')
                .map(parse_rational)
                .collect::<Result<_>>()?;
            if from > to || *from == 0 {
                return Err(Error::InvalidArgument(format!(
                    "window {from}..={to} must be nonempty and positive"
                )));
            }
            let window: Vec<u64> = (*from..=*to).collect();
            let t = trajectory_classify(&f, &x, &window)?;
            let bits: String = t
                .in_complement
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            match format {
                Format::Json => Ok(Outcome::ok(to_json_string(&json!({
                    "point": t.point.iter().map(rational_json).collect::<Vec<_>>(),
                    "window": [from, to],
                    "in_complement": bits,
                    "tail_len": t.tail_len,
                    "classification": t.class.as_str(),
                })))),
                Format::Text => Ok(Outcome::ok(kv_text(vec![
                    ("point", point.clone()),
                    ("window", format!("{from}..={to}")),
                    ("in_complement", bits),
                    ("classification", t.class.as_str().into()),
                ]))),
                Format::Csv => Err(no_csv("trajectory")),
            }
        }
        Command::Height {
            family,
            level,
            radius,
            steps,
            tolerance,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            let grid = hyperplane_grid(f.dim(), *radius, *steps);
            let hs = height_sample(&f, &grid, *level, *tolerance)?;
            let audit = lipschitz_audit(&hs);
            let text = match format {
                Format::Json => to_json_string(&json!({"sample": hs, "lipschitz": audit})),
                Format::Text => {
                    let mut rows: Vec<Vec<String>> = hs
                        .points
                        .iter()
                        .map(|p| {
                            vec![
                                format!(
                                    "{:?}",
                                    p.y.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>()
                                ),
                                format!("{:.6}", p.phi),
                                format!("{:.6}", p.height),
                                if p.unbounded {
                                    "unbounded".into()
                                } else {
                                    String::new()
                                },
                            ]
                        })
                        .collect();
                    rows.push(vec![
                        "lipschitz".into(),
                        format!("{:.6}", audit.max_ratio),
                        format!("c3 + 2 tol = {:.6}", audit.bound),
                        if audit.pass {
                            "PASS".into()
                        } else {
                            "FAIL".into()
                        },
                    ]);
                    text_table(&["y", "phi", "height", "note"], &rows)
                }
                Format::Csv => return Err(no_csv("height")),
            };
            Ok(Outcome {
                text,
                failed: !audit.pass,
            })
        }
        Command::Multiplicity {
            ideal,
            kind,
            p,
            n_max,
        } => {
            let i = parse_ideal(&ideal.ideal, ideal.d)?;
            let (value, extra): (String, Value) = match kind {
                MultiplicityKind::Samuel => {
                    let hs = hilbert_samuel(&i, *n_max)?;
                    (
                        hs.multiplicity.to_string(),
                        json!({"stable_from": hs.stable_from, "differences": hs.differences}),
                    )
                }
                MultiplicityKind::Kunz => {
                    let p = p.ok_or_else(|| Error::InvalidArgument("--p is required".into()))?;
                    (hilbert_kunz(&i, p)?.to_string(), json!({"p": p}))
                }
                MultiplicityKind::Volume => {
                    let (v, exact) = newton_multiplicity(&i)?;
                    (v.to_string(), json!({"exact": exact}))
                }
            };
            match format {
                Format::Text => Ok(Outcome::ok(format!("{value}\n"))),
                Format::Json => Ok(Outcome::ok(to_json_string(&json!({
                    "ideal": i.to_literal(),
                    "kind": format!("{kind:?}").to_lowercase(),
                    "multiplicity": value,
                    "details": extra,
                })))),
                Format::Csv => Err(no_csv("multiplicity")),
            }
        }
        Command::Verify(v) => verify(v, format),
        Command::PaperExample { p, d, emax } => paper_example(*p, *d, *emax, format),
    }
}

fn summarize(v: &Value) -> String {
    match v {
        Value::Null => "n/a".into(),
        Value::Object(m) => {
            if let Some(h) = m.get("holds") {
                let ce = m.get("counterexample").filter(|c| !c.is_null());
                match ce {
                    Some(c) => format!("{h} (counterexample {c})"),
                    None => h.to_string(),
                }
            } else if let Some(w) = m.get("witness") {
                if w.is_null() {
                    "no witness found".into()
                } else {
                    format!("witness {w}")
                }
            } else if let Some(c) = m.get("constant") {
                if c.is_null() {
                    "none".into()
                } else {
                    format!("constant {c}")
                }
            } else {
                Value::Object(m.clone()).to_string()
            }
        }
        other => other.to_string(),
    }
}

fn plan_indices(
    f: &FamilyEvaluator,
    bound: Option<u64>,
    indices: Option<&[u64]>,
) -> Result<Vec<u64>> {
    match (bound, indices) {
        (_, Some(idx)) => Ok(idx.to_vec()),
        (Some(b), None) => crate::family::index_range(f.index_kind(), b),
        (None, None) => Err(Error::InvalidArgument(
            "either --bound or --indices is required".into(),
        )),
    }
}

pub fn limit_json(e: &LimitEstimate) -> Value {
    json!({
        "sampled": e.points.len(),
        "max_index": e.max_index(),
        "window": e.window,
        "liminf": rational_json(&e.liminf),
        "limsup": rational_json(&e.limsup),
        "limit": e.limit.as_ref().map(rational_json),
        "converged": e.converged,
        "tolerance": e.tolerance,
        "bbl_constant": e.bbl_constant,
        "extrapolation": e.extrapolation.as_ref().map(|x| json!({
            "value": rational_json(&x.value),
            "fit_indices": x.fit_indices,
            "check_indices": x.check_indices,
            "residual": x.residual,
        })),
        "rate": {
            "reference": rational_json(&e.rate.reference),
            "c_fit": e.rate.c_fit,
            "c_ls": e.rate.c_ls,
            "ls_residual": e.rate.ls_residual,
            "c_early": e.rate.c_early,
            "stable": e.rate.stable,
        },
        "sequence": sequence_json(&e.points),
    })
}

fn limit_text(e: &LimitEstimate) -> String {
    let dec = |r: &BigRational| format!("{r} ({})", decimal_string(r, DECIMAL_DIGITS));
    kv_text(vec![
        ("sampled", e.points.len().to_string()),
        ("max_index", e.max_index().to_string()),
        ("window", format!("{} indices", e.window.len())),
        ("liminf", dec(&e.liminf)),
        ("limsup", dec(&e.limsup)),
        (
            "limit",
            e.limit
                .as_ref()
                .map(dec)
                .unwrap_or_else(|| "not declared".into()),
        ),
        ("c_fit", format!("{:.6}", e.rate.c_fit)),
        ("bbl_constant", e.bbl_constant.to_string()),
    ])
}

#[allow(clippy::too_many_arguments)]
fn ideal_op(
    op: IdealOp,
    a: &str,
    b: Option<&str>,
    n: Option<u64>,
    p: Option<u64>,
    d: Option<usize>,
    format: Format,
) -> Result<Outcome> {
    let need =
        |what: &str| Error::InvalidArgument(format!("--{what} is required for this operation"));
    let a = parse_ideal(a, d)?;
    let b = match b {
        Some(s) => Some(parse_ideal(s, Some(d.unwrap_or(a.dim())))?),
        None => None,
    };
    let other = || b.clone().ok_or_else(|| need("b"));
    let result: Value = match op {
        IdealOp::Sum => ideal_to_json(&a.sum(&other()?)?),
        IdealOp::Product => ideal_to_json(&a.product(&other()?)?),
        IdealOp::Intersect => ideal_to_json(&a.intersect(&other()?)?),
        IdealOp::Colon => ideal_to_json(&a.colon(&other()?)?.ideal),
        IdealOp::Power => ideal_to_json(&a.power(n.ok_or_else(|| need("n"))?)),
        IdealOp::Bracket => ideal_to_json(&a.bracket_power(n.ok_or_else(|| need("n"))?)?),
        IdealOp::GeneralizedBracket => ideal_to_json(
            &a.generalized_bracket_power(n.ok_or_else(|| need("n"))?, p.ok_or_else(|| need("p"))?)?,
        ),
        IdealOp::Closure => ideal_to_json(&integral_closure(&a)?),
        IdealOp::Threshold => json!(a.power_containment_threshold()?),
        IdealOp::Newton => {
            let np = NewtonPolyhedron::new(&a)?;
            json!({
                "vertices": np.vertices(),
                "halfspaces": np.halfspaces().iter().map(|h| json!({"normal": h.normal, "rhs": h.rhs})).collect::<Vec<_>>(),
            })
        }
    };
    match format {
        Format::Json => Ok(Outcome::ok(to_json_string(&result))),
        Format::Text => {
            let text = match &result {
                Value::Object(m) if m.contains_key("gens") => {
                    let d = m["d"].as_u64().unwrap_or(0) as usize;
                    crate::parse::ideal_from_json(&result, Some(d))?.to_literal()
                }
                other => other.to_string(),
            };
            Ok(Outcome::ok(format!("{text}\n")))
        }
        Format::Csv => Err(no_csv("ideal-op")),
    }
}

fn verify(v: &VerifyCommand, format: Format) -> Result<Outcome> {
    match v {
        VerifyCommand::Minkowski {
            family_a,
            family_b,
            n,
            tolerance,
        } => {
            let a = load_family(family_a)?;
            let b = load_family(family_b)?;
            report_outcome(&verify_minkowski(&a, &b, *n, *tolerance)?, format)
        }
        VerifyCommand::Volmult {
            family,
            n,
            tolerance,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            report_outcome(&verify_volume_multiplicity(&f, *n, *tolerance)?, format)
        }
        VerifyCommand::Positivity {
            family,
            n,
            tolerance,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            report_outcome(&verify_positivity(&f, *n, *tolerance)?, format)
        }
        VerifyCommand::Brosowsky {
            family,
            e,
            tolerance,
        } => {
            let f = FamilyEvaluator::new(load_family(&family.family)?)?;
            report_outcome(&verify_brosowsky(&f, *e, *tolerance)?, format)
        }
        VerifyCommand::Okbasis { d, p, ideal } => {
            let b = ok_basis(*d, *p)?;
            let check = verify_ok_basis_in_box(&b, DECOMPOSITION_BOX + 1);
            let mut pass = check.holds();
            let mut details = json!({"basis": check});
            if let Some(lit) = ideal {
                let i = parse_ideal(lit, Some(*d))?;
                let cover = frobenius_cover_check(&i, *p)?;
                let converse = frobenius_converse_check(&i, *p)?;
                pass &= cover.holds && converse.holds;
                details["cover"] =
                    serde_json::to_value(&cover).map_err(|e| Error::Internal(e.to_string()))?;
                details["converse"] =
                    serde_json::to_value(&converse).map_err(|e| Error::Internal(e.to_string()))?;
            }
            let r = Report::new(
                "OK basis: p^d elements, distinct residues, unique digit decomposition",
                format!("u ∈ [0, {DECOMPOSITION_BOX}]^{d}"),
                json!(b.elements.len()),
                json!(p.pow(*d as u32)),
                0.0,
                pass,
            )
            .with_details(details);
            report_outcome(&r, format)
        }
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `binom(p+d-2, d) (p^{ed} - binom(p+d-2, d-1)^e) / (p^d - binom(p+d-2, d-1))`.
pub fn closed_form_colength(p: u64, d: usize, e: u32) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::InvalidArgument(
            "the closed form needs d >= 2".into(),
        ));
    }
    let d64 = d as u64;
    let top = binomial(p + d64 - 2, d64);
    let c = binomial(p + d64 - 2, d64 - 1);
    let pd = BigUint::from(p).pow(d as u32);
    if pd <= c {
        return Err(Error::InvalidArgument("degenerate closed form".into()));
    }
    let num = pd.pow(e) - c.pow(e);
    Ok(top * num / (pd - c))
}

fn paper_example(p: u64, d: usize, emax: u32, format: Format) -> Result<Outcome> {
    if !crate::monomial::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if emax == 0 {
        return Err(Error::InvalidArgument("--emax must be positive".into()));
    }
    let m = MonomialIdeal::maximal(d);
    let mut rows = Vec::new();
    let mut failed = false;
    for e in 1..=emax {
        let n = p
            .checked_pow(e)
            .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} overflows")))?
            - 1;
        let colength = m.generalized_bracket_power(n, p)?.colength_value()?;
        let closed = closed_form_colength(p, d, e)?;
        failed |= colength != closed;
        let a_n = from_biguint_ratio(&colength, &BigUint::from(n).pow(d as u32));
        rows.push((e, n, colength, closed, a_n));
    }
    let text = match format {
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for (_, n, c, _, a) in &rows {
                s.push_str(&format!("{n},{c},{},{}\n", a.numer(), a.denom()));
            }
            s
        }
        Format::Json => to_json_string(&Value::Array(
            rows.iter()
                .map(|(e, n, c, cf, a)| {
                    json!({
                        "e": e,
                        "n": n,
                        "colength": c.to_string(),
                        "closed_form": cf.to_string(),
                        "matches": c == cf,
                        "a_n": rational_json(a),
                    })
                })
                .collect(),
        )),
        Format::Text => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(e, n, c, cf, a)| {
                    vec![
                        e.to_string(),
                        n.to_string(),
                        c.to_string(),
                        if c == cf {
                            "yes".into()
                        } else {
                            format!("no ({cf})")
                        },
                        decimal_string(a, DECIMAL_DIGITS),
                    ]
                })
                .collect();
            text_table(&["e", "n", "colength", "closed form", "a_n"], &body)
        }
    };
    Ok(Outcome { text, failed })
}

/// Canonical JSON of a family, used by round-trip checks.
pub fn family_canonical(spec: &FamilySpec) -> String {
    family_to_json(spec).to_string()
}

/// Text rendering of a report, exposed for callers that print several.
pub fn render_report_text(r: &Report) -> String {
    report_text(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["acolen"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn colength_command() {
        let (code, out, _) = run_str(&["colength", "--ideal", "x1^2, x2^2"]);
        assert_eq!((code, out.as_str()), (0, "4\n"));
        let (code, _, err) = run_str(&["colength", "--ideal", "x1^2, x2^"]);
        assert_eq!(code, 2);
        assert!(err.contains("position"));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_colength(2, 2, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(closed_form_colength(3, 3, 1).unwrap(), BigUint::from(4u32));
        let (code, out, _) = run_str(&["paper-example", "--p", "2", "--d", "2", "--emax", "10"]);
        assert_eq!(code, 0);
        assert!(out.contains("1023"));
        assert!(!out.contains("no ("));
    }
}
