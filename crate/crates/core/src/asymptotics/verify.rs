//! Finite-range checks of the volume=multiplicity formula, the Minkowski
//! inequality, the positivity criterion and the Brosowsky volume identity.
//!
//! Each harness checks its classification precondition over the same range
//! first and refuses with [`Error::Precondition`] when it is not met.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::limit::{extrapolate_series, limit_estimate, window_of, LimitEstimate, LimitPlan};
use super::multiplicity::{hilbert_kunz, hilbert_samuel, DEFAULT_HS_MAX};
use super::sequence::{colength_sequence, region_volume};
use crate::error::{Error, Result};
use crate::family::{
    check_bal, find_weakly_graded_witness, find_weakly_inverse_p_witness, find_weakly_p_witness,
    index_range, verify_f_graded_up_to, verify_graded_up_to, FamilyEvaluator, FamilySpec,
    IndexKind,
};
use crate::monomial::ExponentVector;
use crate::rational::{from_biguint_ratio, to_f64};
use crate::report::{rational_json, Report};

/// Largest bound used for the classification preconditions.
pub const CLASSIFICATION_BOUND_NATURAL: u64 = 12;
pub const CLASSIFICATION_BOUND_P: u64 = 5;
/// Largest degree searched for a weak witness.
pub const WITNESS_DEGREE: u64 = 2;

pub const DEFAULT_VOLMULT_TOLERANCE: f64 = 1e-2;

fn witness_json(w: &ExponentVector) -> Value {
    json!(w.to_monomial_string())
}

/// Witness `c` that makes `f` weakly graded on `n <= min(bound, 12)`.
pub fn require_weakly_graded(f: &FamilyEvaluator, bound: u64) -> Result<ExponentVector> {
    let b = bound.clamp(2, CLASSIFICATION_BOUND_NATURAL);
    if verify_graded_up_to(f, b)?.holds {
        return Ok(ExponentVector::zero(f.dim()));
    }
    find_weakly_graded_witness(f, b, WITNESS_DEGREE)?
        .witness
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no weakly graded witness of degree <= {WITNESS_DEGREE} on n <= {b}"
            ))
        })
}

/// Witness `c` that makes `f` a weak p-family on `e <= min(bound, 5)`.
pub fn require_weakly_p(f: &FamilyEvaluator, bound: u64) -> Result<ExponentVector> {
    let b = bound.clamp(1, CLASSIFICATION_BOUND_P);
    find_weakly_p_witness(f, b, WITNESS_DEGREE)?
        .witness
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no weak p-family witness of degree <= {WITNESS_DEGREE} on e <= {b}"
            ))
        })
}

/// Weak p-family or weak inverse p-family witness, labelled.
pub fn require_weakly_p_or_inverse(
    f: &FamilyEvaluator,
    bound: u64,
) -> Result<(&'static str, ExponentVector)> {
    if let Ok(w) = require_weakly_p(f, bound) {
        return Ok(("weakly p", w));
    }
    let b = bound.clamp(1, CLASSIFICATION_BOUND_P);
    find_weakly_inverse_p_witness(f, b, WITNESS_DEGREE)?
        .witness
        .map(|w| ("weakly inverse p", w))
        .ok_or_else(|| {
            Error::Precondition(format!(
                "neither weakly p nor weakly inverse p with witness degree <= {WITNESS_DEGREE} on e <= {b}"
            ))
        })
}

fn range_label(kind: IndexKind, bound: u64) -> String {
    match kind {
        IndexKind::Natural => format!("1 <= n <= {bound}"),
        IndexKind::PPower(p) => format!("q = {p}^e, 0 <= e <= {bound}"),
    }
}

fn factorial(d: usize) -> BigInt {
    (1..=d as u64).map(BigInt::from).product()
}

/// Natural index: compares the trends of `d!·a_n` and `e(I_n)/n^d` over the
/// last `d + 3` indices up to `bound`, extrapolated to `n → ∞`. The raw gap at
/// `n = bound` is reported alongside.
/// p-power index: `a_q = e_HK(I_q)/q^d` exactly for every `q = p^e`, `e <= bound`.
pub fn verify_volume_multiplicity(
    f: &FamilyEvaluator,
    bound: u64,
    tolerance: f64,
) -> Result<Report> {
    let d = f.dim();
    match f.index_kind() {
        IndexKind::Natural => {
            let witness = require_weakly_graded(f, bound)?;
            let k = d as u64 + 3;
            if bound < k {
                return Err(Error::InvalidArgument(format!(
                    "bound {bound} too small for a trend over {k} indices"
                )));
            }
            let indices: Vec<u64> = (bound + 1 - k..=bound).collect();
            let seq = colength_sequence(f, &indices)?;
            let fact = factorial(d);
            let lhs: Vec<(u64, BigRational)> =
                seq.iter().map(|p| (p.index, &p.a_n * &fact)).collect();
            let rhs: Vec<(u64, BigRational)> = indices
                .par_iter()
                .map(|&n| {
                    let e = hilbert_samuel(&*f.evaluate(n)?, DEFAULT_HS_MAX)?.multiplicity;
                    let den = BigUint::from(n).pow(d as u32);
                    Ok((n, from_biguint_ratio(&BigUint::from(e), &den)))
                })
                .collect::<Result<_>>()?;
            let window = window_of(&indices);
            let lx = extrapolate_series(&lhs, &window, d + 1);
            let rx = extrapolate_series(&rhs, &window, d + 1);
            let raw_gap = (&lhs[lhs.len() - 1].1 - &rhs[rhs.len() - 1].1).abs();
            let trusted = |x: &Option<super::limit::Extrapolation>| {
                x.as_ref()
                    .filter(|x| x.residual <= tolerance)
                    .map(|x| x.value.clone())
            };
            let (l_lim, r_lim) = (trusted(&lx), trusted(&rx));
            let (gap, basis) = match (&l_lim, &r_lim) {
                (Some(a), Some(b)) => ((a - b).abs(), "extrapolated trends"),
                _ => (raw_gap.clone(), "raw values at the largest index"),
            };
            let pass = to_f64(&gap) <= tolerance;
            let last = |s: &[(u64, BigRational)]| rational_json(&s[s.len() - 1].1);
            Ok(Report::new(
                "d!·lim a_n = lim e(I_n)/n^d",
                range_label(IndexKind::Natural, bound),
                l_lim
                    .as_ref()
                    .map(rational_json)
                    .unwrap_or_else(|| last(&lhs)),
                r_lim
                    .as_ref()
                    .map(rational_json)
                    .unwrap_or_else(|| last(&rhs)),
                tolerance,
                pass,
            )
            .with_details(json!({
                "gap": rational_json(&gap),
                "gap_basis": basis,
                "raw_gap_at_bound": rational_json(&raw_gap),
                "d_factorial_a_n": series_json(&lhs),
                "e_over_n_d": series_json(&rhs),
                "lhs_residual": lx.map(|x| x.residual),
                "rhs_residual": rx.map(|x| x.residual),
                "weakly_graded_witness": witness_json(&witness),
            })))
        }
        IndexKind::PPower(p) => {
            let (label, witness) = require_weakly_p_or_inverse(f, bound)?;
            let indices = index_range(f.index_kind(), bound)?;
            let seq = colength_sequence(f, &indices)?;
            let rows: Vec<(u64, BigRational, BigRational)> = seq
                .par_iter()
                .map(|pt| {
                    let ehk = hilbert_kunz(&*f.evaluate(pt.index)?, p)?;
                    let den = BigInt::from(pt.index).pow(d as u32);
                    Ok((pt.index, pt.a_n.clone(), ehk / den))
                })
                .collect::<Result<_>>()?;
            let mismatch = rows.iter().find(|(_, a, b)| a != b).map(|r| r.0);
            let lhs: Vec<(u64, BigRational)> = rows.iter().map(|r| (r.0, r.1.clone())).collect();
            let rhs: Vec<(u64, BigRational)> = rows.iter().map(|r| (r.0, r.2.clone())).collect();
            Ok(Report::new(
                "a_q = e_HK(I_q)/q^d",
                range_label(f.index_kind(), bound),
                series_json(&lhs),
                series_json(&rhs),
                0.0,
                mismatch.is_none(),
            )
            .with_details(json!({
                "first_mismatch": mismatch,
                "classification": label,
                "witness": witness_json(&witness),
            })))
        }
    }
}

fn series_json(s: &[(u64, BigRational)]) -> Value {
    Value::Array(
        s.iter()
            .map(|(n, v)| json!({"index": n, "value": rational_json(v)}))
            .collect(),
    )
}

fn estimate_json(e: &LimitEstimate) -> Value {
    json!({
        "limit": e.limit.as_ref().map(rational_json),
        "liminf": rational_json(&e.liminf),
        "limsup": rational_json(&e.limsup),
        "converged": e.converged,
        "c_fit": e.rate.c_fit,
        "max_index": e.max_index(),
    })
}

fn classification_witness(f: &FamilyEvaluator, bound: u64) -> Result<ExponentVector> {
    match f.index_kind() {
        IndexKind::Natural => require_weakly_graded(f, bound),
        IndexKind::PPower(_) => require_weakly_p(f, bound),
    }
}

fn root(x: &BigRational, d: usize) -> f64 {
    to_f64(x).max(0.0).powf(1.0 / d as f64)
}

/// `L(F)^{1/d} + L(G)^{1/d} >= L(FG)^{1/d} - tol` with `L` the limit estimates.
pub fn verify_minkowski(
    a: &FamilySpec,
    b: &FamilySpec,
    bound: u64,
    tolerance: f64,
) -> Result<Report> {
    if a.index != b.index {
        return Err(Error::InvalidArgument(
            "both families need the same index kind".into(),
        ));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let d = a.dim();
    let fa = FamilyEvaluator::new(a.clone())?;
    let fb = FamilyEvaluator::new(b.clone())?;
    let fab = FamilyEvaluator::new(FamilySpec::product_of(a.clone(), b.clone())?)?;
    let wa = classification_witness(&fa, bound)?;
    let wb = classification_witness(&fb, bound)?;
    let plan = LimitPlan::for_family(&fa, bound, tolerance)?;
    let ea = limit_estimate(&fa, &plan)?;
    let eb = limit_estimate(&fb, &plan)?;
    let eab = limit_estimate(&fab, &plan)?;
    let lhs = root(&ea.best_estimate(), d) + root(&eb.best_estimate(), d);
    let rhs = root(&eab.best_estimate(), d);
    let all_converged = ea.converged && eb.converged && eab.converged;
    Ok(Report::new(
        "lim(F)^{1/d} + lim(G)^{1/d} >= lim(FG)^{1/d}",
        range_label(fa.index_kind(), bound),
        json!(lhs),
        json!(rhs),
        tolerance,
        lhs >= rhs - tolerance,
    )
    .with_details(json!({
        "f": estimate_json(&ea),
        "g": estimate_json(&eb),
        "product": estimate_json(&eab),
        "all_limits_declared": all_converged,
        "witness_f": witness_json(&wa),
        "witness_g": witness_json(&wb),
    })))
}

/// Positivity threshold `max(1e-4, 2 C_fit / n_max)`.
pub fn positivity_threshold(e: &LimitEstimate) -> f64 {
    (2.0 * e.rate.c_fit / e.max_index().max(1) as f64).max(1e-4)
}

/// BAL on the tested range iff the limit estimate exceeds the threshold.
/// Inconclusive when the estimate's uncertainty interval contains the
/// threshold.
pub fn verify_positivity(f: &FamilyEvaluator, bound: u64, tolerance: f64) -> Result<Report> {
    let witness = classification_witness(f, bound)?;
    let plan = LimitPlan::for_family(f, bound, tolerance)?;
    let est = limit_estimate(f, &plan)?;
    let bal = check_bal(f, bound)?;
    let threshold = positivity_threshold(&est);
    let value = to_f64(&est.best_estimate());
    let (lo, hi) = match &est.limit {
        Some(l) => (to_f64(l) - tolerance, to_f64(l) + tolerance),
        None => (to_f64(&est.liminf), to_f64(&est.limsup)),
    };
    let inconclusive = lo <= threshold && threshold <= hi;
    let positive = value > threshold;
    let is_bal = bal.constant.is_some();
    let mut r = Report::new(
        "BAL <=> lim a_n > 0",
        range_label(f.index_kind(), bound),
        json!({"bal": is_bal, "constant": bal.constant}),
        json!({"positive": positive, "estimate": value, "threshold": threshold}),
        tolerance,
        inconclusive || is_bal == positive,
    )
    .with_details(json!({
        "bal_implies_positive": !is_bal || positive,
        "positive_implies_bal": !positive || is_bal,
        "bal_unbounded_trend": bal.unbounded_trend,
        "estimate": estimate_json(&est),
        "witness": witness_json(&witness),
    }));
    r.inconclusive = inconclusive;
    Ok(r)
}

/// Volume of the level-`p^E` complement region against the limit estimate,
/// within the fitted slack `C_fit / p^E`.
pub fn verify_brosowsky(f: &FamilyEvaluator, e_max: u64, tolerance: f64) -> Result<Report> {
    let IndexKind::PPower(p) = f.index_kind() else {
        return Err(Error::Precondition(
            "the volume identity is stated for p-power families".into(),
        ));
    };
    let fg = verify_f_graded_up_to(f, e_max)?;
    if !fg.holds {
        return Err(Error::Precondition(format!(
            "not F-graded on e1 + e2 <= {e_max}: counterexample {:?}",
            fg.counterexample
        )));
    }
    let plan = LimitPlan::for_family(f, e_max, tolerance)?;
    let est = limit_estimate(f, &plan)?;
    let q = p
        .checked_pow(e_max as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e_max} overflows")))?;
    let vol = region_volume(f, q)?;
    let limit = est.best_estimate();
    let diff = (&vol - &limit).abs();
    let slack = est.rate.c_fit / q as f64;
    let exact = vol == limit;
    let pass = exact || to_f64(&diff) <= slack;
    Ok(Report::new(
        "vol(C \\ Δ) at level q = lim a_q",
        range_label(f.index_kind(), e_max),
        rational_json(&vol),
        rational_json(&limit),
        slack,
        pass,
    )
    .with_details(json!({
        "level": q,
        "exact_equality": exact,
        "difference": rational_json(&diff),
        "estimate": estimate_json(&est),
    })))
}
