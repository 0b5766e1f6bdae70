//! Finite-window estimates of `liminf`, `limsup` and `lim` of `a_n`.
//!
//! No certified enclosure is claimed. The window is the last ⌈30%⌉ of the
//! sampled indices together with every index at least half the largest one.
//! On top of the raw window extremes the estimate tries an exact polynomial
//! extrapolation in `s = 1/n`, which is exact once `ℓ(R/I_n)` agrees with a
//! polynomial in `n`, and is only accepted when it reproduces every other
//! window value within the tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::sequence::{colength_sequence, SequencePoint};
use crate::error::{Error, Result};
use crate::family::{bbl_on_indices, index_range, FamilyEvaluator, IndexKind};
use crate::rational::{from_u64, to_f64};

pub const DEFAULT_TOLERANCE: f64 = 1e-3;

/// Sampled indices and the tolerance used for declaring a limit.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitPlan {
    pub indices: Vec<u64>,
    pub tolerance: f64,
}

impl LimitPlan {
    /// Sorted, deduplicated, nonzero indices.
    pub fn new(indices: &[u64], tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance {tolerance} must lie in (0, 1)"
            )));
        }
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() || idx[0] == 0 {
            return Err(Error::InvalidArgument(
                "a limit plan needs nonempty positive indices".into(),
            ));
        }
        Ok(LimitPlan {
            indices: idx,
            tolerance,
        })
    }

    /// `1..=n_max` for natural families, `p^0..=p^bound` for p-power families.
    pub fn for_family(f: &FamilyEvaluator, bound: u64, tolerance: f64) -> Result<Self> {
        LimitPlan::new(&index_range(f.index_kind(), bound)?, tolerance)
    }

    /// Indices `p^e - 1` for `1 <= e <= e_max`.
    pub fn p_power_minus_one(p: u64, e_max: u32, tolerance: f64) -> Result<Self> {
        let idx: Vec<u64> = (1..=e_max)
            .map(|e| {
                p.checked_pow(e)
                    .map(|q| q - 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} overflows")))
            })
            .collect::<Result<_>>()?;
        LimitPlan::new(&idx, tolerance)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolation {
    /// Value at `s = 0` of the interpolating polynomial.
    pub value: BigRational,
    pub fit_indices: Vec<u64>,
    pub check_indices: Vec<u64>,
    /// Largest deviation at the check indices.
    pub residual: f64,
}

/// One-sided `C/q` law `a_q - η̂ <= C/q` around the reference value `η̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub reference: BigRational,
    /// Smallest `C` with `q (a_q - η̂) <= C` at every sampled index.
    pub c_fit: f64,
    /// Least-squares `C` for `|a_q - η̂| ≈ C/q`.
    pub c_ls: f64,
    pub ls_residual: f64,
    /// Envelope over the first half of the samples only.
    pub c_early: f64,
    /// The second half stays within twice the early envelope.
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate {
    pub points: Vec<SequencePoint>,
    pub window: Vec<u64>,
    pub liminf: BigRational,
    pub limsup: BigRational,
    pub extrapolation: Option<Extrapolation>,
    /// Exact when taken from an accepted extrapolation, the window midpoint
    /// when only the spread criterion holds.
    pub limit: Option<BigRational>,
    pub rate: RateFit,
    pub converged: bool,
    pub tolerance: f64,
    pub bbl_constant: u64,
}

impl LimitEstimate {
    pub fn limit_f64(&self) -> Option<f64> {
        self.limit.as_ref().map(to_f64)
    }

    /// The limit if declared, otherwise the window midpoint.
    pub fn best_estimate(&self) -> BigRational {
        self.limit
            .clone()
            .unwrap_or_else(|| (&self.liminf + &self.limsup) / BigInt::from(2))
    }

    pub fn max_index(&self) -> u64 {
        self.points.last().map(|p| p.index).unwrap_or(0)
    }
}

/// Last ⌈30%⌉ of the sampled indices plus every index `>= max/2`.
pub fn window_of(indices: &[u64]) -> Vec<u64> {
    let Some(&max) = indices.last() else {
        return Vec::new();
    };
    let tail = (indices.len() * 3).div_ceil(10).max(1);
    let start = indices.len() - tail;
    indices
        .iter()
        .enumerate()
        .filter(|&(i, &n)| i >= start || 2 * n >= max)
        .map(|(_, &n)| n)
        .collect()
}

fn s_of(n: u64) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(n))
}

/// Lagrange interpolation through `(s_i, y_i)` evaluated at `x`.
fn lagrange(nodes: &[(BigRational, BigRational)], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, (si, yi)) in nodes.iter().enumerate() {
        let mut term = yi.clone();
        for (j, (sj, _)) in nodes.iter().enumerate() {
            if i != j {
                term *= (x - sj) / (si - sj);
            }
        }
        acc += term;
    }
    acc
}

/// Interpolates the last `dim + 1` samples in `1/n` and checks the result
/// against the remaining window samples and the two samples preceding the fit.
pub fn extrapolate(points: &[SequencePoint], window: &[u64], dim: usize) -> Option<Extrapolation> {
    let series: Vec<(u64, BigRational)> = points.iter().map(|p| (p.index, p.a_n.clone())).collect();
    extrapolate_series(&series, window, dim + 1)
}

/// [`extrapolate`] for an arbitrary index-sorted series, fitting `k` points.
pub fn extrapolate_series(
    series: &[(u64, BigRational)],
    window: &[u64],
    k: usize,
) -> Option<Extrapolation> {
    if series.len() < 2 || k == 0 {
        return None;
    }
    let k = k.min(series.len() - 1);
    let (before, fit) = series.split_at(series.len() - k);
    let nodes: Vec<(BigRational, BigRational)> =
        fit.iter().map(|(n, v)| (s_of(*n), v.clone())).collect();
    let mut check: Vec<&(u64, BigRational)> = before.iter().rev().take(2).collect();
    for p in before {
        if window.contains(&p.0) && !check.iter().any(|c| c.0 == p.0) {
            check.push(p);
        }
    }
    check.sort_by_key(|p| p.0);
    let residual = check
        .iter()
        .map(|(n, v)| to_f64(&(lagrange(&nodes, &s_of(*n)) - v).abs()))
        .fold(0.0, f64::max);
    Some(Extrapolation {
        value: lagrange(&nodes, &BigRational::zero()),
        fit_indices: fit.iter().map(|p| p.0).collect(),
        check_indices: check.iter().map(|p| p.0).collect(),
        residual,
    })
}

pub fn rate_fit(points: &[SequencePoint], reference: &BigRational) -> RateFit {
    let scaled: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            let q = p.index as f64;
            (q, to_f64(&(&p.a_n - reference)))
        })
        .collect();
    let envelope = |s: &[(f64, f64)]| s.iter().map(|&(q, r)| q * r.max(0.0)).fold(0.0, f64::max);
    let c_fit = envelope(&scaled);
    let mid = scaled.len().div_ceil(2);
    let c_early = envelope(&scaled[..mid]);
    let c_late = envelope(&scaled[mid..]);
    let (num, den) = scaled.iter().fold((0.0, 0.0), |(n, d), &(q, r)| {
        (n + r.abs() / q, d + 1.0 / (q * q))
    });
    let c_ls = if den > 0.0 { num / den } else { 0.0 };
    let ls_residual = if scaled.is_empty() {
        0.0
    } else {
        (scaled
            .iter()
            .map(|&(q, r)| (r.abs() - c_ls / q).powi(2))
            .sum::<f64>()
            / scaled.len() as f64)
            .sqrt()
    };
    RateFit {
        reference: reference.clone(),
        c_fit,
        c_ls,
        ls_residual,
        c_early,
        stable: c_late <= 2.0 * c_early + 1e-12,
    }
}

/// Estimates `liminf`, `limsup` and, when the evidence allows, `lim a_n`.
/// Refuses families that fail the BBL check on the plan's indices.
pub fn limit_estimate(f: &FamilyEvaluator, plan: &LimitPlan) -> Result<LimitEstimate> {
    if let IndexKind::PPower(_) = f.index_kind() {
        for &n in &plan.indices {
            f.index_kind().validate(n)?;
        }
    }
    let bbl = bbl_on_indices(f, &plan.indices)?;
    let bbl_constant = bbl.constant.ok_or_else(|| {
        Error::Precondition(format!(
            "family is not BBL on the probed window: ⌈t_n/n⌉ keeps growing (thresholds {:?} at indices {:?})",
            bbl.thresholds, bbl.indices
        ))
    })?;
    let points = colength_sequence(f, &plan.indices)?;
    let window = window_of(&plan.indices);
    let in_window: Vec<&BigRational> = points
        .iter()
        .filter(|p| window.contains(&p.index))
        .map(|p| &p.a_n)
        .collect();
    let liminf = in_window
        .iter()
        .copied()
        .min()
        .cloned()
        .unwrap_or_else(|| from_u64(0));
    let limsup = in_window
        .iter()
        .copied()
        .max()
        .cloned()
        .unwrap_or_else(|| from_u64(0));
    let extrapolation = extrapolate(&points, &window, f.dim());
    let spread = to_f64(&(&limsup - &liminf));
    let limit = match &extrapolation {
        Some(x) if x.residual <= plan.tolerance && !x.check_indices.is_empty() => {
            Some(x.value.clone())
        }
        _ if spread < plan.tolerance => Some((&liminf + &limsup) / BigInt::from(2)),
        _ => None,
    };
    let reference = limit
        .clone()
        .unwrap_or_else(|| points.last().map(|p| p.a_n.clone()).unwrap_or_default());
    let rate = rate_fit(&points, &reference);
    Ok(LimitEstimate {
        converged: limit.is_some(),
        points,
        window,
        liminf,
        limsup,
        extrapolation,
        limit,
        rate,
        tolerance: plan.tolerance,
        bbl_constant,
    })
}
