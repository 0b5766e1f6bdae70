//! Exact normalized colength sequences `a_n = ℓ(R/I_n) / n^d` and the scaled
//! complement regions behind them.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyEvaluator;
use crate::monomial::{ExponentVector, MonomialIdeal};
use crate::rational::from_biguint_ratio;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePoint {
    pub index: u64,
    pub colength: BigUint,
    pub a_n: BigRational,
}

fn member_colength(f: &FamilyEvaluator, n: u64) -> Result<BigUint> {
    f.evaluate(n)?.colength_value().map_err(|e| match e {
        Error::NotMPrimary => Error::NotMPrimaryMember { index: n },
        other => other,
    })
}

/// `(n, ℓ(R/I_n), ℓ(R/I_n)/n^d)` for every index, sorted by index.
pub fn colength_sequence(f: &FamilyEvaluator, indices: &[u64]) -> Result<Vec<SequencePoint>> {
    let mut idx: Vec<u64> = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.contains(&0) {
        return Err(Error::InvalidIndex {
            index: 0,
            reason: "normalization needs n >= 1".into(),
        });
    }
    f.warm_up(&idx)?;
    let d = f.dim() as u32;
    idx.par_iter()
        .map(|&n| {
            let c = member_colength(f, n)?;
            let den = BigUint::from(n).pow(d);
            Ok(SequencePoint {
                index: n,
                a_n: from_biguint_ratio(&c, &den),
                colength: c,
            })
        })
        .collect()
}

/// The complement staircase of `I_n` scaled by `1/n`, described by the
/// exponents `b` of its irreducible components `(x_1^{b_1}, ..., x_d^{b_d})`.
/// The region is the union of the boxes `[0, b/n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaledRegion {
    pub level: u64,
    pub corners: Vec<ExponentVector>,
    #[serde(skip)]
    pub volume: BigRational,
}

/// Exponent vectors `b` with `I = ∩ (x_1^{b_1}, ..., x_d^{b_d})`, irredundant.
/// The socle monomials of `R/I` are `x^{b - 1}`.
pub fn irreducible_components(ideal: &MonomialIdeal) -> Result<Vec<ExponentVector>> {
    let bounds = ideal.pure_power_bounds().ok_or(Error::NotMPrimary)?;
    if ideal.is_unit() {
        return Ok(Vec::new());
    }
    let mut comps: Vec<ExponentVector> = vec![ExponentVector::new(bounds)];
    for g in ideal.gens() {
        if g.pure_power_axis().is_some() {
            continue;
        }
        let mut next: Vec<ExponentVector> = Vec::with_capacity(comps.len());
        for b in comps {
            let g_inside = g.coords().iter().zip(b.coords()).any(|(gi, bi)| gi >= bi);
            if g_inside {
                next.push(b);
                continue;
            }
            for (i, &gi) in g.coords().iter().enumerate() {
                if gi > 0 {
                    let mut c = b.coords().to_vec();
                    c[i] = gi;
                    next.push(ExponentVector::new(c));
                }
            }
        }
        comps = maximal_elements(next);
    }
    Ok(comps)
}

fn maximal_elements(mut v: Vec<ExponentVector>) -> Vec<ExponentVector> {
    v.sort_unstable();
    v.dedup();
    let keep: Vec<bool> = v
        .iter()
        .map(|b| !v.iter().any(|o| o != b && b.divides(o)))
        .collect();
    v.into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect()
}

/// Lattice volume of the union of the boxes `[0, b]` over `boxes`.
fn union_of_boxes(boxes: &[&[u64]], k: usize) -> BigUint {
    if boxes.is_empty() {
        return BigUint::zero();
    }
    if k == 1 {
        return BigUint::from(boxes.iter().map(|b| b[0]).max().unwrap_or(0));
    }
    let last = k - 1;
    let mut levels: Vec<u64> = boxes.iter().map(|b| b[last]).collect();
    levels.sort_unstable();
    levels.dedup();
    let mut total = BigUint::zero();
    let mut prev = 0u64;
    let mut active: Vec<&[u64]> = Vec::with_capacity(boxes.len());
    for &h in &levels {
        active.clear();
        active.extend(boxes.iter().copied().filter(|b| b[last] >= h));
        total += union_of_boxes(&active, last) * BigUint::from(h - prev);
        prev = h;
    }
    total
}

/// `vol((1/n) · complement(I_n))`, computed from irreducible components.
pub fn scaled_region(f: &FamilyEvaluator, n: u64) -> Result<ScaledRegion> {
    if n == 0 {
        return Err(Error::InvalidIndex {
            index: 0,
            reason: "scaling needs n >= 1".into(),
        });
    }
    let ideal = f.evaluate(n)?;
    let corners = irreducible_components(&ideal).map_err(|e| match e {
        Error::NotMPrimary => Error::NotMPrimaryMember { index: n },
        other => other,
    })?;
    let refs: Vec<&[u64]> = corners.iter().map(|c| c.coords()).collect();
    let count = union_of_boxes(&refs, f.dim());
    let den = BigUint::from(n).pow(f.dim() as u32);
    Ok(ScaledRegion {
        level: n,
        volume: from_biguint_ratio(&count, &den),
        corners,
    })
}

pub fn region_volume(f: &FamilyEvaluator, n: u64) -> Result<BigRational> {
    Ok(scaled_region(f, n)?.volume)
}
