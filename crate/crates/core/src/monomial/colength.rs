//! Colength `ℓ(R/I)` of monomial ideals: the number of lattice points of
//! `N^d` outside the staircase of `I`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{ExponentVector, MonomialIdeal};
use crate::error::{Error, Result};

/// Inclusion–exclusion is exponential in the number of generators.
pub const INCLUSION_EXCLUSION_MAX_GENS: usize = 20;

/// Box enumeration refuses boxes larger than this many points.
const BOX_ENUMERATION_MAX_POINTS: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColengthMethod {
    /// Recursive slicing along the last coordinate; the production path.
    Slicing,
    /// Scan of the pure-power bounding box.
    BoxEnumeration,
    /// Signed sum over generator subsets with componentwise-max lcms.
    InclusionExclusion,
}

impl ColengthMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ColengthMethod::Slicing => "slicing",
            ColengthMethod::BoxEnumeration => "box-enumeration",
            ColengthMethod::InclusionExclusion => "inclusion-exclusion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite(BigUint),
    /// The ideal is not 𝔪-primary.
    Infinite,
}

impl Colength {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            Colength::Finite(v) => Some(v),
            Colength::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Colength::Infinite)
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(v) => write!(f, "{v}"),
            Colength::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColengthResult {
    pub value: Colength,
    pub method: ColengthMethod,
    pub complement_points: Option<Vec<ExponentVector>>,
}

impl MonomialIdeal {
    /// `ℓ(R/I)` by slicing; infinite when `I` is not 𝔪-primary.
    pub fn colength(&self) -> ColengthResult {
        let value = match slicing_count(self) {
            Some(v) => Colength::Finite(v),
            None => Colength::Infinite,
        };
        ColengthResult {
            value,
            method: ColengthMethod::Slicing,
            complement_points: None,
        }
    }

    /// `ℓ(R/I)` by the chosen method.
    pub fn colength_with(&self, method: ColengthMethod) -> Result<ColengthResult> {
        match method {
            ColengthMethod::Slicing => Ok(self.colength()),
            ColengthMethod::BoxEnumeration => colength_box_enumeration(self),
            ColengthMethod::InclusionExclusion => colength_inclusion_exclusion(self),
        }
    }

    /// Finite colength or [`Error::NotMPrimary`].
    pub fn colength_value(&self) -> Result<BigUint> {
        slicing_count(self).ok_or(Error::NotMPrimary)
    }

    /// Smallest `k` with `𝔪^k ⊆ I`, i.e. one more than the largest total
    /// degree of a complement point (0 for the unit ideal).
    pub fn power_containment_threshold(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::NotMPrimary);
        }
        let gens: Vec<&[u64]> = self.gens.iter().map(|g| g.coords()).collect();
        match max_complement_degree(&gens, self.dim) {
            None => Err(Error::NotMPrimary),
            Some(None) => Ok(0),
            Some(Some(s)) => Ok(s + 1),
        }
    }
}

fn slicing_count(ideal: &MonomialIdeal) -> Option<BigUint> {
    let gens: Vec<&[u64]> = ideal.gens.iter().map(|g| g.coords()).collect();
    count_prefix(&gens, ideal.dim)
}

/// Complement count of the ideal generated by the first `k` coordinates of
/// `gens`. `gens` must be lexicographically sorted; filtering keeps it so.
fn count_prefix(gens: &[&[u64]], k: usize) -> Option<BigUint> {
    if gens.is_empty() {
        return None;
    }
    match k {
        1 => Some(BigUint::from(gens.iter().map(|g| g[0]).min()?)),
        2 => count_plane(gens).map(BigUint::from),
        _ => {
            let levels = distinct_levels(gens, k - 1);
            if levels[0] != 0 {
                return None;
            }
            let mut total = BigUint::zero();
            let mut slice: Vec<&[u64]> = Vec::with_capacity(gens.len());
            for (i, &level) in levels.iter().enumerate() {
                slice.clear();
                slice.extend(gens.iter().copied().filter(|g| g[k - 1] <= level));
                let c = count_prefix(&slice, k - 1)?;
                if c.is_zero() {
                    return Some(total);
                }
                let next = *levels.get(i + 1)?;
                total += c * BigUint::from(next - level);
            }
            // The top slice still had a nonempty complement.
            None
        }
    }
}

fn distinct_levels(gens: &[&[u64]], axis: usize) -> Vec<u64> {
    let mut levels: Vec<u64> = gens.iter().map(|g| g[axis]).collect();
    levels.sort_unstable();
    levels.dedup();
    levels
}

/// Two-dimensional staircase count by a sweep over lex-sorted points.
fn count_plane(gens: &[&[u64]]) -> Option<u128> {
    let mut total: u128 = 0;
    let mut min_y = u64::MAX;
    let mut prev_x = 0u64;
    for g in gens {
        let (x, y) = (g[0], g[1]);
        if y < min_y {
            if x > prev_x {
                if min_y == u64::MAX {
                    return None;
                }
                total += (x - prev_x) as u128 * min_y as u128;
            }
            prev_x = x;
            min_y = y;
            if min_y == 0 {
                return Some(total);
            }
        }
    }
    None
}

/// `None` when the complement is infinite, `Some(None)` when it is empty.
fn max_complement_degree(gens: &[&[u64]], k: usize) -> Option<Option<u64>> {
    if gens.is_empty() {
        return None;
    }
    match k {
        1 => {
            let a = gens.iter().map(|g| g[0]).min()?;
            Some(a.checked_sub(1))
        }
        2 => {
            let mut best: Option<u64> = None;
            let mut min_y = u64::MAX;
            let mut prev_x = 0u64;
            for g in gens {
                let (x, y) = (g[0], g[1]);
                if y < min_y {
                    if x > prev_x {
                        if min_y == u64::MAX {
                            return None;
                        }
                        let cand = (x - 1) + (min_y - 1);
                        best = Some(best.map_or(cand, |b| b.max(cand)));
                    }
                    prev_x = x;
                    min_y = y;
                    if min_y == 0 {
                        return Some(best);
                    }
                }
            }
            None
        }
        _ => {
            let levels = distinct_levels(gens, k - 1);
            if levels[0] != 0 {
                return None;
            }
            let mut best: Option<u64> = None;
            let mut slice: Vec<&[u64]> = Vec::with_capacity(gens.len());
            for (i, &level) in levels.iter().enumerate() {
                slice.clear();
                slice.extend(gens.iter().copied().filter(|g| g[k - 1] <= level));
                match max_complement_degree(&slice, k - 1)? {
                    None => return Some(best),
                    Some(s) => {
                        let next = *levels.get(i + 1)?;
                        let cand = s + next - 1;
                        best = Some(best.map_or(cand, |b| b.max(cand)));
                    }
                }
            }
            None
        }
    }
}

fn box_size(bounds: &[u64]) -> Option<u128> {
    bounds
        .iter()
        .try_fold(1u128, |acc, &a| acc.checked_mul(a as u128))
}

/// Visits every point of the box `[0, bounds)` whose first coordinate is `x0`.
fn for_each_in_slab(bounds: &[u64], x0: u64, mut f: impl FnMut(&[u64])) {
    let d = bounds.len();
    if bounds[1..].contains(&0) {
        return;
    }
    let mut u = vec![0u64; d];
    u[0] = x0;
    loop {
        f(&u);
        let mut i = d - 1;
        loop {
            if i == 0 {
                return;
            }
            u[i] += 1;
            if u[i] < bounds[i] {
                break;
            }
            u[i] = 0;
            i -= 1;
        }
    }
}

fn box_bounds(ideal: &MonomialIdeal) -> Option<Vec<u64>> {
    if ideal.is_zero() {
        return None;
    }
    let bounds = ideal.pure_power_bounds()?;
    Some(bounds)
}

/// Colength by scanning the pure-power bounding box.
pub fn colength_box_enumeration(ideal: &MonomialIdeal) -> Result<ColengthResult> {
    let Some(bounds) = box_bounds(ideal) else {
        return Ok(ColengthResult {
            value: Colength::Infinite,
            method: ColengthMethod::BoxEnumeration,
            complement_points: None,
        });
    };
    let size = box_size(&bounds).unwrap_or(u128::MAX);
    if size > BOX_ENUMERATION_MAX_POINTS {
        return Err(Error::OracleLimit(format!(
            "bounding box has {size} points, limit {BOX_ENUMERATION_MAX_POINTS}"
        )));
    }
    let count: u64 = (0..bounds[0])
        .into_par_iter()
        .map(|x0| {
            let mut c = 0u64;
            for_each_in_slab(&bounds, x0, |u| {
                if !ideal.contains_exponents(u) {
                    c += 1;
                }
            });
            c
        })
        .sum();
    Ok(ColengthResult {
        value: Colength::Finite(BigUint::from(count)),
        method: ColengthMethod::BoxEnumeration,
        complement_points: None,
    })
}

/// Complement lattice points in lexicographic order.
pub fn complement_points(ideal: &MonomialIdeal) -> Result<Vec<ExponentVector>> {
    let bounds = box_bounds(ideal).ok_or(Error::NotMPrimary)?;
    let size = box_size(&bounds).unwrap_or(u128::MAX);
    if size > BOX_ENUMERATION_MAX_POINTS {
        return Err(Error::OracleLimit(format!(
            "bounding box has {size} points, limit {BOX_ENUMERATION_MAX_POINTS}"
        )));
    }
    let mut out = Vec::new();
    for x0 in 0..bounds[0] {
        for_each_in_slab(&bounds, x0, |u| {
            if !ideal.contains_exponents(u) {
                out.push(ExponentVector::from_slice(u));
            }
        });
    }
    Ok(out)
}

/// Colength as `|box| - |I ∩ box|` with the second term expanded over
/// generator subsets. Gated to [`INCLUSION_EXCLUSION_MAX_GENS`] generators.
pub fn colength_inclusion_exclusion(ideal: &MonomialIdeal) -> Result<ColengthResult> {
    let Some(bounds) = box_bounds(ideal) else {
        return Ok(ColengthResult {
            value: Colength::Infinite,
            method: ColengthMethod::InclusionExclusion,
            complement_points: None,
        });
    };
    let mu = ideal.num_min_gens();
    if mu > INCLUSION_EXCLUSION_MAX_GENS {
        return Err(Error::OracleLimit(format!(
            "inclusion-exclusion needs at most {INCLUSION_EXCLUSION_MAX_GENS} generators, got {mu}"
        )));
    }
    let gens: Vec<&[u64]> = ideal.gens.iter().map(|g| g.coords()).collect();
    let mut inside = BigInt::zero();
    let mut lcm = vec![0u64; ideal.dim];
    subset_sum(&gens, &bounds, 0, &mut lcm, 0, &mut inside);
    let total: BigInt = bounds.iter().map(|&a| BigInt::from(a)).product();
    let value = (total - inside)
        .to_biguint()
        .ok_or_else(|| Error::Internal("negative inclusion-exclusion count".into()))?;
    Ok(ColengthResult {
        value: Colength::Finite(value),
        method: ColengthMethod::InclusionExclusion,
        complement_points: None,
    })
}

/// Adds the signed box counts of all nonempty subsets extending the current
/// one with generators from `start` on. An lcm leaving the box zeroes every
/// superset, so that branch is pruned.
fn subset_sum(
    gens: &[&[u64]],
    bounds: &[u64],
    start: usize,
    lcm: &mut Vec<u64>,
    size: usize,
    acc: &mut BigInt,
) {
    for j in start..gens.len() {
        let saved = lcm.clone();
        let mut empty = false;
        for (i, l) in lcm.iter_mut().enumerate() {
            *l = (*l).max(gens[j][i]);
            if *l >= bounds[i] {
                empty = true;
            }
        }
        if !empty {
            let mut term = BigInt::one();
            for (l, a) in lcm.iter().zip(bounds) {
                term *= BigInt::from(a - l);
            }
            if (size + 1) % 2 == 1 {
                *acc += term;
            } else {
                *acc -= term;
            }
            subset_sum(gens, bounds, j + 1, lcm, size + 1, acc);
        }
        *lcm = saved;
    }
}

/// Naive membership used by tests as an independent reference.
#[cfg(test)]
pub(crate) fn naive_contains(gens: &[ExponentVector], u: &[u64]) -> bool {
    gens.iter().any(|g| super::divides(g.coords(), u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::normalize;
    use num_integer::binomial;
    use proptest::prelude::*;

    fn ideal(d: usize, rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(d, rows).unwrap()
    }

    fn value(i: &MonomialIdeal, m: ColengthMethod) -> BigUint {
        i.colength_with(m).unwrap().value.finite().unwrap().clone()
    }

    fn all_methods(i: &MonomialIdeal) -> u64 {
        let a = value(i, ColengthMethod::Slicing);
        assert_eq!(a, value(i, ColengthMethod::BoxEnumeration), "{i}");
        if i.num_min_gens() <= INCLUSION_EXCLUSION_MAX_GENS {
            assert_eq!(a, value(i, ColengthMethod::InclusionExclusion), "{i}");
        }
        a.try_into().unwrap()
    }

    #[test]
    fn small_colengths() {
        assert_eq!(all_methods(&MonomialIdeal::maximal(2)), 1);
        assert_eq!(all_methods(&MonomialIdeal::maximal(2).power(3)), 6);
        assert_eq!(all_methods(&ideal(2, &[&[3, 0], &[1, 1], &[0, 2]])), 4);
        let m3 = MonomialIdeal::maximal(2)
            .generalized_bracket_power(3, 2)
            .unwrap();
        assert_eq!(all_methods(&m3), 6);
        assert_eq!(all_methods(&ideal(2, &[&[2, 0], &[0, 2]])), 4);
        assert_eq!(all_methods(&MonomialIdeal::unit(3)), 0);
    }

    #[test]
    fn complement_listing() {
        let pts = complement_points(&ideal(2, &[&[3, 0], &[1, 1], &[0, 2]])).unwrap();
        let expected: Vec<ExponentVector> = [[0, 0], [0, 1], [1, 0], [2, 0]]
            .iter()
            .map(|c| ExponentVector::from_slice(c))
            .collect();
        assert_eq!(pts, expected);
    }

    #[test]
    fn non_m_primary_is_infinite() {
        let x = ideal(2, &[&[1, 0]]);
        for m in [
            ColengthMethod::Slicing,
            ColengthMethod::BoxEnumeration,
            ColengthMethod::InclusionExclusion,
        ] {
            assert!(x.colength_with(m).unwrap().value.is_infinite());
        }
        assert!(MonomialIdeal::zero(2).colength().value.is_infinite());
        let partial = ideal(3, &[&[2, 0, 0], &[0, 2, 0], &[1, 1, 1]]);
        assert!(partial.colength().value.is_infinite());
        assert_eq!(partial.colength_value(), Err(Error::NotMPrimary));
        assert_eq!(x.power_containment_threshold(), Err(Error::NotMPrimary));
    }

    #[test]
    fn maximal_power_colength_closed_form() {
        for d in 1..=4usize {
            let m = MonomialIdeal::maximal(d);
            for n in 0..=50u64 {
                if d == 4 && n > 20 {
                    break;
                }
                let expected = binomial(BigUint::from(n + d as u64 - 1), BigUint::from(d));
                assert_eq!(
                    m.power(n).colength_value().unwrap(),
                    expected,
                    "d={d} n={n}"
                );
            }
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(
            ideal(2, &[&[2, 0], &[0, 2]]).power_containment_threshold(),
            Ok(3)
        );
        for n in 1..8 {
            assert_eq!(
                MonomialIdeal::maximal(3)
                    .power(n)
                    .power_containment_threshold(),
                Ok(n)
            );
        }
        assert_eq!(
            ideal(2, &[&[3, 0], &[1, 1], &[0, 2]]).power_containment_threshold(),
            Ok(3)
        );
        assert_eq!(MonomialIdeal::unit(2).power_containment_threshold(), Ok(0));
    }

    #[test]
    fn inclusion_exclusion_is_gated() {
        let big = MonomialIdeal::maximal(2).power(21);
        assert!(matches!(
            colength_inclusion_exclusion(&big),
            Err(Error::OracleLimit(_))
        ));
    }

    fn arb_m_primary(
        d: usize,
        max_extra: usize,
        max_exp: u64,
    ) -> impl Strategy<Value = MonomialIdeal> {
        (
            proptest::collection::vec(1..=max_exp, d),
            proptest::collection::vec(proptest::collection::vec(0..=max_exp, d), 0..=max_extra),
        )
            .prop_map(move |(pure, extra)| {
                let mut gens: Vec<ExponentVector> = pure
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| ExponentVector::axis(d, i, a))
                    .collect();
                gens.extend(extra.into_iter().map(ExponentVector::new));
                normalize(gens, d).unwrap()
            })
    }

    fn brute_threshold(i: &MonomialIdeal) -> u64 {
        complement_points(i)
            .unwrap()
            .iter()
            .map(|u| u.degree() + 1)
            .max()
            .unwrap_or(0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn methods_agree_d2(i in arb_m_primary(2, 8, 9)) {
            all_methods(&i);
            prop_assert_eq!(i.power_containment_threshold().unwrap(), brute_threshold(&i));
        }

        #[test]
        fn methods_agree_d3(i in arb_m_primary(3, 8, 6)) {
            all_methods(&i);
            prop_assert_eq!(i.power_containment_threshold().unwrap(), brute_threshold(&i));
        }

        #[test]
        fn methods_agree_d4(i in arb_m_primary(4, 6, 4)) {
            all_methods(&i);
            prop_assert_eq!(i.power_containment_threshold().unwrap(), brute_threshold(&i));
        }

        #[test]
        fn frobenius_scaling(i in arb_m_primary(3, 5, 4), q in prop::sample::select(vec![2u64, 3, 4, 5])) {
            let base = i.colength_value().unwrap();
            let scaled = i.bracket_power(q).unwrap().colength_value().unwrap();
            prop_assert_eq!(scaled, base * BigUint::from(q).pow(3));
        }

        #[test]
        fn complement_matches_naive_membership(i in arb_m_primary(2, 6, 7)) {
            let pts = complement_points(&i).unwrap();
            for u in &pts {
                prop_assert!(!naive_contains(i.gens(), u.coords()));
            }
            prop_assert_eq!(BigUint::from(pts.len()), i.colength_value().unwrap());
        }
    }
}
