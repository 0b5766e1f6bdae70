//! Finite-level classification of a point against the limit regions.
//!
//! A point is tested through its lattice approximations `[x]_n = ⌊n x⌋ / n`.
//! The verdict only describes the probed window; it is not a claim about
//! asymptotic membership near the boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyEvaluator;

/// Minimum number of occurrences of each bit in the tail for oscillation.
pub const OSCILLATION_MIN_REPEATS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trajectory {
    /// `[x]_n` stays in the scaled complement over the tail.
    NablaLow,
    /// `[x]_n` stays in the scaled ideal over the tail.
    DeltaUp,
    Oscillating,
    Undetermined,
}

impl Trajectory {
    pub fn as_str(self) -> &'static str {
        match self {
            Trajectory::NablaLow => "nabla_low",
            Trajectory::DeltaUp => "delta_up",
            Trajectory::Oscillating => "oscillating",
            Trajectory::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectoryClass {
    pub point: Vec<BigRational>,
    pub window: Vec<u64>,
    /// `true` when `⌊n x⌋` lies outside `I_n`, one entry per window index.
    pub in_complement: Vec<bool>,
    /// Number of trailing window entries the verdict is based on.
    pub tail_len: usize,
    pub class: Trajectory,
}

fn lattice_point(x: &[BigRational], n: u64) -> Result<Vec<u64>> {
    x.iter()
        .map(|c| {
            (c * BigInt::from(n))
                .floor()
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::InvalidArgument(format!("⌊{n}·{c}⌋ out of range")))
        })
        .collect()
}

/// Classifies `x` from the membership pattern of `[x]_n` over the second
/// half of `window`.
pub fn trajectory_classify(
    f: &FamilyEvaluator,
    x: &[BigRational],
    window: &[u64],
) -> Result<TrajectoryClass> {
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: x.len(),
        });
    }
    if !x.iter().all(Signed::is_positive) {
        return Err(Error::InvalidArgument(
            "point must lie in the open positive orthant".into(),
        ));
    }
    let mut idx = window.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.is_empty() || idx[0] == 0 {
        return Err(Error::InvalidArgument(
            "window needs positive indices".into(),
        ));
    }
    f.warm_up(&idx)?;
    let bits: Vec<bool> = idx
        .iter()
        .map(|&n| Ok(!f.evaluate(n)?.contains_exponents(&lattice_point(x, n)?)))
        .collect::<Result<_>>()?;
    let tail_len = bits.len().div_ceil(2);
    let tail = &bits[bits.len() - tail_len..];
    let ones = tail.iter().filter(|&&b| b).count();
    let zeros = tail_len - ones;
    let class = if zeros == 0 {
        Trajectory::NablaLow
    } else if ones == 0 {
        Trajectory::DeltaUp
    } else if ones >= OSCILLATION_MIN_REPEATS && zeros >= OSCILLATION_MIN_REPEATS {
        Trajectory::Oscillating
    } else {
        Trajectory::Undetermined
    };
    Ok(TrajectoryClass {
        point: x.to_vec(),
        window: idx,
        in_complement: bits,
        tail_len,
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;
    use crate::monomial::MonomialIdeal;
    use crate::rational::from_ratio;

    #[test]
    fn powers_examples() {
        let f = FamilyEvaluator::new(FamilySpec::powers(MonomialIdeal::maximal(2))).unwrap();
        let w: Vec<u64> = (1..=40).collect();
        let at = |a, b| vec![from_ratio(a, b), from_ratio(a, b)];
        let c = |x: Vec<BigRational>| trajectory_classify(&f, &x, &w).unwrap().class;
        assert_eq!(c(at(3, 10)), Trajectory::NablaLow);
        assert_eq!(c(at(7, 10)), Trajectory::DeltaUp);
        assert_eq!(c(at(1, 2)), Trajectory::Oscillating);
        let few = trajectory_classify(&f, &at(1, 2), &[38, 39, 40]).unwrap();
        assert_eq!(few.class, Trajectory::Undetermined);
        assert!(trajectory_classify(&f, &[from_ratio(0, 1), from_ratio(1, 2)], &w).is_err());
    }
}
