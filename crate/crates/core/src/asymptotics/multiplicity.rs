//! Hilbert-Samuel and Hilbert-Kunz multiplicities of monomial ideals.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{is_prime, MonomialIdeal};
use crate::newton::{complement_volume, DEFAULT_APPROX_LEVEL};
use crate::rational::from_biguint_ratio;

/// Default largest power examined by [`hilbert_samuel`].
pub const DEFAULT_HS_MAX: u64 = 64;

/// Consecutive equal `d`-th differences required.
pub const STABLE_RUN: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertSamuel {
    pub multiplicity: u64,
    /// Smallest `k` such that the differences at `k, k+1, k+2` agree.
    pub stable_from: u64,
    /// `ℓ(R/I^k)` for `k = 0, 1, ...` as far as computed.
    pub lengths: Vec<String>,
    /// `d`-th forward differences of `lengths`.
    pub differences: Vec<String>,
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `e(I)` as the eventually constant `d`-th difference of `k ↦ ℓ(R/I^k)`.
pub fn hilbert_samuel(ideal: &MonomialIdeal, n_max: u64) -> Result<HilbertSamuel> {
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    let d = ideal.dim() as u64;
    let coeffs: Vec<BigInt> = (0..=d)
        .map(|j| {
            let c = binomial(d, j);
            if (d - j).is_multiple_of(2) {
                c
            } else {
                -c
            }
        })
        .collect();
    let mut lengths: Vec<BigInt> = vec![BigInt::from(0)];
    let mut diffs: Vec<BigInt> = Vec::new();
    let mut power = MonomialIdeal::unit(ideal.dim());
    let trace = |lengths: &[BigInt], diffs: &[BigInt]| {
        let last: Vec<String> = diffs
            .iter()
            .rev()
            .take(6)
            .rev()
            .map(|v| v.to_string())
            .collect();
        format!(
            "{} lengths computed, last differences [{}]",
            lengths.len(),
            last.join(", ")
        )
    };
    for _ in 1..=n_max {
        power = power.product(ideal)?;
        lengths.push(BigInt::from_biguint(Sign::Plus, power.colength_value()?));
        if lengths.len() as u64 > d {
            let start = lengths.len() - 1 - d as usize;
            let delta: BigInt = coeffs
                .iter()
                .zip(&lengths[start..])
                .map(|(c, l)| c * l)
                .sum();
            diffs.push(delta);
            let n = diffs.len();
            if n >= STABLE_RUN && diffs[n - STABLE_RUN..].iter().all(|v| *v == diffs[n - 1]) {
                let value = &diffs[n - 1];
                if value.is_negative() {
                    return Err(Error::Internal(format!("negative multiplicity {value}")));
                }
                let multiplicity = value.to_u64().ok_or_else(|| {
                    Error::OracleLimit(format!("multiplicity {value} exceeds u64"))
                })?;
                return Ok(HilbertSamuel {
                    multiplicity,
                    stable_from: (n - STABLE_RUN) as u64,
                    lengths: lengths.iter().map(|v| v.to_string()).collect(),
                    differences: diffs.iter().map(|v| v.to_string()).collect(),
                });
            }
        }
    }
    Err(Error::NoStabilization {
        n_max,
        trace: trace(&lengths, &diffs),
    })
}

/// `d! · vol(ℝ^d_+ \ NP(I))` and whether the volume is exact.
pub fn newton_multiplicity(ideal: &MonomialIdeal) -> Result<(BigRational, bool)> {
    let v = complement_volume(ideal, DEFAULT_APPROX_LEVEL)?;
    let fact: BigInt = (1..=ideal.dim() as u64).map(BigInt::from).product();
    Ok((v.value * fact, v.exact))
}

/// `e_HK(I) = ℓ(R/I)` for monomial `I`, cross-checked against
/// `ℓ(R/I^{[q]}) = q^d ℓ(R/I)` at `q = p` and `q = p²`.
pub fn hilbert_kunz(ideal: &MonomialIdeal, p: u64) -> Result<BigRational> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let c = ideal.colength_value()?;
    for q in [p, p * p] {
        let lhs = ideal.bracket_power(q)?.colength_value()?;
        let rhs = &c * BigUint::from(q).pow(ideal.dim() as u32);
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "ℓ(R/I^[{q}]) = {lhs} but q^d ℓ(R/I) = {rhs} for I = {}",
                ideal.to_literal()
            )));
        }
    }
    Ok(from_biguint_ratio(&c, &BigUint::from(1u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::integral_closure;
    use crate::rational::from_u64;

    fn ideal(d: usize, rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(d, rows).unwrap()
    }

    #[test]
    fn samuel_examples() {
        let m = MonomialIdeal::maximal(2);
        assert_eq!(hilbert_samuel(&m, 20).unwrap().multiplicity, 1);
        let i = ideal(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(hilbert_samuel(&i, 20).unwrap().multiplicity, 6);
        let m2 = m.power(2);
        assert_eq!(hilbert_samuel(&m2, 20).unwrap().multiplicity, 4);
        assert_eq!(newton_multiplicity(&m2).unwrap(), (from_u64(4), true));
        assert_eq!(
            hilbert_samuel(&MonomialIdeal::maximal(3), 20)
                .unwrap()
                .multiplicity,
            1
        );
        assert!(hilbert_samuel(&ideal(2, &[&[1, 0]]), 20).is_err());
        assert!(matches!(
            hilbert_samuel(&m, 2),
            Err(Error::NoStabilization { n_max: 2, .. })
        ));
    }

    #[test]
    fn samuel_matches_newton_and_closure() {
        for rows in [
            vec![vec![3u64, 0], vec![1, 1], vec![0, 2]],
            vec![vec![5, 0], vec![2, 1], vec![0, 4]],
            vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 2], vec![1, 1, 1]],
        ] {
            let refs: Vec<&[u64]> = rows.iter().map(|r| r.as_slice()).collect();
            let i = ideal(rows[0].len(), &refs);
            let e = hilbert_samuel(&i, 40).unwrap().multiplicity;
            let (nm, exact) = newton_multiplicity(&i).unwrap();
            assert!(exact);
            assert_eq!(nm, from_u64(e));
            let cl = integral_closure(&i).unwrap();
            assert_eq!(hilbert_samuel(&cl, 40).unwrap().multiplicity, e);
        }
    }

    #[test]
    fn kunz_examples() {
        let m = MonomialIdeal::maximal(2);
        assert_eq!(hilbert_kunz(&m, 2).unwrap(), from_u64(1));
        assert_eq!(
            hilbert_kunz(&ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]), 3).unwrap(),
            from_u64(3)
        );
        assert_eq!(
            hilbert_kunz(&ideal(2, &[&[3, 0], &[1, 1], &[0, 2]]), 5).unwrap(),
            from_u64(4)
        );
        assert!(matches!(hilbert_kunz(&m, 4), Err(Error::NotPrime(4))));
    }
}
