//! Volume of `R^d_+ \ NP(I)`.
//!
//! The complement is the union of the simplices `{x >= 0 : <w, x> < b}` over
//! the facet inequalities with `b > 0`, all of which have positive normals.
//! The volume is integrated slice by slice along the last coordinate. Between
//! consecutive vertices of the hyperplane arrangement the slice volume is a
//! polynomial of degree `d - 1`, so Simpson's rule is exact for `d <= 3`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::NewtonPolyhedron;
use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;
use crate::rational::from_biguint_ratio;

/// Lattice level used by the approximate path in dimension four and up.
pub const DEFAULT_APPROX_LEVEL: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementVolume {
    pub value: BigRational,
    pub exact: bool,
    /// Scaling level of the lattice count when `exact` is false.
    pub level: Option<u64>,
}

type Constraint = (Vec<BigRational>, BigRational);

/// `vol(R^d_+ \ NP(I))`; exact for `d <= 3`, otherwise
/// `ℓ(R / closure(I^n)) / n^d` at `n = approx_level`.
pub fn complement_volume(ideal: &MonomialIdeal, approx_level: u64) -> Result<ComplementVolume> {
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    let np = NewtonPolyhedron::new(ideal)?;
    let d = ideal.dim();
    if d <= 3 {
        let cons: Vec<Constraint> = np
            .halfspaces()
            .iter()
            .filter(|h| h.rhs > 0)
            .map(|h| {
                (
                    h.normal
                        .iter()
                        .map(|&w| BigRational::from_integer(BigInt::from(w)))
                        .collect(),
                    BigRational::from_integer(BigInt::from(h.rhs)),
                )
            })
            .collect();
        return Ok(ComplementVolume {
            value: union_volume(&cons, d),
            exact: true,
            level: None,
        });
    }
    if approx_level == 0 {
        return Err(Error::InvalidArgument(
            "approximation level must be >= 1".into(),
        ));
    }
    let closure = np.scaled_closure(approx_level)?;
    let count = closure.colength_value()?;
    let den = BigUint::from(approx_level).pow(d as u32);
    Ok(ComplementVolume {
        value: from_biguint_ratio(&count, &den),
        exact: false,
        level: Some(approx_level),
    })
}

fn union_volume(cons: &[Constraint], k: usize) -> BigRational {
    if cons.is_empty() {
        return BigRational::zero();
    }
    if k == 1 {
        return cons.iter().map(|(w, b)| b / &w[0]).max().expect("nonempty");
    }
    let last = k - 1;
    let top = cons
        .iter()
        .map(|(w, b)| b / &w[last])
        .max()
        .expect("nonempty");
    let mut breaks = vec![BigRational::zero(), top.clone()];
    breaks.extend(
        arrangement_heights(cons, k)
            .into_iter()
            .filter(|t| t.is_positive() && *t < top),
    );
    breaks.sort();
    breaks.dedup();
    let slice = |t: &BigRational| -> BigRational {
        let sub: Vec<Constraint> = cons
            .iter()
            .filter_map(|(w, b)| {
                let r = b - &w[last] * t;
                r.is_positive().then(|| (w[..last].to_vec(), r))
            })
            .collect();
        union_volume(&sub, last)
    };
    let six = BigRational::from_integer(6.into());
    let four = BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    let mut total = BigRational::zero();
    let mut f_prev = slice(&breaks[0]);
    for pair in breaks.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let mid = (a + b) / &two;
        let f_mid = slice(&mid);
        let f_b = slice(b);
        total += (b - a) * (&f_prev + &four * f_mid + &f_b) / &six;
        f_prev = f_b;
    }
    total
}

/// Last coordinates of all vertices of the arrangement formed by the
/// constraint hyperplanes and the coordinate hyperplanes.
fn arrangement_heights(cons: &[Constraint], k: usize) -> Vec<BigRational> {
    let mut planes: Vec<Constraint> = cons.to_vec();
    for i in 0..k {
        let mut w = vec![BigRational::zero(); k];
        w[i] = BigRational::from_integer(1.into());
        planes.push((w, BigRational::zero()));
    }
    let n = planes.len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if n < k {
        return out;
    }
    loop {
        let rows: Vec<&Constraint> = idx.iter().map(|&i| &planes[i]).collect();
        if let Some(x) = solve(&rows, k) {
            out.push(x[k - 1].clone());
        }
        // Next k-combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Unique solution of the square system, if any.
fn solve(rows: &[&Constraint], k: usize) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|(w, b)| {
            let mut r = w.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &p;
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ratio, from_u64};

    fn ideal(d: usize, rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(d, rows).unwrap()
    }

    fn vol(i: &MonomialIdeal) -> BigRational {
        let v = complement_volume(i, DEFAULT_APPROX_LEVEL).unwrap();
        assert!(v.exact);
        v.value
    }

    #[test]
    fn planar_volumes() {
        assert_eq!(vol(&MonomialIdeal::maximal(2)), from_ratio(1, 2));
        assert_eq!(vol(&ideal(2, &[&[2, 0], &[0, 2]])), from_u64(2));
        for a in 1..6u64 {
            for b in 1..6u64 {
                assert_eq!(
                    vol(&MonomialIdeal::pure_powers(&[a, b])),
                    from_ratio(a * b, 2)
                );
            }
        }
        // Area under the polyline (0,3), (1,1), (3,0).
        assert_eq!(vol(&ideal(2, &[&[3, 0], &[1, 1], &[0, 3]])), from_u64(3));
    }

    #[test]
    fn solid_volumes() {
        assert_eq!(vol(&MonomialIdeal::maximal(3)), from_ratio(1, 6));
        assert_eq!(vol(&MonomialIdeal::maximal(3).power(2)), from_ratio(8, 6));
        assert_eq!(
            vol(&MonomialIdeal::pure_powers(&[2, 3, 5])),
            from_ratio(30, 6)
        );
        // Simplex with intercepts 1, 1 and 4.
        let i = ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 4]]);
        assert_eq!(vol(&i), from_ratio(4, 6));
    }

    #[test]
    fn four_dimensional_is_flagged() {
        let v = complement_volume(&MonomialIdeal::maximal(4), 8).unwrap();
        assert!(!v.exact);
        assert_eq!(v.level, Some(8));
        // ℓ(R/𝔪^8) = binom(11,4) = 330 in four variables.
        assert_eq!(v.value, from_ratio(330, 4096));
    }

    #[test]
    fn not_m_primary() {
        assert_eq!(
            complement_volume(&ideal(2, &[&[1, 1]]), 8),
            Err(Error::NotMPrimary)
        );
    }
}
