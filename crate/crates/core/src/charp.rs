//! OK bases and Frobenius containments for monomial ideals.
//!
//! In `k[x_1, ..., x_d]` with `char k = p`, `F_* R` is free on the monomials
//! `x^r` with `r ∈ {0, ..., p-1}^d`, so the scaling element is the unit.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{is_prime, ExponentVector, MonomialIdeal};

/// Box side used by [`verify_ok_basis`] for the decomposition scan.
pub const DECOMPOSITION_BOX: u64 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OkBasis {
    pub p: u64,
    pub d: usize,
    pub elements: Vec<ExponentVector>,
    pub c_witness: ExponentVector,
}

/// `{x^r : r ∈ {0..p-1}^d}` with `c = 1`.
pub fn ok_basis(d: usize, p: u64) -> Result<OkBasis> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(OkBasis {
        p,
        d,
        elements: grid(&vec![p; d])
            .into_iter()
            .map(ExponentVector::new)
            .collect(),
        c_witness: ExponentVector::zero(d),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OkBasisCheck {
    pub count_ok: bool,
    pub residues_distinct: bool,
    /// Every `u` in the scanned box is `p·a + r` for exactly one `r ∈ B`.
    pub unique_decomposition: bool,
    /// First `u` without exactly one decomposition.
    pub counterexample: Option<ExponentVector>,
    pub box_side: u64,
}

impl OkBasisCheck {
    pub fn holds(&self) -> bool {
        self.count_ok && self.residues_distinct && self.unique_decomposition
    }
}

pub fn verify_ok_basis(b: &OkBasis) -> bool {
    verify_ok_basis_in_box(b, DECOMPOSITION_BOX + 1).holds()
}

/// [`verify_ok_basis`] with the decomposition scanned over `{0..side-1}^d`.
pub fn verify_ok_basis_in_box(b: &OkBasis, side: u64) -> OkBasisCheck {
    let p = b.p;
    let dims_ok = b.elements.iter().all(|e| e.dim() == b.d);
    let count_ok = dims_ok
        && is_prime(p)
        && p.checked_pow(b.d as u32)
            .is_some_and(|n| n == b.elements.len() as u64);
    let mut residues: Vec<Vec<u64>> = b
        .elements
        .iter()
        .map(|e| e.coords().iter().map(|c| c % p).collect())
        .collect();
    residues.sort_unstable();
    let residues_distinct = dims_ok && residues.windows(2).all(|w| w[0] != w[1]);
    let counterexample = if dims_ok && p >= 2 {
        grid(&vec![side; b.d]).into_par_iter().find_first(|u| {
            let matches = b
                .elements
                .iter()
                .filter(|r| {
                    r.coords()
                        .iter()
                        .zip(u)
                        .all(|(&ri, &ui)| ri <= ui && (ui - ri) % p == 0)
                })
                .count();
            matches != 1
        })
    } else {
        Some(vec![0; b.d])
    };
    OkBasisCheck {
        count_ok,
        residues_distinct,
        unique_decomposition: counterexample.is_none(),
        counterexample: counterexample.map(ExponentVector::new),
        box_side: side,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCheck {
    pub holds: bool,
    pub checked: u64,
    pub counterexample: Option<ExponentVector>,
}

fn box_of(ideal: &MonomialIdeal) -> Result<Vec<u64>> {
    if ideal.is_unit() {
        return Ok(vec![0; ideal.dim()]);
    }
    ideal.pure_power_bounds().ok_or(Error::NotMPrimary)
}

/// Every `v ∈ ν(I^{[p]})` in the box `[0, p(a_i + 1))` has `⌊v/p⌋ ∈ ν(I)`,
/// so `v = p⌊v/p⌋ + r` with `r` in the OK basis.
pub fn frobenius_cover_check(ideal: &MonomialIdeal, p: u64) -> Result<CoverCheck> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let bounds = box_of(ideal)?;
    if ideal.is_unit() {
        return Ok(CoverCheck {
            holds: true,
            checked: 0,
            counterexample: None,
        });
    }
    let frob = ideal.bracket_power(p)?;
    let side: Vec<u64> = bounds.iter().map(|a| p * (a + 1)).collect();
    let points = grid(&side);
    let checked = points.len() as u64;
    let bad = points.into_par_iter().find_first(|v| {
        frob.contains_exponents(v) && {
            let floor: Vec<u64> = v.iter().map(|c| c / p).collect();
            !ideal.contains_exponents(&floor)
        }
    });
    Ok(CoverCheck {
        holds: bad.is_none(),
        checked,
        counterexample: bad.map(ExponentVector::new),
    })
}

/// `p·ν(I) + r ⊆ ν(I^{[p]})` for every `u ∈ ν(I)` in `[0, a_i]` and every
/// OK basis element `r`.
pub fn frobenius_converse_check(ideal: &MonomialIdeal, p: u64) -> Result<CoverCheck> {
    let basis = ok_basis(ideal.dim(), p)?;
    let bounds = box_of(ideal)?;
    let frob = ideal.bracket_power(p)?;
    let side: Vec<u64> = bounds.iter().map(|a| a + 1).collect();
    let members: Vec<Vec<u64>> = grid(&side)
        .into_iter()
        .filter(|u| ideal.contains_exponents(u))
        .collect();
    let checked = (members.len() * basis.elements.len()) as u64;
    let bad = members.into_par_iter().find_map_first(|u| {
        basis.elements.iter().find_map(|r| {
            let v: Vec<u64> = u.iter().zip(r.coords()).map(|(a, b)| p * a + b).collect();
            (!frob.contains_exponents(&v)).then_some(v)
        })
    });
    Ok(CoverCheck {
        holds: bad.is_none(),
        checked,
        counterexample: bad.map(ExponentVector::new),
    })
}

/// All points of `∏ [0, side_i)` in lex order, last coordinate fastest.
fn grid(side: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::with_capacity(side.len())];
    for &s in side {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..s).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(c: &[u64]) -> ExponentVector {
        ExponentVector::from_slice(c)
    }

    #[test]
    fn basis_examples() {
        let b = ok_basis(2, 2).unwrap();
        assert_eq!(
            b.elements,
            vec![ev(&[0, 0]), ev(&[0, 1]), ev(&[1, 0]), ev(&[1, 1])]
        );
        assert_eq!(b.c_witness, ev(&[0, 0]));
        assert!(verify_ok_basis(&b));
        assert_eq!(ok_basis(1, 3).unwrap().elements.len(), 3);
        assert_eq!(ok_basis(3, 2).unwrap().elements.len(), 8);
        assert!(matches!(ok_basis(2, 4), Err(Error::NotPrime(4))));
        let bad = OkBasis {
            p: 2,
            d: 2,
            elements: vec![ev(&[0, 0]), ev(&[2, 0]), ev(&[0, 1]), ev(&[1, 1])],
            c_witness: ev(&[0, 0]),
        };
        let check = verify_ok_basis_in_box(&bad, 21);
        assert!(!check.residues_distinct && !check.holds());
        assert!(!verify_ok_basis(&bad));
    }

    #[test]
    fn cover_examples() {
        let m = MonomialIdeal::maximal(2);
        assert!(m.bracket_power(2).unwrap().contains_exponents(&[3, 1]));
        assert!(m.contains_exponents(&[1, 0]));
        assert!(frobenius_cover_check(&m, 2).unwrap().holds);
        let i = MonomialIdeal::from_exponents(2, &[&[2, 0], &[1, 1], &[0, 2]]).unwrap();
        let c = frobenius_cover_check(&i, 3).unwrap();
        assert!(c.holds && c.checked == 81);
        assert!(
            frobenius_cover_check(&MonomialIdeal::unit(2), 2)
                .unwrap()
                .holds
        );
        assert!(frobenius_converse_check(&i, 3).unwrap().holds);
        assert!(
            frobenius_cover_check(&MonomialIdeal::from_exponents(2, &[&[1, 0]]).unwrap(), 2)
                .is_err()
        );
    }
}
