//! Bounded verification of family properties.
//!
//! Every check covers indices up to a stated bound only. A negative answer
//! comes with a counterexample; a failed witness search is inconclusive.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{FamilyEvaluator, IndexKind};
use crate::error::{Error, Result};
use crate::monomial::{monomials_of_degree, ExponentVector, MonomialIdeal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentCheck {
    pub holds: bool,
    /// Natural index: `(m, n)`. p-power index: exponents `(e1, e2)`.
    pub counterexample: Option<(u64, u64)>,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSearch {
    /// First monomial that works, in degree-then-lex order.
    pub witness: Option<ExponentVector>,
    pub bound: u64,
    pub max_degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BblResult {
    /// Smallest `c` with `𝔪^{cn} ⊆ I_n` for every tested `n`.
    pub constant: Option<u64>,
    /// `⌈t_n / n⌉` over the tested indices, before trend rejection.
    pub candidate: u64,
    /// The per-index requirement keeps growing; no linear bound is claimed.
    pub unbounded_trend: bool,
    pub indices: Vec<u64>,
    pub thresholds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalResult {
    /// Natural index: smallest `c` with `I_n ⊆ 𝔪^{⌊n/c⌋}`.
    /// p-power index: smallest `q0` with `I_{q q0} ⊆ 𝔪^{[q]}`.
    pub constant: Option<u64>,
    pub unbounded_trend: bool,
    pub bound: u64,
}

fn require(f: &FamilyEvaluator, natural: bool) -> Result<u64> {
    match (f.index_kind(), natural) {
        (IndexKind::Natural, true) => Ok(0),
        (IndexKind::PPower(p), false) => Ok(p),
        (IndexKind::Natural, false) => Err(Error::Precondition(
            "check needs a p-power indexed family".into(),
        )),
        (IndexKind::PPower(_), true) => Err(Error::Precondition(
            "check needs a naturally indexed family".into(),
        )),
    }
}

fn shifted_subset(g: &MonomialIdeal, c: &ExponentVector, target: &MonomialIdeal) -> bool {
    g.gens()
        .iter()
        .all(|h| target.contains_exponents(h.add(c).coords()))
}

/// Products `I_m I_n` with `m, n >= 1`, `m + n <= N`, paired with `I_{m+n}`.
type Pair = ((u64, u64), MonomialIdeal, Arc<MonomialIdeal>);

fn graded_pairs(f: &FamilyEvaluator, bound: u64) -> Result<Vec<Pair>> {
    let indices: Vec<u64> = (1..=bound).collect();
    f.warm_up(&indices)?;
    let mut pairs = Vec::new();
    for s in 2..=bound {
        for m in 1..=s / 2 {
            pairs.push((m, s - m));
        }
    }
    pairs
        .into_par_iter()
        .map(|(m, n)| -> Result<Pair> {
            let prod = f.evaluate(m)?.product(&*f.evaluate(n)?)?;
            Ok(((m, n), prod, f.evaluate(m + n)?))
        })
        .collect()
}

/// `I_m I_n ⊆ I_{m+n}` for all `m + n <= bound`.
pub fn verify_graded_up_to(f: &FamilyEvaluator, bound: u64) -> Result<ContainmentCheck> {
    require(f, true)?;
    let pairs = graded_pairs(f, bound)?;
    let counterexample = pairs
        .iter()
        .find(|(_, prod, target)| !prod.is_subset_of(target).unwrap_or(false))
        .map(|(mn, _, _)| *mn);
    Ok(ContainmentCheck {
        holds: counterexample.is_none(),
        counterexample,
        bound,
    })
}

/// `I_{m+n} ⊆ I_m I_n` for all `m + n <= bound`.
pub fn verify_inverse_graded_up_to(f: &FamilyEvaluator, bound: u64) -> Result<ContainmentCheck> {
    require(f, true)?;
    let pairs = graded_pairs(f, bound)?;
    let counterexample = pairs
        .iter()
        .find(|(_, prod, target)| !target.is_subset_of(prod).unwrap_or(false))
        .map(|(mn, _, _)| *mn);
    Ok(ContainmentCheck {
        holds: counterexample.is_none(),
        counterexample,
        bound,
    })
}

fn search_witness(
    d: usize,
    max_degree: u64,
    pairs: &[(MonomialIdeal, Arc<MonomialIdeal>)],
) -> Option<ExponentVector> {
    for k in 0..=max_degree {
        for c in monomials_of_degree(d, k) {
            if pairs
                .par_iter()
                .all(|(g, target)| shifted_subset(g, &c, target))
            {
                return Some(c);
            }
        }
    }
    None
}

/// First monomial `c` of degree `<= max_degree` with `c I_m I_n ⊆ I_{m+n}`
/// for all `m + n <= bound`.
pub fn find_weakly_graded_witness(
    f: &FamilyEvaluator,
    bound: u64,
    max_degree: u64,
) -> Result<WitnessSearch> {
    require(f, true)?;
    let pairs: Vec<(MonomialIdeal, Arc<MonomialIdeal>)> = graded_pairs(f, bound)?
        .into_iter()
        .map(|(_, a, b)| (a, b))
        .collect();
    Ok(WitnessSearch {
        witness: search_witness(f.dim(), max_degree, &pairs),
        bound,
        max_degree,
    })
}

fn pow(p: u64, e: u64) -> Result<u64> {
    p.checked_pow(e as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} overflows")))
}

/// `(I_q^{[p]}, I_{pq})` for `q = p^e`, `e + 1 <= bound`.
fn p_pairs(
    f: &FamilyEvaluator,
    p: u64,
    bound: u64,
) -> Result<Vec<(u64, MonomialIdeal, Arc<MonomialIdeal>)>> {
    (0..bound)
        .into_par_iter()
        .map(|e| -> Result<(u64, MonomialIdeal, Arc<MonomialIdeal>)> {
            let q = pow(p, e)?;
            let lhs = f.evaluate(q)?.bracket_power(p)?;
            Ok((e, lhs, f.evaluate(q * p)?))
        })
        .collect()
}

/// `I_q^{[p]} ⊆ I_{pq}` for all `q = p^e` with `e + 1 <= bound`.
pub fn verify_p_family_up_to(f: &FamilyEvaluator, bound: u64) -> Result<ContainmentCheck> {
    let p = require(f, false)?;
    let pairs = p_pairs(f, p, bound)?;
    let counterexample = pairs
        .iter()
        .find(|(_, a, b)| !a.is_subset_of(b).unwrap_or(false))
        .map(|(e, _, _)| (*e, e + 1));
    Ok(ContainmentCheck {
        holds: counterexample.is_none(),
        counterexample,
        bound,
    })
}

/// `I_{pq} ⊆ I_q^{[p]}` for all `q = p^e` with `e + 1 <= bound`.
pub fn verify_inverse_p_family_up_to(f: &FamilyEvaluator, bound: u64) -> Result<ContainmentCheck> {
    let p = require(f, false)?;
    let pairs = p_pairs(f, p, bound)?;
    let counterexample = pairs
        .iter()
        .find(|(_, a, b)| !b.is_subset_of(a).unwrap_or(false))
        .map(|(e, _, _)| (*e, e + 1));
    Ok(ContainmentCheck {
        holds: counterexample.is_none(),
        counterexample,
        bound,
    })
}

/// Witness `c` with `c I_q^{[p]} ⊆ I_{pq}`.
pub fn find_weakly_p_witness(
    f: &FamilyEvaluator,
    bound: u64,
    max_degree: u64,
) -> Result<WitnessSearch> {
    let p = require(f, false)?;
    let pairs: Vec<(MonomialIdeal, Arc<MonomialIdeal>)> = p_pairs(f, p, bound)?
        .into_iter()
        .map(|(_, a, b)| (a, b))
        .collect();
    Ok(WitnessSearch {
        witness: search_witness(f.dim(), max_degree, &pairs),
        bound,
        max_degree,
    })
}

/// Witness `c` with `c I_{pq} ⊆ I_q^{[p]}`.
pub fn find_weakly_inverse_p_witness(
    f: &FamilyEvaluator,
    bound: u64,
    max_degree: u64,
) -> Result<WitnessSearch> {
    let p = require(f, false)?;
    let pairs: Vec<(MonomialIdeal, Arc<MonomialIdeal>)> = p_pairs(f, p, bound)?
        .into_iter()
        .map(|(_, a, b)| ((*b).clone(), Arc::new(a)))
        .collect();
    Ok(WitnessSearch {
        witness: search_witness(f.dim(), max_degree, &pairs),
        bound,
        max_degree,
    })
}

/// `I_{q1}^{[q2]} I_{q2} ⊆ I_{q1 q2}` for `q_i = p^{e_i}`, `e1 + e2 <= bound`.
pub fn verify_f_graded_up_to(f: &FamilyEvaluator, bound: u64) -> Result<ContainmentCheck> {
    let p = require(f, false)?;
    let mut pairs = Vec::new();
    for e1 in 0..=bound {
        for e2 in 0..=bound - e1 {
            pairs.push((e1, e2));
        }
    }
    let results: Vec<((u64, u64), bool)> = pairs
        .into_par_iter()
        .map(|(e1, e2)| -> Result<((u64, u64), bool)> {
            let (q1, q2) = (pow(p, e1)?, pow(p, e2)?);
            let lhs = f
                .evaluate(q1)?
                .bracket_power(q2)?
                .product(&*f.evaluate(q2)?)?;
            Ok(((e1, e2), lhs.is_subset_of(&*f.evaluate(q1 * q2)?)?))
        })
        .collect::<Result<_>>()?;
    let counterexample = results.iter().find(|(_, ok)| !ok).map(|(e, _)| *e);
    Ok(ContainmentCheck {
        holds: counterexample.is_none(),
        counterexample,
        bound,
    })
}

/// Growth of a per-index requirement: the later half needs more than 1.5
/// times the earlier half.
fn growing(values: &[u64]) -> bool {
    if values.len() < 4 {
        return false;
    }
    let mid = values.len() / 2;
    let first = values[..mid].iter().copied().max().unwrap_or(0);
    let second = values[mid..].iter().copied().max().unwrap_or(0);
    2 * second > 3 * first
}

/// Smallest `c` with `c n >= t_n` for every tested index, where `t_n` is the
/// power containment threshold of `I_n`. Natural index tests `n = 1..=bound`,
/// p-power index tests `q = p^0..p^bound`.
pub fn find_bbl_constant(f: &FamilyEvaluator, bound: u64) -> Result<BblResult> {
    bbl_on_indices(f, &super::index_range(f.index_kind(), bound)?)
}

/// [`find_bbl_constant`] over an explicit sorted index list.
pub fn bbl_on_indices(f: &FamilyEvaluator, indices: &[u64]) -> Result<BblResult> {
    let indices = indices.to_vec();
    f.warm_up(&indices)?;
    let thresholds: Vec<u64> = indices
        .par_iter()
        .map(|&n| {
            f.evaluate(n)?
                .power_containment_threshold()
                .map_err(|e| match e {
                    Error::NotMPrimary => Error::NotMPrimaryMember { index: n },
                    other => other,
                })
        })
        .collect::<Result<_>>()?;
    let needs: Vec<u64> = indices
        .iter()
        .zip(&thresholds)
        .map(|(&n, &t)| t.div_ceil(n))
        .collect();
    let candidate = needs.iter().copied().max().unwrap_or(0).max(1);
    let unbounded_trend = growing(&needs);
    Ok(BblResult {
        constant: (!unbounded_trend).then_some(candidate),
        candidate,
        unbounded_trend,
        indices,
        thresholds,
    })
}

/// Natural index: smallest `c` with `min deg I_n >= ⌊n/c⌋` for all `n <= bound`.
/// p-power index: smallest `q0 = p^{e0}`, `e0 <= bound/2`, with
/// `I_{q q0} ⊆ 𝔪^{[q]}` for all `q = p^e`, `e + e0 <= bound`.
pub fn check_bal(f: &FamilyEvaluator, bound: u64) -> Result<BalResult> {
    let d = f.dim();
    match f.index_kind() {
        IndexKind::Natural => {
            let indices: Vec<u64> = (1..=bound).collect();
            f.warm_up(&indices)?;
            let needs: Vec<u64> = indices
                .iter()
                .map(|&n| {
                    let i = f.evaluate(n)?;
                    Ok(match i.min_degree() {
                        None => 1,
                        Some(delta) => n / (delta + 1) + 1,
                    })
                })
                .collect::<Result<_>>()?;
            let unbounded_trend = growing(&needs);
            let c = needs.iter().copied().max().unwrap_or(1);
            Ok(BalResult {
                constant: (!unbounded_trend).then_some(c),
                unbounded_trend,
                bound,
            })
        }
        IndexKind::PPower(p) => {
            let m = MonomialIdeal::maximal(d);
            for e0 in 0..=bound / 2 {
                let q0 = pow(p, e0)?;
                let mut ok = true;
                for e in 0..=bound - e0 {
                    let q = pow(p, e)?;
                    if !f.evaluate(q * q0)?.is_subset_of(&m.bracket_power(q)?)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(BalResult {
                        constant: Some(q0),
                        unbounded_trend: false,
                        bound,
                    });
                }
            }
            Ok(BalResult {
                constant: None,
                unbounded_trend: false,
                bound,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub index: String,
    pub bound: u64,
    pub witness_degree: u64,
    pub graded: Option<ContainmentCheck>,
    pub inverse_graded: Option<ContainmentCheck>,
    pub weakly_graded: Option<WitnessSearch>,
    pub p_family: Option<ContainmentCheck>,
    pub weakly_p: Option<WitnessSearch>,
    pub inverse_p: Option<ContainmentCheck>,
    pub weakly_inverse_p: Option<WitnessSearch>,
    pub f_graded: Option<ContainmentCheck>,
    pub bbl: Option<BblResult>,
    pub bbl_error: Option<String>,
    pub bal: BalResult,
}

/// Runs every applicable check up to `bound` (an index bound `N` or an
/// exponent bound `E`).
pub fn classify(
    f: &FamilyEvaluator,
    bound: u64,
    witness_degree: u64,
) -> Result<ClassificationReport> {
    let (bbl, bbl_error) = match find_bbl_constant(f, bound) {
        Ok(b) => (Some(b), None),
        Err(e @ Error::NotMPrimaryMember { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let bal = check_bal(f, bound)?;
    match f.index_kind() {
        IndexKind::Natural => {
            let graded = verify_graded_up_to(f, bound)?;
            let weakly_graded = if graded.holds {
                WitnessSearch {
                    witness: Some(ExponentVector::zero(f.dim())),
                    bound,
                    max_degree: witness_degree,
                }
            } else {
                find_weakly_graded_witness(f, bound, witness_degree)?
            };
            Ok(ClassificationReport {
                index: "natural".into(),
                bound,
                witness_degree,
                graded: Some(graded),
                inverse_graded: Some(verify_inverse_graded_up_to(f, bound)?),
                weakly_graded: Some(weakly_graded),
                p_family: None,
                weakly_p: None,
                inverse_p: None,
                weakly_inverse_p: None,
                f_graded: None,
                bbl,
                bbl_error,
                bal,
            })
        }
        IndexKind::PPower(p) => {
            let p_family = verify_p_family_up_to(f, bound)?;
            let inverse_p = verify_inverse_p_family_up_to(f, bound)?;
            let unit_witness = || WitnessSearch {
                witness: Some(ExponentVector::zero(f.dim())),
                bound,
                max_degree: witness_degree,
            };
            let weakly_p = if p_family.holds {
                unit_witness()
            } else {
                find_weakly_p_witness(f, bound, witness_degree)?
            };
            let weakly_inverse_p = if inverse_p.holds {
                unit_witness()
            } else {
                find_weakly_inverse_p_witness(f, bound, witness_degree)?
            };
            Ok(ClassificationReport {
                index: format!("p-power({p})"),
                bound,
                witness_degree,
                graded: None,
                inverse_graded: None,
                weakly_graded: None,
                p_family: Some(p_family),
                weakly_p: Some(weakly_p),
                inverse_p: Some(inverse_p),
                weakly_inverse_p: Some(weakly_inverse_p),
                f_graded: Some(verify_f_graded_up_to(f, bound)?),
                bbl,
                bbl_error,
                bal,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{ExponentPolynomial, FamilyKind, FamilySpec};
    use crate::rational::parse_rational;

    fn ideal(d: usize, rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(d, rows).unwrap()
    }

    fn eval(spec: FamilySpec) -> FamilyEvaluator {
        FamilyEvaluator::new(spec).unwrap()
    }

    fn x_pow_n_y(square: bool) -> FamilySpec {
        let x_exp = if square { vec![0, 0, 1] } else { vec![0, 1] };
        FamilySpec::natural(FamilyKind::Parametric {
            dim: 2,
            gens: vec![
                vec![ExponentPolynomial(x_exp), ExponentPolynomial(vec![0])],
                vec![ExponentPolynomial(vec![0]), ExponentPolynomial(vec![1])],
            ],
        })
        .unwrap()
    }

    #[test]
    fn graded_checks() {
        let m = MonomialIdeal::maximal(2);
        let f = eval(FamilySpec::powers(ideal(2, &[&[3, 0], &[1, 1], &[0, 2]])));
        assert!(verify_graded_up_to(&f, 20).unwrap().holds);
        let bad = eval(
            FamilySpec::natural(FamilyKind::Explicit {
                start: 1,
                ideals: vec![m.clone(), m.power(3), m.power(3), m.power(4)],
            })
            .unwrap(),
        );
        let r = verify_graded_up_to(&bad, 4).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample, Some((1, 1)));
        // 𝔪^{[n]} is inverse graded: 𝔪^{[2]} = (x^2, y^2) misses xy ∈ 𝔪 𝔪.
        let gb = eval(FamilySpec::generalized_bracket(m, 2).unwrap());
        let r = verify_graded_up_to(&gb, 16).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample, Some((1, 1)));
        assert!(verify_inverse_graded_up_to(&gb, 16).unwrap().holds);
        assert!(verify_inverse_graded_up_to(&f, 6).unwrap().holds);
        assert!(!verify_inverse_graded_up_to(&bad, 4).unwrap().holds);
    }

    #[test]
    fn weak_witnesses() {
        let m = MonomialIdeal::maximal(2);
        let alpha = parse_rational("1.41421356").unwrap();
        let f = eval(FamilySpec::floor_power(m.clone(), alpha).unwrap());
        let w = find_weakly_graded_witness(&f, 20, 2).unwrap();
        assert_eq!(w.witness, Some(ExponentVector::new(vec![1, 0])));

        let p = eval(FamilySpec::powers(m.clone()));
        assert_eq!(
            find_weakly_graded_witness(&p, 10, 2).unwrap().witness,
            Some(ExponentVector::zero(2))
        );

        let c = eval(
            FamilySpec::colon_of(FamilySpec::powers(m.power(2)), ideal(2, &[&[1, 0]])).unwrap(),
        );
        let w = find_weakly_graded_witness(&c, 12, 2).unwrap();
        assert!(w.witness.unwrap().degree() <= 2);
    }

    #[test]
    fn p_family_checks() {
        let m = MonomialIdeal::maximal(2);
        let f = eval(FamilySpec::bracket(2, m.clone()).unwrap());
        assert!(verify_p_family_up_to(&f, 5).unwrap().holds);
        assert!(verify_inverse_p_family_up_to(&f, 5).unwrap().holds);
        assert!(verify_f_graded_up_to(&f, 4).unwrap().holds);

        // 𝔪^{2q} ⊄ (𝔪^q)^{[2]} because of x^{2q-1}y, but x 𝔪^{2q} ⊆ (𝔪^q)^{[2]}.
        let g = eval(FamilySpec::p_power(2, FamilyKind::Powers(m.clone())).unwrap());
        let inv = verify_inverse_p_family_up_to(&g, 4).unwrap();
        assert!(!inv.holds);
        assert_eq!(inv.counterexample, Some((0, 1)));
        assert_eq!(
            find_weakly_inverse_p_witness(&g, 4, 3).unwrap().witness,
            Some(ExponentVector::new(vec![1, 0]))
        );
        assert!(verify_p_family_up_to(&g, 4).unwrap().holds);
    }

    #[test]
    fn bbl_examples() {
        let m = MonomialIdeal::maximal(2);
        let f = eval(FamilySpec::powers(m.clone()));
        assert_eq!(find_bbl_constant(&f, 20).unwrap().constant, Some(1));
        let gb = eval(FamilySpec::generalized_bracket(m.clone(), 2).unwrap());
        assert_eq!(find_bbl_constant(&gb, 40).unwrap().constant, Some(2));
        let quad = eval(x_pow_n_y(true));
        let r = find_bbl_constant(&quad, 20).unwrap();
        assert_eq!(r.constant, None);
        assert!(r.unbounded_trend);
        let not_primary = eval(FamilySpec::powers(ideal(2, &[&[1, 1]])));
        assert_eq!(
            find_bbl_constant(&not_primary, 5),
            Err(Error::NotMPrimaryMember { index: 1 })
        );
    }

    #[test]
    fn bal_examples() {
        let m = MonomialIdeal::maximal(2);
        let f = eval(FamilySpec::powers(m.clone()));
        assert_eq!(check_bal(&f, 20).unwrap().constant, Some(1));
        let lin = eval(x_pow_n_y(false));
        let r = check_bal(&lin, 20).unwrap();
        assert_eq!(r.constant, None);
        assert!(r.unbounded_trend);
        let br = eval(FamilySpec::bracket(2, m).unwrap());
        assert_eq!(check_bal(&br, 6).unwrap().constant, Some(1));
    }

    #[test]
    fn full_report() {
        let m = MonomialIdeal::maximal(2);
        let r = classify(&eval(FamilySpec::bracket(3, m.clone()).unwrap()), 3, 1).unwrap();
        assert!(r.p_family.unwrap().holds);
        assert!(r.inverse_p.unwrap().holds);
        assert!(r.f_graded.unwrap().holds);
        // t(𝔪^{[q]}) = 2q - 1 in two variables.
        assert_eq!(r.bbl.unwrap().constant, Some(2));
        let r = classify(&eval(FamilySpec::powers(m)), 10, 1).unwrap();
        assert!(r.graded.unwrap().holds);
        assert_eq!(r.bal.constant, Some(1));
    }
}
