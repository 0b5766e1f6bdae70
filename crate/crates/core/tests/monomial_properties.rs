mod common;

use acolen::monomial::ColengthMethod;
use acolen::parse::parse_ideal;
use acolen::{ExponentVector, MonomialIdeal};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{random_any_ideal, random_ideal, rng};

fn exps(d: usize, max: u64, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0..=max, d), len)
}

fn ideal_of(d: usize, rows: &[Vec<u64>]) -> MonomialIdeal {
    MonomialIdeal::new(
        d,
        rows.iter()
            .map(|r| ExponentVector::new(r.clone()))
            .collect(),
    )
    .unwrap()
}

fn primary(d: usize, pure: &[u64], rows: &[Vec<u64>]) -> MonomialIdeal {
    let mut all: Vec<Vec<u64>> = rows.to_vec();
    for (i, &a) in pure.iter().enumerate() {
        let mut v = vec![0; d];
        v[i] = a;
        all.push(v);
    }
    ideal_of(d, &all)
}

proptest! {
    #[test]
    fn normalize_idempotent_and_order_independent(rows in exps(3, 5, 1..10), seed in any::<u64>()) {
        let i = ideal_of(3, &rows);
        prop_assert_eq!(&MonomialIdeal::new(3, i.gens().to_vec()).unwrap(), &i);
        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut rng(seed));
        shuffled.extend(rows.iter().cloned());
        prop_assert_eq!(&ideal_of(3, &shuffled), &i);
        prop_assert!(i.gens().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn colon_adjunction(a in exps(2, 4, 1..5), b in exps(2, 3, 1..4), c in exps(2, 3, 1..4)) {
        let (i, j, k) = (ideal_of(2, &a), ideal_of(2, &b), ideal_of(2, &c));
        let lhs = k.product(&j).unwrap().is_subset_of(&i).unwrap();
        let rhs = k.is_subset_of(&i.colon(&j).unwrap().ideal).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn colength_methods_agree(pure in prop::collection::vec(1u64..7, 3), rows in exps(3, 6, 0..6)) {
        let i = primary(3, &pure, &rows);
        let s = i.colength_with(ColengthMethod::Slicing).unwrap().value;
        let b = i.colength_with(ColengthMethod::BoxEnumeration).unwrap().value;
        let e = i.colength_with(ColengthMethod::InclusionExclusion).unwrap().value;
        prop_assert_eq!(&s, &b);
        prop_assert_eq!(&b, &e);
    }

    #[test]
    fn frobenius_scaling(pure in prop::collection::vec(1u64..6, 2), rows in exps(2, 5, 0..5), q in prop::sample::select(vec![2u64, 3, 4, 5])) {
        let i = primary(2, &pure, &rows);
        let base = i.colength_value().unwrap();
        let scaled = i.bracket_power(q).unwrap().colength_value().unwrap();
        prop_assert_eq!(scaled, base * BigUint::from(q * q));
    }

    #[test]
    fn literal_round_trip(rows in exps(3, 4, 1..6)) {
        let i = ideal_of(3, &rows);
        prop_assert_eq!(parse_ideal(&i.to_literal(), Some(3)).unwrap(), i);
    }

    #[test]
    fn lattice_operations(a in exps(2, 4, 1..5), b in exps(2, 4, 1..5)) {
        let (i, j) = (ideal_of(2, &a), ideal_of(2, &b));
        prop_assert_eq!(i.sum(&j).unwrap(), j.sum(&i).unwrap());
        prop_assert_eq!(i.product(&j).unwrap(), j.product(&i).unwrap());
        prop_assert_eq!(i.intersect(&j).unwrap(), j.intersect(&i).unwrap());
        prop_assert_eq!(&i.sum(&i).unwrap(), &i);
        prop_assert_eq!(&i.intersect(&i).unwrap(), &i);
        prop_assert!(i.product(&j).unwrap().is_subset_of(&i.intersect(&j).unwrap()).unwrap());
    }
}

#[test]
fn membership_fuzz() {
    let mut r = rng(17);
    for _ in 0..10_000 {
        let d = r.gen_range(1..=4);
        let i = random_any_ideal(&mut r, d, 6, 5);
        let u: Vec<u64> = (0..d).map(|_| r.gen_range(0..=8)).collect();
        let naive = i
            .gens()
            .iter()
            .any(|g| g.coords().iter().zip(&u).all(|(a, b)| a <= b));
        assert_eq!(
            i.contains_exponents(&u),
            naive,
            "{} at {u:?}",
            i.to_literal()
        );
        assert_eq!(
            i.contains_monomial(&ExponentVector::new(u.clone()))
                .unwrap(),
            naive
        );
    }
}

#[test]
fn powers_of_maximal_ideal() {
    for d in 1..=4usize {
        let m = MonomialIdeal::maximal(d);
        let top = if d >= 4 { 30 } else { 50 };
        for n in (1..=top).step_by(7) {
            let mut want = BigUint::from(1u32);
            for k in 0..d as u64 {
                want = want * BigUint::from(n + d as u64 - 1 - k) / BigUint::from(k + 1);
            }
            assert_eq!(m.power(n).colength_value().unwrap(), want, "d={d} n={n}");
        }
    }
}

#[test]
fn carrying_law() {
    for p in [2u64, 3] {
        for d in [2usize, 3] {
            let m = MonomialIdeal::maximal(d);
            let gb: Vec<MonomialIdeal> = (0..=128)
                .map(|n| m.generalized_bracket_power(n, p).unwrap())
                .collect();
            for n in 1..=64usize {
                for k in 1..=64usize {
                    let prod = gb[n].product(&gb[k]).unwrap();
                    assert!(
                        gb[n + k].is_subset_of(&prod).unwrap(),
                        "p={p} d={d} n={n} m={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn random_ideals_are_m_primary() {
    let mut r = rng(5);
    for _ in 0..100 {
        assert!(random_ideal(&mut r, 3, 5, 4).is_m_primary());
    }
}
