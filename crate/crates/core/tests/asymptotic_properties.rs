mod common;

use acolen::asymptotics::{
    colength_sequence, hilbert_kunz, hilbert_samuel, newton_multiplicity, region_volume,
    trajectory_classify, Trajectory,
};
use acolen::family::{find_bbl_constant, find_weakly_graded_witness, FamilyEvaluator, FamilySpec};
use acolen::newton::{complement_volume, integral_closure, NewtonPolyhedron, DEFAULT_APPROX_LEVEL};
use acolen::rational::{from_ratio, from_u64};
use acolen::{ExponentVector, MonomialIdeal};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

use common::{random_ideal, rng, xn_y};

fn primary_2d() -> impl Strategy<Value = MonomialIdeal> {
    (
        1u64..5,
        1u64..5,
        prop::collection::vec((0u64..5, 0u64..5), 0..4),
    )
        .prop_map(|(a, b, rows)| {
            let mut gens = vec![
                ExponentVector::new(vec![a, 0]),
                ExponentVector::new(vec![0, b]),
            ];
            gens.extend(
                rows.into_iter()
                    .map(|(x, y)| ExponentVector::new(vec![x, y])),
            );
            MonomialIdeal::new(2, gens).unwrap()
        })
}

fn ev(spec: FamilySpec) -> FamilyEvaluator {
    FamilyEvaluator::new(spec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_idempotent_and_extensive(i in primary_2d()) {
        let c = integral_closure(&i).unwrap();
        prop_assert!(i.is_subset_of(&c).unwrap());
        prop_assert_eq!(integral_closure(&c).unwrap(), c);
    }

    #[test]
    fn closure_is_multiplicative_up_to_containment(i in primary_2d(), j in primary_2d()) {
        let lhs = integral_closure(&i).unwrap().product(&integral_closure(&j).unwrap()).unwrap();
        let rhs = integral_closure(&i.product(&j).unwrap()).unwrap();
        prop_assert!(lhs.is_subset_of(&rhs).unwrap());
    }

    #[test]
    fn samuel_multiplicity_ignores_closure(i in primary_2d()) {
        let a = hilbert_samuel(&i, 64).unwrap().multiplicity;
        let b = hilbert_samuel(&integral_closure(&i).unwrap(), 64).unwrap().multiplicity;
        prop_assert_eq!(a, b);
        let (vol, exact) = newton_multiplicity(&i).unwrap();
        prop_assert!(exact);
        prop_assert_eq!(vol, from_u64(a));
    }

    #[test]
    fn kunz_multiplicity_is_colength(i in primary_2d(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let l = i.colength_value().unwrap();
        prop_assert_eq!(hilbert_kunz(&i, p).unwrap(), BigRational::from_integer(l.into()));
    }

    #[test]
    fn region_volume_is_a_n(i in primary_2d(), n in 1u64..9, kind in 0usize..4) {
        let spec = match kind {
            0 => FamilySpec::powers(i),
            1 => FamilySpec::closure_of(FamilySpec::powers(i)).unwrap(),
            2 => FamilySpec::generalized_bracket(i, 2).unwrap(),
            _ => FamilySpec::product_of(FamilySpec::powers(i), xn_y()).unwrap(),
        };
        let f = ev(spec);
        let a = colength_sequence(&f, &[n]).unwrap()[0].a_n.clone();
        prop_assert_eq!(region_volume(&f, n).unwrap(), a);
    }
}

#[test]
fn pure_power_multiplicities() {
    for a in 1..=6u64 {
        for b in 1..=6u64 {
            let i = MonomialIdeal::pure_powers(&[a, b]);
            let v = complement_volume(&i, DEFAULT_APPROX_LEVEL).unwrap();
            assert!(v.exact);
            assert_eq!(v.value * from_u64(2), from_u64(a * b));
            assert_eq!(hilbert_samuel(&i, 64).unwrap().multiplicity, a * b);
        }
    }
}

#[test]
fn cache_is_transparent() {
    let mut r = rng(21);
    for _ in 0..10 {
        let i = random_ideal(&mut r, 2, 3, 2);
        let f = ev(FamilySpec::closure_of(FamilySpec::generalized_bracket(i, 3).unwrap()).unwrap());
        for n in [1u64, 5, 9, 2, 5, 26, 9] {
            assert_eq!(*f.evaluate(n).unwrap(), f.evaluate_uncached(n).unwrap());
        }
    }
}

#[test]
fn graded_families_are_bbl_and_weakly_graded() {
    let mut r = rng(22);
    for k in 0..8 {
        let d = 2 + k % 2;
        let i = random_ideal(&mut r, d, 3, 2);
        let j = random_ideal(&mut r, d, 2, 1);
        let bound = if d == 2 { 30 } else { 12 };
        let f = ev(FamilySpec::powers(i.clone()));
        assert!(
            find_bbl_constant(&f, bound).unwrap().constant.is_some(),
            "{}",
            i.to_literal()
        );
        let prod = ev(FamilySpec::product_of(
            FamilySpec::powers(i.clone()),
            FamilySpec::powers(j.clone()),
        )
        .unwrap());
        assert!(find_weakly_graded_witness(&prod, 8, 2)
            .unwrap()
            .witness
            .is_some());
        let colon = ev(FamilySpec::colon_of(FamilySpec::powers(i), j.clone()).unwrap());
        assert!(find_weakly_graded_witness(&colon, 8, 4)
            .unwrap()
            .witness
            .is_some());
        // Every generator c of J satisfies c·I_m·I_n ⊆ I_{m+n}.
        for c in j.gens() {
            for m in 1..=4u64 {
                for n in 1..=4u64 {
                    let lhs = colon
                        .evaluate(m)
                        .unwrap()
                        .product(&colon.evaluate(n).unwrap())
                        .unwrap();
                    let lhs = lhs.shift(c).unwrap();
                    assert!(lhs.is_subset_of(&colon.evaluate(m + n).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn generalized_bracket_bounds() {
    for (p, d) in [(2u64, 2usize), (3, 2), (2, 3)] {
        let f = ev(FamilySpec::generalized_bracket(MonomialIdeal::maximal(d), p).unwrap());
        let top = if d == 2 { 120 } else { 40 };
        let lower = from_ratio(1, if d == 2 { 2 } else { 6 });
        for pt in colength_sequence(&f, &(1..=top).collect::<Vec<_>>()).unwrap() {
            assert!(
                pt.a_n >= lower && pt.a_n <= from_u64(1),
                "p={p} n={}: {}",
                pt.index,
                pt.a_n
            );
        }
    }
}

#[test]
fn trajectory_is_scale_consistent() {
    let mut r = rng(23);
    let window: Vec<u64> = (40..=80).collect();
    let mut seen = (0, 0);
    for _ in 0..6 {
        let i = random_ideal(&mut r, 2, 3, 2);
        let np = NewtonPolyhedron::new(&i).unwrap();
        let f = ev(FamilySpec::powers(i.clone()));
        for _ in 0..20 {
            let x = [r.gen_range(1..40u64), r.gen_range(1..40u64)];
            let xr: Vec<BigRational> = x.iter().map(|&c| from_ratio(c, 10)).collect();
            // Slack of each facet inequality h·x >= rhs at x, scaled by 10.
            let slack: Vec<BigRational> = np
                .halfspaces()
                .iter()
                .map(|h| h.rational_value(&xr) - BigRational::from_integer(h.rhs.into()))
                .collect();
            let margin = from_ratio(1, 2);
            let inside = slack.iter().all(|s| *s > margin);
            let outside = slack.iter().any(|s| *s < -margin.clone());
            if !inside && !outside {
                continue;
            }
            let t = trajectory_classify(&f, &xr, &window).unwrap();
            if inside {
                assert_eq!(
                    t.class,
                    Trajectory::DeltaUp,
                    "{} at {x:?}/10",
                    i.to_literal()
                );
                seen.0 += 1;
            } else {
                assert_eq!(
                    t.class,
                    Trajectory::NablaLow,
                    "{} at {x:?}/10",
                    i.to_literal()
                );
                seen.1 += 1;
            }
        }
    }
    assert!(seen.0 > 0 && seen.1 > 0, "{seen:?}");
}

#[test]
fn sequence_is_deterministic_in_order() {
    let f = ev(FamilySpec::powers(MonomialIdeal::maximal(3)));
    let a = colength_sequence(&f, &[9, 3, 5, 3]).unwrap();
    let b = colength_sequence(&f, &[3, 5, 9]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0].colength, BigUint::from(10u32));
}
