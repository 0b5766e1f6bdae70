mod common;

use acolen::charp::{frobenius_converse_check, frobenius_cover_check, ok_basis, verify_ok_basis};

use common::{random_ideal, rng};

#[test]
fn ok_bases() {
    for d in 1..=3 {
        for p in [2u64, 3, 5] {
            let b = ok_basis(d, p).unwrap();
            assert_eq!(b.elements.len() as u64, p.pow(d as u32));
            assert!(verify_ok_basis(&b), "d={d} p={p}");
        }
    }
}

#[test]
fn frobenius_containments_on_random_suite() {
    let mut r = rng(31);
    for t in 0..500 {
        let d = 2 + t % 2;
        let p = [2u64, 3, 5][t % 3];
        let i = random_ideal(&mut r, d, 5, 4);
        let cover = frobenius_cover_check(&i, p).unwrap();
        assert!(
            cover.holds,
            "{} p={p}: {:?}",
            i.to_literal(),
            cover.counterexample
        );
        let converse = frobenius_converse_check(&i, p).unwrap();
        assert!(
            converse.holds,
            "{} p={p}: {:?}",
            i.to_literal(),
            converse.counterexample
        );
    }
}
