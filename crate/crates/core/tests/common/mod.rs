//! Seeded random ideals and small family builders shared by the test targets.

#![allow(dead_code)]

use acolen::family::{ExponentPolynomial, FamilyKind, FamilySpec};
use acolen::{ExponentVector, MonomialIdeal};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 𝔪-primary ideal: pure powers `x_i^{a_i}` with `a_i <= max_pure`, plus up to
/// `extra` mixed generators inside the box `[0, a_i)`.
pub fn random_ideal(rng: &mut ChaCha8Rng, d: usize, max_pure: u64, extra: usize) -> MonomialIdeal {
    let a: Vec<u64> = (0..d).map(|_| rng.gen_range(1..=max_pure)).collect();
    let mut gens: Vec<ExponentVector> = (0..d).map(|i| ExponentVector::axis(d, i, a[i])).collect();
    let k = rng.gen_range(0..=extra);
    for _ in 0..k {
        gens.push(ExponentVector::new(
            a.iter().map(|&ai| rng.gen_range(0..ai)).collect::<Vec<_>>(),
        ));
    }
    MonomialIdeal::new(d, gens).expect("valid generators")
}

/// Monomial ideal that need not be 𝔪-primary.
pub fn random_any_ideal(
    rng: &mut ChaCha8Rng,
    d: usize,
    max_exp: u64,
    gens: usize,
) -> MonomialIdeal {
    let k = rng.gen_range(1..=gens);
    let rows = (0..k)
        .map(|_| {
            ExponentVector::new(
                (0..d)
                    .map(|_| rng.gen_range(0..=max_exp))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    MonomialIdeal::new(d, rows).expect("valid generators")
}

pub fn poly(c: &[u64]) -> ExponentPolynomial {
    ExponentPolynomial(c.to_vec())
}

/// Natural-index family with generators whose exponents are linear in `n`:
/// each row lists `(constant, slope)` per variable.
pub fn linear_family(d: usize, rows: &[&[(u64, u64)]]) -> FamilySpec {
    FamilySpec::natural(FamilyKind::Parametric {
        dim: d,
        gens: rows
            .iter()
            .map(|r| r.iter().map(|&(c, s)| poly(&[c, s])).collect())
            .collect(),
    })
    .expect("valid family")
}

/// `(x^n, y)`.
pub fn xn_y() -> FamilySpec {
    linear_family(2, &[&[(0, 1), (0, 0)], &[(0, 0), (1, 0)]])
}
