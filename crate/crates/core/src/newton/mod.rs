//! Newton polyhedra `NP(I) = conv(gens) + R^d_+`, integral closure and
//! complement volumes.

mod lp;
mod volume;

pub use volume::{complement_volume, ComplementVolume, DEFAULT_APPROX_LEVEL};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::{minimize, ExponentVector, MonomialIdeal};

/// The inequality `<normal, x> >= rhs` with a primitive nonnegative integer normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<u64>,
    pub rhs: u64,
}

impl Halfspace {
    #[inline]
    pub fn value(&self, u: &[u64]) -> u128 {
        self.normal
            .iter()
            .zip(u)
            .map(|(&w, &x)| w as u128 * x as u128)
            .sum()
    }

    pub fn rational_value(&self, u: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(u)
            .map(|(&w, x)| x * BigInt::from(w))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    dim: usize,
    vertices: Vec<ExponentVector>,
    halfspaces: Vec<Halfspace>,
}

impl NewtonPolyhedron {
    pub fn new(ideal: &MonomialIdeal) -> Result<Self> {
        if ideal.is_zero() {
            return Err(Error::InvalidArgument(
                "the zero ideal has an empty Newton polyhedron".into(),
            ));
        }
        let d = ideal.dim();
        let vertices = ideal.gens().to_vec();
        let halfspaces = facet_halfspaces(&vertices, d);
        Ok(NewtonPolyhedron {
            dim: d,
            vertices,
            halfspaces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    /// Inequalities describing the polyhedron, coordinate halfspaces included.
    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Lattice membership in `k * NP` via the cached inequalities.
    #[inline]
    pub fn contains_scaled(&self, u: &[u64], k: u64) -> bool {
        self.halfspaces
            .iter()
            .all(|h| h.value(u) >= h.rhs as u128 * k as u128)
    }

    pub fn contains(&self, u: &[u64]) -> bool {
        self.contains_scaled(u, 1)
    }

    pub fn contains_rational(&self, u: &[BigRational]) -> bool {
        self.halfspaces
            .iter()
            .all(|h| h.rational_value(u) >= BigRational::from_integer(h.rhs.into()))
    }

    /// Smallest last coordinate `t` with `(prefix, t) ∈ k * NP`, if any.
    fn min_last_coordinate(&self, prefix: &[u64], k: u64) -> Option<u64> {
        let d = self.dim;
        let mut t = 0u64;
        for h in &self.halfspaces {
            let partial: u128 = h.normal[..d - 1]
                .iter()
                .zip(prefix)
                .map(|(&w, &x)| w as u128 * x as u128)
                .sum();
            let need = h.rhs as u128 * k as u128;
            if partial >= need {
                continue;
            }
            let w = h.normal[d - 1] as u128;
            if w == 0 {
                return None;
            }
            let c = (need - partial).div_ceil(w) as u64;
            t = t.max(c);
        }
        Some(t)
    }

    /// Minimal lattice points of `k * NP`, i.e. the integral closure of any
    /// ideal whose Newton polyhedron is `k * NP`. Needs `NP` to meet every axis.
    pub fn scaled_closure(&self, k: u64) -> Result<MonomialIdeal> {
        let d = self.dim;
        let bounds = axis_bounds(&self.vertices, d).ok_or(Error::NotMPrimary)?;
        if k == 0 {
            return Ok(MonomialIdeal::unit(d));
        }
        let box_hi: Vec<u64> = bounds.iter().map(|&a| a * k).collect();
        let mut gens = Vec::new();
        if d == 1 {
            return MonomialIdeal::new(d, vec![ExponentVector::new(vec![box_hi[0]])]);
        }
        let mut prefix = vec![0u64; d - 1];
        let mut point = vec![0u64; d];
        'outer: loop {
            if let Some(t) = self.min_last_coordinate(&prefix, k) {
                point[..d - 1].copy_from_slice(&prefix);
                point[d - 1] = t;
                let minimal = (0..d - 1).all(|i| {
                    if point[i] == 0 {
                        return true;
                    }
                    point[i] -= 1;
                    let inside = self.contains_scaled(&point, k);
                    point[i] += 1;
                    !inside
                });
                if minimal {
                    gens.push(ExponentVector::from_slice(&point));
                }
            }
            let mut i = d - 1;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                prefix[i] += 1;
                if prefix[i] <= box_hi[i] {
                    break;
                }
                prefix[i] = 0;
            }
        }
        MonomialIdeal::new(d, minimize(gens))
    }
}

fn axis_bounds(vertices: &[ExponentVector], d: usize) -> Option<Vec<u64>> {
    let mut bounds: Vec<Option<u64>> = vec![None; d];
    for g in vertices {
        if g.is_zero() {
            return Some(vec![0; d]);
        }
        if let Some(i) = g.pure_power_axis() {
            let a = g.coords()[i];
            bounds[i] = Some(bounds[i].map_or(a, |b| b.min(a)));
        }
    }
    bounds.into_iter().collect()
}

/// Determinant of a square integer matrix by fraction-free elimination.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// A nonzero vector orthogonal to the `d - 1` rows, by cofactor expansion.
fn orthogonal(rows: &[Vec<i128>], d: usize) -> Vec<i128> {
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * det(minor)
        })
        .collect()
}

/// Every halfspace spanned by `d` elements of `points ∪ {e_i}` (at least one
/// point) that is valid for all points and has a nonnegative normal.
fn facet_halfspaces(points: &[ExponentVector], d: usize) -> Vec<Halfspace> {
    let mut out: Vec<Halfspace> = (0..d)
        .map(|i| {
            let mut normal = vec![0u64; d];
            normal[i] = 1;
            Halfspace { normal, rhs: 0 }
        })
        .collect();
    let m = points.len();
    let items = m + d;
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    fn rec(
        start: usize,
        items: usize,
        d: usize,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == d {
            f(chosen);
            return;
        }
        for j in start..items {
            if items - j < d - chosen.len() {
                break;
            }
            chosen.push(j);
            rec(j + 1, items, d, chosen, f);
            chosen.pop();
        }
    }
    let mut visit = |subset: &[usize]| {
        if subset[0] >= m {
            return;
        }
        let base: Vec<i128> = points[subset[0]]
            .coords()
            .iter()
            .map(|&v| v as i128)
            .collect();
        let rows: Vec<Vec<i128>> = subset[1..]
            .iter()
            .map(|&j| {
                if j < m {
                    points[j]
                        .coords()
                        .iter()
                        .zip(&base)
                        .map(|(&v, b)| v as i128 - b)
                        .collect()
                } else {
                    let mut e = vec![0i128; d];
                    e[j - m] = 1;
                    e
                }
            })
            .collect();
        let mut w = orthogonal(&rows, d);
        if w.iter().all(|&v| v == 0) {
            return;
        }
        if w.iter().all(|&v| v <= 0) {
            for v in w.iter_mut() {
                *v = -*v;
            }
        } else if w.iter().any(|&v| v < 0) {
            return;
        }
        let g = w.iter().fold(0i128, |a, &b| a.gcd(&b));
        let w: Vec<u64> = w.iter().map(|&v| (v / g) as u64).collect();
        let h = Halfspace { rhs: 0, normal: w };
        let rhs = h.value(points[subset[0]].coords());
        let valid = points.iter().all(|p| h.value(p.coords()) >= rhs);
        if valid && rhs > 0 {
            out.push(Halfspace {
                rhs: rhs as u64,
                ..h
            });
        }
    };
    rec(0, items, d, &mut chosen, &mut visit);
    out.sort();
    out.dedup();
    drop_redundant(out)
}

/// Removes inequalities implied by a single other one with a proportional
/// or dominated normal. Keeps the description exact and small.
fn drop_redundant(hs: Vec<Halfspace>) -> Vec<Halfspace> {
    let keep: Vec<bool> = hs
        .iter()
        .enumerate()
        .map(|(i, h)| {
            !hs.iter().enumerate().any(|(j, o)| {
                j != i && o.normal == h.normal && (o.rhs > h.rhs || (o.rhs == h.rhs && j < i))
            })
        })
        .collect();
    hs.into_iter()
        .zip(keep)
        .filter_map(|(h, k)| k.then_some(h))
        .collect()
}

/// Exact membership `u ∈ conv(gens) + R^d_+` by rational feasibility of
/// `sum λ_i g_i <= u`, `sum λ_i = 1`, `λ >= 0`.
pub fn np_membership(np: &NewtonPolyhedron, u: &[BigRational]) -> Result<bool> {
    if u.len() != np.dim {
        return Err(Error::DimensionMismatch {
            expected: np.dim,
            found: u.len(),
        });
    }
    if u.iter().any(|x| x.is_negative()) {
        return Ok(false);
    }
    let d = np.dim;
    let m = np.vertices.len();
    // Columns: λ_1..λ_m, then slacks s_1..s_d.
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row: Vec<BigRational> = np
            .vertices
            .iter()
            .map(|g| BigRational::from_integer(g.coords()[i].into()))
            .collect();
        row.extend(
            (0..d).map(|k| BigRational::from_integer(if k == i { 1.into() } else { 0.into() })),
        );
        a.push(row);
    }
    let mut last: Vec<BigRational> = vec![BigRational::from_integer(1.into()); m];
    last.extend((0..d).map(|_| BigRational::zero()));
    a.push(last);
    let mut b: Vec<BigRational> = u.to_vec();
    b.push(BigRational::from_integer(1.into()));
    Ok(lp::feasible(&a, &b))
}

/// Lattice version of [`np_membership`].
pub fn np_membership_lattice(np: &NewtonPolyhedron, u: &ExponentVector) -> Result<bool> {
    let q: Vec<BigRational> = u
        .coords()
        .iter()
        .map(|&v| BigRational::from_integer(v.into()))
        .collect();
    np_membership(np, &q)
}

/// `Ī`: all lattice points of `NP(I)`, reduced to minimal generators.
pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    let mut out = NewtonPolyhedron::new(ideal)?.scaled_closure(1)?;
    if let Some(p) = ideal.char_p() {
        out = out.with_char_p(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::complement_points;
    use crate::rational::from_ratio;
    use proptest::prelude::*;

    fn ideal(d: usize, rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(d, rows).unwrap()
    }

    fn q(v: u64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn membership_examples() {
        let np = NewtonPolyhedron::new(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap();
        assert!(np_membership(&np, &[q(1), q(1)]).unwrap());
        let np = NewtonPolyhedron::new(&MonomialIdeal::maximal(2)).unwrap();
        assert!(!np_membership(&np, &[q(0), q(0)]).unwrap());
        assert!(np_membership(&np, &[from_ratio(1, 2), from_ratio(1, 2)]).unwrap());
        assert!(!np_membership(&np, &[from_ratio(1, 2), from_ratio(1, 3)]).unwrap());
        let np = NewtonPolyhedron::new(&ideal(2, &[&[3, 0], &[0, 2]])).unwrap();
        assert!(np_membership(&np, &[q(2), q(1)]).unwrap());
        assert!(!np_membership(&np, &[q(1), q(1)]).unwrap());
        assert!(np_membership(&np, &[q(1), q(2)]).unwrap());
        assert!(matches!(
            np_membership(&np, &[q(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn halfspaces_of_simple_polyhedra() {
        let np = NewtonPolyhedron::new(&ideal(2, &[&[3, 0], &[0, 2]])).unwrap();
        let facets: Vec<&Halfspace> = np.halfspaces().iter().filter(|h| h.rhs > 0).collect();
        assert_eq!(facets.len(), 1);
        assert_eq!(facets[0].normal, vec![2, 3]);
        assert_eq!(facets[0].rhs, 6);
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            integral_closure(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap(),
            ideal(2, &[&[2, 0], &[1, 1], &[0, 2]])
        );
        for n in 1..6 {
            let mn = MonomialIdeal::maximal(3).power(n);
            assert_eq!(integral_closure(&mn).unwrap(), mn);
        }
        assert_eq!(
            integral_closure(&ideal(2, &[&[3, 0], &[0, 2]])).unwrap(),
            ideal(2, &[&[3, 0], &[2, 1], &[0, 2]])
        );
        assert_eq!(
            integral_closure(&ideal(2, &[&[1, 0]])),
            Err(Error::NotMPrimary)
        );
        assert!(integral_closure(&MonomialIdeal::unit(2)).unwrap().is_unit());
    }

    #[test]
    fn scaled_closure_matches_closure_of_power() {
        let i = ideal(2, &[&[3, 0], &[1, 1], &[0, 4]]);
        let np = NewtonPolyhedron::new(&i).unwrap();
        for k in 1..6 {
            assert_eq!(
                np.scaled_closure(k).unwrap(),
                integral_closure(&i.power(k)).unwrap()
            );
        }
    }

    fn arb_m_primary(d: usize, extra: usize, max_exp: u64) -> impl Strategy<Value = MonomialIdeal> {
        (
            proptest::collection::vec(1..=max_exp, d),
            proptest::collection::vec(proptest::collection::vec(0..=max_exp, d), 0..=extra),
        )
            .prop_map(move |(pure, rest)| {
                let mut gens: Vec<ExponentVector> = pure
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| ExponentVector::axis(d, i, a))
                    .collect();
                gens.extend(rest.into_iter().map(ExponentVector::new));
                MonomialIdeal::new(d, gens).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn halfspace_and_lp_membership_agree(i in arb_m_primary(3, 4, 5)) {
            let np = NewtonPolyhedron::new(&i).unwrap();
            for g in i.gens() {
                prop_assert!(np.contains(g.coords()));
            }
            let bounds = i.pure_power_bounds().unwrap();
            for x in 0..=bounds[0] {
                for y in 0..=bounds[1] {
                    for z in 0..=bounds[2] {
                        let u = ExponentVector::new(vec![x, y, z]);
                        prop_assert_eq!(
                            np.contains(u.coords()),
                            np_membership_lattice(&np, &u).unwrap(),
                            "{} at {}", i, u
                        );
                    }
                }
            }
        }

        #[test]
        fn closure_is_extensive_and_idempotent(i in arb_m_primary(2, 5, 8)) {
            let c = integral_closure(&i).unwrap();
            prop_assert!(i.is_subset_of(&c).unwrap());
            prop_assert_eq!(integral_closure(&c).unwrap(), c.clone());
            let np = NewtonPolyhedron::new(&i).unwrap();
            for u in complement_points(&c).unwrap() {
                prop_assert!(!np_membership_lattice(&np, &u).unwrap());
            }
        }

        #[test]
        fn closure_is_multiplicative(i in arb_m_primary(2, 3, 5), j in arb_m_primary(2, 3, 5)) {
            let lhs = integral_closure(&i).unwrap().product(&integral_closure(&j).unwrap()).unwrap();
            let rhs = integral_closure(&i.product(&j).unwrap()).unwrap();
            prop_assert!(lhs.is_subset_of(&rhs).unwrap());
        }
    }
}
