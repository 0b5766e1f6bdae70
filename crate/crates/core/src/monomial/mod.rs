//! Monomial ideals in `k[x_1, ..., x_d]` represented by their minimal
//! exponent antichains.
//!
//! Every [`MonomialIdeal`] is kept normalized: generators form an antichain
//! under the componentwise order, contain no duplicates and are sorted
//! lexicographically. The zero ideal has no generators and the unit ideal is
//! generated by the zero vector.

mod colength;

pub use colength::{
    colength_box_enumeration, colength_inclusion_exclusion, complement_points, Colength,
    ColengthMethod, ColengthResult, INCLUSION_EXCLUSION_MAX_GENS,
};

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A lattice point of `N^d`, read as the monomial `x^u`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExponentVector(SmallVec<[u64; 4]>);

impl ExponentVector {
    pub fn new(coords: impl Into<Vec<u64>>) -> Self {
        ExponentVector(SmallVec::from_vec(coords.into()))
    }

    pub fn from_slice(coords: &[u64]) -> Self {
        ExponentVector(SmallVec::from_slice(coords))
    }

    pub fn zero(d: usize) -> Self {
        ExponentVector(SmallVec::from_elem(0, d))
    }

    /// The exponent vector of `x_i^a` (0-based axis).
    pub fn axis(d: usize, i: usize, a: u64) -> Self {
        let mut v = Self::zero(d);
        v.0[i] = a;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `self` divides `other`, i.e. `self <= other` componentwise.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        divides(&self.0, &other.0)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise maximum, the exponent of `lcm(x^self, x^other)`.
    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Componentwise `max(self - other, 0)`.
    pub fn saturating_sub(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    pub fn scale(&self, q: u64) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| a * q).collect())
    }

    /// The single axis this vector is supported on, if it is a nonzero pure power.
    pub fn pure_power_axis(&self) -> Option<usize> {
        let mut axis = None;
        for (i, &c) in self.0.iter().enumerate() {
            if c > 0 {
                if axis.is_some() {
                    return None;
                }
                axis = Some(i);
            }
        }
        axis
    }

    /// Monomial notation, e.g. `x1^2*x3`; the zero vector prints as `1`.
    pub fn to_monomial_string(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| {
                if c == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, c)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl serde::Serialize for ExponentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[inline]
pub(crate) fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// An ideal generated by monomials, stored as its minimal generators.
#[derive(Clone, Debug)]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<ExponentVector>,
    char_p: Option<u64>,
}

impl PartialEq for MonomialIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.gens == other.gens
    }
}

impl Eq for MonomialIdeal {}

/// Reduces a generating set to its divisibility antichain.
pub fn normalize(raw_gens: Vec<ExponentVector>, d: usize) -> Result<MonomialIdeal> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if let Some(bad) = raw_gens.iter().find(|g| g.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    Ok(MonomialIdeal {
        dim: d,
        gens: minimize(raw_gens),
        char_p: None,
    })
}

/// Minimal elements of a set of vectors of a common length, sorted lexicographically.
pub(crate) fn minimize(mut v: Vec<ExponentVector>) -> Vec<ExponentVector> {
    v.sort_unstable();
    v.dedup();
    if v.len() <= 1 {
        return v;
    }
    if v.iter().any(|g| g.is_zero()) {
        let d = v[0].dim();
        return vec![ExponentVector::zero(d)];
    }
    let d = v[0].dim();
    if d == 1 {
        return vec![v.swap_remove(0)];
    }
    if d == 2 {
        // Sorted by x ascending; a point survives iff its y beats every earlier y.
        let mut out: Vec<ExponentVector> = Vec::new();
        let mut min_y = u64::MAX;
        for g in v {
            if g.0[1] < min_y {
                min_y = g.0[1];
                out.push(g);
            }
        }
        return out;
    }
    // A proper divisor has strictly smaller degree, so only lower-degree
    // survivors need to be checked.
    let mut order: Vec<(u64, ExponentVector)> = v.into_iter().map(|g| (g.degree(), g)).collect();
    order.sort_unstable_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut kept: Vec<(u64, ExponentVector)> = Vec::with_capacity(order.len());
    for (deg, g) in order {
        let dominated = kept
            .iter()
            .take_while(|(kd, _)| *kd < deg)
            .any(|(_, h)| h.divides(&g));
        if !dominated {
            kept.push((deg, g));
        }
    }
    let mut out: Vec<ExponentVector> = kept.into_iter().map(|(_, g)| g).collect();
    out.sort_unstable();
    out
}

impl MonomialIdeal {
    pub fn new(d: usize, gens: Vec<ExponentVector>) -> Result<Self> {
        normalize(gens, d)
    }

    /// Builds an ideal from raw exponent rows.
    pub fn from_exponents(d: usize, rows: &[&[u64]]) -> Result<Self> {
        normalize(
            rows.iter().map(|r| ExponentVector::from_slice(r)).collect(),
            d,
        )
    }

    pub fn zero(d: usize) -> Self {
        MonomialIdeal {
            dim: d,
            gens: Vec::new(),
            char_p: None,
        }
    }

    pub fn unit(d: usize) -> Self {
        MonomialIdeal {
            dim: d,
            gens: vec![ExponentVector::zero(d)],
            char_p: None,
        }
    }

    /// The maximal ideal `(x_1, ..., x_d)`.
    pub fn maximal(d: usize) -> Self {
        Self::pure_powers(&vec![1; d])
    }

    /// `(x_1^{a_1}, ..., x_d^{a_d})`; every `a_i` must be positive.
    pub fn pure_powers(exponents: &[u64]) -> Self {
        let d = exponents.len();
        let gens = exponents
            .iter()
            .enumerate()
            .map(|(i, &a)| ExponentVector::axis(d, i, a))
            .collect();
        MonomialIdeal {
            dim: d,
            gens: minimize(gens),
            char_p: None,
        }
    }

    pub fn with_char_p(mut self, p: u64) -> Self {
        self.char_p = Some(p);
        self
    }

    pub fn char_p(&self) -> Option<u64> {
        self.char_p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_zero()
    }

    /// `mu(I)`, the number of minimal generators.
    pub fn num_min_gens(&self) -> usize {
        self.gens.len()
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim != d {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: d,
            });
        }
        Ok(())
    }

    fn derived(&self, other: &MonomialIdeal, gens: Vec<ExponentVector>) -> MonomialIdeal {
        MonomialIdeal {
            dim: self.dim,
            gens: minimize(gens),
            char_p: self.char_p.or(other.char_p),
        }
    }

    pub fn contains_monomial(&self, u: &ExponentVector) -> Result<bool> {
        self.check_dim(u.dim())?;
        Ok(self.contains_exponents(u.coords()))
    }

    /// Membership without the dimension check.
    #[inline]
    pub fn contains_exponents(&self, u: &[u64]) -> bool {
        self.gens.iter().any(|g| divides(&g.0, u))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> Result<bool> {
        other.check_dim(self.dim)?;
        Ok(self.gens.iter().all(|g| other.contains_exponents(&g.0)))
    }

    /// The first generator of `self` lying outside `other`, if any.
    pub fn first_gen_outside(&self, other: &MonomialIdeal) -> Option<&ExponentVector> {
        self.gens.iter().find(|g| !other.contains_exponents(&g.0))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other.dim)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(self.derived(other, gens))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other.dim)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.add(b));
            }
        }
        Ok(self.derived(other, gens))
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other.dim)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        Ok(self.derived(other, gens))
    }

    /// `I : x^g`, generated by `max(h - g, 0)` over generators `h` of `I`.
    pub fn colon_monomial(&self, g: &ExponentVector) -> Result<MonomialIdeal> {
        self.check_dim(g.dim())?;
        let gens = self.gens.iter().map(|h| h.saturating_sub(g)).collect();
        Ok(MonomialIdeal {
            dim: self.dim,
            gens: minimize(gens),
            char_p: self.char_p,
        })
    }

    /// `I : J`. Colon by the zero ideal is the unit ideal and is flagged.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<Colon> {
        self.check_dim(other.dim)?;
        if other.is_zero() {
            return Ok(Colon {
                ideal: MonomialIdeal::unit(self.dim),
                divisor_was_zero: true,
            });
        }
        let mut acc: Option<MonomialIdeal> = None;
        for g in &other.gens {
            let part = self.colon_monomial(g)?;
            acc = Some(match acc {
                None => part,
                Some(a) => a.intersect(&part)?,
            });
        }
        let mut ideal = acc.expect("nonzero divisor has generators");
        ideal.char_p = self.char_p.or(other.char_p);
        Ok(Colon {
            ideal,
            divisor_was_zero: false,
        })
    }

    /// Multiplies every generator by the monomial `x^c`.
    pub fn shift(&self, c: &ExponentVector) -> Result<MonomialIdeal> {
        self.check_dim(c.dim())?;
        Ok(MonomialIdeal {
            dim: self.dim,
            gens: self.gens.iter().map(|g| g.add(c)).collect(),
            char_p: self.char_p,
        })
    }

    pub fn power(&self, n: u64) -> MonomialIdeal {
        let mut result = MonomialIdeal {
            char_p: self.char_p,
            ..MonomialIdeal::unit(self.dim)
        };
        if n == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = n;
        // Square-and-multiply; the normalized result does not depend on the grouping.
        loop {
            if e & 1 == 1 {
                result = result.product(&base).expect("same dimension");
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.product(&base).expect("same dimension");
        }
        result
    }

    /// `I^{[q]}`: every generator scaled by `q`.
    pub fn bracket_power(&self, q: u64) -> Result<MonomialIdeal> {
        if q == 0 {
            return Err(Error::InvalidArgument("bracket power needs q >= 1".into()));
        }
        Ok(MonomialIdeal {
            dim: self.dim,
            gens: self.gens.iter().map(|g| g.scale(q)).collect(),
            char_p: self.char_p,
        })
    }

    /// `I^{[n]} = I^{n_0} (I^{[p]})^{n_1} ... (I^{[p^e]})^{n_e}` for the base-`p`
    /// digits `n_k` of `n`.
    pub fn generalized_bracket_power(&self, n: u64, p: u64) -> Result<MonomialIdeal> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut result = MonomialIdeal {
            char_p: self.char_p,
            ..MonomialIdeal::unit(self.dim)
        };
        let mut rest = n;
        let mut q = 1u64;
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let factor = self.bracket_power(q)?.power(digit);
                result = result.product(&factor)?;
            }
            rest /= p;
            if rest > 0 {
                q = q
                    .checked_mul(p)
                    .ok_or_else(|| Error::InvalidArgument("index overflow".into()))?;
            }
        }
        Ok(result)
    }

    /// For every axis some generator is a pure power of that variable.
    pub fn is_m_primary(&self) -> bool {
        self.pure_power_bounds().is_some()
    }

    /// The exponents `a_i` of the pure powers `x_i^{a_i}` in the generating
    /// set, or `None` when some axis has none. The unit ideal gives all zeros.
    pub fn pure_power_bounds(&self) -> Option<Vec<u64>> {
        if self.is_unit() {
            return Some(vec![0; self.dim]);
        }
        let mut bounds: Vec<Option<u64>> = vec![None; self.dim];
        for g in &self.gens {
            if let Some(i) = g.pure_power_axis() {
                let a = g.0[i];
                bounds[i] = Some(bounds[i].map_or(a, |b| b.min(a)));
            }
        }
        bounds.into_iter().collect()
    }

    /// Smallest total degree of a generator; `None` for the zero ideal.
    pub fn min_degree(&self) -> Option<u64> {
        self.gens.iter().map(ExponentVector::degree).min()
    }

    pub fn max_degree(&self) -> Option<u64> {
        self.gens.iter().map(ExponentVector::degree).max()
    }

    /// Literal form, e.g. `x1^2, x1*x2, x2^2`; zero and unit ideals print as `0` and `1`.
    pub fn to_literal(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.gens
            .iter()
            .map(ExponentVector::to_monomial_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_literal())
    }
}

impl PartialOrd for MonomialIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.dim != other.dim {
            return None;
        }
        let le = self.gens.iter().all(|g| other.contains_exponents(&g.0));
        let ge = other.gens.iter().all(|g| self.contains_exponents(&g.0));
        match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

/// Result of an ideal quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colon {
    pub ideal: MonomialIdeal,
    /// The divisor was the zero ideal and the unit ideal was returned by convention.
    pub divisor_was_zero: bool,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// `p^e` if it fits in a `u64`.
pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

/// `Some(e)` when `q = p^e`.
pub fn log_exact(q: u64, p: u64) -> Option<u32> {
    if q == 0 || p < 2 {
        return None;
    }
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some(e)
}

/// Monomials of total degree `k` in `d` variables, in lexicographic order with
/// `x_1` largest first (so `x_1^k` comes first).
pub fn monomials_of_degree(d: usize, k: u64) -> Vec<ExponentVector> {
    fn rec(d: usize, i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<ExponentVector>) {
        if i == d - 1 {
            cur[i] = left;
            out.push(ExponentVector::from_slice(cur));
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(d, i + 1, left - a, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0; d];
    rec(d, 0, k, &mut cur, &mut out);
    out
}
