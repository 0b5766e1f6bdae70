//! Families of monomial ideals indexed by `N` or by powers of a prime.

mod classify;
mod json;

pub use classify::{
    bbl_on_indices, check_bal, classify, find_bbl_constant, find_weakly_graded_witness,
    find_weakly_inverse_p_witness, find_weakly_p_witness, verify_f_graded_up_to,
    verify_graded_up_to, verify_inverse_graded_up_to, verify_inverse_p_family_up_to,
    verify_p_family_up_to, BalResult, BblResult, ClassificationReport, ContainmentCheck,
    WitnessSearch,
};
pub use json::{family_from_json, family_to_json};

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::monomial::{is_prime, log_exact, ExponentVector, MonomialIdeal};
use crate::newton::{integral_closure, NewtonPolyhedron};
use crate::rational::floor_mul;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Natural,
    PPower(u64),
}

impl IndexKind {
    /// `n = p^e` for p-power indexing, `None` for invalid indices.
    pub fn exponent_of(&self, n: u64) -> Option<u32> {
        match *self {
            IndexKind::Natural => None,
            IndexKind::PPower(p) => log_exact(n, p),
        }
    }

    pub fn validate(&self, n: u64) -> Result<()> {
        match *self {
            IndexKind::Natural => Ok(()),
            IndexKind::PPower(p) => {
                if log_exact(n, p).is_some() {
                    Ok(())
                } else {
                    Err(Error::InvalidIndex {
                        index: n,
                        reason: format!("not a power of {p}"),
                    })
                }
            }
        }
    }
}

/// An exponent given as a polynomial in the index: `sum_k c_k n^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPolynomial(pub Vec<u64>);

impl ExponentPolynomial {
    pub fn eval(&self, n: u64) -> Result<u64> {
        let mut acc: u64 = 0;
        for &c in self.0.iter().rev() {
            acc = acc
                .checked_mul(n)
                .and_then(|v| v.checked_add(c))
                .ok_or_else(|| Error::InvalidArgument(format!("exponent overflow at n = {n}")))?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// `I_n = I^n`.
    Powers(MonomialIdeal),
    /// `I_n = I^{[n]}`.
    Bracket(MonomialIdeal),
    /// `I_n = I^{[n]}` from the base-`p` digits of `n`.
    GeneralizedBracket {
        ideal: MonomialIdeal,
        p: u64,
    },
    /// `I_n = I^{floor(n alpha)}`.
    FloorPower {
        ideal: MonomialIdeal,
        alpha: BigRational,
    },
    /// `I_n = F_n : J`.
    ColonOf {
        base: Box<FamilySpec>,
        divisor: MonomialIdeal,
    },
    /// `I_n` is the integral closure of `F_n`.
    ClosureOf(Box<FamilySpec>),
    ProductOf(Box<FamilySpec>, Box<FamilySpec>),
    SumOf(Box<FamilySpec>, Box<FamilySpec>),
    IntersectOf(Box<FamilySpec>, Box<FamilySpec>),
    /// Listed members. Natural index: `ideals[i]` is `I_{start+i}` and
    /// indices below `start` give the unit ideal. p-power index:
    /// `ideals[e]` is `I_{p^e}`.
    Explicit {
        start: u64,
        ideals: Vec<MonomialIdeal>,
    },
    /// Generators whose exponents are polynomials in the index.
    Parametric {
        dim: usize,
        gens: Vec<Vec<ExponentPolynomial>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub index: IndexKind,
    pub kind: FamilyKind,
}

impl FamilySpec {
    pub fn new(index: IndexKind, kind: FamilyKind) -> Result<Self> {
        let spec = FamilySpec { index, kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn natural(kind: FamilyKind) -> Result<Self> {
        Self::new(IndexKind::Natural, kind)
    }

    pub fn p_power(p: u64, kind: FamilyKind) -> Result<Self> {
        Self::new(IndexKind::PPower(p), kind)
    }

    pub fn powers(ideal: MonomialIdeal) -> Self {
        Self::natural(FamilyKind::Powers(ideal)).expect("valid")
    }

    pub fn bracket(p: u64, ideal: MonomialIdeal) -> Result<Self> {
        Self::p_power(p, FamilyKind::Bracket(ideal))
    }

    pub fn generalized_bracket(ideal: MonomialIdeal, p: u64) -> Result<Self> {
        Self::natural(FamilyKind::GeneralizedBracket { ideal, p })
    }

    pub fn floor_power(ideal: MonomialIdeal, alpha: BigRational) -> Result<Self> {
        Self::natural(FamilyKind::FloorPower { ideal, alpha })
    }

    pub fn closure_of(base: FamilySpec) -> Result<Self> {
        Self::new(base.index, FamilyKind::ClosureOf(Box::new(base)))
    }

    pub fn colon_of(base: FamilySpec, divisor: MonomialIdeal) -> Result<Self> {
        Self::new(
            base.index,
            FamilyKind::ColonOf {
                base: Box::new(base),
                divisor,
            },
        )
    }

    pub fn product_of(a: FamilySpec, b: FamilySpec) -> Result<Self> {
        Self::new(a.index, FamilyKind::ProductOf(Box::new(a), Box::new(b)))
    }

    pub fn sum_of(a: FamilySpec, b: FamilySpec) -> Result<Self> {
        Self::new(a.index, FamilyKind::SumOf(Box::new(a), Box::new(b)))
    }

    pub fn intersect_of(a: FamilySpec, b: FamilySpec) -> Result<Self> {
        Self::new(a.index, FamilyKind::IntersectOf(Box::new(a), Box::new(b)))
    }

    /// Same family restricted to the indices `p^e`.
    pub fn restricted_to_p_powers(&self, p: u64) -> Result<Self> {
        let kind = match &self.kind {
            FamilyKind::ColonOf { base, divisor } => FamilyKind::ColonOf {
                base: Box::new(base.restricted_to_p_powers(p)?),
                divisor: divisor.clone(),
            },
            FamilyKind::ClosureOf(b) => {
                FamilyKind::ClosureOf(Box::new(b.restricted_to_p_powers(p)?))
            }
            FamilyKind::ProductOf(a, b) => FamilyKind::ProductOf(
                Box::new(a.restricted_to_p_powers(p)?),
                Box::new(b.restricted_to_p_powers(p)?),
            ),
            FamilyKind::SumOf(a, b) => FamilyKind::SumOf(
                Box::new(a.restricted_to_p_powers(p)?),
                Box::new(b.restricted_to_p_powers(p)?),
            ),
            FamilyKind::IntersectOf(a, b) => FamilyKind::IntersectOf(
                Box::new(a.restricted_to_p_powers(p)?),
                Box::new(b.restricted_to_p_powers(p)?),
            ),
            FamilyKind::Explicit { .. } if self.index == IndexKind::Natural => {
                return Err(Error::InvalidFamily(
                    "explicit natural lists cannot be re-indexed".into(),
                ))
            }
            other => other.clone(),
        };
        Self::p_power(p, kind)
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            FamilyKind::Powers(i)
            | FamilyKind::Bracket(i)
            | FamilyKind::GeneralizedBracket { ideal: i, .. }
            | FamilyKind::FloorPower { ideal: i, .. } => i.dim(),
            FamilyKind::ColonOf { base, .. } | FamilyKind::ClosureOf(base) => base.dim(),
            FamilyKind::ProductOf(a, _)
            | FamilyKind::SumOf(a, _)
            | FamilyKind::IntersectOf(a, _) => a.dim(),
            FamilyKind::Explicit { ideals, .. } => ideals.first().map_or(0, MonomialIdeal::dim),
            FamilyKind::Parametric { dim, .. } => *dim,
        }
    }

    /// Short kind tag as used in JSON.
    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            FamilyKind::Powers(_) => "powers",
            FamilyKind::Bracket(_) => "bracket",
            FamilyKind::GeneralizedBracket { .. } => "generalized_bracket",
            FamilyKind::FloorPower { .. } => "floor_power",
            FamilyKind::ColonOf { .. } => "colon_of",
            FamilyKind::ClosureOf(_) => "closure_of",
            FamilyKind::ProductOf(..) => "product_of",
            FamilyKind::SumOf(..) => "sum_of",
            FamilyKind::IntersectOf(..) => "intersect_of",
            FamilyKind::Explicit { .. } => "explicit",
            FamilyKind::Parametric { .. } => "parametric",
        }
    }

    fn validate(&self) -> Result<()> {
        if let IndexKind::PPower(p) = self.index {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        let children: Vec<&FamilySpec> = match &self.kind {
            FamilyKind::ColonOf { base, divisor } => {
                if divisor.dim() != base.dim() {
                    return Err(Error::InvalidFamily(format!(
                        "colon divisor has dimension {}, family has {}",
                        divisor.dim(),
                        base.dim()
                    )));
                }
                vec![base]
            }
            FamilyKind::ClosureOf(b) => vec![b],
            FamilyKind::ProductOf(a, b)
            | FamilyKind::SumOf(a, b)
            | FamilyKind::IntersectOf(a, b) => {
                vec![a, b]
            }
            FamilyKind::GeneralizedBracket { p, .. } => {
                if !is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                vec![]
            }
            FamilyKind::FloorPower { alpha, .. } => {
                if !alpha.is_positive() {
                    return Err(Error::InvalidFamily(format!(
                        "floor_power needs alpha > 0, got {alpha}"
                    )));
                }
                vec![]
            }
            FamilyKind::Explicit { ideals, .. } => {
                let Some(first) = ideals.first() else {
                    return Err(Error::InvalidFamily(
                        "explicit family has no members".into(),
                    ));
                };
                if ideals.iter().any(|i| i.dim() != first.dim()) {
                    return Err(Error::InvalidFamily(
                        "explicit members differ in dimension".into(),
                    ));
                }
                vec![]
            }
            FamilyKind::Parametric { dim, gens } => {
                if *dim == 0 {
                    return Err(Error::ZeroDimension);
                }
                if gens.iter().any(|g| g.len() != *dim) {
                    return Err(Error::InvalidFamily(
                        "parametric generator length differs from d".into(),
                    ));
                }
                vec![]
            }
            FamilyKind::Powers(_) | FamilyKind::Bracket(_) => vec![],
        };
        for c in &children {
            if c.index != self.index {
                return Err(Error::InvalidFamily(format!(
                    "{} child uses a different index kind",
                    self.kind_name()
                )));
            }
            if c.dim() != children[0].dim() {
                return Err(Error::InvalidFamily(format!(
                    "{} children differ in dimension",
                    self.kind_name()
                )));
            }
        }
        Ok(())
    }
}

/// Memoized evaluation of a [`FamilySpec`]. Safe to share between threads.
#[derive(Debug)]
pub struct FamilyEvaluator {
    spec: FamilySpec,
    memo: RwLock<HashMap<u64, Arc<MonomialIdeal>>>,
    children: Vec<FamilyEvaluator>,
    newton: Option<NewtonPolyhedron>,
}

impl FamilyEvaluator {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        spec.validate()?;
        let children = match &spec.kind {
            FamilyKind::ColonOf { base, .. } | FamilyKind::ClosureOf(base) => {
                vec![FamilyEvaluator::new((**base).clone())?]
            }
            FamilyKind::ProductOf(a, b)
            | FamilyKind::SumOf(a, b)
            | FamilyKind::IntersectOf(a, b) => {
                vec![
                    FamilyEvaluator::new((**a).clone())?,
                    FamilyEvaluator::new((**b).clone())?,
                ]
            }
            _ => vec![],
        };
        let newton = match &spec.kind {
            FamilyKind::ClosureOf(base) => match &base.kind {
                FamilyKind::Powers(i) | FamilyKind::FloorPower { ideal: i, .. }
                    if i.is_m_primary() =>
                {
                    Some(NewtonPolyhedron::new(i)?)
                }
                _ => None,
            },
            _ => None,
        };
        Ok(FamilyEvaluator {
            spec,
            memo: RwLock::new(HashMap::new()),
            children,
            newton,
        })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn index_kind(&self) -> IndexKind {
        self.spec.index
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// `I_n`, cached.
    pub fn evaluate(&self, n: u64) -> Result<Arc<MonomialIdeal>> {
        self.spec.index.validate(n)?;
        if let Some(v) = self.memo.read().expect("memo lock").get(&n) {
            return Ok(Arc::clone(v));
        }
        let value = Arc::new(self.compute(n, true)?);
        let mut memo = self.memo.write().expect("memo lock");
        Ok(Arc::clone(memo.entry(n).or_insert(value)))
    }

    /// `I_n` recomputed from scratch without touching any cache.
    pub fn evaluate_uncached(&self, n: u64) -> Result<MonomialIdeal> {
        self.spec.index.validate(n)?;
        self.compute(n, false)
    }

    /// Evaluates all `indices` in parallel and caches them.
    pub fn warm_up(&self, indices: &[u64]) -> Result<()> {
        // Incremental kinds benefit from ascending sequential order.
        let sequential = matches!(
            self.spec.kind,
            FamilyKind::Powers(_) | FamilyKind::FloorPower { .. }
        );
        if sequential {
            for &n in indices {
                self.evaluate(n)?;
            }
            return Ok(());
        }
        indices
            .par_iter()
            .map(|&n| self.evaluate(n).map(|_| ()))
            .collect::<Result<Vec<()>>>()?;
        Ok(())
    }

    fn child(&self, i: usize, n: u64, cached: bool) -> Result<Arc<MonomialIdeal>> {
        if cached {
            self.children[i].evaluate(n)
        } else {
            self.children[i].evaluate_uncached(n).map(Arc::new)
        }
    }

    fn cached_power(&self, ideal: &MonomialIdeal, k: u64, cached: bool) -> MonomialIdeal {
        if cached && k > 0 {
            // Reuse I^{k-1} when a smaller index with that exponent is cached.
            let memo = self.memo.read().expect("memo lock");
            if let FamilyKind::Powers(_) = self.spec.kind {
                if let Some(prev) = memo.get(&(k - 1)) {
                    return prev.product(ideal).expect("same dimension");
                }
            }
        }
        ideal.power(k)
    }

    fn compute(&self, n: u64, cached: bool) -> Result<MonomialIdeal> {
        let d = self.dim();
        match &self.spec.kind {
            FamilyKind::Powers(i) => Ok(self.cached_power(i, n, cached)),
            FamilyKind::Bracket(i) => {
                if n == 0 {
                    Ok(MonomialIdeal::unit(d))
                } else {
                    i.bracket_power(n)
                }
            }
            FamilyKind::GeneralizedBracket { ideal, p } => ideal.generalized_bracket_power(n, *p),
            FamilyKind::FloorPower { ideal, alpha } => {
                let k = floor_mul(n, alpha)?;
                Ok(ideal.power(k))
            }
            FamilyKind::ColonOf { divisor, .. } => {
                let base = self.child(0, n, cached)?;
                Ok(base.colon(divisor)?.ideal)
            }
            FamilyKind::ClosureOf(base) => {
                if let Some(np) = &self.newton {
                    let k = match &base.kind {
                        FamilyKind::FloorPower { alpha, .. } => floor_mul(n, alpha)?,
                        _ => n,
                    };
                    return np.scaled_closure(k);
                }
                let b = self.child(0, n, cached)?;
                if b.is_unit() {
                    return Ok(MonomialIdeal::unit(d));
                }
                integral_closure(&b).map_err(|e| match e {
                    Error::NotMPrimary => Error::NotMPrimaryMember { index: n },
                    other => other,
                })
            }
            FamilyKind::ProductOf(..) => {
                let (a, b) = (self.child(0, n, cached)?, self.child(1, n, cached)?);
                a.product(&b)
            }
            FamilyKind::SumOf(..) => {
                let (a, b) = (self.child(0, n, cached)?, self.child(1, n, cached)?);
                a.sum(&b)
            }
            FamilyKind::IntersectOf(..) => {
                let (a, b) = (self.child(0, n, cached)?, self.child(1, n, cached)?);
                a.intersect(&b)
            }
            FamilyKind::Explicit { start, ideals } => {
                let pos = match self.spec.index {
                    IndexKind::Natural => {
                        if n < *start {
                            return Ok(MonomialIdeal::unit(d));
                        }
                        (n - start) as usize
                    }
                    IndexKind::PPower(p) => log_exact(n, p).expect("validated") as usize,
                };
                ideals.get(pos).cloned().ok_or_else(|| Error::InvalidIndex {
                    index: n,
                    reason: format!("explicit family lists {} members", ideals.len()),
                })
            }
            FamilyKind::Parametric { dim, gens } => {
                let mut out = Vec::with_capacity(gens.len());
                for g in gens {
                    let coords: Result<Vec<u64>> = g.iter().map(|e| e.eval(n)).collect();
                    out.push(ExponentVector::new(coords?));
                }
                MonomialIdeal::new(*dim, out)
            }
        }
    }

    /// Largest index the family can be evaluated at, if bounded.
    pub fn max_index(&self) -> Option<u64> {
        match &self.spec.kind {
            FamilyKind::Explicit { start, ideals } => match self.spec.index {
                IndexKind::Natural => Some(start + ideals.len() as u64 - 1),
                IndexKind::PPower(p) => p.checked_pow(ideals.len() as u32 - 1),
            },
            _ => self
                .children
                .iter()
                .filter_map(FamilyEvaluator::max_index)
                .min(),
        }
    }
}

/// `1, 2, ..., n_max` or `p^0, ..., p^{e_max}` depending on the index kind.
pub fn index_range(kind: IndexKind, bound: u64) -> Result<Vec<u64>> {
    match kind {
        IndexKind::Natural => Ok((1..=bound).collect()),
        IndexKind::PPower(p) => (0..=bound as u32)
            .map(|e| {
                p.checked_pow(e)
                    .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} overflows")))
            })
            .collect(),
    }
}
