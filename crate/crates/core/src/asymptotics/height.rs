//! Height functions of the limit ideal region, probed at a finite level.
//!
//! The direction is `b = (1, ..., 1)` and `H = {⟨x, b⟩ = 0}`. For `y ∈ H` the
//! height `φ(y)` is the smallest `t` with `y + t b` in the region, measured in
//! multiples of `b`; `height = φ · ‖b‖` is the same offset as a distance. The
//! region is replaced by its level-`n` surrogate `{z >= 0 : ⌊n z⌋ ∈ I_n}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::FamilyEvaluator;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightPoint {
    /// Coordinates of the grid point in `ℝ^d`.
    pub y: Vec<f64>,
    pub phi: f64,
    pub height: f64,
    /// The search bound was reached without entering the region.
    pub unbounded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightSample {
    pub dim: usize,
    pub level: u64,
    pub tolerance: f64,
    pub b_norm: f64,
    pub points: Vec<HeightPoint>,
}

/// Orthonormal basis of `H`, from Gram-Schmidt on `e_k - e_{k+1}`.
pub fn hyperplane_basis(d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d.saturating_sub(1));
    for k in 0..d.saturating_sub(1) {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        v[k + 1] = -1.0;
        for u in &basis {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|a| a / norm).collect());
    }
    basis
}

/// `steps^(d-1)` points `Σ c_k v_k` with each `c_k` evenly spaced in
/// `[-radius, radius]`. One step gives the origin alone.
pub fn hyperplane_grid(d: usize, radius: f64, steps: usize) -> Vec<Vec<f64>> {
    let basis = hyperplane_basis(d);
    let coords: Vec<f64> = if steps <= 1 {
        vec![0.0]
    } else {
        (0..steps)
            .map(|j| -radius + 2.0 * radius * j as f64 / (steps - 1) as f64)
            .collect()
    };
    let mut out = vec![vec![0.0; d]];
    for v in &basis {
        let mut next = Vec::with_capacity(out.len() * coords.len());
        for p in &out {
            for &c in &coords {
                next.push(p.iter().zip(v).map(|(a, b)| a + c * b).collect());
            }
        }
        out = next;
    }
    out
}

fn member(ideal: &crate::MonomialIdeal, y: &[f64], t: f64, n: u64) -> bool {
    let mut u = Vec::with_capacity(y.len());
    for &yi in y {
        let z = yi + t;
        if z < 0.0 {
            return false;
        }
        u.push((z * n as f64).floor() as u64);
    }
    ideal.contains_exponents(&u)
}

/// Bisects `t ∈ [max(0, -min y), T]` to width `tol / 100` at every grid point.
/// `T` comes from the containment threshold `t_n` of `I_n`: once
/// `Σ ⌊n z_i⌋ >= t_n` the point is a member.
pub fn height_sample(
    f: &FamilyEvaluator,
    grid: &[Vec<f64>],
    level: u64,
    tolerance: f64,
) -> Result<HeightSample> {
    let d = f.dim();
    if level == 0 {
        return Err(Error::InvalidArgument(
            "probe level must be positive".into(),
        ));
    }
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tolerance} must lie in (0, 1)"
        )));
    }
    for y in grid {
        if y.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: y.len(),
            });
        }
        if y.iter().sum::<f64>().abs() > 1e-9 * (1.0 + y.iter().map(|a| a.abs()).sum::<f64>()) {
            return Err(Error::InvalidArgument(format!(
                "grid point {y:?} is not on the hyperplane ⟨x, b⟩ = 0"
            )));
        }
    }
    let ideal = f.evaluate(level)?;
    let threshold = ideal.power_containment_threshold().ok();
    let b_norm = (d as f64).sqrt();
    let points = grid
        .iter()
        .map(|y| {
            let lo0 = y.iter().fold(0.0f64, |m, &a| m.max(-a));
            let cap = match threshold {
                Some(t) => lo0.max((t as f64 + d as f64) / (level as f64 * d as f64)) + tolerance,
                None => lo0 + 1.0,
            };
            if member(&ideal, y, lo0, level) {
                return HeightPoint {
                    y: y.clone(),
                    phi: lo0,
                    height: lo0 * b_norm,
                    unbounded: false,
                };
            }
            if !member(&ideal, y, cap, level) {
                return HeightPoint {
                    y: y.clone(),
                    phi: cap,
                    height: cap * b_norm,
                    unbounded: true,
                };
            }
            let (mut lo, mut hi) = (lo0, cap);
            while hi - lo > tolerance / 100.0 {
                let mid = 0.5 * (lo + hi);
                if member(&ideal, y, mid, level) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            HeightPoint {
                y: y.clone(),
                phi: hi,
                height: hi * b_norm,
                unbounded: false,
            }
        })
        .collect();
    Ok(HeightSample {
        dim: d,
        level,
        tolerance,
        b_norm,
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzAudit {
    pub max_ratio: f64,
    /// The pair of grid indices realizing `max_ratio`.
    pub worst_pair: Option<(usize, usize)>,
    pub c2: f64,
    pub c3: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `c₂ = √(d-1)` is the largest constant with
/// `{⟨x, b⟩ >= c₂ ‖x‖} ⊆ ℝ^d_+`, and `c₃ = c₂ / √(‖b‖⁴ - c₂² ‖b‖²)`.
pub fn lipschitz_constants(d: usize) -> (f64, f64) {
    let c2 = (d as f64 - 1.0).max(0.0).sqrt();
    let nb2 = d as f64;
    let den = (nb2 * nb2 - c2 * c2 * nb2).sqrt();
    (c2, if den > 0.0 { c2 / den } else { 0.0 })
}

/// Largest `|φ(x) - φ(y)| / ‖x - y‖` over pairs of bounded samples.
/// Passes when it stays within `c₃ + 2·tol`.
pub fn lipschitz_audit(hs: &HeightSample) -> LipschitzAudit {
    let (c2, c3) = lipschitz_constants(hs.dim);
    let mut max_ratio = 0.0f64;
    let mut worst_pair = None;
    for (i, a) in hs.points.iter().enumerate() {
        for (j, b) in hs.points.iter().enumerate().skip(i + 1) {
            if a.unbounded || b.unbounded {
                continue;
            }
            let dist =
                a.y.iter()
                    .zip(&b.y)
                    .map(|(p, q)| (p - q) * (p - q))
                    .sum::<f64>()
                    .sqrt();
            if dist == 0.0 {
                continue;
            }
            let r = (a.phi - b.phi).abs() / dist;
            if r > max_ratio {
                max_ratio = r;
                worst_pair = Some((i, j));
            }
        }
    }
    let bound = c3 + 2.0 * hs.tolerance;
    LipschitzAudit {
        max_ratio,
        worst_pair,
        c2,
        c3,
        bound,
        pass: max_ratio <= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;
    use crate::monomial::MonomialIdeal;

    #[test]
    fn grid_is_on_hyperplane() {
        for d in 1..=4 {
            let g = hyperplane_grid(d, 1.0, 3);
            assert_eq!(g.len(), 3usize.pow(d as u32 - 1));
            for p in g {
                assert!(p.iter().sum::<f64>().abs() < 1e-12);
            }
        }
        assert_eq!(hyperplane_grid(2, 1.0, 1), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn constants() {
        let (c2, c3) = lipschitz_constants(2);
        assert_eq!(c2, 1.0);
        assert!((c3 - 0.5f64.sqrt()).abs() < 1e-12);
        let (_, c3) = lipschitz_constants(3);
        assert!((c3 - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn powers_of_maximal_ideal() {
        let f = FamilyEvaluator::new(FamilySpec::powers(MonomialIdeal::maximal(2))).unwrap();
        let hs = height_sample(&f, &hyperplane_grid(2, 2.0, 17), 512, 1e-3).unwrap();
        let origin = &hs.points[8];
        assert!((origin.height - 0.5f64.sqrt()).abs() <= 1e-3);
        assert!(hs.points.iter().all(|p| p.phi >= 0.0 && !p.unbounded));
        let audit = lipschitz_audit(&hs);
        assert!(audit.pass, "{audit:?}");
        let single = height_sample(&f, &[vec![0.0, 0.0]], 512, 1e-3).unwrap();
        assert!(lipschitz_audit(&single).pass);
    }

    #[test]
    fn bracket_of_maximal_ideal() {
        let f = FamilyEvaluator::new(FamilySpec::bracket(2, MonomialIdeal::maximal(2)).unwrap())
            .unwrap();
        let hs = height_sample(&f, &[vec![0.0, 0.0]], 64, 1e-3).unwrap();
        assert!((hs.points[0].phi - 1.0).abs() <= 1e-3);
    }
}
