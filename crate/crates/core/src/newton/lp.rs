//! Exact phase-one simplex over the rationals.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Decides whether `{x >= 0 : A x = b}` is nonempty. Uses Bland's rule, so
/// it terminates on degenerate inputs.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for (row, bi) in a.iter().zip(b) {
        let flip = bi.is_negative();
        let mut r: Vec<BigRational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.resize(width, BigRational::zero());
        t.push(r);
        rhs.push(if flip { -bi.clone() } else { bi.clone() });
    }
    for (i, row) in t.iter_mut().enumerate() {
        row[n + i] = BigRational::from_integer(1.into());
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective: sum of artificials.
    let mut cost: Vec<BigRational> = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
    }
    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // Unbounded direction cannot occur for a nonnegative objective.
            break;
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        rhs[r] /= &piv;
        let prow = t[r].clone();
        let prhs = rhs[r].clone();
        for i in 0..m {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for (v, p) in t[i].iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
                rhs[i] -= &f * &prhs;
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
        basis[r] = enter;
    }
    (0..m).all(|i| basis[i] < n || rhs[i].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ratio, from_u64};

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn simple_systems() {
        // x + y = 1, x - y = 0 -> x = y = 1/2.
        assert!(feasible(
            &[vec![q(1), q(1)], vec![q(1), q(-1)]],
            &[q(1), q(0)]
        ));
        // x + y = -1 has no nonnegative solution.
        assert!(!feasible(&[vec![q(1), q(1)]], &[q(-1)]));
        // x = 1/2, x = 1/3 inconsistent.
        assert!(!feasible(
            &[vec![q(1)], vec![q(1)]],
            &[from_ratio(1, 2), from_ratio(1, 3)]
        ));
        assert!(feasible(&[vec![q(2), q(0)]], &[from_u64(3)]));
    }
}
