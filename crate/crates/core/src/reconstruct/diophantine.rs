use num_traits::{One, Zero};

use crate::Rational;

/// Every multiset `{n₁ ≤ … ≤ n_k}` of positive integers at most `cap` with
/// `Σ 1/nᵢ = r`, in lexicographic order.
pub fn solve_reciprocal_diophantine(k: usize, r: &Rational, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    search(k, r.clone(), 1, cap, &mut cur, &mut out);
    out
}

fn search(k: usize, r: Rational, min: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == 0 {
        if r.is_zero() {
            out.push(cur.clone());
        }
        return;
    }
    if r <= Rational::zero() {
        return;
    }
    // 1/n ≤ r, and the k remaining terms are each at most 1/n: k/n ≥ r
    let lo = ceil_div_recip(&r).max(min);
    let hi = floor_k_over(k, &r).min(cap);
    for n in lo..=hi {
        cur.push(n);
        let rest = r.clone() - Rational::new(One::one(), n.into());
        search(k - 1, rest, n, cap, cur, out);
        cur.pop();
    }
}

/// Smallest `n ≥ 1` with `1/n ≤ r`.
fn ceil_div_recip(r: &Rational) -> usize {
    let inv = r.recip();
    let c = inv.ceil().to_integer();
    usize::try_from(c).unwrap_or(usize::MAX).max(1)
}

/// Largest `n` with `k/n ≥ r`.
fn floor_k_over(k: usize, r: &Rational) -> usize {
    let v = Rational::from_integer(k.into()) / r;
    usize::try_from(v.floor().to_integer()).unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(solve_reciprocal_diophantine(2, &q(5, 4), 100), vec![vec![1, 4]]);
        assert_eq!(solve_reciprocal_diophantine(3, &q(7, 3), 100), vec![vec![1, 1, 3]]);
        assert_eq!(solve_reciprocal_diophantine(1, &q(1, 7), 100), vec![vec![7]]);
        assert!(solve_reciprocal_diophantine(1, &q(1, 7), 6).is_empty());
        assert_eq!(
            solve_reciprocal_diophantine(3, &q(1, 1), 10),
            vec![vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]]
        );
        assert!(solve_reciprocal_diophantine(2, &q(3, 1), 10).is_empty());
    }
}
