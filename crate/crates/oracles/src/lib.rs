//! Slow, independent reference computations used only by tests.
//!
//! Inputs are plain data (edge lists as `(origin, terminus)` index pairs,
//! row-major integer matrices) so nothing here shares code with `graphk`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Sparse = BTreeMap<(usize, i64), i64>;

/// Fraction-free (Bareiss) elimination; returns the determinant of a square matrix.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn minor(m: &[Vec<BigInt>], rows: &[usize], cols: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
        .collect();
    determinant(&sub)
}

/// `(rank, gcd of all rank-sized minors)` of an `rows × cols` matrix, by
/// enumerating every minor.
pub fn determinantal_divisor(m: &[Vec<BigInt>], cols: usize) -> (usize, BigInt) {
    let rows = m.len();
    for r in (1..=rows.min(cols)).rev() {
        let mut g = BigInt::zero();
        for rs in combinations(rows, r) {
            for cs in combinations(cols, r) {
                g = g.gcd(&minor(m, &rs, &cs));
            }
        }
        if !g.is_zero() {
            return (r, g);
        }
    }
    (0, BigInt::one())
}

/// Order of the torsion subgroup of `ℤ^rows / (column span of m)`.
pub fn cokernel_torsion_order(m: &[Vec<BigInt>], cols: usize) -> BigInt {
    determinantal_divisor(m, cols).1
}

/// Number of edge sequences `e₁…e_len` with `o(e₁) = from`, `t(e_len) = to`
/// and `t(eᵢ) = o(eᵢ₊₁)`, counted one at a time.
pub fn count_paths(edges: &[(usize, usize)], from: usize, to: usize, len: usize) -> u64 {
    if len == 0 {
        return u64::from(from == to);
    }
    edges
        .iter()
        .filter(|&&(o, _)| o == from)
        .map(|&(_, t)| count_paths(edges, t, to, len - 1))
        .sum()
}

/// `((1 − αβ) h)(y, n) = h(y, n) − Σ_{e: x → y} h(x, n − 1)`.
pub fn one_minus_alpha_beta(edges: &[(usize, usize)], h: &Sparse) -> Sparse {
    let mut out = h.clone();
    for (&(x, n), &c) in h {
        for &(o, t) in edges {
            if o == x {
                *out.entry((t, n + 1)).or_insert(0) -= c;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Searches every `h` supported on `relative × levels` with coefficients in
/// `[-bound, bound]` for one with `(1 − αβ) h = target`.
pub fn find_i_witness(
    edges: &[(usize, usize)],
    relative: &[usize],
    levels: RangeInclusive<i64>,
    bound: i64,
    target: &Sparse,
) -> Option<Sparse> {
    let slots: Vec<(usize, i64)> = levels
        .flat_map(|n| relative.iter().map(move |&x| (x, n)))
        .collect();
    let mut coeffs = vec![-bound; slots.len()];
    loop {
        let h: Sparse = slots
            .iter()
            .zip(&coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(&k, &c)| (k, c))
            .collect();
        if &one_minus_alpha_beta(edges, &h) == target {
            return Some(h);
        }
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return None;
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// `|det|` helper for comparisons against products of invariant factors.
pub fn abs_determinant(m: &[Vec<BigInt>]) -> BigInt {
    determinant(m).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&mat(&[&[2, 4], &[6, 8]])), BigInt::from(-8));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])),
            BigInt::from(-3)
        );
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(determinant(&[]), BigInt::one());
    }

    #[test]
    fn divisors() {
        // diag(2, 3) has cokernel ℤ/6
        assert_eq!(
            cokernel_torsion_order(&mat(&[&[2, 0], &[0, 3]]), 2),
            BigInt::from(6)
        );
        // column (2, 2): cokernel ℤ ⊕ ℤ/2
        assert_eq!(
            determinantal_divisor(&mat(&[&[2], &[2]]), 1),
            (1, BigInt::from(2))
        );
        assert_eq!(determinantal_divisor(&mat(&[&[0]]), 1), (0, BigInt::one()));
    }

    #[test]
    fn paths() {
        let two_loops = [(0, 0), (0, 0)];
        assert_eq!(count_paths(&two_loops, 0, 0, 3), 8);
        assert_eq!(count_paths(&[(0, 1)], 0, 1, 1), 1);
        assert_eq!(count_paths(&[(0, 1)], 1, 0, 1), 0);
        assert_eq!(count_paths(&[], 2, 2, 0), 1);
    }

    #[test]
    fn witness_search() {
        // one loop at 0: (1 − αβ)δ_{(0,0)} = δ_{(0,0)} − δ_{(0,1)}
        let target: Sparse = [((0, 0), 1), ((0, 1), -1)].into_iter().collect();
        let h = find_i_witness(&[(0, 0)], &[0], 0..=1, 2, &target).unwrap();
        assert_eq!(h, [((0, 0), 1)].into_iter().collect());
        let lone: Sparse = [((0, 0), 1)].into_iter().collect();
        assert!(find_i_witness(&[(0, 0)], &[0], -1..=1, 2, &lone).is_none());
    }
}
