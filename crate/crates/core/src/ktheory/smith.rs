//! Smith normal form with minimal-absolute-value pivoting.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

/// `U · A · Vt = D` with `U`, `Vt` unimodular and `D` rectangular diagonal,
/// `d₁ | d₂ | …`, all `dᵢ ≥ 0`. `u_inv` is the inverse of `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub vt: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The `min(rows, cols)` diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Some `x` with `A x = b`, if one exists over the integers.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let ub = self.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.vt.rows()];
        for (i, c) in ub.iter().enumerate() {
            if i < self.rank {
                let d = &self.d[(i, i)];
                if !(c % d).is_zero() {
                    return None;
                }
                y[i] = c / d;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(self.vt.mul_vec(&y))
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    vt: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.vt.swap_cols(a, b);
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_col_multiple(dst, src, q);
        self.vt.add_col_multiple(dst, src, q);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn min_abs_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn min_abs_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let consider = |i: usize, j: usize, best: &mut (usize, usize)| {
            let x = &self.d[(i, j)];
            let b = &self.d[*best];
            if !x.is_zero() && (b.is_zero() || x.abs() < b.abs()) {
                *best = (i, j);
            }
        };
        for i in t..self.d.rows() {
            consider(i, t, &mut best);
        }
        for j in t..self.d.cols() {
            consider(t, j, &mut best);
        }
        best
    }

    /// Clears row and column `t` around the pivot; returns false if a nonzero
    /// remainder was left behind.
    fn eliminate(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.d.rows() {
            if !self.d[(i, t)].is_zero() {
                let q = &self.d[(i, t)] / &self.d[(t, t)];
                self.add_row(i, t, &-q);
                clean &= self.d[(i, t)].is_zero();
            }
        }
        for j in t + 1..self.d.cols() {
            if !self.d[(t, j)].is_zero() {
                let q = &self.d[(t, j)] / &self.d[(t, t)];
                self.add_col(j, t, &-q);
                clean &= self.d[(t, j)].is_zero();
            }
        }
        clean
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = &self.d[(t, t)];
        (t + 1..self.d.rows())
            .find(|&i| (t + 1..self.d.cols()).any(|j| !(&self.d[(i, j)] % p).is_zero()))
    }
}

pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        vt: IntMatrix::identity(n),
    };
    let mut rank = 0;
    for t in 0..m.min(n) {
        let Some((pi, pj)) = w.min_abs_in_block(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            if !w.eliminate(t) {
                let (pi, pj) = w.min_abs_in_cross(t);
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            // pivot must divide the rest of the block for the divisibility chain
            match w.non_divisible_row(t) {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.d[(t, t)].is_negative() {
            w.negate_row(t);
        }
        rank += 1;
    }
    SmithDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        d: w.d,
        vt: w.vt,
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = smith(a);
        assert_eq!(s.u.mul(a).mul(&s.vt), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]));
        assert_eq!(s.d, IntMatrix::from_i64(2, 2, &[2, 0, 0, 4]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn divisibility_needs_a_fixup() {
        // diag(2, 3) is not in Smith form: gcd 1, product 6
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
    }

    #[test]
    fn empty_dimensions() {
        let s = check(&IntMatrix::zeros(3, 0));
        assert_eq!(s.rank, 0);
        assert_eq!(s.u, IntMatrix::identity(3));
        let s = check(&IntMatrix::zeros(0, 2));
        assert_eq!(s.vt, IntMatrix::identity(2));
    }

    #[test]
    fn solve_linear_system() {
        let a = IntMatrix::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]);
        let s = smith(&a);
        let b = vec![BigInt::from(6), BigInt::from(15)];
        let x = s.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        // 2x = 1 has no integer solution
        let s2 = smith(&IntMatrix::from_i64(1, 1, &[2]));
        assert!(s2.solve(&[BigInt::from(1)]).is_none());
    }
}
