//! Row echelon (Hermite) bases of integer lattices.
//!
//! Pivots sit at the *last* nonzero coordinate of each row. Rows are ordered
//! by descending pivot, pivots are positive, and the entries above each pivot
//! are reduced into `[0, pivot)`. The basis is thereby canonical for the lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

struct Reducer {
    rows: Vec<Vec<BigInt>>,
    // transform T with T · input = rows, and its inverse
    t: Option<(IntMatrix, IntMatrix)>,
}

impl Reducer {
    fn swap(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
        if let Some((t, ti)) = &mut self.t {
            t.swap_rows(a, b);
            ti.swap_cols(a, b);
        }
    }

    /// row[dst] += q · row[src]
    fn add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_row = self.rows[src].clone();
        for (x, s) in self.rows[dst].iter_mut().zip(&src_row) {
            *x += s * q;
        }
        if let Some((t, ti)) = &mut self.t {
            t.add_row_multiple(dst, src, q);
            ti.add_col_multiple(src, dst, &-q);
        }
    }

    fn negate(&mut self, i: usize) {
        for x in &mut self.rows[i] {
            *x = -std::mem::take(x);
        }
        if let Some((t, ti)) = &mut self.t {
            t.negate_row(i);
            ti.negate_col(i);
        }
    }

    fn run(&mut self, dim: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in (0..dim).rev() {
            loop {
                let nonzero: Vec<usize> = (r..self.rows.len())
                    .filter(|&i| !self.rows[i][col].is_zero())
                    .collect();
                let Some(&p) = nonzero.iter().min_by_key(|&&i| self.rows[i][col].abs()) else {
                    break;
                };
                self.swap(r, p);
                if nonzero.len() == 1 {
                    break;
                }
                for i in r + 1..self.rows.len() {
                    if !self.rows[i][col].is_zero() {
                        let q = &self.rows[i][col] / &self.rows[r][col];
                        self.add(i, r, &-q);
                    }
                }
            }
            if r < self.rows.len() && !self.rows[r][col].is_zero() {
                if self.rows[r][col].is_negative() {
                    self.negate(r);
                }
                for i in 0..r {
                    let q = self.rows[i][col].div_floor(&self.rows[r][col]);
                    self.add(i, r, &-q);
                }
                pivots.push(col);
                r += 1;
            }
        }
        pivots
    }
}

impl Echelon {
    /// Echelon basis of the lattice spanned by `vectors` in `ℤ^dim`.
    pub fn new(dim: usize, vectors: &[Vec<BigInt>]) -> Self {
        let mut red = Reducer {
            rows: vectors.to_vec(),
            t: None,
        };
        let pivots = red.run(dim);
        red.rows.truncate(pivots.len());
        Echelon {
            dim,
            rows: red.rows,
            pivots,
        }
    }

    /// Like [`Echelon::new`], also returning `T` and `T⁻¹` with
    /// `T · vectors = rows` (the trailing rows of `T · vectors` are zero).
    pub fn with_transform(dim: usize, vectors: &[Vec<BigInt>]) -> (Self, IntMatrix, IntMatrix) {
        let k = vectors.len();
        let mut red = Reducer {
            rows: vectors.to_vec(),
            t: Some((IntMatrix::identity(k), IntMatrix::identity(k))),
        };
        let pivots = red.run(dim);
        red.rows.truncate(pivots.len());
        let (t, ti) = red.t.unwrap();
        (
            Echelon {
                dim,
                rows: red.rows,
                pivots,
            },
            t,
            ti,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= r * &q;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let (q, rem) = v[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x -= r * &q;
            }
            coords.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn canonical_basis() {
        let a = Echelon::new(2, &vecs(&[&[2, 4], &[1, 3]]));
        let b = Echelon::new(2, &vecs(&[&[1, 3], &[3, 7], &[0, 0]]));
        // both span the lattice of determinant 2
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[1, 0]);
        assert_eq!(a.rows()[1][0], BigInt::from(2));
    }

    #[test]
    fn sign_normalised_on_last_coordinate() {
        let e = Echelon::new(2, &vecs(&[&[1, -1]]));
        assert_eq!(e.rows(), &vecs(&[&[-1, 1]])[..]);
    }

    #[test]
    fn membership_and_coordinates() {
        let e = Echelon::new(3, &vecs(&[&[1, 0, 2], &[0, 3, 0]]));
        let v = vecs(&[&[2, -3, 4]]).remove(0);
        let c = e.coordinates(&v).unwrap();
        let mut back = vec![BigInt::zero(); 3];
        for (row, k) in e.rows().iter().zip(&c) {
            for (b, r) in back.iter_mut().zip(row) {
                *b += r * k;
            }
        }
        assert_eq!(back, v);
        assert!(!e.contains(&vecs(&[&[0, 1, 0]])[0]));
    }

    #[test]
    fn transform_maps_input_to_rows() {
        let input = vecs(&[&[4, 6, 1], &[2, 2, 0], &[6, 8, 1]]);
        let (e, t, ti) = Echelon::with_transform(3, &input);
        assert_eq!(t.mul(&ti), IntMatrix::identity(3));
        let m = IntMatrix::from_rows(3, input);
        let tm = t.mul(&m);
        for (i, row) in e.rows().iter().enumerate() {
            assert_eq!(tm.row(i), &row[..]);
        }
        for i in e.rank()..3 {
            assert!(tm.row(i).iter().all(Zero::is_zero));
        }
    }
}
