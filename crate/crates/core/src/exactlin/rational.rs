//! Exact rational matrices with fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    /// Panics unless `entries.len() == rows * cols` with both dimensions positive.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        assert_eq!(entries.len(), rows * cols);
        RationalMatrix { rows, cols, entries }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))))
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigRational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(BigRational::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Integer rows spanning the same row space: each row scaled by the lcm
    /// of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// (rank, kernel basis). The kernel basis has one vector per free column,
    /// with a 1 in that column.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<BigRational>>) {
        let (ech, pivots) = bareiss_echelon(self.integer_rows(), self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut kernel = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigRational::zero(); self.cols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut s = BigRational::zero();
                for j in pc + 1..self.cols {
                    if !v[j].is_zero() && !ech[r][j].is_zero() {
                        s += BigRational::from_integer(ech[r][j].clone()) * &v[j];
                    }
                }
                v[pc] = -s / BigRational::from_integer(ech[r][pc].clone());
            }
            kernel.push(v);
        }
        (pivots.len(), kernel)
    }

    pub fn rank(&self) -> usize {
        bareiss_echelon(self.integer_rows(), self.cols).1.len()
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let denom = (0..self.rows).fold(BigInt::one(), |acc, i| {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            acc * row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
        });
        BigRational::new(bareiss_det(self.integer_rows()), denom)
    }
}

/// Fraction-free echelon form. Every division by the previous pivot is exact.
fn bareiss_echelon(mut a: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nr = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nr {
            break;
        }
        let Some(i) = (r..nr).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(i, r);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            for j in c + 1..cols {
                let num = &prow[c] * &row[j] - &row[c] * &prow[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

fn bareiss_det(a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut a = a;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(i) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigInt::zero() };
        if i != c {
            a.swap(i, c);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let num = &a[c][c] * &a[i][j] - &a[i][c] * &a[c][j];
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    sign * prev
}

/// Exact integer determinant.
pub fn integer_det(m: &[Vec<i64>]) -> BigInt {
    let rows = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    bareiss_det(rows)
}

pub fn abs_is_one(x: &BigInt) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(RationalMatrix::identity(3).rank_kernel(), (3, vec![]));
        let (r, k) = RationalMatrix::zeros(2, 4).rank_kernel();
        assert_eq!(r, 0);
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn kernel_with_fractions() {
        let m = RationalMatrix::new(
            2,
            3,
            vec![q(1, 2), q(1, 3), q(1, 1), q(1, 4), q(1, 6), q(1, 2)],
        );
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_deficient_with_skipped_columns() {
        let m = RationalMatrix::from_ints(&[
            vec![0, 2, 4, 1, 3],
            vec![0, 1, 2, 5, 7],
            vec![0, 3, 6, 6, 10],
            vec![0, 0, 0, 9, 2],
        ]);
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 3);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(integer_det(&[vec![2, 1], vec![1, 1]]), BigInt::from(1));
        assert_eq!(integer_det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(integer_det(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
        let m = RationalMatrix::new(2, 2, vec![q(1, 2), q(0, 1), q(0, 1), q(2, 3)]);
        assert_eq!(m.det(), q(1, 3));
    }
}
