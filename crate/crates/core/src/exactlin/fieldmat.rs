//! Dense matrices over a `FiniteField` and Gaussian elimination.
//!
//! Over prime fields the elimination keeps rows as unreduced `u64`
//! accumulators: every update adds at most (p-1)^2 < 2^32, so an entry only
//! needs reducing when it is read as a multiplier.

use super::field::{Elem, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Reduced row echelon form: pivot entries are 1 and pivot columns are
/// otherwise zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vec<Elem>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self, field: &FiniteField) -> Vec<Vec<Elem>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = field.neg(row[f]);
                }
                v
            })
            .collect()
    }

    /// Reduce `v` against the rows; the result vanishes on pivot columns.
    pub fn reduce(&self, field: &FiniteField, v: &mut [Elem]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                axpy(field, v, field.neg(c), row);
            }
        }
    }

    pub fn contains(&self, field: &FiniteField, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|&x| x == 0)
    }
}

/// dst += c * src
pub fn axpy(field: &FiniteField, dst: &mut [Elem], c: Elem, src: &[Elem]) {
    if c == 0 {
        return;
    }
    if field.is_prime_field() {
        let p = field.characteristic() as u64;
        let c = c as u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = ((*d as u64 + c * s as u64) % p) as Elem;
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = field.add(*d, field.mul(c, s));
        }
    }
}

pub fn dot(field: &FiniteField, a: &[Elem], b: &[Elem]) -> Elem {
    if field.is_prime_field() {
        let p = field.characteristic() as u64;
        let mut acc = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            acc += x as u64 * y as u64;
            if acc >= 1 << 62 {
                acc %= p;
            }
        }
        (acc % p) as Elem
    } else {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
    }
}

/// Scale so that the first nonzero entry is 1. Returns false for the zero
/// vector.
pub fn normalize(field: &FiniteField, v: &mut [Elem]) -> bool {
    let Some(&lead) = v.iter().find(|&&x| x != 0) else {
        return false;
    };
    if lead != 1 {
        let inv = field.inv(lead).unwrap();
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
    }
    true
}

/// Row echelon form of the given rows (each of length `cols`). With
/// `reduced` the result is the full RREF; otherwise rows are only
/// normalized and cleared below their pivots.
pub fn echelon(field: &FiniteField, rows: &[Vec<Elem>], cols: usize, reduced: bool) -> Echelon {
    if field.is_prime_field() {
        echelon_prime(field.characteristic() as u64, rows, cols, reduced)
    } else {
        echelon_generic(field, rows, cols, reduced)
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn echelon_prime(p: u64, rows: &[Vec<Elem>], nc: usize, reduced: bool) -> Echelon {
    let nr = rows.len();
    let mut a: Vec<u64> = Vec::with_capacity(nr * nc);
    for r in rows {
        debug_assert_eq!(r.len(), nc);
        a.extend(r.iter().map(|&x| x as u64));
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let mut found = None;
        for i in r..nr {
            let v = a[i * nc + c] % p;
            a[i * nc + c] = v;
            if v != 0 {
                found = Some(i);
                break;
            }
        }
        let Some(i) = found else { continue };
        if i != r {
            for j in c..nc {
                a.swap(i * nc + j, r * nc + j);
            }
        }
        let inv = inv_mod(a[r * nc + c], p);
        for j in c..nc {
            a[r * nc + j] = (a[r * nc + j] % p) * inv % p;
        }
        let (head, tail) = a.split_at_mut((r + 1) * nc);
        let prow = &head[r * nc + c + 1..r * nc + nc];
        for i in 0..nr - r - 1 {
            let row = &mut tail[i * nc..(i + 1) * nc];
            let f = row[c] % p;
            row[c] = 0;
            if f == 0 {
                continue;
            }
            let m = p - f;
            for (d, &s) in row[c + 1..].iter_mut().zip(prow) {
                *d += m * s;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = r;
    a.truncate(rank * nc);
    if reduced {
        for k in (0..rank).rev() {
            let pc = pivots[k];
            for j in pc..nc {
                a[k * nc + j] %= p;
            }
            let (head, tail) = a.split_at_mut(k * nc);
            let prow = &tail[pc + 1..nc];
            for i in 0..k {
                let row = &mut head[i * nc..(i + 1) * nc];
                let f = row[pc] % p;
                row[pc] = 0;
                if f == 0 {
                    continue;
                }
                let m = p - f;
                for (d, &s) in row[pc + 1..].iter_mut().zip(prow) {
                    *d += m * s;
                }
            }
        }
    }
    let rows = (0..rank)
        .map(|k| a[k * nc..(k + 1) * nc].iter().map(|&x| (x % p) as Elem).collect())
        .collect();
    Echelon { cols: nc, rows, pivots }
}

fn echelon_generic(field: &FiniteField, rows: &[Vec<Elem>], nc: usize, reduced: bool) -> Echelon {
    let mut a: Vec<Vec<Elem>> = rows.to_vec();
    let nr = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(i) = (r..nr).find(|&i| a[i][c] != 0) else { continue };
        a.swap(i, r);
        let inv = field.inv(a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || (!reduced && i < r) {
                continue;
            }
            let f = row[c];
            if f != 0 {
                axpy(field, row, field.neg(f), &prow);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { cols: nc, rows: a, pivots }
}

impl FieldMatrix {
    pub fn new(field: &FiniteField, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        assert!(data.iter().all(|&x| x < field.order()), "entries must be reduced");
        FieldMatrix { field: field.clone(), rows, cols, data }
    }

    pub fn zeros(field: &FiniteField, rows: usize, cols: usize) -> Self {
        FieldMatrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &FiniteField, rows: &[Vec<Elem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Elem> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(field, rows.len(), cols, data)
    }

    pub fn from_ints(field: &FiniteField, rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<Elem>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Self::from_rows(field, &conv)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        assert!(v < self.field.order());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows);
        let ot = other.transpose();
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.data[i * other.cols + j] = dot(&self.field, self.row(i), ot.row(j));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows).map(|i| dot(&self.field, self.row(i), v)).collect()
    }

    pub fn echelon(&self, reduced: bool) -> Echelon {
        echelon(&self.field, &self.to_rows(), self.cols, reduced)
    }

    pub fn rank(&self) -> usize {
        self.echelon(false).rank()
    }

    /// (rank, basis of the right kernel)
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Elem>>) {
        let e = self.echelon(true);
        (e.rank(), e.kernel(&self.field))
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Elem {
        assert_eq!(self.rows, self.cols);
        let f = &self.field;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = 1;
        for c in 0..n {
            let Some(i) = (c..n).find(|&i| a[i][c] != 0) else { return 0 };
            if i != c {
                a.swap(i, c);
                det = f.neg(det);
            }
            det = f.mul(det, a[c][c]);
            let inv = f.inv(a[c][c]).unwrap();
            let prow = a[c].clone();
            for row in a.iter_mut().skip(c + 1) {
                let m = f.neg(f.mul(row[c], inv));
                axpy(f, row, m, &prow);
            }
        }
        det
    }
}
