//! Integer solutions of linear systems by column Hermite reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// x = particular + Σ cᵢ·lattice_basis[i], cᵢ ∈ Z, describes every integer
/// solution. `particular` is `None` when there is no integer solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSolution {
    pub particular: Option<Vec<i64>>,
    pub lattice_basis: Vec<Vec<i64>>,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    // keep the current column untouched when it already divides the other
    if !a.is_zero() && b.is_multiple_of(a) {
        return (a.abs(), a.signum(), BigInt::zero());
    }
    let e = a.extended_gcd(b);
    let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
    if g.is_negative() {
        g = -g;
        s = -s;
        t = -t;
    }
    (g, s, t)
}

/// Solve A·x = b over the integers. Panics if A is empty or ragged, or if a
/// returned entry does not fit in i64.
pub fn integer_solve_affine(a: &[Vec<i64>], b: &[i64]) -> AffineSolution {
    let m = a.len();
    assert!(m > 0 && b.len() == m, "system must be nonempty with matching right-hand side");
    let n = a[0].len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n), "ragged matrix");
    let mut h: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // pivot_row[k] = row holding the pivot of column k
    let mut pivot_row = Vec::new();
    let mut col = 0;
    for i in 0..m {
        if col == n {
            break;
        }
        for j in col + 1..n {
            if h[i][j].is_zero() {
                continue;
            }
            let (x, y) = (h[i][col].clone(), h[i][j].clone());
            let (g, s, t) = ext_gcd(&x, &y);
            let (xg, yg) = (&x / &g, &y / &g);
            // [c_col, c_j] <- [s c_col + t c_j, -y/g c_col + x/g c_j]
            for r in h.iter_mut().chain(u.iter_mut()) {
                let (cc, cj) = (r[col].clone(), r[j].clone());
                r[col] = &s * &cc + &t * &cj;
                r[j] = &xg * &cj - &yg * &cc;
            }
        }
        if !h[i][col].is_zero() {
            if h[i][col].is_negative() {
                for r in h.iter_mut().chain(u.iter_mut()) {
                    r[col] = -r[col].clone();
                }
            }
            pivot_row.push(i);
            col += 1;
        }
    }
    let rank = col;
    let to_i64 = |v: Vec<BigInt>| -> Vec<i64> {
        v.into_iter().map(|x| x.to_i64().expect("solution entry overflows i64")).collect()
    };
    let mut lattice_basis: Vec<Vec<i64>> =
        (rank..n).map(|k| to_i64((0..n).map(|r| u[r][k].clone()).collect())).collect();
    for v in lattice_basis.iter_mut() {
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let mut y = vec![BigInt::zero(); n];
    let mut k = 0;
    for i in 0..m {
        let mut res = BigInt::from(b[i]);
        for c in 0..k {
            res -= &h[i][c] * &y[c];
        }
        if k < rank && pivot_row[k] == i {
            let (q, r) = res.div_rem(&h[i][k]);
            if !r.is_zero() {
                return AffineSolution { particular: None, lattice_basis };
            }
            y[k] = q;
            k += 1;
        } else if !res.is_zero() {
            return AffineSolution { particular: None, lattice_basis };
        }
    }
    let x: Vec<BigInt> =
        (0..n).map(|r| (0..rank).fold(BigInt::zero(), |acc, c| acc + &u[r][c] * &y[c])).collect();
    AffineSolution { particular: Some(to_i64(x)), lattice_basis }
}
