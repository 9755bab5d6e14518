//! Inertia of symmetric forms by rational congruence diagonalization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rational::RationalMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn is_hyperbolic(&self) -> bool {
        self.n_plus == 1 && self.n_zero == 0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("matrix is not symmetric")]
pub struct NotSymmetric;

/// Signature of an integer symmetric matrix.
pub fn signature(g: &[Vec<i64>]) -> Result<Signature, NotSymmetric> {
    let n = g.len();
    if g.iter().any(|r| r.len() != n) {
        return Err(NotSymmetric);
    }
    if n == 0 {
        return Ok(Signature { n_plus: 0, n_minus: 0, n_zero: 0 });
    }
    if (0..n).any(|i| (0..i).any(|j| g[i][j] != g[j][i])) {
        return Err(NotSymmetric);
    }
    Ok(match signature_fraction_free(g) {
        Some(sig) => sig,
        None => signature_rational(&RationalMatrix::from_ints(g))?,
    })
}

/// Same reduction in i128 without fractions: after eliminating a pivot d
/// the remaining block is replaced by |d|·(Schur complement) divided by its
/// content, which has the same inertia. None on overflow.
fn signature_fraction_free(g: &[Vec<i64>]) -> Option<Signature> {
    let n = g.len();
    let mut a: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = Signature { n_plus: 0, n_minus: 0, n_zero: 0 };
    while !active.is_empty() {
        let scale;
        if let Some(pos) = active.iter().position(|&i| a[i][i] != 0) {
            let i = active.remove(pos);
            let d = a[i][i];
            if d > 0 {
                sig.n_plus += 1;
            } else {
                sig.n_minus += 1;
            }
            let mut next = a.clone();
            for &k in &active {
                for &l in &active {
                    next[k][l] = d.checked_mul(a[k][l])?.checked_sub(a[k][i].checked_mul(a[i][l])?)?;
                }
            }
            a = next;
            scale = d.signum();
        } else {
            let pair = active.iter().enumerate().find_map(|(x, &i)| {
                active[x + 1..].iter().find(|&&j| a[i][j] != 0).map(|&j| (i, j))
            });
            let Some((i, j)) = pair else {
                sig.n_zero += active.len();
                break;
            };
            active.retain(|&x| x != i && x != j);
            sig.n_plus += 1;
            sig.n_minus += 1;
            let b = a[i][j];
            let mut next = a.clone();
            for &k in &active {
                for &l in &active {
                    let cross = a[k][i].checked_mul(a[j][l])?.checked_add(a[k][j].checked_mul(a[i][l])?)?;
                    next[k][l] = b.checked_mul(a[k][l])?.checked_sub(cross)?;
                }
            }
            a = next;
            scale = b.signum();
        }
        let content = active.iter().flat_map(|&k| active.iter().map(move |&l| (k, l))).fold(0i128, |acc, (k, l)| {
            num_integer::gcd(acc, a[k][l])
        });
        let div = if content == 0 { scale } else { content * scale };
        for &k in &active {
            for &l in &active {
                a[k][l] /= div;
            }
        }
    }
    Some(sig)
}

/// Lagrange reduction: pivot on a nonzero diagonal entry when there is one,
/// otherwise split off a hyperbolic plane spanned by two basis vectors with
/// nonzero pairing.
pub fn signature_rational(m: &RationalMatrix) -> Result<Signature, NotSymmetric> {
    if !m.is_symmetric() {
        return Err(NotSymmetric);
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = Signature { n_plus: 0, n_minus: 0, n_zero: 0 };
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let i = active.remove(pos);
            let d = a[i][i].clone();
            if d.is_positive() {
                sig.n_plus += 1;
            } else {
                sig.n_minus += 1;
            }
            for &k in &active {
                if a[k][i].is_zero() {
                    continue;
                }
                let f = &a[k][i] / &d;
                for &l in &active {
                    let t = &f * &a[i][l];
                    a[k][l] -= t;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j))
        });
        let Some((i, j)) = pair else {
            sig.n_zero += active.len();
            break;
        };
        active.retain(|&x| x != i && x != j);
        sig.n_plus += 1;
        sig.n_minus += 1;
        // Schur complement of [[0,b],[b,0]]
        let b = a[i][j].clone();
        let updates: Vec<(usize, usize, BigRational)> = active
            .iter()
            .flat_map(|&k| active.iter().map(move |&l| (k, l)))
            .map(|(k, l)| {
                let t = (&a[k][i] * &a[j][l] + &a[k][j] * &a[i][l]) / &b;
                (k, l, t)
            })
            .collect();
        for (k, l, t) in updates {
            a[k][l] -= t;
        }
    }
    Ok(sig)
}

/// Convenience for tests and reports: integer matrix product Bᵀ G B.
pub fn congruent(g: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut gb = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                gb[i][j] += BigInt::from(g[i][k]) * b[k][j];
            }
        }
    }
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let s: BigInt = (0..n).map(|k| BigInt::from(b[k][i]) * &gb[k][j]).sum();
                    i64::try_from(s).expect("congruent matrix entry overflows i64")
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(g: &[Vec<i64>]) -> (usize, usize, usize) {
        let s = signature(g).unwrap();
        (s.n_plus, s.n_minus, s.n_zero)
    }

    #[test]
    fn small_forms() {
        assert_eq!(sig(&[vec![6, 3], vec![3, 0]]), (1, 1, 0));
        assert_eq!(sig(&[vec![0, 0], vec![0, 0]]), (0, 0, 2));
        assert_eq!(sig(&[vec![0, 1], vec![1, 0]]), (1, 1, 0));
        let mut d = vec![vec![0i64; 5]; 5];
        d[0][0] = 2;
        for i in 1..5 {
            d[i][i] = -2;
        }
        assert_eq!(sig(&d), (1, 4, 0));
        assert!(signature(&[vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn hyperbolic_block_inside_larger_form() {
        // zero diagonal throughout: a scaled A_3-type all-ones off-diagonal form
        let g = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        // eigenvalues 2, -1, -1
        assert_eq!(sig(&g), (1, 2, 0));
        let g = vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 0]];
        assert_eq!(sig(&g), (1, 1, 2));
    }

    #[test]
    fn integer_path_matches_rational_path() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.random_range(1..=7usize);
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    // sparse diagonal so the hyperbolic branch is exercised
                    let v = if i == j && rng.random_bool(0.6) { 0 } else { rng.random_range(-4..=4) };
                    g[i][j] = v;
                    g[j][i] = v;
                }
            }
            let fast = signature_fraction_free(&g).unwrap();
            let slow = signature_rational(&RationalMatrix::from_ints(&g)).unwrap();
            assert_eq!(fast, slow, "{g:?}");
        }
    }
}
