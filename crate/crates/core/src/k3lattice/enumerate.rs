//! All classes of given degree and square.
//!
//! Solutions of D·L = d form a coset x0 + K·y. On it the form is
//! f(y) = yᵀQy + 2cᵀy + f0 with Q = KᵀGK negative definite (K spans part of
//! L^⊥), so f(y) = s is a bounded ellipsoid in y. Bounds come from an
//! LDLᵀ factorization in floating point, padded, and every candidate is
//! re-checked in exact integer arithmetic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DivisorClass, PolarizedLattice, Result};
use crate::exactlin::integer_solve_affine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// every class in the slice
    Any,
    /// classes accepted by `PolarizedLattice::is_oriented`
    Effective,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub degree: i64,
    pub square: i64,
    pub orientation: Orientation,
    pub classes: Vec<DivisorClass>,
    pub complete: bool,
}

impl CensusResult {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

struct Ellipsoid {
    n: usize,
    center: Vec<f64>,
    diag: Vec<f64>,
    // unit upper-triangular factor, row-major n×n
    upper: Vec<f64>,
    radius: f64,
}

pub fn enumerate_slice(pl: &PolarizedLattice, degree: i64, square: i64, orient: Orientation) -> Result<CensusResult> {
    pl.require_hyperbolic()?;
    let mut classes = slice_classes(pl, degree, square);
    if orient == Orientation::Effective {
        classes.retain(|x| pl.is_oriented(x));
    }
    classes.sort();
    Ok(CensusResult { degree, square, orientation: orient, classes, complete: true })
}

/// Unfiltered, unsorted slice. Caller guarantees hyperbolicity.
pub(crate) fn slice_classes(pl: &PolarizedLattice, d: i64, s: i64) -> Vec<DivisorClass> {
    let l2 = pl.l_squared();
    // Hodge index: s·L² ≤ d²
    if (s as i128) * (l2 as i128) > (d as i128) * (d as i128) {
        return Vec::new();
    }
    let lat = pl.lattice();
    let r = pl.rank();
    let a = lat.dual_of(pl.polarization().coords());
    let sol = integer_solve_affine(&[a], &[d]);
    let Some(x0) = sol.particular else { return Vec::new() };
    let k = sol.lattice_basis;
    let n = k.len();
    let exact = |y: &[i64]| -> Option<DivisorClass> {
        let x: Vec<i64> = (0..r).map(|i| x0[i] + (0..n).map(|j| k[j][i] * y[j]).sum::<i64>()).collect();
        (lat.pairing_unchecked(&x, &x) == s).then_some(DivisorClass(x))
    };
    if n == 0 {
        return exact(&[]).into_iter().collect();
    }
    let Some(ell) = ellipsoid(pl, &x0, &k, s) else { return Vec::new() };
    let top = n - 1;
    let (lo, hi) = bounds(&ell, top, &[], 0.0);
    (lo..=hi)
        .into_par_iter()
        .flat_map_iter(|yt| {
            let mut out = Vec::new();
            let mut y = vec![0i64; n];
            y[top] = yt;
            let zt = yt as f64 - ell.center[top];
            let used = ell.diag[top] * zt * zt;
            recurse(&ell, top, &mut y, used, &mut |y| {
                if let Some(c) = exact(y) {
                    out.push(c);
                }
            });
            out.into_iter()
        })
        .collect()
}

fn ellipsoid(pl: &PolarizedLattice, x0: &[i64], k: &[Vec<i64>], s: i64) -> Option<Ellipsoid> {
    let lat = pl.lattice();
    let n = k.len();
    // P = -KᵀGK, c = KᵀGx0
    let gk: Vec<Vec<i64>> = k.iter().map(|v| lat.dual_of(v)).collect();
    let mut p = vec![0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            p[i * n + j] = -(gk[i].iter().zip(&k[j]).map(|(a, b)| a * b).sum::<i64>() as f64);
        }
    }
    let c: Vec<f64> = gk.iter().map(|g| g.iter().zip(x0).map(|(a, b)| a * b).sum::<i64>() as f64).collect();
    let f0 = lat.pairing_unchecked(x0, x0) as f64;
    // LDLᵀ with P = Uᵀ D U
    let mut diag = vec![0f64; n];
    let mut upper = vec![0f64; n * n];
    for i in 0..n {
        let mut di = p[i * n + i];
        for t in 0..i {
            di -= upper[t * n + i] * upper[t * n + i] * diag[t];
        }
        assert!(di > 0.0, "form is not negative definite on the degree slice");
        diag[i] = di;
        upper[i * n + i] = 1.0;
        for j in i + 1..n {
            let mut v = p[i * n + j];
            for t in 0..i {
                v -= upper[t * n + i] * upper[t * n + j] * diag[t];
            }
            upper[i * n + j] = v / di;
        }
    }
    // center y* = P⁻¹c: solve Uᵀ D U y = c
    let mut w = c.clone();
    for i in 0..n {
        for t in 0..i {
            w[i] -= upper[t * n + i] * w[t];
        }
    }
    for i in 0..n {
        w[i] /= diag[i];
    }
    let mut center = w;
    for i in (0..n).rev() {
        for j in i + 1..n {
            center[i] -= upper[i * n + j] * center[j];
        }
    }
    let cy: f64 = c.iter().zip(&center).map(|(a, b)| a * b).sum();
    let radius = f0 - s as f64 + cy;
    let tol = 1e-7 * (1.0 + radius.abs());
    if radius < -tol {
        return None;
    }
    Some(Ellipsoid { n, center, diag, upper, radius: radius.max(0.0) + tol })
}

/// Integer range for coordinate i given already fixed coordinates i+1..n.
fn bounds(ell: &Ellipsoid, i: usize, y: &[i64], used: f64) -> (i64, i64) {
    let n = ell.n;
    let mut shift = 0.0;
    for j in i + 1..n {
        shift += ell.upper[i * n + j] * (y[j] as f64 - ell.center[j]);
    }
    let rem = ell.radius - used;
    if rem < 0.0 {
        return (1, 0);
    }
    let w = (rem / ell.diag[i]).sqrt() + 1e-7;
    let mid = ell.center[i] - shift;
    ((mid - w).ceil() as i64, (mid + w).floor() as i64)
}

fn recurse(ell: &Ellipsoid, level: usize, y: &mut Vec<i64>, used: f64, emit: &mut dyn FnMut(&[i64])) {
    if level == 0 {
        emit(y);
        return;
    }
    let i = level - 1;
    let (lo, hi) = bounds(ell, i, y, used);
    let n = ell.n;
    for v in lo..=hi {
        y[i] = v;
        let mut t = v as f64 - ell.center[i];
        for j in i + 1..n {
            t += ell.upper[i * n + j] * (y[j] as f64 - ell.center[j]);
        }
        recurse(ell, i, y, used + ell.diag[i] * t * t, emit);
    }
    y[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k3lattice::{m6, n_lattice, u3, GramLattice};

    fn brute(pl: &PolarizedLattice, d: i64, s: i64, bound: i64) -> Vec<DivisorClass> {
        let r = pl.rank();
        let mut out = Vec::new();
        let mut x = vec![-bound; r];
        loop {
            let c = DivisorClass(x.clone());
            if pl.degree(&c) == d && pl.square(&c) == s {
                out.push(c);
            }
            let mut i = 0;
            while i < r && x[i] == bound {
                x[i] = -bound;
                i += 1;
            }
            if i == r {
                break;
            }
            x[i] += 1;
        }
        out.sort();
        out
    }

    #[test]
    fn u3_degree_three_isotropic() {
        let res = enumerate_slice(&u3(), 3, 0, Orientation::Any).unwrap();
        assert_eq!(res.classes, vec![DivisorClass(vec![0, 1]), DivisorClass(vec![1, -1])]);
        assert_eq!(res.classes, brute(&u3(), 3, 0, 10));
    }

    #[test]
    fn m6_degree_four_isotropic() {
        let res = enumerate_slice(&m6(), 4, 0, Orientation::Effective).unwrap();
        assert_eq!(res.count(), 5);
        assert!(res.classes.contains(&DivisorClass(vec![2, -1, -1, -1, -1])));
        let mut oracle = brute(&m6(), 4, 0, 4);
        oracle.retain(|x| m6().is_oriented(x));
        assert_eq!(res.classes, oracle);
    }

    #[test]
    fn hodge_exclusion() {
        let lat = GramLattice::unlabeled(vec![vec![2, 1], vec![1, -2]]).unwrap();
        let pl = PolarizedLattice::new(lat, DivisorClass(vec![1, 0]), DivisorClass(vec![1, 0])).unwrap();
        assert!(enumerate_slice(&pl, 1, 4, Orientation::Any).unwrap().classes.is_empty());
    }

    #[test]
    fn rank_one() {
        let lat = GramLattice::unlabeled(vec![vec![4]]).unwrap();
        let pl = PolarizedLattice::new(lat, DivisorClass(vec![1]), DivisorClass(vec![1])).unwrap();
        assert_eq!(enumerate_slice(&pl, 8, 16, Orientation::Any).unwrap().classes, vec![DivisorClass(vec![2])]);
        assert!(enumerate_slice(&pl, 6, 4, Orientation::Any).unwrap().classes.is_empty());
    }

    #[test]
    fn n3_matches_box() {
        let pl = n_lattice(3);
        for d in 0..8 {
            for s in [-4, -2, 0, 2, 4] {
                let got = enumerate_slice(&pl, d, s, Orientation::Any).unwrap().classes;
                assert_eq!(got, brute(&pl, d, s, 6), "d={d} s={s}");
            }
        }
    }

    #[test]
    fn not_hyperbolic() {
        let lat = GramLattice::unlabeled(vec![vec![2, 0], vec![0, 2]]).unwrap();
        let pl = PolarizedLattice::new(lat, DivisorClass(vec![1, 0]), DivisorClass(vec![1, 0])).unwrap();
        assert!(enumerate_slice(&pl, 1, 0, Orientation::Any).is_err());
    }
}
