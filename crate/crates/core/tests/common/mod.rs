//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use k3lab::exactlin::{Elem, FiniteField};
use k3lab::grassmann::{plucker_embed, PluckerSystem};
use k3lab::k3lattice::{DivisorClass, GramLattice, PolarizedLattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random even hyperbolic lattice of rank 2..=4 with L = e0 and h = L.
pub fn random_polarized(seed: u64) -> PolarizedLattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.random_range(2..=4usize);
        let mut g = vec![vec![0i64; n]; n];
        g[0][0] = 2 * rng.random_range(1..=3);
        for i in 1..n {
            g[i][i] = 2 * rng.random_range(-3..=0);
        }
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.random_range(-3..=3);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        let Ok(lat) = GramLattice::unlabeled(g) else { continue };
        if !lat.is_hyperbolic() {
            continue;
        }
        let l = DivisorClass::basis(n, 0);
        if let Ok(pl) = PolarizedLattice::new(lat, l.clone(), l) {
            return pl;
        }
    }
}

/// Box half-width containing every class with D·L = d and D² = s.
///
/// Q(D) = 2(D·L)²/L² − D² is positive definite on a hyperbolic lattice,
/// so |x_i| ≤ sqrt(Q(D)·(Q⁻¹)_ii).
pub fn box_bound(pl: &PolarizedLattice, d: i64, s: i64) -> i64 {
    let g = pl.lattice().gram();
    let n = g.len();
    let l2 = pl.l_squared() as f64;
    let gl: Vec<f64> = (0..n).map(|i| g[i][0] as f64).collect();
    let mut q: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| 2.0 * gl[i] * gl[j] / l2 - g[i][j] as f64).collect()).collect();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| q[a][c].abs().total_cmp(&q[b][c].abs())).unwrap();
        q.swap(c, p);
        inv.swap(c, p);
        let pv = q[c][c];
        for j in 0..n {
            q[c][j] /= pv;
            inv[c][j] /= pv;
        }
        for r in 0..n {
            if r != c {
                let f = q[r][c];
                for j in 0..n {
                    q[r][j] -= f * q[c][j];
                    inv[r][j] -= f * inv[c][j];
                }
            }
        }
    }
    let qd = 2.0 * (d * d) as f64 / l2 - s as f64;
    (0..n).map(|i| (qd * inv[i][i]).max(0.0).sqrt().floor() as i64 + 1).max().unwrap()
}

pub fn brute(pl: &PolarizedLattice, d: i64, s: i64, bound: i64) -> Vec<DivisorClass> {
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

/// Product of random elementary matrices; columns are the new basis.
pub fn random_unimodular(n: usize, rng: &mut ChaCha8Rng, steps: usize) -> Vec<Vec<i64>> {
    let mut b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        match rng.random_range(0..3) {
            0 if i != j => {
                let c = rng.random_range(-1..=1i64);
                for row in b.iter_mut() {
                    row[j] += c * row[i];
                }
            }
            1 => {
                for row in b.iter_mut() {
                    row.swap(i, j);
                }
            }
            _ => {
                for row in b.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
    }
    b
}

pub fn random_vec(f: &FiniteField, rng: &mut ChaCha8Rng, n: usize) -> Vec<Elem> {
    (0..n).map(|_| rng.random_range(0..f.order())).collect()
}

pub fn random_plane(f: &FiniteField, rng: &mut ChaCha8Rng, n: usize) -> (Vec<Elem>, Vec<Elem>) {
    let sys = PluckerSystem::new(n).unwrap();
    loop {
        let u = random_vec(f, rng, n);
        let v = random_vec(f, rng, n);
        if plucker_embed(&sys, f, &u, &v).is_ok() {
            return (u, v);
        }
    }
}

/// (q^n − 1)(q^{n−1} − 1) / ((q² − 1)(q − 1)), written as a product of
/// geometric sums to keep it independent of the library helper.
pub fn gaussian_binomial(n: u32, q: u128) -> u128 {
    let geo = |k: u32| (0..k).map(|e| q.pow(e)).sum::<u128>();
    geo(n) * geo(n - 1) / (geo(2) * geo(1))
}
