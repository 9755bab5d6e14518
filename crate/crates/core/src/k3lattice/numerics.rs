//! Rank bounds, moduli dimensions, Lazarsfeld–Mukai invariants and small
//! consistency checks.

use serde::{Deserialize, Serialize};

use super::{pattern_gram, DivisorClass, GramLattice, LatticeError, PolarizedLattice, Result};
use crate::exactlin::{integer_det, rational::abs_is_one, signature, signature::congruent};

/// Bordered pattern: corner 2g−2, border d, zero diagonal, off-diagonal `mutual`.
pub fn bordered_gram(g: i64, d: i64, mutual: i64, size: usize) -> Vec<Vec<i64>> {
    pattern_gram(size, 2 * g - 2, d, mutual)
}

/// Largest n for which the n×n bordered pattern is hyperbolic, searching
/// n = 1, 2, … up to 64.
pub fn max_admissible_size(g: i64, d: i64, mutual: i64) -> usize {
    let mut best = 0;
    for n in 1..=64 {
        let sig = signature(&bordered_gram(g, d, mutual, n)).expect("pattern is symmetric");
        if sig.n_plus == 1 && sig.n_zero == 0 && sig.n_minus == n - 1 {
            best = n;
        } else {
            break;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliDimensions {
    pub dim_f: i64,
    pub dim_p: i64,
}

/// (20 − rank, 20 − rank + g)
pub fn moduli_dimensions(lat: &GramLattice, g: i64) -> Result<ModuliDimensions> {
    let sig = lat.signature();
    if !sig.is_hyperbolic() {
        return Err(LatticeError::NotHyperbolic(sig));
    }
    let dim_f = 20 - lat.rank() as i64;
    Ok(ModuliDimensions { dim_f, dim_p: dim_f + g })
}

/// Parameter count for complete intersections of a rank-4 quadric cone and
/// a cubic in P⁴: quadric cones with a fixed vertex, cubics modulo the
/// quadric multiples, minus PGL(5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterCount {
    pub quadrics: i64,
    pub cubics: i64,
    pub group: i64,
    pub total: i64,
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn genus4_parameter_count() -> ParameterCount {
    let quadrics = binom(6, 2) - 1;
    let cubics = binom(7, 3) - 1 - 5;
    let group = 5 * 5 - 1;
    ParameterCount { quadrics, cubics, group, total: quadrics + cubics - group }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LmVerdict {
    StrictlySemistableWitness,
    UnstableWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LmInvariants {
    pub rank: i64,
    pub c1_sq: i64,
    pub c2: i64,
    pub chi: i64,
    pub mu_sub: i64,
    pub mu_bundle: i64,
    pub verdict: LmVerdict,
}

/// Numerical invariants of the Lazarsfeld–Mukai bundle of a g^r_d on a
/// curve in |L|, with the slope of the destabilizing L ⊗ E^* compared to
/// the bundle slope (L² / rank for rank 2).
pub fn lm_invariants(g: i64, d: i64, r: i64) -> Result<LmInvariants> {
    if r < 1 {
        return Err(LatticeError::HypothesisViolated(format!("index r = {r} must be at least 1")));
    }
    if d > g - 1 {
        return Err(LatticeError::HypothesisViolated(format!("degree {d} exceeds g - 1 = {}", g - 1)));
    }
    let rank = r + 1;
    let c1_sq = 2 * g - 2;
    let c2 = d;
    let chi = 2 * rank + (c1_sq - 2 * c2) / 2;
    let mu_sub = 2 * g - 2 - d;
    let mu_bundle = g - 1;
    let verdict = if mu_sub > mu_bundle { LmVerdict::UnstableWitness } else { LmVerdict::StrictlySemistableWitness };
    Ok(LmInvariants { rank, c1_sq, c2, chi, mu_sub, mu_bundle, verdict })
}

/// Bᵀ·G·B == expected. Columns of B are the new basis in old coordinates.
pub fn basis_change_check(lat: &GramLattice, b: &[Vec<i64>], expected: &GramLattice) -> Result<bool> {
    let n = lat.rank();
    if b.len() != n || b.iter().any(|r| r.len() != n) {
        return Err(LatticeError::DimensionMismatch { expected: n, got: b.len() });
    }
    if !abs_is_one(&integer_det(b)) {
        return Err(LatticeError::NotUnimodular);
    }
    Ok(congruent(lat.gram(), b) == expected.gram())
}

/// a²·b² ≤ (a·b)², for a² > 0.
pub fn hodge_index_check(pl: &PolarizedLattice, a: &DivisorClass, b: &DivisorClass) -> Result<bool> {
    let a2 = pl.lattice().square(a)?;
    let b2 = pl.lattice().square(b)?;
    let ab = pl.pairing(a, b)?;
    if a2 <= 0 {
        return Err(LatticeError::NotPositive(a2));
    }
    Ok((a2 as i128) * (b2 as i128) <= (ab as i128) * (ab as i128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k3lattice::{m6, n_lattice, u3};

    #[test]
    fn rank_bounds() {
        assert_eq!(max_admissible_size(8, 5, 2), 10);
        assert_eq!(max_admissible_size(6, 4, 2), 5);
        assert_eq!(max_admissible_size(4, 3, 3), 2);
        let s = signature(&bordered_gram(8, 5, 2, 11)).unwrap();
        assert!(s.n_plus >= 2);
        let s = signature(&bordered_gram(6, 4, 2, 6)).unwrap();
        assert!(s.n_plus + s.n_zero >= 2);
    }

    #[test]
    fn dimensions() {
        assert_eq!(moduli_dimensions(u3().lattice(), 4).unwrap(), ModuliDimensions { dim_f: 18, dim_p: 22 });
        assert_eq!(moduli_dimensions(m6().lattice(), 6).unwrap(), ModuliDimensions { dim_f: 15, dim_p: 21 });
        for i in 1..=9 {
            let d = moduli_dimensions(n_lattice(i).lattice(), 8).unwrap();
            assert_eq!((d.dim_f, d.dim_p), (19 - i as i64, 27 - i as i64));
        }
        let c = genus4_parameter_count();
        assert_eq!((c.quadrics, c.cubics, c.group, c.total), (14, 29, 24, 19));
    }

    #[test]
    fn lazarsfeld_mukai() {
        let a = lm_invariants(8, 5, 1).unwrap();
        assert_eq!((a.chi, a.verdict), (6, LmVerdict::UnstableWitness));
        let b = lm_invariants(6, 4, 1).unwrap();
        assert_eq!((b.chi, b.verdict), (5, LmVerdict::UnstableWitness));
        let c = lm_invariants(4, 3, 1).unwrap();
        assert_eq!((c.mu_sub, c.mu_bundle, c.verdict), (3, 3, LmVerdict::StrictlySemistableWitness));
        // 2·2 + (6 − 6)/2
        assert_eq!(c.chi, 4);
        assert!(lm_invariants(4, 4, 1).is_err());
    }

    #[test]
    fn basis_changes() {
        let m = m6();
        // columns: s0 = E1+E2+E3+E4−L, s_i = s0 − E_i
        let mut b = vec![vec![0i64; 5]; 5];
        for col in 0..5 {
            b[0][col] = -1;
            for row in 1..5 {
                b[row][col] = 1;
            }
            if col > 0 {
                b[col][col] = 0;
            }
        }
        let mut diag = vec![vec![0i64; 5]; 5];
        diag[0][0] = 2;
        for i in 1..5 {
            diag[i][i] = -2;
        }
        let expected = GramLattice::unlabeled(diag).unwrap();
        assert!(basis_change_check(m.lattice(), &b, &expected).unwrap());
        let id: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| i64::from(i == j)).collect()).collect();
        assert!(basis_change_check(m.lattice(), &id, m.lattice()).unwrap());
        let u = u3();
        let uu = GramLattice::unlabeled(vec![vec![0, 3], vec![3, 0]]).unwrap();
        assert!(basis_change_check(u.lattice(), &[vec![1, 0], vec![-1, 1]], &uu).unwrap());
        assert_eq!(basis_change_check(u.lattice(), &[vec![2, 0], vec![0, 1]], &uu), Err(LatticeError::NotUnimodular));
    }

    #[test]
    fn hodge_index() {
        let n = n_lattice(9);
        let l = DivisorClass::basis(10, 0);
        let e12 = DivisorClass::basis(10, 1).add(&DivisorClass::basis(10, 2));
        assert!(hodge_index_check(&n, &l, &e12).unwrap());
        assert!(hodge_index_check(&n, &l, &l).unwrap());
        assert!(hodge_index_check(&n, &l, &DivisorClass::zero(10)).unwrap());
        let e1_minus_e2 = DivisorClass::basis(10, 1).sub(&DivisorClass::basis(10, 2));
        assert_eq!(hodge_index_check(&n, &e1_minus_e2, &l), Err(LatticeError::NotPositive(-4)));
    }
}
