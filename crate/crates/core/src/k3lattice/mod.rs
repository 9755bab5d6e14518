//! Picard-lattice arithmetic: slice enumeration, ampleness / nef /
//! Brill–Noether certificates, pencil censuses and numeric bookkeeping.

mod certify;
mod enumerate;
mod fiber;
mod numerics;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{signature, Signature};

pub use certify::{
    certify_ample, certify_bn_general, certify_nef, pencil_census, Certificate, SliceBound, Status, SCHEMA,
    Witness,
};
pub use enumerate::{enumerate_slice, CensusResult, Orientation};
pub use fiber::{verify_fiber_chain_genus8, ChainStep, FiberChainReport};
pub use numerics::{
    basis_change_check, bordered_gram, genus4_parameter_count, hodge_index_check, lm_invariants,
    max_admissible_size, moduli_dimensions, LmInvariants, LmVerdict, ModuliDimensions,
    ParameterCount,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("diagonal entry {0} is odd")]
    OddDiagonal(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattice is not hyperbolic (signature {0:?})")]
    NotHyperbolic(Signature),
    #[error("class has odd square {0}")]
    OddSquare(i64),
    #[error("ampleness of the polarization is not certified")]
    AmplenessNotCertified,
    #[error("class is not isotropic (square {0})")]
    NotIsotropic(i64),
    #[error("class has non-positive degree {0}")]
    ZeroDegree(i64),
    #[error("class has non-positive square {0}")]
    NotPositive(i64),
    #[error("basis change is not unimodular")]
    NotUnimodular,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),
    #[error("unknown builtin lattice {0:?}")]
    UnknownBuiltin(String),
    #[error("arithmetic overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Integer coordinates in a lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DivisorClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * k).collect())
    }

    /// a·self + b·other
    pub fn combine(a: i64, x: &DivisorClass, b: i64, y: &DivisorClass) -> DivisorClass {
        x.scale(a).add(&y.scale(b))
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(v: Vec<i64>) -> Self {
        DivisorClass(v)
    }
}

/// Even symmetric integer form with basis labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
            if gram[i][i] % 2 != 0 {
                return Err(LatticeError::OddDiagonal(i));
            }
        }
        if labels.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, got: labels.len() });
        }
        Ok(GramLattice { gram, labels })
    }

    /// Labels default to x0, x1, …
    pub fn unlabeled(gram: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (0..gram.len()).map(|i| format!("x{i}")).collect();
        Self::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram).expect("gram matrix is symmetric by construction")
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.signature().is_hyperbolic()
    }

    fn check(&self, a: &DivisorClass) -> Result<()> {
        if a.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: a.len() });
        }
        Ok(())
    }

    pub fn pairing(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.pairing_unchecked(&a.0, &b.0))
    }

    pub fn square(&self, a: &DivisorClass) -> Result<i64> {
        self.pairing(a, a)
    }

    pub(crate) fn pairing_unchecked(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let rb: i128 = row.iter().zip(b).map(|(&g, &x)| g as i128 * x as i128).sum();
            acc += a[i] as i128 * rb;
        }
        i64::try_from(acc).expect("pairing overflows i64")
    }

    /// Row vector G·v, so that (G·v)·x = v·x.
    pub(crate) fn dual_of(&self, v: &[i64]) -> Vec<i64> {
        self.gram.iter().map(|row| row.iter().zip(v).map(|(g, x)| g * x).sum()).collect()
    }
}

/// A lattice with its polarization L and the orientation class h used to
/// decide which of ±X counts as effective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizedLattice {
    lattice: GramLattice,
    polarization: DivisorClass,
    reference_nef: DivisorClass,
}

impl PolarizedLattice {
    pub fn new(lattice: GramLattice, polarization: DivisorClass, reference_nef: DivisorClass) -> Result<Self> {
        lattice.check(&polarization)?;
        lattice.check(&reference_nef)?;
        let l2 = lattice.square(&polarization)?;
        let h2 = lattice.square(&reference_nef)?;
        let hl = lattice.pairing(&polarization, &reference_nef)?;
        if l2 < 2 || l2 % 2 != 0 {
            return Err(LatticeError::InvalidPolarization(format!("L^2 = {l2} must be even and at least 2")));
        }
        if h2 < 0 {
            return Err(LatticeError::InvalidPolarization(format!("h^2 = {h2} is negative")));
        }
        if hl <= 0 {
            return Err(LatticeError::InvalidPolarization(format!("h.L = {hl} is not positive")));
        }
        Ok(PolarizedLattice { lattice, polarization, reference_nef })
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn polarization(&self) -> &DivisorClass {
        &self.polarization
    }

    pub fn reference_nef(&self) -> &DivisorClass {
        &self.reference_nef
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn l_squared(&self) -> i64 {
        self.lattice.pairing_unchecked(&self.polarization.0, &self.polarization.0)
    }

    pub fn genus(&self) -> i64 {
        self.l_squared() / 2 + 1
    }

    pub fn degree(&self, x: &DivisorClass) -> i64 {
        self.lattice.pairing_unchecked(&self.polarization.0, &x.0)
    }

    pub fn pairing(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.lattice.pairing(a, b)
    }

    pub fn square(&self, a: &DivisorClass) -> i64 {
        self.lattice.pairing_unchecked(&a.0, &a.0)
    }

    /// X·h > 0, or X·h = 0 and X·L ≥ 0 with X ≠ 0. On h^⊥ the sign is
    /// decided by L, so a class orthogonal to both counts in both signs.
    pub fn is_oriented(&self, x: &DivisorClass) -> bool {
        let xh = self.lattice.pairing_unchecked(&self.reference_nef.0, &x.0);
        xh > 0 || (xh == 0 && self.degree(x) >= 0 && !x.is_zero())
    }

    pub fn require_hyperbolic(&self) -> Result<()> {
        let sig = self.lattice.signature();
        if sig.is_hyperbolic() {
            Ok(())
        } else {
            Err(LatticeError::NotHyperbolic(sig))
        }
    }

    /// Express the data in a new basis: columns of `b` are the new basis
    /// vectors in old coordinates.
    pub fn change_basis(&self, b: &[Vec<i64>]) -> Result<PolarizedLattice> {
        let n = self.rank();
        if b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(LatticeError::DimensionMismatch { expected: n, got: b.len() });
        }
        let det = crate::exactlin::integer_det(b);
        if !crate::exactlin::rational::abs_is_one(&det) {
            return Err(LatticeError::NotUnimodular);
        }
        let gram = crate::exactlin::signature::congruent(self.lattice.gram(), b);
        let inv = integer_inverse(b);
        let map = |x: &DivisorClass| -> DivisorClass {
            DivisorClass((0..n).map(|i| (0..n).map(|j| inv[i][j] * x.0[j]).sum()).collect())
        };
        let lattice = GramLattice::new(gram, self.lattice.labels.clone())?;
        PolarizedLattice::new(lattice, map(&self.polarization), map(&self.reference_nef))
    }

    /// Old coordinates of a class given in the basis `b`.
    pub fn pull_back(b: &[Vec<i64>], x: &DivisorClass) -> DivisorClass {
        let n = b.len();
        DivisorClass((0..n).map(|i| (0..n).map(|j| b[i][j] * x.0[j]).sum()).collect())
    }
}

/// Inverse of a unimodular integer matrix: column j solves B·x = e_j,
/// read off the kernel of [B | -e_j].
fn integer_inverse(b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    use crate::exactlin::RationalMatrix;
    use num_traits::ToPrimitive;
    let n = b.len();
    let mut inv = vec![vec![0i64; n]; n];
    for j in 0..n {
        let mut rows: Vec<Vec<i64>> = b.to_vec();
        for (i, row) in rows.iter_mut().enumerate() {
            row.push(if i == j { -1 } else { 0 });
        }
        let (_, ker) = RationalMatrix::from_ints(&rows).rank_kernel();
        let v = &ker[0];
        for i in 0..n {
            inv[i][j] = (&v[i] / &v[n]).to_integer().to_i64().expect("inverse entry overflows i64");
        }
    }
    inv
}

pub const BUILTIN_NAMES: [&str; 11] = ["U3", "M6", "N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8", "N9"];

/// Pattern Gram matrix: corner c, border d, zero diagonal, off-diagonal m.
pub(crate) fn pattern_gram(size: usize, corner: i64, border: i64, mutual: i64) -> Vec<Vec<i64>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| match (i, j) {
                    (0, 0) => corner,
                    (0, _) | (_, 0) => border,
                    _ if i == j => 0,
                    _ => mutual,
                })
                .collect()
        })
        .collect()
}

/// Genus-4 lattice in the basis {L, E}, polarized and oriented by L.
pub fn u3() -> PolarizedLattice {
    let lat = GramLattice::new(vec![vec![6, 3], vec![3, 0]], vec!["L".into(), "E".into()]).unwrap();
    PolarizedLattice::new(lat, DivisorClass(vec![1, 0]), DivisorClass(vec![1, 0])).unwrap()
}

/// Genus-6 lattice in the basis {L, E1..E4}, oriented by s0 = E1+…+E4−L.
pub fn m6() -> PolarizedLattice {
    let labels = ["L", "E1", "E2", "E3", "E4"].iter().map(|s| s.to_string()).collect();
    let lat = GramLattice::new(pattern_gram(5, 10, 4, 2), labels).unwrap();
    PolarizedLattice::new(lat, DivisorClass(vec![1, 0, 0, 0, 0]), DivisorClass(vec![-1, 1, 1, 1, 1])).unwrap()
}

/// Genus-8 lattice of rank i+1 in the basis {L, E1..Ei}, oriented by L.
pub fn n_lattice(i: usize) -> PolarizedLattice {
    assert!((1..=9).contains(&i), "N_i is defined for 1 <= i <= 9");
    let mut labels = vec!["L".to_string()];
    labels.extend((1..=i).map(|k| format!("E{k}")));
    let lat = GramLattice::new(pattern_gram(i + 1, 14, 5, 2), labels).unwrap();
    PolarizedLattice::new(lat, DivisorClass::basis(i + 1, 0), DivisorClass::basis(i + 1, 0)).unwrap()
}

pub fn builtin(name: &str) -> Result<PolarizedLattice> {
    match name {
        "U3" => Ok(u3()),
        "M6" => Ok(m6()),
        _ => {
            let i = name
                .strip_prefix('N')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|i| (1..=9).contains(i))
                .ok_or_else(|| LatticeError::UnknownBuiltin(name.to_string()))?;
            Ok(n_lattice(i))
        }
    }
}

/// Genus of a builtin lattice.
pub fn builtin_genus(name: &str) -> Option<i64> {
    builtin(name).ok().map(|pl| pl.genus())
}

/// 2 + d²/2.
pub fn rr_chi(pl: &PolarizedLattice, d: &DivisorClass) -> Result<i64> {
    let s = pl.lattice.square(d)?;
    if s % 2 != 0 {
        return Err(LatticeError::OddSquare(s));
    }
    Ok(2 + s / 2)
}

/// Lower bound max(1, 2 + X²/2) for h⁰ of a candidate-effective class.
pub fn h0_lower_bound(square: i64) -> i64 {
    (2 + square / 2).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_validation() {
        assert_eq!(GramLattice::unlabeled(vec![vec![1]]), Err(LatticeError::OddDiagonal(0)));
        assert_eq!(GramLattice::unlabeled(vec![vec![0, 1], vec![2, 0]]), Err(LatticeError::NotSymmetric));
        assert!(GramLattice::new(vec![vec![2]], vec![]).is_err());
    }

    #[test]
    fn pairings_in_builtins() {
        let u = u3();
        let (l, e) = (DivisorClass(vec![1, 0]), DivisorClass(vec![0, 1]));
        assert_eq!(u.pairing(&l, &e).unwrap(), 3);
        assert_eq!(u.pairing(&l, &DivisorClass::zero(2)).unwrap(), 0);
        let m = m6();
        let e5 = DivisorClass(vec![2, -1, -1, -1, -1]);
        assert_eq!(m.square(&e5), 0);
        assert_eq!(m.degree(&e5), 4);
        assert_eq!(m.pairing(&e5, &DivisorClass::basis(5, 1)).unwrap(), 2);
        assert!(m.pairing(&e5, &DivisorClass(vec![1])).is_err());
    }

    #[test]
    fn riemann_roch() {
        let n = n_lattice(9);
        let mut d = vec![1i64; 1];
        d.extend(vec![0; 9]);
        d[1] = -2;
        assert_eq!(rr_chi(&n, &DivisorClass(d)).unwrap(), -1);
        let mut d = vec![3i64, -4];
        d.extend(vec![0; 8]);
        assert_eq!(rr_chi(&n, &DivisorClass(d)).unwrap(), 5);
        assert_eq!(rr_chi(&n, &DivisorClass::zero(10)).unwrap(), 2);
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!(builtin("N3").unwrap().rank(), 4);
        assert!(builtin("N10").is_err());
        assert!(builtin("X").is_err());
        assert_eq!(builtin_genus("M6"), Some(6));
    }

    #[test]
    fn basis_change_round_trip() {
        // {L, E} -> {L - E, E}
        let u = u3();
        let b = vec![vec![1, 0], vec![-1, 1]];
        let v = u.change_basis(&b).unwrap();
        assert_eq!(v.lattice().gram(), &[vec![0, 3], vec![3, 0]]);
        assert_eq!(v.polarization(), &DivisorClass(vec![1, 1]));
        assert_eq!(PolarizedLattice::pull_back(&b, v.polarization()), *u.polarization());
    }
}
