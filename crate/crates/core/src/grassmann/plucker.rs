//! Plücker coordinates of G(2, n), the quadratic relations, the duality
//! pairing and Schubert hyperplanes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::{GradedIdeal, Polynomial};
use super::subspace::LinearSubspace;
use super::{GrassmannError, Result};
use crate::exactlin::fieldmat::{dot, echelon, normalize};
use crate::exactlin::{Elem, FieldMatrix, FiniteField};

/// Three-term quadric: Σ sign · p_a · p_b over coordinate indices.
pub type Quadric = Vec<(usize, usize, i8)>;

/// Coordinates p_ij (i < j) in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluckerSystem {
    n: usize,
    coords: Vec<(usize, usize)>,
    relations: Vec<Quadric>,
}

impl PluckerSystem {
    pub fn new(n: usize) -> Result<Self> {
        if !(4..=6).contains(&n) {
            return Err(GrassmannError::UnsupportedDimension(n));
        }
        let coords: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let idx = |i: usize, j: usize| coords.iter().position(|&c| c == (i, j)).unwrap();
        let mut relations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        relations.push(vec![(idx(i, j), idx(k, l), 1), (idx(i, k), idx(j, l), -1), (idx(i, l), idx(j, k), 1)]);
                    }
                }
            }
        }
        Ok(PluckerSystem { n, coords, relations })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of Plücker coordinates, n(n−1)/2.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(usize, usize)] {
        &self.coords
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        // offset of row a in the lexicographic list
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn relations(&self) -> &[Quadric] {
        &self.relations
    }

    pub fn relation_polynomials(&self, field: &FiniteField) -> Vec<Polynomial> {
        let m = self.dim();
        self.relations
            .iter()
            .map(|r| {
                Polynomial::from_terms(
                    field,
                    m,
                    r.iter().map(|&(a, b, s)| {
                        let mut e = vec![0u8; m];
                        e[a] += 1;
                        e[b] += 1;
                        (e, if s > 0 { 1 } else { field.neg(1) })
                    }),
                )
            })
            .collect()
    }

    /// The ideal of G(2, n) in P^{dim−1}.
    pub fn ideal(&self, field: &FiniteField) -> GradedIdeal {
        GradedIdeal::new(field, self.dim(), self.relation_polynomials(field))
    }

    pub fn relations_vanish(&self, field: &FiniteField, p: &[Elem]) -> bool {
        self.relations.iter().all(|r| {
            r.iter().fold(0, |acc, &(a, b, s)| {
                let t = field.mul(p[a], p[b]);
                if s > 0 {
                    field.add(acc, t)
                } else {
                    field.sub(acc, t)
                }
            }) == 0
        })
    }

    /// u ∧ v, not normalized.
    pub fn wedge(&self, field: &FiniteField, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
        self.coords.iter().map(|&(i, j)| field.sub(field.mul(u[i], v[j]), field.mul(u[j], v[i]))).collect()
    }

    /// Two vectors spanning the 2-plane of a decomposable p: contractions
    /// with the dual basis vectors at the first nonzero coordinate (i, j).
    pub fn plane_basis(&self, field: &FiniteField, p: &[Elem]) -> [Vec<Elem>; 2] {
        let k = p.iter().position(|&x| x != 0).expect("zero Plücker vector");
        let (i, j) = self.coords[k];
        let contract = |a: usize| -> Vec<Elem> {
            (0..self.n)
                .map(|l| match l.cmp(&a) {
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => p[self.index(a, l)],
                    std::cmp::Ordering::Less => field.neg(p[self.index(l, a)]),
                })
                .collect()
        };
        [contract(i), contract(j)]
    }

    /// Linear form p ↦ vol(p ∧ w_1 ∧ … ∧ w_{n−2}) for the volume form
    /// e_1 ∧ … ∧ e_n ↦ 1.
    pub fn complement_form(&self, field: &FiniteField, w: &[Vec<Elem>]) -> Vec<Elem> {
        assert_eq!(w.len(), self.n - 2);
        self.coords
            .iter()
            .map(|&(i, j)| {
                let rest: Vec<usize> = (0..self.n).filter(|&c| c != i && c != j).collect();
                let rows: Vec<Vec<Elem>> = w.iter().map(|v| rest.iter().map(|&c| v[c]).collect()).collect();
                let det = FieldMatrix::from_rows(field, &rows).det();
                // moving e_i, e_j to the front costs i + (j − 1) transpositions
                if (i + j - 1) % 2 == 0 {
                    det
                } else {
                    field.neg(det)
                }
            })
            .collect()
    }
}

/// Linear forms cutting P(∧² ker φ) out of P(∧² V): the contraction
/// Σ_i φ_i p_ij for every j.
pub fn sub_grassmannian_forms(sys: &PluckerSystem, field: &FiniteField, phi: &[Elem]) -> Vec<Vec<Elem>> {
    (0..sys.n())
        .map(|j| {
            let mut form = vec![0; sys.dim()];
            for (i, &a) in phi.iter().enumerate() {
                if i != j {
                    form[sys.index(i, j)] = if i < j { a } else { field.neg(a) };
                }
            }
            form
        })
        .collect()
}

/// Normalized Plücker point of span(u, v).
pub fn plucker_embed(sys: &PluckerSystem, field: &FiniteField, u: &[Elem], v: &[Elem]) -> Result<Vec<Elem>> {
    let mut p = sys.wedge(field, u, v);
    if !normalize(field, &mut p) {
        return Err(GrassmannError::DependentVectors);
    }
    Ok(p)
}

pub fn plucker_relations(n: usize) -> Result<Vec<Quadric>> {
    Ok(PluckerSystem::new(n)?.relations)
}

/// [n choose 2]_q
pub fn grassmannian_point_count(n: usize, q: u64) -> u128 {
    let q = q as u128;
    let num = (q.pow(n as u32) - 1) * (q.pow(n as u32 - 1) - 1);
    num / ((q * q - 1) * (q - 1))
}

/// Reduced row echelon representatives, one per Schubert cell position
/// (i, j): row 1 has its leading 1 at i and a 0 at j, row 2 its leading 1 at j.
fn cells(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn cell_row1_positions(n: usize, i: usize, j: usize) -> Vec<usize> {
    (i + 1..n).filter(|&k| k != j).collect()
}

/// Element tuples of length `len`, indexed 0..q^len.
fn tuple_at(field: &FiniteField, mut idx: u64, len: usize, elems: &[Elem]) -> Vec<Elem> {
    let q = field.order() as u64;
    (0..len)
        .map(|_| {
            let e = elems[(idx % q) as usize];
            idx /= q;
            e
        })
        .collect()
}

/// Every F_q-point of G(2, n), sorted.
pub fn enumerate_grassmannian(n: usize, field: &FiniteField, cap: u128) -> Result<Vec<Vec<Elem>>> {
    let sys = PluckerSystem::new(n)?;
    let q = field.order() as u64;
    let needed = grassmannian_point_count(n, q);
    if needed > cap {
        return Err(GrassmannError::CapExceeded { needed, cap });
    }
    let elems: Vec<Elem> = field.elements().collect();
    let mut out: Vec<Vec<Elem>> = Vec::with_capacity(needed as usize);
    for (i, j) in cells(n) {
        let r1pos = cell_row1_positions(n, i, j);
        let r2pos: Vec<usize> = (j + 1..n).collect();
        let total = q.pow((r1pos.len() + r2pos.len()) as u32);
        let pts: Vec<Vec<Elem>> = (0..total)
            .into_par_iter()
            .map(|t| {
                let vals = tuple_at(field, t, r1pos.len() + r2pos.len(), &elems);
                let mut u = vec![0; n];
                let mut v = vec![0; n];
                u[i] = 1;
                v[j] = 1;
                for (k, &pos) in r1pos.iter().enumerate() {
                    u[pos] = vals[k];
                }
                for (k, &pos) in r2pos.iter().enumerate() {
                    v[pos] = vals[r1pos.len() + k];
                }
                sys.wedge(field, &u, &v)
            })
            .collect();
        out.extend(pts);
    }
    out.sort();
    Ok(out)
}

/// Points of G(2, n) ∩ Λ over the field, for Λ given by its cutting forms.
///
/// In each cell the Plücker vector is linear in row 2 once row 1 is fixed,
/// so the work is q^{#row-1 parameters} small linear solves.
pub fn grassmannian_section_points(n: usize, sub: &LinearSubspace, cap: u128) -> Result<Vec<Vec<Elem>>> {
    let sys = PluckerSystem::new(n)?;
    let field = sub.field();
    assert_eq!(sub.ambient(), sys.dim());
    let q = field.order() as u64;
    let work: u128 = cells(n).iter().map(|&(i, j)| (q as u128).pow(cell_row1_positions(n, i, j).len() as u32)).sum();
    if work > cap {
        return Err(GrassmannError::CapExceeded { needed: work, cap });
    }
    let elems: Vec<Elem> = field.elements().collect();
    let forms = sub.forms();
    let mut out = Vec::new();
    for (i, j) in cells(n) {
        let r1pos = cell_row1_positions(n, i, j);
        let r2pos: Vec<usize> = (j + 1..n).collect();
        let total = q.pow(r1pos.len() as u32);
        let found: Vec<Vec<Elem>> = (0..total)
            .into_par_iter()
            .flat_map_iter(|t| {
                let vals = tuple_at(field, t, r1pos.len(), &elems);
                let mut u = vec![0; n];
                u[i] = 1;
                for (k, &pos) in r1pos.iter().enumerate() {
                    u[pos] = vals[k];
                }
                let unit = |c: usize| {
                    let mut e = vec![0; n];
                    e[c] = 1;
                    e
                };
                let base = sys.wedge(field, &u, &unit(j));
                let dirs: Vec<Vec<Elem>> = r2pos.iter().map(|&c| sys.wedge(field, &u, &unit(c))).collect();
                // rows: [f·dir_1 … f·dir_m | −f·base]
                let rows: Vec<Vec<Elem>> = forms
                    .iter()
                    .map(|f| {
                        let mut r: Vec<Elem> = dirs.iter().map(|d| dot(field, f, d)).collect();
                        r.push(field.neg(dot(field, f, &base)));
                        r
                    })
                    .collect();
                solve_all(field, &rows, r2pos.len(), &elems)
                    .into_iter()
                    .map(|b| {
                        let mut p = base.clone();
                        for (bk, d) in b.iter().zip(&dirs) {
                            crate::exactlin::fieldmat::axpy(field, &mut p, *bk, d);
                        }
                        p
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        out.extend(found);
    }
    out.sort();
    Ok(out)
}

/// All solutions of the augmented system [A | c] in `m` unknowns.
fn solve_all(field: &FiniteField, rows: &[Vec<Elem>], m: usize, elems: &[Elem]) -> Vec<Vec<Elem>> {
    let ech = echelon(field, rows, m + 1, true);
    if ech.pivots.last() == Some(&m) {
        return Vec::new();
    }
    let free: Vec<usize> = (0..m).filter(|c| !ech.pivots.contains(c)).collect();
    let q = field.order() as u64;
    let mut sols = Vec::new();
    for t in 0..q.pow(free.len() as u32) {
        let vals = tuple_at(field, t, free.len(), elems);
        let mut x = vec![0; m];
        for (k, &c) in free.iter().enumerate() {
            x[c] = vals[k];
        }
        for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
            let mut v = row[m];
            for &c in &free {
                v = field.sub(v, field.mul(row[c], x[c]));
            }
            x[pc] = v;
        }
        sols.push(x);
    }
    sols
}

/// H_U: the hyperplane of 2-planes meeting U^⊥ nontrivially. The linear form
/// is the Plücker vector of U under the dot pairing, so H_U(p(U')) is the
/// determinant of the 2×2 pairing matrix between U and U'.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertHyperplane {
    pub source: Vec<Elem>,
    pub form: Vec<Elem>,
}

impl SchubertHyperplane {
    pub fn contains(&self, field: &FiniteField, p: &[Elem]) -> bool {
        dot(field, &self.form, p) == 0
    }
}

pub fn schubert_hyperplane(sys: &PluckerSystem, field: &FiniteField, u: &[Elem], v: &[Elem]) -> Result<SchubertHyperplane> {
    let source = plucker_embed(sys, field, u, v)?;
    Ok(SchubertHyperplane { form: source.clone(), source })
}

/// The same hyperplane from the wedge pairing with a basis of U^⊥.
pub fn schubert_wedge_form(sys: &PluckerSystem, field: &FiniteField, u: &[Elem], v: &[Elem]) -> Result<Vec<Elem>> {
    plucker_embed(sys, field, u, v)?;
    let perp = orthogonal_complement(field, &[u.to_vec(), v.to_vec()], sys.n());
    let mut form = sys.complement_form(field, &perp);
    normalize(field, &mut form);
    Ok(form)
}

/// Basis of {w : w·u = 0 for every given u}.
pub fn orthogonal_complement(field: &FiniteField, vecs: &[Vec<Elem>], n: usize) -> Vec<Vec<Elem>> {
    echelon(field, vecs, n, true).kernel(field)
}

/// dim(U' ∩ W) ≥ 1, by rank of the stacked bases.
pub fn meets(field: &FiniteField, a: &[Vec<Elem>], b: &[Vec<Elem>], n: usize) -> bool {
    let mut rows = a.to_vec();
    rows.extend(b.iter().cloned());
    echelon(field, &rows, n, false).rank() < a.len() + b.len()
}
