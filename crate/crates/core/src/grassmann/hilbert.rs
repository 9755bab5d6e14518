//! Hilbert functions and bounded-degree colon spans by a tower of quotient
//! bases.
//!
//! Level d stores, for every degree-d monomial, its normal form in a basis
//! of (R/I)_d. Level d+1 is the space spanned by symbols (x_i, s) for s in
//! that basis, modulo the relations x_i·NF(μ/x_i) = x_j·NF(μ/x_j) for each
//! degree-(d+1) monomial μ divisible by both, and modulo the degree-(d+1)
//! generators. Only the quotient is ever materialized, so the matrices have
//! n·HF(d) columns instead of one per monomial.

use std::collections::HashMap;

use super::poly::{monomial_count, monomial_index, monomials, GradedIdeal, Monomial, Polynomial};
use super::subspace::LinearSubspace;
use super::{GrassmannError, Result};
use crate::exactlin::fieldmat::{axpy, echelon};
use crate::exactlin::{Elem, FieldMatrix};

/// Default bound on monomials per degree.
pub const DEFAULT_MONOMIAL_CAP: u128 = 50_000;

struct Level {
    index: HashMap<Monomial, usize>,
    nf: Vec<Vec<Elem>>,
    qdim: usize,
}

pub struct QuotientTower<'a> {
    ideal: &'a GradedIdeal,
    levels: Vec<Level>,
    cap: u128,
}

impl<'a> QuotientTower<'a> {
    pub fn new(ideal: &'a GradedIdeal) -> Self {
        Self::with_cap(ideal, DEFAULT_MONOMIAL_CAP)
    }

    pub fn with_cap(ideal: &'a GradedIdeal, cap: u128) -> Self {
        let n = ideal.nvars();
        let monos = monomials(n, 0);
        let index = monomial_index(&monos);
        let constant = ideal.generators().iter().any(|g| g.degree() == Some(0));
        let (nf, qdim) = if constant { (vec![vec![]], 0) } else { (vec![vec![1]], 1) };
        QuotientTower { ideal, levels: vec![Level { index, nf, qdim }], cap }
    }

    pub fn extend_to(&mut self, d: usize) -> Result<()> {
        while self.levels.len() <= d {
            self.push_level()?;
        }
        Ok(())
    }

    pub fn hilbert(&mut self, d: usize) -> Result<usize> {
        self.extend_to(d)?;
        Ok(self.levels[d].qdim)
    }

    /// Normal form of a homogeneous polynomial of degree d.
    pub fn normal_form(&mut self, p: &Polynomial) -> Result<Vec<Elem>> {
        let Some(d) = p.degree() else {
            return Ok(Vec::new());
        };
        self.extend_to(d)?;
        let lvl = &self.levels[d];
        let field = self.ideal.field();
        let mut v = vec![0; lvl.qdim];
        for (m, c) in &p.terms {
            axpy(field, &mut v, *c, &lvl.nf[lvl.index[m]]);
        }
        Ok(v)
    }

    fn push_level(&mut self) -> Result<()> {
        let field = self.ideal.field().clone();
        let n = self.ideal.nvars();
        let d1 = self.levels.len();
        if monomial_count(n, d1) > self.cap {
            return Err(GrassmannError::CapExceeded { needed: monomial_count(n, d1), cap: self.cap });
        }
        let prev = &self.levels[d1 - 1];
        let q = prev.qdim;
        let width = n * q;
        let monos = monomials(n, d1);
        let index = monomial_index(&monos);
        // one chosen factorization per monomial, as a vector in the symbol space
        let lift = |mu: &Monomial, a: usize| -> Vec<Elem> {
            let mut m = mu.clone();
            m[a] -= 1;
            let mut v = vec![0; width];
            v[a * q..(a + 1) * q].copy_from_slice(&prev.nf[prev.index[&m]]);
            v
        };
        let mut rows = Vec::new();
        let mut base = Vec::with_capacity(monos.len());
        for mu in &monos {
            let support: Vec<usize> = (0..n).filter(|&i| mu[i] > 0).collect();
            let va = lift(mu, support[0]);
            for &b in &support[1..] {
                let mut r = lift(mu, b);
                axpy(&field, &mut r, field.neg(1), &va);
                if r.iter().any(|&x| x != 0) {
                    rows.push(r);
                }
            }
            base.push(va);
        }
        for g in self.ideal.generators() {
            if g.degree() == Some(d1) {
                let mut r = vec![0; width];
                for (m, c) in &g.terms {
                    axpy(&field, &mut r, *c, &base[index[m]]);
                }
                rows.push(r);
            }
        }
        let ech = echelon(&field, &rows, width, true);
        let free = ech.free_columns();
        let nf = base
            .into_iter()
            .map(|mut v| {
                ech.reduce(&field, &mut v);
                free.iter().map(|&c| v[c]).collect()
            })
            .collect();
        self.levels.push(Level { index, nf, qdim: free.len() });
        Ok(())
    }

    fn level(&self, d: usize) -> &Level {
        &self.levels[d]
    }
}

/// dim (R/I)_d.
pub fn hilbert_function(ideal: &GradedIdeal, d: usize) -> Result<usize> {
    QuotientTower::new(ideal).hilbert(d)
}

/// [HF(0), …, HF(dmax)].
pub fn hilbert_series(ideal: &GradedIdeal, dmax: usize) -> Result<Vec<usize>> {
    let mut t = QuotientTower::new(ideal);
    (0..=dmax).map(|d| t.hilbert(d)).collect()
}

/// Linear forms λ with λ·J_d ⊆ I_{d+1}.
fn colon_forms(tower: &mut QuotientTower, j: &GradedIdeal, d: usize) -> Result<Vec<Vec<Elem>>> {
    tower.extend_to(d + 1)?;
    let ideal = tower.ideal;
    let field = ideal.field().clone();
    let n = ideal.nvars();
    let jd = j.graded_piece(d);
    let monos = monomials(n, d);
    let up = tower.level(d + 1);
    let qd = up.qdim;
    // column k of the (j, t) block: NF(x_k · j)_t
    let mut rows = Vec::with_capacity(jd.len() * qd);
    for jv in &jd {
        let mut block = vec![vec![0; n]; qd];
        for k in 0..n {
            let mut acc = vec![0; qd];
            for (mi, &c) in jv.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let mut m = monos[mi].clone();
                m[k] += 1;
                axpy(&field, &mut acc, c, &up.nf[up.index[&m]]);
            }
            for t in 0..qd {
                block[t][k] = acc[t];
            }
        }
        rows.extend(block);
    }
    if rows.is_empty() {
        return Ok((0..n).map(|k| (0..n).map(|i| Elem::from(i == k)).collect()).collect());
    }
    let (_, ker) = FieldMatrix::from_rows(&field, &rows).rank_kernel();
    Ok(ker)
}

/// Common zero space of the linear forms in (I : J) computed through degree
/// dmax; errors unless the degree-(dmax−1) and degree-dmax answers agree.
pub fn colon_linear_span(i: &GradedIdeal, j: &GradedIdeal, dmax: usize) -> Result<LinearSubspace> {
    assert!(dmax >= 2, "dmax must be at least 2");
    let mut tower = QuotientTower::new(i);
    let before = LinearSubspace::from_forms(i.field(), i.nvars(), &colon_forms(&mut tower, j, dmax - 1)?);
    let after = LinearSubspace::from_forms(i.field(), i.nvars(), &colon_forms(&mut tower, j, dmax)?);
    if before != after {
        return Err(GrassmannError::NotStabilized { dmax });
    }
    Ok(after)
}

/// Retry with dmax = 6, 12 as the default policy.
pub fn colon_linear_span_auto(i: &GradedIdeal, j: &GradedIdeal) -> Result<(LinearSubspace, usize)> {
    let mut dmax = 6;
    loop {
        match colon_linear_span(i, j, dmax) {
            Ok(s) => return Ok((s, dmax)),
            Err(GrassmannError::NotStabilized { .. }) if dmax < 12 => dmax = (dmax * 2).min(12),
            Err(e) => return Err(e),
        }
    }
}
