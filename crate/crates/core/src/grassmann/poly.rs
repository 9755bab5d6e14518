//! Homogeneous polynomials over a finite field and the ideals they generate.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::exactlin::{fieldmat::echelon, Elem, FieldDescriptor, FiniteField};

/// Exponent vector.
pub type Monomial = Vec<u8>;

/// All monomials of degree `d` in `n` variables, x0^d first (descending lex).
pub fn monomials(n: usize, d: usize) -> Vec<Monomial> {
    fn go(n: usize, i: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur[i] = left as u8;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            go(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, 0, d, &mut vec![0; n], &mut out);
    out
}

pub fn monomial_count(n: usize, d: usize) -> u128 {
    // C(n-1+d, d)
    (1..=d as u128).fold(1u128, |acc, i| acc * (n as u128 - 1 + i) / i)
}

pub(crate) fn monomial_index(monos: &[Monomial]) -> HashMap<Monomial, usize> {
    monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// Terms are kept sorted (descending lex), merged and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub nvars: usize,
    pub terms: Vec<(Monomial, Elem)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn from_terms(field: &FiniteField, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Self {
        let mut acc: BTreeMap<Monomial, Elem> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial has the wrong number of variables");
            let e = acc.entry(m).or_insert(0);
            *e = field.add(*e, c);
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| *c != 0).collect();
        Polynomial { nvars, terms }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Polynomial { nvars, terms: vec![(m, 1)] }
    }

    /// Σ c_i x_i
    pub fn linear(field: &FiniteField, coeffs: &[Elem]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            field,
            n,
            coeffs.iter().enumerate().map(|(i, &c)| {
                let mut m = vec![0; n];
                m[i] = 1;
                (m, c)
            }),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous polynomial; None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.first().map(|(m, _)| m.iter().map(|&e| e as usize).sum())
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.iter().all(|(m, _)| Some(m.iter().map(|&e| e as usize).sum()) == d)
    }

    pub fn add(&self, field: &FiniteField, other: &Polynomial) -> Polynomial {
        Self::from_terms(field, self.nvars, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, field: &FiniteField, c: Elem) -> Polynomial {
        Self::from_terms(field, self.nvars, self.terms.iter().map(|(m, x)| (m.clone(), field.mul(*x, c))))
    }

    pub fn mul(&self, field: &FiniteField, other: &Polynomial) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.push((m, field.mul(*x, *y)));
            }
        }
        Self::from_terms(field, self.nvars, out)
    }

    pub fn eval(&self, field: &FiniteField, pt: &[Elem]) -> Elem {
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    v = field.mul(v, field.pow(pt[i], e as u64));
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }

    pub fn partial(&self, field: &FiniteField, var: usize) -> Polynomial {
        Self::from_terms(
            field,
            self.nvars,
            self.terms.iter().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
                let mut m = m.clone();
                let e = m[var];
                m[var] -= 1;
                (m, field.mul(*c, field.from_int(e as i64)))
            }),
        )
    }

    /// Substitute x_i = Σ_k map[i][k]·t_k, giving a polynomial in `new_vars`
    /// variables.
    pub fn substitute(&self, field: &FiniteField, map: &[Vec<Elem>], new_vars: usize) -> Polynomial {
        let forms: Vec<Polynomial> = map.iter().map(|row| Polynomial::linear(field, row)).collect();
        let one = Polynomial { nvars: new_vars, terms: vec![(vec![0; new_vars], 1)] };
        let mut acc = Polynomial::zero(new_vars);
        for (m, c) in &self.terms {
            let mut t = one.scale(field, *c);
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(field, &forms[i]);
                }
            }
            acc = acc.add(field, &t);
        }
        acc
    }

    /// Coefficient vector against a monomial list.
    pub(crate) fn coefficients(&self, index: &HashMap<Monomial, usize>, len: usize) -> Vec<Elem> {
        let mut v = vec![0; len];
        for (m, c) in &self.terms {
            v[index[m]] = *c;
        }
        v
    }
}

/// A homogeneous ideal given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIdeal {
    field: FiniteField,
    nvars: usize,
    generators: Vec<Polynomial>,
}

impl GradedIdeal {
    /// Panics on inhomogeneous generators or a variable-count mismatch.
    pub fn new(field: &FiniteField, nvars: usize, generators: Vec<Polynomial>) -> Self {
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &generators {
            assert_eq!(g.nvars, nvars, "generator lives in a different ring");
            assert!(g.is_homogeneous(), "generators must be homogeneous");
        }
        GradedIdeal { field: field.clone(), nvars, generators }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn with_generators(&self, more: impl IntoIterator<Item = Polynomial>) -> GradedIdeal {
        let mut gens = self.generators.clone();
        gens.extend(more);
        GradedIdeal::new(&self.field, self.nvars, gens)
    }

    pub fn vanishes_at(&self, pt: &[Elem]) -> bool {
        self.generators.iter().all(|g| g.eval(&self.field, pt) == 0)
    }

    /// Pull back along x = M·t, where the columns of M (given as rows
    /// `basis[k]`) span the subspace.
    pub fn restrict(&self, basis: &[Vec<Elem>]) -> GradedIdeal {
        let k = basis.len();
        let map: Vec<Vec<Elem>> = (0..self.nvars).map(|i| (0..k).map(|j| basis[j][i]).collect()).collect();
        let gens = self.generators.iter().map(|g| g.substitute(&self.field, &map, k)).collect();
        GradedIdeal::new(&self.field, k, gens)
    }

    /// Echelon basis of the degree-d piece, as coefficient rows against
    /// `monomials(nvars, d)`.
    pub fn graded_piece(&self, d: usize) -> Vec<Vec<Elem>> {
        let monos = monomials(self.nvars, d);
        let index = monomial_index(&monos);
        let mut rows = Vec::new();
        for g in &self.generators {
            let Some(e) = g.degree() else { continue };
            if e > d {
                continue;
            }
            for m in monomials(self.nvars, d - e) {
                let mp = Polynomial { nvars: self.nvars, terms: vec![(m, 1)] };
                rows.push(g.mul(&self.field, &mp).coefficients(&index, monos.len()));
            }
        }
        echelon(&self.field, &rows, monos.len(), true).rows
    }

    pub fn dump(&self) -> IdealDump {
        IdealDump {
            variables: (0..self.nvars).map(|i| format!("x{i}")).collect(),
            field: self.field.descriptor(),
            order: "graded-lex on exponent vectors (x0, ..., xN), largest term first".into(),
            generators: self.generators.iter().map(|g| g.terms.clone()).collect(),
        }
    }

    pub fn from_dump(d: &IdealDump) -> Result<GradedIdeal, crate::exactlin::FieldError> {
        let field = FiniteField::from_descriptor(&d.field)?;
        let n = d.variables.len();
        let gens = d.generators.iter().map(|t| Polynomial::from_terms(&field, n, t.iter().cloned())).collect();
        Ok(GradedIdeal::new(&field, n, gens))
    }
}

/// JSON form: generators are lists of (exponent vector, coefficient).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDump {
    pub variables: Vec<String>,
    pub field: FieldDescriptor,
    pub order: String,
    pub generators: Vec<Vec<(Monomial, Elem)>>,
}

/// Generators of the vanishing ideal of a point set in degrees 1..=max_degree:
/// kernels of the evaluation maps.
pub fn ideal_of_points(field: &FiniteField, nvars: usize, points: &[Vec<Elem>], max_degree: usize) -> GradedIdeal {
    let mut gens = Vec::new();
    for d in 1..=max_degree {
        let monos = monomials(nvars, d);
        let rows: Vec<Vec<Elem>> = points
            .iter()
            .map(|p| {
                monos
                    .iter()
                    .map(|m| Polynomial { nvars, terms: vec![(m.clone(), 1)] }.eval(field, p))
                    .collect()
            })
            .collect();
        let ker = echelon(field, &rows, monos.len(), true).kernel(field);
        for v in ker {
            gens.push(Polynomial::from_terms(field, nvars, monos.iter().cloned().zip(v)));
        }
    }
    GradedIdeal::new(field, nvars, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration() {
        let m = monomials(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
        assert_eq!(monomial_count(9, 4) as usize, monomials(9, 4).len());
        assert_eq!(monomials(4, 0), vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn arithmetic_and_derivatives() {
        let f = FiniteField::prime(7).unwrap();
        let x = Polynomial::variable(2, 0);
        let y = Polynomial::variable(2, 1);
        let q = x.mul(&f, &x).add(&f, &y.mul(&f, &y).scale(&f, 6)); // x² − y²
        assert_eq!(q.eval(&f, &[3, 3]), 0);
        assert_eq!(q.eval(&f, &[1, 0]), 1);
        let dx = q.partial(&f, 0);
        assert_eq!(dx, x.scale(&f, 2));
        // substitute x = t0 + t1, y = t0 − t1: (x² − y²) = 4 t0 t1
        let s = q.substitute(&f, &[vec![1, 1], vec![1, 6]], 2);
        assert_eq!(s.terms, vec![(vec![1, 1], 4)]);
    }

    #[test]
    fn point_ideals() {
        let f = FiniteField::prime(5).unwrap();
        let pts = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let i = ideal_of_points(&f, 3, &pts, 2);
        assert_eq!(i.generators().len(), 3); // xy, xz, yz
        for p in &pts {
            assert!(i.vanishes_at(p));
        }
        assert!(!i.vanishes_at(&[1, 1, 0]));
        let back = GradedIdeal::from_dump(&i.dump()).unwrap();
        assert_eq!(back, i);
    }
}
