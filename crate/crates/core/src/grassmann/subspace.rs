//! Linear subspaces of a projective space, stored both as a spanning basis
//! and as the cutting forms.

use serde::{Deserialize, Serialize};

use super::poly::GradedIdeal;
use crate::exactlin::fieldmat::{dot, echelon};
use crate::exactlin::{Elem, FieldDescriptor, FiniteField};

/// Both bases are in reduced row echelon form, so equality is equality of
/// subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubspace {
    field: FiniteField,
    ambient: usize,
    points: Vec<Vec<Elem>>,
    forms: Vec<Vec<Elem>>,
}

fn rref(field: &FiniteField, rows: &[Vec<Elem>], cols: usize) -> Vec<Vec<Elem>> {
    echelon(field, rows, cols, true).rows
}

fn dual_basis(field: &FiniteField, rows: &[Vec<Elem>], cols: usize) -> Vec<Vec<Elem>> {
    let ker = echelon(field, rows, cols, true).kernel(field);
    rref(field, &ker, cols)
}

impl LinearSubspace {
    /// Span of the given vectors in F^ambient.
    pub fn from_points(field: &FiniteField, ambient: usize, points: &[Vec<Elem>]) -> Self {
        let points = rref(field, points, ambient);
        let forms = dual_basis(field, &points, ambient);
        LinearSubspace { field: field.clone(), ambient, points, forms }
    }

    /// Common zero space of the given linear forms.
    pub fn from_forms(field: &FiniteField, ambient: usize, forms: &[Vec<Elem>]) -> Self {
        let forms = rref(field, forms, ambient);
        let points = dual_basis(field, &forms, ambient);
        LinearSubspace { field: field.clone(), ambient, points, forms }
    }

    pub fn whole(field: &FiniteField, ambient: usize) -> Self {
        Self::from_forms(field, ambient, &[])
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Vector-space dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn forms(&self) -> &[Vec<Elem>] {
        &self.forms
    }

    /// −1 for the empty subspace.
    pub fn projective_dim(&self) -> isize {
        self.points.len() as isize - 1
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.forms.iter().all(|f| dot(&self.field, f, v) == 0)
    }

    /// The subspace of the dual space cut out by the points; points and
    /// forms swap roles.
    pub fn annihilator(&self) -> LinearSubspace {
        LinearSubspace {
            field: self.field.clone(),
            ambient: self.ambient,
            points: self.forms.clone(),
            forms: self.points.clone(),
        }
    }

    pub fn intersect(&self, other: &LinearSubspace) -> LinearSubspace {
        let mut forms = self.forms.clone();
        forms.extend(other.forms.iter().cloned());
        Self::from_forms(&self.field, self.ambient, &forms)
    }

    pub fn join(&self, other: &LinearSubspace) -> LinearSubspace {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Self::from_points(&self.field, self.ambient, &pts)
    }

    /// Ambient coordinates of a point given in the basis `points()`.
    pub fn embed(&self, coords: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.ambient];
        for (c, b) in coords.iter().zip(&self.points) {
            crate::exactlin::fieldmat::axpy(&self.field, &mut v, *c, b);
        }
        v
    }

    /// Coordinates of v in the basis `points()`, if v lies in the subspace.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        if !self.contains(v) {
            return None;
        }
        // the basis is reduced, so each coordinate is read off a pivot column
        Some(
            self.points
                .iter()
                .map(|b| v[b.iter().position(|&x| x != 0).expect("basis rows are nonzero")])
                .collect(),
        )
    }

    /// A linear form on the ambient space, pulled back to the coordinates of
    /// the subspace.
    pub fn restrict_form(&self, form: &[Elem]) -> Vec<Elem> {
        self.points.iter().map(|b| dot(&self.field, form, b)).collect()
    }

    /// The ideal restricted to this subspace, in dim+1 variables.
    pub fn section(&self, ideal: &GradedIdeal) -> GradedIdeal {
        assert_eq!(ideal.nvars(), self.ambient);
        ideal.restrict(&self.points)
    }

    pub fn dump(&self) -> SubspaceDump {
        SubspaceDump {
            field: self.field.descriptor(),
            ambient: self.ambient,
            points: self.points.clone(),
            forms: self.forms.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDump {
    pub field: FieldDescriptor,
    pub ambient: usize,
    pub points: Vec<Vec<Elem>>,
    pub forms: Vec<Vec<Elem>>,
}

pub fn annihilator(sub: &LinearSubspace) -> LinearSubspace {
    sub.annihilator()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duality() {
        let f = FiniteField::prime(7).unwrap();
        let whole = LinearSubspace::whole(&f, 15);
        assert_eq!(whole.projective_dim(), 14);
        assert_eq!(whole.annihilator().projective_dim(), -1);
        let pts: Vec<Vec<Elem>> = (0..6).map(|i| (0..15).map(|j| ((i * 7 + j * j + 3 * i * j) % 7) as Elem).collect()).collect();
        let s = LinearSubspace::from_points(&f, 15, &pts);
        let a = s.annihilator();
        assert_eq!(s.projective_dim() + a.projective_dim(), 13);
        assert_eq!(a.annihilator(), s);
        for p in &pts {
            assert!(s.contains(p));
        }
    }
}
