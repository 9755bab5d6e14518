//! Plücker geometry of G(2, n) for n = 4, 5, 6 over finite fields: the
//! embedding and its relations, Schubert hyperplanes, point enumeration,
//! linear sections, Hilbert functions and colon spans.

use thiserror::Error;

pub mod hilbert;
pub mod plucker;
pub mod points;
pub mod poly;
pub mod subspace;

pub use hilbert::{colon_linear_span, colon_linear_span_auto, hilbert_function, hilbert_series, QuotientTower};
pub use plucker::{
    enumerate_grassmannian, grassmannian_point_count, grassmannian_section_points, meets, orthogonal_complement,
    plucker_embed, plucker_relations, schubert_hyperplane, schubert_wedge_form, sub_grassmannian_forms, PluckerSystem, Quadric,
    SchubertHyperplane,
};
pub use points::{jacobian_rank_at, rational_points};
pub use poly::{ideal_of_points, monomials, GradedIdeal, IdealDump, Monomial, Polynomial};
pub use subspace::{annihilator, LinearSubspace, SubspaceDump};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassmannError {
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("G(2, {0}) is not supported; n must be 4, 5 or 6")]
    UnsupportedDimension(usize),
    #[error("enumeration needs {needed} steps, above the cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("colon span changed between degrees {} and {dmax}", dmax - 1)]
    NotStabilized { dmax: usize },
    #[error("point is not on the variety")]
    NotOnVariety,
}

pub type Result<T> = std::result::Result<T, GrassmannError>;

/// The ideal of G(2, n) ∩ Λ in the coordinates of Λ.
pub fn linear_section_ideal(sys: &PluckerSystem, sub: &LinearSubspace) -> GradedIdeal {
    sub.section(&sys.ideal(sub.field()))
}
