//! Exact linear algebra over Q and over finite fields.

pub mod field;
pub mod fieldmat;
pub mod integer;
pub mod rational;
pub mod signature;

pub use field::{Elem, FieldDescriptor, FieldError, FiniteField};
pub use fieldmat::{Echelon, FieldMatrix};
pub use integer::{integer_solve_affine, AffineSolution};
pub use rational::{integer_det, RationalMatrix};
pub use signature::{signature, signature_rational, NotSymmetric, Signature};
