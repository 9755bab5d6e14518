//! Lattice certificates and finite-field constructions for K3 surfaces of
//! genus 4, 6 and 8 carrying many low-degree elliptic pencils.

pub mod constructions;
pub mod exactlin;
pub mod grassmann;
pub mod k3lattice;
