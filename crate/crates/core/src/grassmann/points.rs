//! Rational points of projective schemes and Jacobian ranks.

use rayon::prelude::*;

use super::poly::GradedIdeal;
use super::{GrassmannError, Result};
use crate::exactlin::fieldmat::echelon;
use crate::exactlin::Elem;

/// Every F_q-point of V(I), normalized with first nonzero coordinate 1 and
/// sorted.
pub fn rational_points(ideal: &GradedIdeal, cap: u128) -> Result<Vec<Vec<Elem>>> {
    let field = ideal.field();
    let n = ideal.nvars();
    let q = field.order() as u128;
    let needed = (q.pow(n as u32) - 1) / (q - 1);
    if needed > cap {
        return Err(GrassmannError::CapExceeded { needed, cap });
    }
    let elems: Vec<Elem> = field.elements().collect();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = (q as u64).pow(free as u32);
        let found: Vec<Vec<Elem>> = (0..total)
            .into_par_iter()
            .filter_map(|mut t| {
                let mut p = vec![0; n];
                p[lead] = 1;
                for slot in p.iter_mut().skip(lead + 1) {
                    *slot = elems[(t % q as u64) as usize];
                    t /= q as u64;
                }
                ideal.vanishes_at(&p).then_some(p)
            })
            .collect();
        out.extend(found);
    }
    out.sort();
    Ok(out)
}

/// Rank of the Jacobian matrix of the generators at a point of V(I).
pub fn jacobian_rank_at(ideal: &GradedIdeal, pt: &[Elem]) -> Result<usize> {
    if !ideal.vanishes_at(pt) {
        return Err(GrassmannError::NotOnVariety);
    }
    let field = ideal.field();
    let n = ideal.nvars();
    let rows: Vec<Vec<Elem>> = ideal
        .generators()
        .iter()
        .map(|g| (0..n).map(|i| g.partial(field, i).eval(field, pt)).collect())
        .collect();
    Ok(echelon(field, &rows, n, false).rank())
}
