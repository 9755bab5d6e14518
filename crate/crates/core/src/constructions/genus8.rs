//! Genus 8: S = P⁸ ∩ G(V₆, 2) ⊂ P¹⁴, built backwards from the dual P⁵.
//! Points of the dual Grassmannian in P⁵ are the degree-5 elliptic pencils
//! of S. Members of the pencil of a dual point U are P⁸ ∩ G(ker φ, 2) for
//! φ ∈ U.

use serde_json::json;

use super::genus6::{member_forms, pencil_functional, seed_points, with_forms};
use super::{
    require_order, run_attempts, stable_value, Builder, ConstructionConfig, ConstructionError, ConstructionReport,
    PencilRecord, Pipeline, Result, Rng,
};
use crate::exactlin::fieldmat::dot;
use crate::exactlin::{Elem, FiniteField};
use crate::grassmann::{
    colon_linear_span, grassmannian_section_points, hilbert_series, ideal_of_points, jacobian_rank_at,
    linear_section_ideal, GradedIdeal, GrassmannError, LinearSubspace, PluckerSystem,
};
use crate::k3lattice::{enumerate_slice, max_admissible_size, moduli_dimensions, n_lattice, pencil_census, Orientation};

/// Rational points of P ∩ G(V₆, 2) with Jacobian rank `rank` at each of
/// them, in the coordinates of P.
fn sampled_smoothness(
    b: &mut Builder,
    sub: &LinearSubspace,
    ideal: &GradedIdeal,
    rank: usize,
    what: &str,
    strict: bool,
    cfg: &ConstructionConfig,
) -> Result<Vec<Vec<Elem>>> {
    let pts = grassmannian_section_points(6, sub, cfg.point_cap)?;
    let mut min_rank = None;
    let mut singular = 0;
    for p in &pts {
        let r = jacobian_rank_at(ideal, &sub.coordinates(p).expect("section point lies in the subspace"))?;
        if r < rank {
            // a chance singular point is a bad draw; otherwise it is the answer
            if strict {
                return Err(ConstructionError::SingularSurface);
            }
            singular += 1;
        }
        min_rank = Some(min_rank.map_or(r, |m: usize| m.min(r)));
    }
    if singular > 0 {
        b.note(format!("{what} is singular at {singular} of {} rational points", pts.len()));
    }
    b.check(format!("Jacobian rank at every rational point of {what}"), json!(rank), json!(min_rank.unwrap_or(rank)));
    if what == "S" {
        b.smoothness(pts.len(), rank, min_rank);
    }
    Ok(pts)
}

/// HF of P⁵ ∩ G(2, V₆) for d ≤ 6, with the value it settles at.
fn hilbert_census(sys: &PluckerSystem, p5: &LinearSubspace) -> Result<(Vec<usize>, Option<usize>)> {
    let hf = hilbert_series(&linear_section_ideal(sys, p5), 6)?;
    let v = stable_value(&hf, 3);
    Ok((hf, v))
}

struct Surface {
    p8: LinearSubspace,
    ideal: GradedIdeal,
    points: Vec<Vec<Elem>>,
}

fn surface_from_dual(
    b: &mut Builder,
    sys: &PluckerSystem,
    p5: &LinearSubspace,
    strict: bool,
    cfg: &ConstructionConfig,
) -> Result<Surface> {
    let p8 = p5.annihilator();
    b.check("projective dimension of the annihilator", json!(8), json!(p8.projective_dim()));
    let ideal = linear_section_ideal(sys, &p8);
    b.ideal("S", &ideal);
    b.check_hilbert("S", &ideal, 1, 4, |d| 7 * d * d + 2)?;
    let points = sampled_smoothness(b, &p8, &ideal, 6, "S", strict, cfg)?;
    Ok(Surface { p8, ideal, points })
}

/// Members, partition of S ∩ H_U into members, and cross-pencil degrees.
fn pencil_checks(
    b: &mut Builder,
    sys: &PluckerSystem,
    s: &Surface,
    dual: &[Vec<Elem>],
    rng: &mut Rng,
) -> Result<Vec<Option<usize>>> {
    let field = s.p8.field().clone();
    let mut forms = Vec::new();
    for (k, u) in dual.iter().enumerate() {
        let phi = pencil_functional(sys, &field, u, rng);
        let f = member_forms(sys, &s.p8, &phi, 9);
        let label = format!("pencil {}", k + 1);
        let member = with_forms(&s.ideal, &f);
        b.check_hilbert(&format!("member of {label}"), &member, 1, 4, |d| 5 * d)?;
        let hf = hilbert_series(&member, 4)?;
        b.pencil(PencilRecord { label: label.clone(), dual_point: Some(u.clone()), member_sample: member.dump(), degree: hf[4] - hf[3] });
        b.check(format!("members of {label} partition the rational points of S on H_U"), json!(true), json!(partitions(sys, &field, u, &s.points)));
        forms.push(f);
    }
    let mut degrees = Vec::new();
    for a in 0..forms.len() {
        for c in a + 1..forms.len() {
            let mut both = forms[a].clone();
            both.extend(forms[c].iter().cloned());
            let hf = hilbert_series(&with_forms(&s.ideal, &both), 4)?;
            degrees.push(stable_value(&hf[2..], 3));
        }
    }
    Ok(degrees)
}

/// Every rational point p of S lies on exactly one member G(ker φ, 2),
/// φ ∈ P(U), if H_U(p) = 0 and on none otherwise.
fn partitions(sys: &PluckerSystem, field: &FiniteField, u: &[Elem], points: &[Vec<Elem>]) -> bool {
    let [a, bb] = sys.plane_basis(field, u);
    let mut phis: Vec<Vec<Elem>> = field
        .elements()
        .map(|t| a.iter().zip(&bb).map(|(x, y)| field.add(*x, field.mul(t, *y))).collect())
        .collect();
    phis.push(bb.clone());
    points.iter().all(|p| {
        let [x, y] = sys.plane_basis(field, p);
        let hits = phis.iter().filter(|phi| dot(field, phi, &x) == 0 && dot(field, phi, &y) == 0).count();
        hits == usize::from(dot(field, u, p) == 0)
    })
}

/// i seeded dual points plus 6 − i random points span the dual P⁵.
pub fn build_genus8_secant(i: usize, field: &FiniteField, seed: u64, cfg: &ConstructionConfig) -> Result<ConstructionReport> {
    if !(1..=6).contains(&i) {
        return Err(ConstructionError::Precondition(format!("secant construction needs 1 <= i <= 6, got {i}")));
    }
    require_order(field, 11)?;
    let sys = PluckerSystem::new(6)?;
    run_attempts(Pipeline::Genus8Secant, 8, Some(i), field, seed, cfg, |b, rng: &mut Rng| {
        let mut seeds = seed_points(&sys, field, rng, i);
        seeds.sort();
        let mut spanning = seeds.clone();
        spanning.extend((i..6).map(|_| rng.vector(field, 15)));
        let p5 = LinearSubspace::from_points(field, 15, &spanning);
        if p5.projective_dim() != 5 {
            return Err(ConstructionError::SpanDegenerate { expected: 5, got: p5.projective_dim() });
        }
        let dual = grassmannian_section_points(6, &p5, cfg.point_cap)?;
        if dual != seeds {
            return Err(ConstructionError::ExtraDualPoints { expected: i, got: dual.len() });
        }
        b.check("rational dual census equals the seeded points", json!(seeds), json!(dual));
        let (hf, stable) = hilbert_census(&sys, &p5)?;
        b.hilbert("dual census", hf);
        b.check("dual census by Hilbert function (all points over the closure)", json!(i), json!(stable));
        let s = surface_from_dual(b, &sys, &p5, true, cfg)?;
        let degrees = pencil_checks(b, &sys, &s, &dual, rng)?;
        b.pencil_count(dual.len());
        b.check("cross-pencil intersection degrees", json!(vec![Some(2); degrees.len()]), json!(degrees));
        let pl = n_lattice(i);
        let dims = moduli_dimensions(pl.lattice(), 8).expect("N_i is hyperbolic");
        b.check(format!("lattice: dim of the moduli of N_{i}-polarized K3s"), json!(19 - i), json!(dims.dim_f));
        let census = pencil_census(&pl, 5).expect("N_i is ample");
        b.check(format!("lattice: degree-5 pencil census of N_{i} equals the geometric count"), json!(i), json!(census.count()));
        Ok(())
    })
}

/// The nine-pencil surface from a genus-8 curve with a g¹₅: the residual
/// D′ of a hyperplane section through the pencil divisor D spans the dual
/// P⁵, and D′ lies on the dual Grassmannian.
pub fn build_genus8_nine(field: &FiniteField, seed: u64, cfg: &ConstructionConfig) -> Result<ConstructionReport> {
    require_order(field, 11)?;
    let sys = PluckerSystem::new(6)?;
    run_attempts(Pipeline::Genus8Nine, 8, None, field, seed, cfg, |b, rng: &mut Rng| nine_attempt(b, rng, &sys, field, cfg))
}

fn nine_attempt(b: &mut Builder, rng: &mut Rng, sys: &PluckerSystem, field: &FiniteField, cfg: &ConstructionConfig) -> Result<()> {
    // (1) D: a P³ through four points of G(V₅, 2), V₅ = ⟨e1, …, e5⟩, meets it in five
    let sys5 = PluckerSystem::new(5)?;
    let in_v5: Vec<Vec<Elem>> = (0..4)
        .map(|_| {
            let [mut u, mut v] = rng.plane(field, 5);
            u.push(0);
            v.push(0);
            crate::grassmann::plucker_embed(sys, field, &u, &v).expect("independent")
        })
        .collect();
    debug_assert_eq!(sys5.dim(), 10);
    let span_d = LinearSubspace::from_points(field, 15, &in_v5);
    if span_d.projective_dim() != 3 {
        return Err(ConstructionError::SpanDegenerate { expected: 3, got: span_d.projective_dim() });
    }
    let d = grassmannian_section_points(6, &span_d, cfg.point_cap)?;
    if d.len() != 5 {
        return Err(ConstructionError::ExtraDualPoints { expected: 5, got: d.len() });
    }
    b.check("pencil divisor D: points of G(V5,2) on span(D)", json!(5), json!(d.len()));
    b.check("projective dimension of span(D)", json!(3), json!(span_d.projective_dim()));

    // (2) C = P⁷ ∩ G(V₆, 2) with P⁷ ⊃ span(D) ∪ {R1, R2, R3}
    let rs = seed_points(sys, field, rng, 3);
    let mut pts6: Vec<Vec<Elem>> = span_d.points().to_vec();
    pts6.extend(rs.iter().cloned());
    let p6 = LinearSubspace::from_points(field, 15, &pts6);
    let mut pts7 = pts6.clone();
    pts7.push(rng.vector(field, 15));
    let p7 = LinearSubspace::from_points(field, 15, &pts7);
    if p6.projective_dim() != 6 || p7.projective_dim() != 7 {
        return Err(ConstructionError::SpanDegenerate { expected: 7, got: p7.projective_dim() });
    }
    let c = linear_section_ideal(sys, &p7);
    b.ideal("C", &c);
    b.check_hilbert("C", &c, 2, 6, |d| 14 * d - 7)?;
    let hf1 = hilbert_series(&c, 1)?;
    b.check("HF_C(1)", json!(8), json!(hf1[1]));
    let on_c = d.iter().chain(&rs).all(|p| c.vanishes_at(&p7.coordinates(p).expect("in P7")));
    b.check("C contains D and R1, R2, R3", json!(true), json!(on_c));
    sampled_smoothness(b, &p7, &c, 6, "C", true, cfg)?;

    // (3)-(4) Z = C ∩ P⁶; the residual D′ = Z − D spans a P⁵
    let z = linear_section_ideal(sys, &p6);
    let d_coords: Vec<Vec<Elem>> = d.iter().map(|p| p6.coordinates(p).expect("D lies in P6")).collect();
    let id = ideal_of_points(field, 7, &d_coords, 3);
    let (residual, dmax) = colon_span(&z, &id, cfg.dmax)?;
    b.note(format!("colon span stabilized by degree {dmax}"));
    if residual.projective_dim() != 5 {
        return Err(ConstructionError::ResidualSpanWrongDim { got: residual.projective_dim() });
    }
    b.check("projective dimension of span(D')", json!(5), json!(residual.projective_dim()));
    let embedded: Vec<Vec<Elem>> = residual.points().iter().map(|v| p6.embed(v)).collect();
    let p5 = LinearSubspace::from_points(field, 15, &embedded);
    b.check("span(D') contains R1, R2, R3", json!(true), json!(rs.iter().all(|r| p5.contains(r))));

    // (5) census and the surface
    let (hf, stable) = hilbert_census(sys, &p5)?;
    b.hilbert("dual census", hf);
    b.check("dual census by Hilbert function (all points over the closure)", json!(9), json!(stable));
    let dual = grassmannian_section_points(6, &p5, cfg.point_cap)?;
    let has_r = rs.iter().all(|r| dual.contains(r));
    b.check("rational dual points include R1, R2, R3", json!(true), json!(has_r));
    b.note(format!("{} of the 9 dual points are rational over the base field", dual.len()));
    let s = surface_from_dual(b, sys, &p5, false, cfg)?;
    let degrees = pencil_checks(b, sys, &s, &dual, rng)?;
    b.pencil_count(stable.unwrap_or(0));
    b.check("cross-pencil intersection degrees among rational pencils", json!(vec![Some(2); degrees.len()]), json!(degrees));

    let size = max_admissible_size(8, 5, 2);
    b.check("lattice: largest hyperbolic pattern with L^2 = 14, E.L = 5, E_i.E_j = 2", json!(10), json!(size));
    b.check("lattice: pencil census equals the pattern bound minus L", json!(size - 1), json!(stable));
    let slice = enumerate_slice(&n_lattice(9), 5, 0, Orientation::Effective).expect("N9 is hyperbolic");
    b.check("lattice: oriented square-0 degree-5 classes of N9", json!(9), json!(slice.count()));
    Ok(())
}

/// colon_linear_span from `start`, doubling up to 12.
fn colon_span(z: &GradedIdeal, d: &GradedIdeal, start: usize) -> Result<(LinearSubspace, usize)> {
    let mut dmax = start.max(2);
    loop {
        match colon_linear_span(z, d, dmax) {
            Ok(s) => return Ok((s, dmax)),
            Err(GrassmannError::NotStabilized { .. }) if dmax < 12 => dmax = (dmax * 2).min(12),
            Err(e) => return Err(e.into()),
        }
    }
}
