//! Genus 6: S = Ŷ ∩ Q′ with Ŷ ⊂ P⁶ the cone over a quintic del Pezzo
//! surface Y = P⁵ ∩ G(V₅, 2). The dual P³ of P⁵ is spanned by four seeded
//! points of the dual Grassmannian and meets it in a fifth; each of the five
//! gives a pencil of elliptic quartics, cones over conics of Y cut by Q′.

use serde_json::json;

use super::{
    lift_vars, linear_form, require_order, run_attempts, stable_value, Builder, ConstructionConfig,
    ConstructionError, ConstructionReport, PencilRecord, Pipeline, Result, Rng,
};
use crate::exactlin::fieldmat::normalize;
use crate::exactlin::{Elem, FiniteField};
use crate::grassmann::{
    grassmannian_section_points, hilbert_series, jacobian_rank_at, linear_section_ideal, plucker_embed,
    sub_grassmannian_forms, GradedIdeal, LinearSubspace, PluckerSystem,
};
use crate::k3lattice::{m6, pencil_census, DivisorClass};

/// A random nonzero φ in the 2-plane of the dual point u.
pub(crate) fn pencil_functional(sys: &PluckerSystem, field: &FiniteField, u: &[Elem], rng: &mut Rng) -> Vec<Elem> {
    let [a, b] = sys.plane_basis(field, u);
    let t = rng.elem(field);
    let mut phi: Vec<Elem> = a.iter().zip(&b).map(|(x, y)| field.add(*x, field.mul(t, *y))).collect();
    normalize(field, &mut phi);
    phi
}

/// Forms of P(∧² ker φ) in the coordinates of `sub`, padded to `nvars`.
pub(crate) fn member_forms(sys: &PluckerSystem, sub: &LinearSubspace, phi: &[Elem], nvars: usize) -> Vec<Vec<Elem>> {
    sub_grassmannian_forms(sys, sub.field(), phi)
        .iter()
        .map(|f| {
            let mut r = sub.restrict_form(f);
            r.resize(nvars, 0);
            r
        })
        .collect()
}

pub(crate) fn with_forms(ideal: &GradedIdeal, forms: &[Vec<Elem>]) -> GradedIdeal {
    let n = ideal.nvars();
    ideal.with_generators(forms.iter().map(|f| linear_form(ideal.field(), f, n)))
}

/// Seeds `count` Plücker points of random planes in F^n.
pub(crate) fn seed_points(sys: &PluckerSystem, field: &FiniteField, rng: &mut Rng, count: usize) -> Vec<Vec<Elem>> {
    (0..count)
        .map(|_| {
            let [u, v] = rng.plane(field, sys.n());
            plucker_embed(sys, field, &u, &v).expect("plane is independent")
        })
        .collect()
}

pub fn build_genus6(field: &FiniteField, seed: u64, cfg: &ConstructionConfig) -> Result<ConstructionReport> {
    require_order(field, 5)?;
    let sys = PluckerSystem::new(5)?;
    run_attempts(Pipeline::Genus6, 6, None, field, seed, cfg, |b, rng: &mut Rng| attempt(b, rng, &sys, field, cfg))
}

fn attempt(b: &mut Builder, rng: &mut Rng, sys: &PluckerSystem, field: &FiniteField, cfg: &ConstructionConfig) -> Result<()> {
    let seeds = seed_points(sys, field, rng, 4);
    let p3 = LinearSubspace::from_points(field, 10, &seeds);
    if p3.projective_dim() != 3 {
        return Err(ConstructionError::SpanDegenerate { expected: 3, got: p3.projective_dim() });
    }
    let dual = grassmannian_section_points(5, &p3, cfg.point_cap)?;
    if dual.len() != 5 {
        return Err(ConstructionError::ExtraDualPoints { expected: 5, got: dual.len() });
    }
    let seeded = seeds.iter().all(|s| dual.contains(s));
    b.check("dual census contains the four seeded points", json!(true), json!(seeded));
    b.check("dual census (four seeds plus the residual point)", json!(5), json!(dual.len()));

    let p5 = p3.annihilator();
    b.check("projective dimension of the dual space", json!(5), json!(p5.projective_dim()));
    let y = linear_section_ideal(sys, &p5);
    b.ideal("Y", &y);
    b.check_hilbert("Y", &y, 0, 4, |d| (5 * d * d + 5 * d) / 2 + 1)?;

    // the cone in P⁶ with vertex t6, cut by a random quadric
    let quadric = rng.form(field, 7, 2);
    let mut vertex = vec![0; 7];
    vertex[6] = 1;
    if quadric.eval(field, &vertex) == 0 {
        return Err(ConstructionError::VertexOnSurface);
    }
    let cone: Vec<_> = y.generators().iter().map(|g| lift_vars(g, 7, field)).collect();
    let mut gens = cone.clone();
    gens.push(quadric.clone());
    let s = GradedIdeal::new(field, 7, gens);
    b.ideal("S", &s);
    b.check_hilbert("S", &s, 1, 4, |d| 5 * d * d + 2)?;

    // rational points of S lie over rational points of Y
    let mut pts = Vec::new();
    for p in grassmannian_section_points(5, &p5, cfg.point_cap)? {
        let mut c = p5.coordinates(&p).expect("section point lies in P5");
        c.push(0);
        for t in field.elements() {
            c[6] = t;
            if quadric.eval(field, &c) == 0 {
                let mut q = c.clone();
                normalize(field, &mut q);
                pts.push(q);
            }
        }
    }
    pts.sort();
    pts.dedup();
    let mut min_rank = None;
    for p in &pts {
        let r = jacobian_rank_at(&s, p)?;
        if r < 4 {
            return Err(ConstructionError::SingularSurface);
        }
        min_rank = Some(min_rank.map_or(r, |m: usize| m.min(r)));
    }
    b.smoothness(pts.len(), 4, min_rank);
    b.check("Jacobian rank at every sampled rational point of S", json!(4), json!(min_rank.unwrap_or(4)));

    let mut forms = Vec::new();
    for (k, u) in dual.iter().enumerate() {
        let phi = pencil_functional(sys, field, u, rng);
        let f = member_forms(sys, &p5, &phi, 7);
        let conic = with_forms(&y, &f.iter().map(|r| r[..6].to_vec()).collect::<Vec<_>>());
        let label = format!("pencil {}", k + 1);
        b.check_hilbert(&format!("conic of {label}"), &conic, 1, 4, |d| 2 * d + 1)?;
        let member = with_forms(&s, &f);
        b.check_hilbert(&format!("member of {label}"), &member, 1, 4, |d| 4 * d)?;
        let hf = hilbert_series(&member, 4)?;
        b.pencil(PencilRecord { label, dual_point: Some(u.clone()), member_sample: member.dump(), degree: hf[4] - hf[3] });
        forms.push(f);
    }
    b.pencil_count(dual.len());
    let mut degrees = Vec::new();
    for a in 0..forms.len() {
        for c in a + 1..forms.len() {
            let mut both = forms[a].clone();
            both.extend(forms[c].iter().cloned());
            let hf = hilbert_series(&with_forms(&s, &both), 4)?;
            degrees.push(stable_value(&hf[2..], 3));
        }
    }
    b.check("cross-pencil intersection degrees", json!(vec![Some(2); 10]), json!(degrees));
    lattice_checks(b, dual.len());
    Ok(())
}

fn lattice_checks(b: &mut Builder, geometric: usize) {
    let pl = m6();
    let census = pencil_census(&pl, 4).expect("M is ample");
    b.check("lattice: degree-4 pencil census of M equals the geometric count", json!(geometric), json!(census.count()));
    let sum = census.classes.iter().fold(DivisorClass::zero(pl.rank()), |acc, e| acc.add(e));
    b.check("lattice: sum of the pencil classes is 2L", json!(pl.polarization().scale(2)), json!(sum));
    let mut cross = Vec::new();
    for (i, e) in census.classes.iter().enumerate() {
        for f in &census.classes[i + 1..] {
            cross.push(pl.pairing(e, f).expect("same rank"));
        }
    }
    b.check("lattice: E_i.E_j in M", json!(vec![2; 10]), json!(cross));
}
