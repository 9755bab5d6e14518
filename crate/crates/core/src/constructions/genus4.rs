//! Genus 4: S = Q ∩ Y in P⁴ with Q a cone over a smooth quadric of P³.
//! The two rulings of the quadric give the two elliptic pencils of plane
//! cubics.

use serde_json::json;

use super::{
    lift_vars, linear_form, require_order, run_attempts, stable_value, Builder, ConstructionConfig,
    ConstructionError, ConstructionReport, PencilRecord, Pipeline, Result, Rng,
};
use crate::exactlin::fieldmat::echelon;
use crate::exactlin::{Elem, FiniteField};
use crate::grassmann::{hilbert_series, jacobian_rank_at, rational_points, GradedIdeal, LinearSubspace, Polynomial};
use crate::k3lattice::{genus4_parameter_count, pencil_census, u3};

pub struct Genus4Surface {
    /// y = A·(x0..x3) puts the base quadric in the form y0·y3 − y1·y2.
    pub transform: Vec<Vec<Elem>>,
    pub quadric: Polynomial,
    pub cubic: Polynomial,
    pub ideal: GradedIdeal,
}

impl Genus4Surface {
    /// The two linear forms of the plane over the line of ruling r through
    /// the parameter (s : t).
    pub fn ruling_plane(&self, field: &FiniteField, r: usize, s: Elem, t: Elem) -> [Vec<Elem>; 2] {
        let a = &self.transform;
        let comb = |i: usize, j: usize| -> Vec<Elem> {
            let mut v: Vec<Elem> = (0..4).map(|k| field.sub(field.mul(s, a[i][k]), field.mul(t, a[j][k]))).collect();
            v.push(0);
            v
        };
        if r == 0 {
            [comb(0, 1), comb(2, 3)]
        } else {
            [comb(0, 2), comb(1, 3)]
        }
    }
}

/// Validates the data of a genus-4 surface: A invertible and the cone vertex
/// e4 off the cubic.
pub fn genus4_surface(field: &FiniteField, transform: &[Vec<Elem>], cubic: &Polynomial) -> Result<Genus4Surface> {
    if transform.len() != 4 || echelon(field, transform, 4, false).rank() != 4 {
        return Err(ConstructionError::Precondition("quadric transform must be an invertible 4x4 matrix".into()));
    }
    if cubic.nvars != 5 || cubic.degree() != Some(3) || !cubic.is_homogeneous() {
        return Err(ConstructionError::Precondition("need a homogeneous cubic in 5 variables".into()));
    }
    if cubic.eval(field, &[0, 0, 0, 0, 1]) == 0 {
        return Err(ConstructionError::VertexOnSurface);
    }
    let y: Vec<Polynomial> = transform.iter().map(|row| linear_form(field, row, 5)).collect();
    let quadric = y[0].mul(field, &y[3]).add(field, &y[1].mul(field, &y[2]).scale(field, field.neg(1)));
    let ideal = GradedIdeal::new(field, 5, vec![quadric.clone(), cubic.clone()]);
    Ok(Genus4Surface { transform: transform.to_vec(), quadric, cubic: cubic.clone(), ideal })
}

/// Rank of a quadratic form from its partial derivatives (odd characteristic).
fn quadric_rank(field: &FiniteField, q: &Polynomial) -> usize {
    let n = q.nvars;
    let rows: Vec<Vec<Elem>> = (0..n).map(|i| linear_coeffs(&q.partial(field, i), n)).collect();
    echelon(field, &rows, n, false).rank()
}

fn linear_coeffs(p: &Polynomial, n: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    for (m, c) in &p.terms {
        if let Some(i) = m.iter().position(|&e| e == 1) {
            v[i] = *c;
        }
    }
    v
}

fn with_forms(ideal: &GradedIdeal, forms: &[Vec<Elem>]) -> GradedIdeal {
    let n = ideal.nvars();
    ideal.with_generators(forms.iter().map(|f| linear_form(ideal.field(), f, n)))
}

/// HF(d) = 3d²+2 and Jacobian rank 2 at every rational point.
fn surface_checks(b: &mut Builder, ideal: &GradedIdeal, cfg: &ConstructionConfig) -> Result<()> {
    b.check_hilbert("S", ideal, 1, 4, |d| 3 * d * d + 2)?;
    let pts = rational_points(ideal, cfg.point_cap)?;
    let mut min_rank = None;
    for p in &pts {
        let r = jacobian_rank_at(ideal, p)?;
        if r < 2 {
            return Err(ConstructionError::SingularSurface);
        }
        min_rank = Some(min_rank.map_or(r, |m: usize| m.min(r)));
    }
    b.smoothness(pts.len(), 2, min_rank);
    b.check("Jacobian rank at every rational point of S", json!(2), json!(min_rank.unwrap_or(2)));
    Ok(())
}

/// Members of the two pencils and their intersection: plane cubics meeting
/// along a line in three points.
fn pencil_checks(b: &mut Builder, ideal: &GradedIdeal, planes: [[Vec<Elem>; 2]; 2], cfg: &ConstructionConfig) -> Result<()> {
    let field = ideal.field().clone();
    for (r, plane) in planes.iter().enumerate() {
        let member = with_forms(ideal, plane);
        let name = format!("member of pencil {}", r + 1);
        b.check_hilbert(&name, &member, 1, 4, |d| 3 * d)?;
        let hf = hilbert_series(&member, 4)?;
        b.pencil(PencilRecord { label: format!("ruling {}", r + 1), dual_point: None, member_sample: member.dump(), degree: hf[4] - hf[3] });
    }
    b.pencil_count(2);
    let mut both = planes[0].to_vec();
    both.extend(planes[1].iter().cloned());
    let cross = with_forms(ideal, &both);
    let hf = hilbert_series(&cross, 4)?;
    b.hilbert("member intersection", hf.clone());
    let e1e2 = lattice_e1e2();
    b.check("intersection degree of members from opposite rulings", json!(e1e2), json!(stable_value(&hf[2..], 3)));
    // univariate oracle on the common line
    let line = echelon(&field, &both, 5, true).kernel(&field);
    b.check("members from opposite rulings meet along a line", json!(2), json!(line.len()));
    if line.len() == 2 {
        let map: Vec<Vec<Elem>> = (0..5).map(|i| vec![line[0][i], line[1][i]]).collect();
        let binary = ideal.generators()[1].substitute(&field, &map, 2);
        b.check("cubic restricted to the common line is nonzero", json!(true), json!(!binary.is_zero()));
        let roots = binary_roots(&field, &binary);
        let common = rational_points(&cross, cfg.point_cap)?;
        b.check("rational common points equal roots of the line cubic", json!(roots), json!(common.len()));
    }
    Ok(())
}

fn binary_roots(field: &FiniteField, p: &Polynomial) -> usize {
    let mut n = usize::from(p.eval(field, &[0, 1]) == 0);
    for t in field.elements() {
        n += usize::from(p.eval(field, &[1, t]) == 0);
    }
    n
}

fn lattice_e1e2() -> i64 {
    let pl = u3();
    let c = pencil_census(&pl, 3).expect("U(3) is ample");
    pl.pairing(&c.classes[0], &c.classes[1]).expect("same rank")
}

fn lattice_checks(b: &mut Builder) {
    let pl = u3();
    let census = pencil_census(&pl, 3).expect("U(3) is ample");
    b.check("lattice: degree-3 pencil census of U(3) equals the geometric count", json!(2), json!(census.count()));
    b.check("lattice: E1.E2 in U(3)", json!(3), json!(lattice_e1e2()));
    let pc = genus4_parameter_count();
    b.check("lattice: quadrics + cubics - group = 19", json!(19), json!(pc.quadrics + pc.cubics - pc.group));
}

/// Random cone over a split quadric intersected with a random cubic.
pub fn build_genus4(field: &FiniteField, seed: u64, cfg: &ConstructionConfig) -> Result<ConstructionReport> {
    require_order(field, 5)?;
    run_attempts(Pipeline::Genus4, 4, None, field, seed, cfg, |b, rng: &mut Rng| {
        let a = rng.invertible(field, 4);
        let cubic = rng.form(field, 5, 3);
        let surf = genus4_surface(field, &a, &cubic)?;
        b.ideal("S", &surf.ideal);
        b.check("base quadric has rank 4", json!(4), json!(quadric_rank(field, &surf.quadric)));
        surface_checks(b, &surf.ideal, cfg)?;
        let (s1, s2) = (rng.elem(field), rng.elem(field));
        let planes = [surf.ruling_plane(field, 0, 1, s1), surf.ruling_plane(field, 1, 1, s2)];
        pencil_checks(b, &surf.ideal, planes, cfg)?;
        lattice_checks(b);
        Ok(())
    })
}

/// Lines on a smooth quadric surface through its first rational point.
fn lines_through_a_point(field: &FiniteField, q: &Polynomial, cap: u128) -> Result<Vec<LinearSubspace>> {
    let ideal = GradedIdeal::new(field, 4, vec![q.clone()]);
    let pts = rational_points(&ideal, cap)?;
    let Some(p) = pts.first() else { return Ok(Vec::new()) };
    let tangent: Vec<Elem> = (0..4).map(|i| q.partial(field, i).eval(field, p)).collect();
    let mut lines: Vec<LinearSubspace> = Vec::new();
    for r in &pts {
        if r == p || crate::exactlin::fieldmat::dot(field, &tangent, r) != 0 {
            continue;
        }
        if lines.iter().any(|l| l.contains(r)) {
            continue;
        }
        lines.push(LinearSubspace::from_points(field, 4, &[p.clone(), r.clone()]));
    }
    Ok(lines)
}

/// Extends the canonical genus-4 curve C = V(Q′, Y′) ⊂ P³ to a K3 surface:
/// Q is the cone over Q′ with vertex e4 and Y = Y′ + x4·R for a random
/// quadric R.
pub fn extend_genus4_curve(
    field: &FiniteField,
    quadric: &Polynomial,
    cubic: &Polynomial,
    seed: u64,
    cfg: &ConstructionConfig,
) -> Result<ConstructionReport> {
    require_order(field, 5)?;
    let ok_shape = |p: &Polynomial, d| p.nvars == 4 && p.is_homogeneous() && p.degree() == Some(d);
    if !ok_shape(quadric, 2) || !ok_shape(cubic, 3) {
        return Err(ConstructionError::Precondition("need a quadric and a cubic in 4 variables".into()));
    }
    let rank = quadric_rank(field, quadric);
    if rank != 4 {
        return Err(ConstructionError::Precondition(format!(
            "quadric has rank {rank}; the two trigonal pencils coincide unless it is smooth"
        )));
    }
    let curve = GradedIdeal::new(field, 4, vec![quadric.clone(), cubic.clone()]);
    run_attempts(Pipeline::Genus4Extend, 4, None, field, seed, cfg, |b, rng: &mut Rng| {
        b.ideal("curve", &curve);
        let r = rng.form(field, 5, 2);
        if r.eval(field, &[0, 0, 0, 0, 1]) == 0 {
            return Err(ConstructionError::VertexOnSurface);
        }
        let q5 = lift_vars(quadric, 5, field);
        let x4 = Polynomial::variable(5, 4);
        let y5 = lift_vars(cubic, 5, field).add(field, &x4.mul(field, &r));
        let ideal = GradedIdeal::new(field, 5, vec![q5.clone(), y5.clone()]);
        b.ideal("S", &ideal);
        // x4 = 0 recovers the curve
        let restrict: Vec<Vec<Elem>> = (0..5).map(|i| (0..4).map(|k| Elem::from(i == k)).collect()).collect();
        let back = [q5.substitute(field, &restrict, 4), y5.substitute(field, &restrict, 4)];
        b.check("restriction to x4 = 0 reproduces (Q', Y')", json!(true), json!(back[0] == *quadric && back[1] == *cubic));
        let contained = back.iter().all(|g| {
            let d = g.degree().unwrap_or(0);
            curve.with_generators([g.clone()]).graded_piece(d).len() == curve.graded_piece(d).len()
        });
        b.check("I_S restricted to the hyperplane lies in I_C", json!(true), json!(contained));
        b.check_hilbert("C", &curve, 1, 4, |d| if d == 1 { 4 } else { 6 * d - 3 })?;
        surface_checks(b, &ideal, cfg)?;
        let lines = lines_through_a_point(field, quadric, cfg.point_cap)?;
        if lines.len() != 2 {
            b.note("Q' is not split over the base field; pencil restriction checks skipped");
            b.pencil_count(2);
        } else {
            let planes = [0, 1].map(|k| {
                let f = lines[k].forms();
                [pad(&f[0]), pad(&f[1])]
            });
            pencil_checks(b, &ideal, planes.clone(), cfg)?;
            for (k, line) in lines.iter().enumerate() {
                let on_curve = curve.with_generators(line.forms().iter().map(|f| Polynomial::linear(field, f)));
                let hf = hilbert_series(&on_curve, 4)?;
                b.check(format!("pencil {} cuts a degree-3 divisor on C", k + 1), json!(3), json!(stable_value(&hf[2..], 3)));
                let mut lifted: Vec<Vec<Elem>> = rational_points(&on_curve, cfg.point_cap)?
                    .into_iter()
                    .map(|mut p| {
                        p.push(0);
                        p
                    })
                    .collect();
                lifted.sort();
                let mut forms = planes[k].to_vec();
                forms.push(vec![0, 0, 0, 0, 1]);
                let hyper = with_forms(&ideal, &forms);
                b.check(
                    format!("member of pencil {} restricts to the divisor of the trigonal pencil", k + 1),
                    json!(lifted),
                    json!(rational_points(&hyper, cfg.point_cap)?),
                );
            }
        }
        lattice_checks(b);
        Ok(())
    })
}

fn pad(f: &[Elem]) -> Vec<Elem> {
    let mut v = f.to_vec();
    v.push(0);
    v
}
