//! End-to-end acceptance run: one line per criterion, each at its pinned
//! tolerance and time budget. Lines go straight to stderr so they show up
//! whether or not the harness captures output.

use std::io::Write;
use std::time::{Duration, Instant};

use k3lab::constructions::*;
use k3lab::exactlin::fieldmat::normalize;
use k3lab::exactlin::{signature, signature::congruent, Elem, FiniteField};
use k3lab::grassmann::*;
use k3lab::k3lattice::*;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

struct Criterion {
    failures: Vec<String>,
}

impl Criterion {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }
}

fn line(text: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{text}");
}

fn run(id: u8, title: &str, budget: Duration, body: impl FnOnce(&mut Criterion)) -> bool {
    let start = Instant::now();
    let mut c = Criterion { failures: Vec::new() };
    body(&mut c);
    let elapsed = start.elapsed();
    if elapsed > budget {
        c.failures.push(format!("took {elapsed:.1?}, budget {budget:?}"));
    }
    let ok = c.failures.is_empty();
    line(&format!("criterion {id} {}: {title} ({elapsed:.2?})", if ok { "PASS" } else { "FAIL" }));
    for f in &c.failures {
        line(&format!("    {f}"));
    }
    ok
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn sig(pl: &PolarizedLattice) -> (usize, usize, usize) {
    let s = pl.lattice().signature();
    (s.n_plus, s.n_minus, s.n_zero)
}

fn signatures(c: &mut Criterion) {
    c.eq("U(3)", sig(&u3()), (1, 1, 0));
    c.eq("M", sig(&m6()), (1, 4, 0));
    for i in 1..=9 {
        c.eq(&format!("N{i}"), sig(&n_lattice(i)), (1, i, 0));
    }
    let g6 = signature(&bordered_gram(6, 4, 2, 6)).unwrap();
    c.expect(g6.n_plus + g6.n_zero >= 2, format!("6x6 genus-6 pattern {g6:?} has fewer than 2 non-negative eigenvalues"));
    let g8 = signature(&bordered_gram(8, 5, 2, 11)).unwrap();
    c.expect(g8.n_plus >= 2, format!("11x11 genus-8 pattern {g8:?} has fewer than 2 positive eigenvalues"));
}

fn censuses(c: &mut Criterion) {
    let u = enumerate_slice(&u3(), 3, 0, Orientation::Effective).unwrap();
    c.eq("U(3) square-0 degree-3 classes", u.classes, vec![DivisorClass(vec![0, 1]), DivisorClass(vec![1, -1])]);

    let m = m6();
    let mc = enumerate_slice(&m, 4, 0, Orientation::Effective).unwrap();
    c.eq("M square-0 degree-4 count", mc.count(), 5);
    let sum = mc.classes.iter().fold(DivisorClass::zero(5), |a, x| a.add(x));
    c.eq("sum of the M pencils", sum, DivisorClass(vec![2, 0, 0, 0, 0]));

    let n9 = n_lattice(9);
    let slice = enumerate_slice(&n9, 5, 0, Orientation::Effective).unwrap();
    let nef = pencil_census(&n9, 5).unwrap();
    line(&format!("    N9: {} oriented square-0 degree-5 classes, {} of them nef", slice.count(), nef.count()));
    c.expect(nef.count() >= 9, format!("N9 nef census {} < 9", nef.count()));
    for i in 1..=9 {
        let cert = certify_nef(&n9, &DivisorClass::basis(10, i)).unwrap();
        if !cert.passed() {
            let w = &cert.witnesses[0];
            c.failures.push(format!("E{i} not nef: {} {:?}", w.reason, w.classes));
        }
    }
}

fn certificates(c: &mut Criterion) {
    for name in BUILTIN_NAMES {
        let pl = builtin(name).unwrap();
        let ample = certify_ample(&pl).unwrap();
        c.expect(ample.passed(), format!("{name}: ample FAIL {:?}", ample.witnesses.first()));
        let bn = certify_bn_general(&pl).unwrap();
        if !bn.passed() {
            let w = &bn.witnesses[0];
            c.failures.push(format!("{name}: BN FAIL, {} {:?}", w.reason, w.classes));
        }
    }
    // (0, 1) is a (−2)-class orthogonal to L
    let lat = GramLattice::unlabeled(vec![vec![2, 0], vec![0, -2]]).unwrap();
    let l = DivisorClass(vec![1, 0]);
    let pl = PolarizedLattice::new(lat, l.clone(), l).unwrap();
    let cert = certify_ample(&pl).unwrap();
    c.expect(!cert.passed(), "ample fixture passed");
    c.expect(cert.witnesses.iter().any(|w| w.classes == [DivisorClass(vec![0, 1])]), "ample fixture: witness (0,1) missing");
    // M = (0, 1) and N = L − M: h0 bounds 2 · 4 >= 7
    let lat = GramLattice::unlabeled(vec![vec![10, 3], vec![3, 0]]).unwrap();
    let l = DivisorClass(vec![1, 0]);
    let pl = PolarizedLattice::new(lat, l.clone(), l).unwrap();
    c.expect(certify_ample(&pl).unwrap().passed(), "BN fixture should be ample");
    let cert = certify_bn_general(&pl).unwrap();
    c.expect(!cert.passed(), "BN fixture passed");
    c.expect(
        cert.witnesses.iter().any(|w| w.classes.contains(&DivisorClass(vec![0, 1])) && w.classes.contains(&DivisorClass(vec![1, -1]))),
        "BN fixture: witness pair {(0,1), (1,-1)} missing",
    );
}

fn dimensions(c: &mut Criterion) {
    let dims = |pl: &PolarizedLattice| {
        let d = moduli_dimensions(pl.lattice(), pl.genus()).unwrap();
        (d.dim_f, d.dim_p)
    };
    c.eq("U(3)", dims(&u3()), (18, 22));
    c.eq("M", dims(&m6()), (15, 21));
    for i in 1..=9 {
        c.eq(&format!("N{i}"), dims(&n_lattice(i)), (19 - i as i64, 27 - i as i64));
    }
    let p = genus4_parameter_count();
    c.eq("quadrics, cubics, group", (p.quadrics, p.cubics, p.group), (14, 29, 24));
    c.eq("14 + 29 - 24", p.quadrics + p.cubics - p.group, 19);
    c.eq("recorded total", p.total, 19);
}

fn fiber_chain(c: &mut Criterion) {
    for i in [1, 9] {
        let pl = n_lattice(i);
        let e = DivisorClass::basis(i + 1, 1);
        let l = DivisorClass::basis(i + 1, 0);
        let comb = |a: i64, b: i64| DivisorClass::combine(a, &l, b, &e);
        c.eq("(L-E)^2", pl.square(&comb(1, -1)), 4);
        c.eq("(L-E).L", pl.pairing(&comb(1, -1), &l).unwrap(), 9);
        c.eq("(L-2E)^2", pl.square(&comb(1, -2)), -6);
        // h0 = h2 = 0, so h1 = -chi
        c.eq("h1(L-2E)", -rr_chi(&pl, &comb(1, -2)).unwrap(), 1);
        c.eq("(3L-4E)^2", pl.square(&comb(3, -4)), 6);
        let rep = verify_fiber_chain_genus8(&pl, &e).unwrap();
        for s in rep.steps.iter().filter(|s| !s.status.is_pass()) {
            c.failures.push(format!("N{i}: {} expected {}, got {}", s.name, s.expected, s.got));
        }
        let step = |name: &str| rep.steps.iter().find(|s| s.name == name).map(|s| s.got);
        c.eq(&format!("N{i} case II D.E"), step("case II: D.E"), Some(5));
        c.eq(&format!("N{i} case II D.L"), step("case II: D.L"), Some(6));
        c.expect(rep.status.is_pass(), format!("N{i}: chain FAIL"));
        c.eq(&format!("N{i} bound"), rep.bound, 6);
    }
}

fn lm(c: &mut Criterion) {
    let a = lm_invariants(8, 5, 1).unwrap();
    c.eq("(8,5) chi", a.chi, 6);
    c.eq("(8,5) verdict", a.verdict, LmVerdict::UnstableWitness);
    c.eq("(8,5) slopes", (a.mu_sub, a.mu_bundle), (9, 7));
    let b = lm_invariants(6, 4, 1).unwrap();
    c.eq("(6,4) chi", b.chi, 5);
    c.eq("(6,4) verdict", b.verdict, LmVerdict::UnstableWitness);
    let d = lm_invariants(4, 3, 1).unwrap();
    c.eq("(4,3) slopes", (d.mu_sub, d.mu_bundle), (3, 3));
    c.eq("(4,3) verdict", d.verdict, LmVerdict::StrictlySemistableWitness);
    // chi = 2·rank + (c1² − 2·c2)/2 by hand: 4 + (6 − 6)/2
    c.eq("(4,3) chi", d.chi, 4);
}

fn grassmann_oracles(c: &mut Criterion) {
    let f2 = FiniteField::prime(2).unwrap();
    for (n, want) in [(6usize, 651u128), (5, 155), (4, 35)] {
        let pts = enumerate_grassmannian(n, &f2, 1 << 20).unwrap();
        c.eq(&format!("|G(2,F2^{n})| enumerated"), pts.len() as u128, want);
        c.eq(&format!("|G(2,F2^{n})| formula"), grassmannian_point_count(n, 2), want);
        c.eq(&format!("|G(2,F2^{n})| independent oracle"), gaussian_binomial(n as u32, 2), want);
    }
    let sys = PluckerSystem::new(6).unwrap();
    let pts = enumerate_grassmannian(6, &f2, 1 << 20).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = 0;
    for _ in 0..20 {
        let (u, v) = random_plane(&f2, &mut rng, 6);
        let h = schubert_hyperplane(&sys, &f2, &u, &v).unwrap();
        let perp = orthogonal_complement(&f2, &[u.clone(), v.clone()], 6);
        let mut wedge = schubert_wedge_form(&sys, &f2, &u, &v).unwrap();
        let mut form = h.form.clone();
        normalize(&f2, &mut wedge);
        normalize(&f2, &mut form);
        c.expect(wedge == form, "dot and wedge Schubert forms disagree");
        bad += pts.iter().filter(|p| h.contains(&f2, p) != meets(&f2, &sys.plane_basis(&f2, p), &perp, 6)).count();
    }
    c.eq("Schubert membership disagreements over 20 x 651 points", bad, 0);

    let a: Vec<Elem> = vec![1, 1, 0, 1, 0, 0];
    let b: Vec<Elem> = vec![0, 0, 1, 1, 1, 0];
    let ga = LinearSubspace::from_forms(&f2, 15, &sub_grassmannian_forms(&sys, &f2, &a));
    let gb = LinearSubspace::from_forms(&f2, 15, &sub_grassmannian_forms(&sys, &f2, &b));
    let both: Vec<_> = pts.iter().filter(|p| ga.contains(p) && gb.contains(p)).cloned().collect();
    // planes inside ker a ∩ ker b, checked by annihilation
    let direct: Vec<_> = pts
        .iter()
        .filter(|p| {
            sys.plane_basis(&f2, p).iter().all(|w| {
                let ev = |phi: &[Elem]| w.iter().zip(phi).fold(0, |acc, (x, y)| f2.add(acc, f2.mul(*x, *y)));
                ev(&a) == 0 && ev(&b) == 0
            })
        })
        .cloned()
        .collect();
    c.eq("G(V5,2) ∩ G(V5',2) vs G(V5 ∩ V5',2)", both.clone(), direct);
    c.eq("point count", both.len(), 35);
}

fn constructions(c: &mut Criterion) {
    let cfg = ConstructionConfig::default();
    let mut pipeline = |label: &str, budget: u64, f: &dyn Fn() -> k3lab::constructions::Result<ConstructionReport>, check: &dyn Fn(&ConstructionReport, &mut Criterion)| {
        let start = Instant::now();
        match f() {
            Ok(r) => {
                let before = c.failures.len();
                for k in r.failed_checks() {
                    c.failures.push(format!("{label}: {} expected {}, got {}", k.name, k.expected, k.got));
                }
                check(&r, c);
                line(&format!(
                    "    {label}: {:?} at attempt {} with {} pencils, {} failed items ({:.1?})",
                    r.status,
                    r.attempt,
                    r.pencil_count,
                    c.failures.len() - before,
                    start.elapsed()
                ));
            }
            Err(e) => c.failures.push(format!("{label}: {e}")),
        }
        if start.elapsed() > secs(budget) {
            c.failures.push(format!("{label}: over the {budget} s budget"));
        }
    };
    let hf = |r: &ConstructionReport, key: &str| r.hilbert.get(key).cloned().unwrap_or_default();

    let f7 = FiniteField::prime(7).unwrap();
    pipeline("genus 4, q = 7, seed 1", 300, &|| build_genus4(&f7, 1, &cfg), &|r, c| {
        c.eq("genus 4 HF_S", hf(r, "S")[1..].to_vec(), (1..=4).map(|d| 3 * d * d + 2).collect::<Vec<_>>());
        c.eq("genus 4 pencils", r.pencil_count, 2);
        let line_degree = r.checks.iter().find(|k| k.name.starts_with("intersection degree")).map(|k| k.got.clone());
        c.eq("genus 4 line degree", line_degree, Some(serde_json::json!(3)));
    });

    let f11 = FiniteField::prime(11).unwrap();
    let x = |i| Polynomial::variable(4, i);
    let q = x(0).mul(&f11, &x(3)).add(&f11, &x(1).mul(&f11, &x(2)).scale(&f11, 10));
    let y = Rng::new(4, 0).form(&f11, 4, 3);
    pipeline("genus 4 extension, q = 11", 300, &|| extend_genus4_curve(&f11, &q, &y, 2, &cfg), &|r, c| {
        let contained = r.checks.iter().find(|k| k.name.contains("lies in I_C")).map(|k| k.status);
        c.eq("ideal containment", contained, Some(Status::Pass));
    });

    pipeline("genus 6, q = 11, seed 3", 300, &|| build_genus6(&f11, 3, &cfg), &|r, c| {
        c.eq("genus 6 HF_S", hf(r, "S")[1..].to_vec(), (1..=4).map(|d| 5 * d * d + 2).collect::<Vec<_>>());
        c.eq("genus 6 pencils", r.pencil_count, 5);
        let cross = r.checks.iter().find(|k| k.name == "cross-pencil intersection degrees").map(|k| k.got.clone());
        c.eq("genus 6 cross degrees", cross, Some(serde_json::json!(vec![2; 10])));
    });

    let f13 = FiniteField::prime(13).unwrap();
    for i in 1..=6 {
        pipeline(&format!("genus 8 secant i = {i}, q = 13, seed 7"), 300, &|| build_genus8_secant(i, &f13, 7, &cfg), &|r, c| {
            c.eq("genus 8 HF_S", hf(r, "S")[1..].to_vec(), (1..=4).map(|d| 7 * d * d + 2).collect::<Vec<_>>());
            c.eq("dual census", r.pencil_count, i);
            c.eq("stable census HF", hf(r, "dual census").last().copied(), Some(i));
        });
    }

    // a single seed is reported; the failure is structural, see the notes
    pipeline("genus 8 nine pencils, q = 13, seed 5", 300, &|| build_genus8_nine(&f13, 5, &cfg), &|r, c| {
        c.eq("curve HF", hf(r, "C")[2..=6].to_vec(), (2..=6).map(|d| 14 * d - 7).collect::<Vec<_>>());
        let span = r.checks.iter().find(|k| k.name == "projective dimension of span(D')").map(|k| k.got.clone());
        c.eq("residual span dim", span, Some(serde_json::json!(5)));
        c.eq("dual census length", hf(r, "dual census").last().copied(), Some(9));
        let cross = r.checks.iter().find(|k| k.name.starts_with("cross-pencil")).map(|k| k.got.clone());
        c.expect(
            cross.as_ref().and_then(|v| v.as_array()).is_some_and(|a| !a.is_empty() && a.iter().all(|x| x == 2)),
            format!("cross-pencil degrees {cross:?}"),
        );
        for n in r.notes.iter().filter(|n| n.contains("singular")) {
            line(&format!("    note: {n}"));
        }
    });
}

fn properties(c: &mut Criterion) {
    let mut agree = 0;
    let mut tried = 0;
    let mut seed = 0u64;
    while tried < 200 {
        seed += 1;
        let pl = random_polarized(seed);
        let d = (seed % 6) as i64;
        let s = 2 * ((seed / 6) % 4) as i64 - 4;
        let b = box_bound(&pl, d, s);
        if b > 14 {
            continue;
        }
        tried += 1;
        if enumerate_slice(&pl, d, s, Orientation::Any).unwrap().classes == brute(&pl, d, s, b) {
            agree += 1;
        }
    }
    c.eq("slice enumeration vs box search (of 200)", agree, 200);

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut same = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=5usize);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-4..=4);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        let b = random_unimodular(n, &mut rng, 10);
        same += usize::from(signature(&congruent(&g, &b)).unwrap() == signature(&g).unwrap());
    }
    c.eq("signature invariance (of 500)", same, 500);

    let f = FiniteField::prime(13).unwrap();
    let mut vanish = 0;
    for t in 0..1000 {
        let n = 4 + t % 3;
        let sys = PluckerSystem::new(n).unwrap();
        let (u, v) = random_plane(&f, &mut rng, n);
        let p = plucker_embed(&sys, &f, &u, &v).unwrap();
        vanish += usize::from(sys.relations_vanish(&f, &p) && sys.ideal(&f).vanishes_at(&p));
    }
    c.eq("Plücker relations vanish (of 1000)", vanish, 1000);

    let mut involutive = 0;
    for _ in 0..200 {
        let k = rng.random_range(0..=15);
        let pts: Vec<Vec<Elem>> = (0..k).map(|_| random_vec(&f, &mut rng, 15)).collect();
        let s = LinearSubspace::from_points(&f, 15, &pts);
        let a = annihilator(&s);
        involutive += usize::from(annihilator(&a) == s && s.projective_dim() + a.projective_dim() == 13);
    }
    c.eq("annihilator involution (of 200)", involutive, 200);

    let cfg = ConstructionConfig::default();
    let f7 = FiniteField::prime(7).unwrap();
    let a = build_genus4(&f7, 1, &cfg).unwrap().to_json();
    let b = build_genus4(&f7, 1, &cfg).unwrap().to_json();
    c.expect(a == b, "genus-4 reports differ between runs");
    let f11 = FiniteField::prime(11).unwrap();
    let a = build_genus6(&f11, 3, &cfg).unwrap().to_json();
    let b = build_genus6(&f11, 3, &cfg).unwrap().to_json();
    c.expect(a == b, "genus-6 reports differ between runs");
}

#[test]
fn acceptance() {
    let results = [
        run(1, "signatures", secs(1), signatures),
        run(2, "censuses", secs(10), censuses),
        run(3, "certificates", secs(30), certificates),
        run(4, "moduli dimensions", secs(1), dimensions),
        run(5, "fiber chain", secs(5), fiber_chain),
        run(6, "Lazarsfeld-Mukai invariants", secs(1), lm),
        run(7, "Grassmannian oracles", secs(60), grassmann_oracles),
        run(8, "constructions", secs(6 * 300), constructions),
        run(9, "property suites", secs(600), properties),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
