//! End-to-end constructions of K3 surfaces over finite fields, each emitting
//! a self-contained report that can be replayed from its seed.
//!
//! Every pipeline is a sequence of attempts. Attempt k draws its randomness
//! from a ChaCha20 stream (seed, k); degenerate random choices abort the
//! attempt with a retryable error and the next stream is tried.

use std::collections::BTreeMap;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactlin::fieldmat::echelon;
use crate::exactlin::{Elem, FieldDescriptor, FieldError, FiniteField};
use crate::grassmann::{hilbert_series, monomials, GradedIdeal, GrassmannError, IdealDump, Polynomial};
use crate::k3lattice::{Status, SCHEMA};

mod genus4;
mod genus6;
mod genus8;

pub use genus4::{build_genus4, extend_genus4_curve, genus4_surface, Genus4Surface};
pub use genus6::build_genus6;
pub use genus8::{build_genus8_nine, build_genus8_secant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Grassmann(GrassmannError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("surface is singular at a sampled point")]
    SingularSurface,
    #[error("the cone vertex lies on the surface")]
    VertexOnSurface,
    #[error("seeded points span a P^{got}, expected P^{expected}")]
    SpanDegenerate { expected: isize, got: isize },
    #[error("dual census found {got} points, expected {expected}")]
    ExtraDualPoints { expected: usize, got: usize },
    #[error("colon span did not stabilize by degree {dmax}")]
    NotStabilized { dmax: usize },
    #[error("residual span has projective dimension {got}, expected 5")]
    ResidualSpanWrongDim { got: isize },
    #[error("no attempt succeeded within {attempts} tries; last failure: {last}")]
    RetryExhausted { attempts: usize, last: String },
    #[error("report was produced with {expected}, replay requested {got}")]
    SeedMismatch { expected: String, got: String },
    #[error("malformed report: {0}")]
    Malformed(String),
}

impl From<GrassmannError> for ConstructionError {
    fn from(e: GrassmannError) -> Self {
        match e {
            GrassmannError::NotStabilized { dmax } => ConstructionError::NotStabilized { dmax },
            e => ConstructionError::Grassmann(e),
        }
    }
}

impl ConstructionError {
    /// Failures caused by an unlucky random draw.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            ConstructionError::SingularSurface
                | ConstructionError::VertexOnSurface
                | ConstructionError::SpanDegenerate { .. }
                | ConstructionError::ExtraDualPoints { .. }
                | ConstructionError::NotStabilized { .. }
                | ConstructionError::ResidualSpanWrongDim { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, ConstructionError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionConfig {
    pub retry_bound: usize,
    /// Upper bound on enumeration work (points tried or linear solves).
    pub point_cap: u128,
    /// Starting degree bound for colon spans; doubled up to 12.
    pub dmax: usize,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig { retry_bound: 50, point_cap: 5_000_000, dmax: 6 }
    }
}

/// Deterministic randomness: ChaCha20 keyed by the seed, one stream per
/// attempt.
pub struct Rng {
    inner: ChaCha20Rng,
}

impl Rng {
    pub fn new(seed: u64, attempt: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(attempt);
        Rng { inner }
    }

    pub fn elem(&mut self, f: &FiniteField) -> Elem {
        self.inner.random_range(0..f.order())
    }

    pub fn nonzero_elem(&mut self, f: &FiniteField) -> Elem {
        self.inner.random_range(1..f.order())
    }

    pub fn vector(&mut self, f: &FiniteField, n: usize) -> Vec<Elem> {
        (0..n).map(|_| self.elem(f)).collect()
    }

    /// Two independent vectors of F^n.
    pub fn plane(&mut self, f: &FiniteField, n: usize) -> [Vec<Elem>; 2] {
        loop {
            let u = self.vector(f, n);
            let v = self.vector(f, n);
            if echelon(f, &[u.clone(), v.clone()], n, false).rank() == 2 {
                return [u, v];
            }
        }
    }

    /// Invertible n×n matrix.
    pub fn invertible(&mut self, f: &FiniteField, n: usize) -> Vec<Vec<Elem>> {
        loop {
            let m: Vec<Vec<Elem>> = (0..n).map(|_| self.vector(f, n)).collect();
            if echelon(f, &m, n, false).rank() == n {
                return m;
            }
        }
    }

    /// Dense random form of degree d.
    pub fn form(&mut self, f: &FiniteField, nvars: usize, d: usize) -> Polynomial {
        let terms: Vec<_> = monomials(nvars, d).into_iter().map(|m| (m, self.elem(f))).collect();
        Polynomial::from_terms(f, nvars, terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Genus4,
    Genus4Extend,
    Genus6,
    Genus8Secant,
    Genus8Nine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub got: Value,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilRecord {
    pub label: String,
    /// The point of the dual Grassmannian cutting the pencil, when rational.
    pub dual_point: Option<Vec<Elem>>,
    pub member_sample: IdealDump,
    /// Slope of the member's Hilbert function.
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Smoothness {
    pub label: String,
    pub points: usize,
    pub expected_rank: usize,
    pub min_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub schema: String,
    pub pipeline: Pipeline,
    pub genus: u32,
    /// Requested pencil count for the genus-8 secant pipeline.
    pub requested: Option<usize>,
    pub field: FieldDescriptor,
    pub seed: u64,
    pub attempt: u64,
    pub status: Status,
    pub pencil_count: usize,
    pub checks: Vec<Check>,
    pub hilbert: BTreeMap<String, Vec<usize>>,
    pub ideals: BTreeMap<String, IdealDump>,
    pub pencils: Vec<PencilRecord>,
    pub smoothness: Option<Smoothness>,
    pub notes: Vec<String>,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.status.is_pass())
    }
}

/// Single-owner report under construction.
pub(crate) struct Builder {
    report: ConstructionReport,
}

impl Builder {
    fn new(pipeline: Pipeline, genus: u32, requested: Option<usize>, field: &FiniteField, seed: u64, attempt: u64) -> Self {
        Builder {
            report: ConstructionReport {
                schema: SCHEMA.into(),
                pipeline,
                genus,
                requested,
                field: field.descriptor(),
                seed,
                attempt,
                status: Status::Pass,
                pencil_count: 0,
                checks: Vec::new(),
                hilbert: BTreeMap::new(),
                ideals: BTreeMap::new(),
                pencils: Vec::new(),
                smoothness: None,
                notes: Vec::new(),
            },
        }
    }

    /// Records a check that passes iff `expected == got`.
    pub(crate) fn check(&mut self, name: impl Into<String>, expected: Value, got: Value) -> bool {
        let ok = expected == got;
        self.report.checks.push(Check { name: name.into(), expected, got, status: Status::from_bool(ok) });
        ok
    }

    pub(crate) fn hilbert(&mut self, name: &str, values: Vec<usize>) {
        self.report.hilbert.insert(name.into(), values);
    }

    pub(crate) fn ideal(&mut self, name: &str, ideal: &GradedIdeal) {
        self.report.ideals.insert(name.into(), ideal.dump());
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub(crate) fn pencil(&mut self, rec: PencilRecord) {
        self.report.pencils.push(rec);
    }

    pub(crate) fn pencil_count(&mut self, n: usize) {
        self.report.pencil_count = n;
    }

    pub(crate) fn smoothness(&mut self, points: usize, expected_rank: usize, min_rank: Option<usize>) {
        self.report.smoothness =
            Some(Smoothness { label: format!("smoothness: sampled({points} points)"), points, expected_rank, min_rank });
    }

    /// Hilbert function on d = 0..=dmax, recorded under `name` and checked
    /// against `expected(d)` for d in `from..=dmax`.
    pub(crate) fn check_hilbert(
        &mut self,
        name: &str,
        ideal: &GradedIdeal,
        from: usize,
        dmax: usize,
        expected: impl Fn(usize) -> usize,
    ) -> Result<bool> {
        let hf = hilbert_series(ideal, dmax)?;
        let want: Vec<usize> = (from..=dmax).map(&expected).collect();
        let ok = self.check(format!("hilbert function of {name}, d = {from}..{dmax}"), json!(want), json!(hf[from..].to_vec()));
        self.hilbert(name, hf);
        Ok(ok)
    }

    fn finish(mut self) -> ConstructionReport {
        self.report.status = Status::from_bool(self.report.checks.iter().all(|c| c.status.is_pass()));
        self.report
    }
}

/// Runs attempts 0, 1, … until one completes without a retryable error.
pub(crate) fn run_attempts(
    pipeline: Pipeline,
    genus: u32,
    requested: Option<usize>,
    field: &FiniteField,
    seed: u64,
    cfg: &ConstructionConfig,
    mut attempt: impl FnMut(&mut Builder, &mut Rng) -> Result<()>,
) -> Result<ConstructionReport> {
    let mut failures = Vec::new();
    for k in 0..cfg.retry_bound as u64 {
        let mut b = Builder::new(pipeline, genus, requested, field, seed, k);
        let mut rng = Rng::new(seed, k);
        match attempt(&mut b, &mut rng) {
            Ok(()) => {
                for (i, f) in failures.iter().enumerate() {
                    b.note(format!("attempt {i} rejected: {f}"));
                }
                return Ok(b.finish());
            }
            Err(e) if e.is_retryable() => failures.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Err(ConstructionError::RetryExhausted {
        attempts: cfg.retry_bound,
        last: failures.pop().unwrap_or_default(),
    })
}

/// Coefficient-level copy of p in more variables (the new ones unused).
pub(crate) fn lift_vars(p: &Polynomial, nvars: usize, field: &FiniteField) -> Polynomial {
    Polynomial::from_terms(
        field,
        nvars,
        p.terms.iter().map(|(m, c)| {
            let mut m = m.clone();
            m.resize(nvars, 0);
            (m, *c)
        }),
    )
}

/// A linear form as a polynomial, padded with zero coefficients.
pub(crate) fn linear_form(field: &FiniteField, coeffs: &[Elem], nvars: usize) -> Polynomial {
    let mut c = coeffs.to_vec();
    c.resize(nvars, 0);
    Polynomial::linear(field, &c)
}

/// The common value of HF(d) over the last `tail` degrees up to dmax, if
/// the function is constant there.
pub(crate) fn stable_value(hf: &[usize], tail: usize) -> Option<usize> {
    let last = &hf[hf.len() - tail..];
    last.iter().all(|&v| v == last[0]).then_some(last[0])
}

/// Re-runs the pipeline recorded in the report and compares the result.
pub fn verify_report(report: &ConstructionReport) -> Result<bool> {
    verify_report_with(report, None, &ConstructionConfig::default())
}

/// Replay with an explicit field; a field other than the recorded one is a
/// seed mismatch, since the seed only determines the construction together
/// with its field.
pub fn verify_report_with(
    report: &ConstructionReport,
    field: Option<&FieldDescriptor>,
    cfg: &ConstructionConfig,
) -> Result<bool> {
    if let Some(f) = field {
        if *f != report.field {
            return Err(ConstructionError::SeedMismatch {
                expected: format!("F_{}^{}", report.field.p, report.field.k),
                got: format!("F_{}^{}", f.p, f.k),
            });
        }
    }
    let fld = FiniteField::from_descriptor(&report.field)?;
    let seed = report.seed;
    let replay = match report.pipeline {
        Pipeline::Genus4 => build_genus4(&fld, seed, cfg),
        Pipeline::Genus4Extend => {
            let dump = report.ideals.get("curve").ok_or_else(|| ConstructionError::Malformed("missing curve ideal".into()))?;
            let curve = GradedIdeal::from_dump(dump)?;
            let [q, y] = curve.generators() else {
                return Err(ConstructionError::Malformed("curve ideal needs a quadric and a cubic".into()));
            };
            extend_genus4_curve(&fld, q, y, seed, cfg)
        }
        Pipeline::Genus6 => build_genus6(&fld, seed, cfg),
        Pipeline::Genus8Secant => {
            let i = report.requested.ok_or_else(|| ConstructionError::Malformed("missing pencil count".into()))?;
            build_genus8_secant(i, &fld, seed, cfg)
        }
        Pipeline::Genus8Nine => build_genus8_nine(&fld, seed, cfg),
    }?;
    Ok(replay.passed() && replay == *report)
}

pub(crate) fn require_order(field: &FiniteField, min: u32) -> Result<()> {
    if field.order() < min || field.characteristic() == 2 {
        return Err(ConstructionError::Precondition(format!(
            "field of order {} is too small; need an odd field with at least {min} elements",
            field.order()
        )));
    }
    Ok(())
}
