//! Python bindings. Lattices are wrapped as a class; certificates, censuses
//! and construction reports come back as plain dicts.

use k3lab::constructions::{
    build_genus4, build_genus6, build_genus8_nine, build_genus8_secant, verify_report_with, ConstructionConfig,
    ConstructionError, ConstructionReport,
};
use k3lab::exactlin::{self, Elem, FiniteField};
use k3lab::grassmann::{self as gr, PluckerSystem};
use k3lab::k3lattice::{self as kl, DivisorClass, GramLattice, Orientation, PolarizedLattice};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Round-trip through JSON so Python gets dicts and lists.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn field(p: u32, k: u32) -> PyResult<FiniteField> {
    FiniteField::new(p, k).map_err(value_err)
}

#[pyclass(name = "Lattice", module = "k3lab", frozen)]
struct PyLattice {
    inner: PolarizedLattice,
}

#[pymethods]
impl PyLattice {
    /// Gram matrix with polarization L (default: first basis vector) and
    /// orientation class h (default: L).
    #[new]
    #[pyo3(signature = (gram, polarization=None, reference_nef=None, labels=None))]
    fn new(
        gram: Vec<Vec<i64>>,
        polarization: Option<Vec<i64>>,
        reference_nef: Option<Vec<i64>>,
        labels: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let lat = match labels {
            Some(l) => GramLattice::new(gram, l),
            None => GramLattice::unlabeled(gram),
        }
        .map_err(value_err)?;
        let l = polarization.map(DivisorClass).unwrap_or_else(|| DivisorClass::basis(lat.rank(), 0));
        let h = reference_nef.map(DivisorClass).unwrap_or_else(|| l.clone());
        let inner = PolarizedLattice::new(lat, l, h).map_err(value_err)?;
        Ok(PyLattice { inner })
    }

    /// One of U3, M6, N1..N9.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(PyLattice { inner: kl::builtin(name).map_err(value_err)? })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn genus(&self) -> i64 {
        self.inner.genus()
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<i64>> {
        self.inner.lattice().gram().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.lattice().labels().to_vec()
    }

    fn signature(&self) -> (usize, usize, usize) {
        let s = self.inner.lattice().signature();
        (s.n_plus, s.n_minus, s.n_zero)
    }

    fn pairing(&self, a: Vec<i64>, b: Vec<i64>) -> PyResult<i64> {
        self.inner.pairing(&DivisorClass(a), &DivisorClass(b)).map_err(value_err)
    }

    #[pyo3(signature = (degree, square=0, effective=true))]
    fn census(&self, degree: i64, square: i64, effective: bool) -> PyResult<Vec<Vec<i64>>> {
        let orient = if effective { Orientation::Effective } else { Orientation::Any };
        let c = kl::enumerate_slice(&self.inner, degree, square, orient).map_err(value_err)?;
        Ok(c.classes.into_iter().map(|x| x.0).collect())
    }

    fn pencil_census(&self, degree: i64) -> PyResult<Vec<Vec<i64>>> {
        let c = kl::pencil_census(&self.inner, degree).map_err(value_err)?;
        Ok(c.classes.into_iter().map(|x| x.0).collect())
    }

    fn certify_ample<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &kl::certify_ample(&self.inner).map_err(value_err)?)
    }

    fn certify_bn_general<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &kl::certify_bn_general(&self.inner).map_err(value_err)?)
    }

    fn certify_nef<'py>(&self, py: Python<'py>, e: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &kl::certify_nef(&self.inner, &DivisorClass(e)).map_err(value_err)?)
    }

    /// (dim F, dim P)
    fn moduli_dimensions(&self) -> PyResult<(i64, i64)> {
        let d = kl::moduli_dimensions(self.inner.lattice(), self.inner.genus()).map_err(value_err)?;
        Ok((d.dim_f, d.dim_p))
    }

    #[pyo3(signature = (e=None))]
    fn fiber_chain<'py>(&self, py: Python<'py>, e: Option<Vec<i64>>) -> PyResult<Bound<'py, PyAny>> {
        let e = e.map(DivisorClass).unwrap_or_else(|| DivisorClass::basis(self.inner.rank(), 1));
        to_py(py, &kl::verify_fiber_chain_genus8(&self.inner, &e).map_err(value_err)?)
    }

    fn __repr__(&self) -> String {
        let s = self.inner.lattice().signature();
        format!("Lattice(rank={}, genus={}, signature=({}, {}, {}))", self.rank(), self.genus(), s.n_plus, s.n_minus, s.n_zero)
    }
}

/// (n_plus, n_minus, n_zero) of a symmetric integer matrix.
#[pyfunction]
fn signature(gram: Vec<Vec<i64>>) -> PyResult<(usize, usize, usize)> {
    let s = exactlin::signature(&gram).map_err(value_err)?;
    Ok((s.n_plus, s.n_minus, s.n_zero))
}

#[pyfunction]
fn max_admissible_size(genus: i64, degree: i64, mutual: i64) -> usize {
    kl::max_admissible_size(genus, degree, mutual)
}

#[pyfunction]
#[pyo3(signature = (genus, degree, index=1))]
fn lm_invariants(py: Python<'_>, genus: i64, degree: i64, index: i64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &kl::lm_invariants(genus, degree, index).map_err(value_err)?)
}

/// Number of points of G(2, n) over F_q.
#[pyfunction]
fn grassmannian_point_count(n: usize, q: u64) -> u128 {
    gr::grassmannian_point_count(n, q)
}

/// Normalized Plücker vectors of all F_q-points of G(2, n).
#[pyfunction]
#[pyo3(signature = (n, p, k=1, cap=1_000_000))]
fn enumerate_grassmannian(n: usize, p: u32, k: u32, cap: u128) -> PyResult<Vec<Vec<Elem>>> {
    gr::enumerate_grassmannian(n, &field(p, k)?, cap).map_err(value_err)
}

/// Normalized Plücker vector of the plane spanned by u and v.
#[pyfunction]
#[pyo3(signature = (u, v, p, k=1))]
fn plucker_embed(u: Vec<Elem>, v: Vec<Elem>, p: u32, k: u32) -> PyResult<Vec<Elem>> {
    if u.len() != v.len() {
        return Err(PyValueError::new_err("u and v must have the same length"));
    }
    let f = field(p, k)?;
    let sys = PluckerSystem::new(u.len()).map_err(value_err)?;
    gr::plucker_embed(&sys, &f, &u, &v).map_err(value_err)
}

fn construction_err(e: ConstructionError) -> PyErr {
    match e {
        ConstructionError::Precondition(_) | ConstructionError::SeedMismatch { .. } => value_err(e),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Run a construction pipeline; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (genus, pencils=None, p=None, seed=1, retry_bound=50))]
fn construct(
    py: Python<'_>,
    genus: u32,
    pencils: Option<usize>,
    p: Option<u32>,
    seed: u64,
    retry_bound: usize,
) -> PyResult<Bound<'_, PyAny>> {
    let cfg = ConstructionConfig { retry_bound, ..ConstructionConfig::default() };
    let report = match (genus, pencils) {
        (4, None | Some(2)) => build_genus4(&field(p.unwrap_or(7), 1)?, seed, &cfg),
        (6, None | Some(5)) => build_genus6(&field(p.unwrap_or(11), 1)?, seed, &cfg),
        (8, Some(9)) => build_genus8_nine(&field(p.unwrap_or(13), 1)?, seed, &cfg),
        (8, Some(i)) => build_genus8_secant(i, &field(p.unwrap_or(13), 1)?, seed, &cfg),
        _ => return Err(PyValueError::new_err(format!("unsupported genus/pencil combination ({genus}, {pencils:?})"))),
    }
    .map_err(construction_err)?;
    to_py(py, &report)
}

/// Replay a report (dict or JSON string) from its seed.
#[pyfunction]
fn verify(py: Python<'_>, report: Bound<'_, PyAny>) -> PyResult<bool> {
    let text: String = match report.extract::<String>() {
        Ok(s) => s,
        Err(_) => py.import("json")?.call_method1("dumps", (report,))?.extract()?,
    };
    let r: ConstructionReport = serde_json::from_str(&text).map_err(value_err)?;
    verify_report_with(&r, None, &ConstructionConfig::default()).map_err(construction_err)
}

#[pymodule]
#[pyo3(name = "k3lab")]
fn k3lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(signature, m)?)?;
    m.add_function(wrap_pyfunction!(max_admissible_size, m)?)?;
    m.add_function(wrap_pyfunction!(lm_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(grassmannian_point_count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_grassmannian, m)?)?;
    m.add_function(wrap_pyfunction!(plucker_embed, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("SCHEMA", kl::SCHEMA)?;
    Ok(())
}
