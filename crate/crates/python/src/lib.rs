//! Python module `fqmatroid`.
//!
//! Infinite connectivities and girths are returned as `None`.

use std::collections::BTreeMap;

use fqmatroid::matroid::{Budget, Extended, RepMatroid};
use fqmatroid::montecarlo::{self, ExperimentConfig, Preset};
use fqmatroid::process::ProcessState;
use fqmatroid::selfcheck::{self as sc, SelfcheckOptions};
use fqmatroid::{theory, Elem, Error, Field, FqMatrix};
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(fqmatroid, BudgetExceeded, PyRuntimeError);

fn py_err(e: Error) -> PyErr {
    if e.is_budget() {
        return BudgetExceeded::new_err(e.to_string());
    }
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        Error::Consistency(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn ext(x: Extended) -> Option<usize> {
    x.finite()
}

fn field(q: u32) -> PyResult<Field> {
    Field::new(q).map_err(py_err)
}

/// The finite field F_q, elements encoded as integers `0..q`.
#[pyclass(name = "Field", frozen)]
struct PyField(Field);

#[pymethods]
impl PyField {
    #[new]
    fn new(q: u32) -> PyResult<Self> {
        Ok(PyField(field(q)?))
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.q()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    fn add(&self, a: Elem, b: Elem) -> PyResult<Elem> {
        self.elems(&[a, b])?;
        Ok(self.0.add(a, b))
    }

    fn mul(&self, a: Elem, b: Elem) -> PyResult<Elem> {
        self.elems(&[a, b])?;
        Ok(self.0.mul(a, b))
    }

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: Elem) -> PyResult<Option<Elem>> {
        self.elems(&[a])?;
        Ok(self.0.inv(a))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.q())
    }
}

impl PyField {
    fn elems(&self, xs: &[Elem]) -> PyResult<()> {
        match xs.iter().find(|&&x| x as u32 >= self.0.q()) {
            Some(x) => Err(PyValueError::new_err(format!("{x} is not an element of F_{}", self.0.q()))),
            None => Ok(()),
        }
    }
}

/// A matrix over F_q.
#[pyclass(name = "Matrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix(FqMatrix);

#[pymethods]
impl PyMatrix {
    /// From a list of rows.
    #[new]
    fn new(q: u32, rows: Vec<Vec<Elem>>) -> PyResult<Self> {
        Ok(PyMatrix(FqMatrix::from_rows(&field(q)?, &rows).map_err(py_err)?))
    }

    /// Uniformly random `n x m` matrix from `(seed, stream)`.
    #[staticmethod]
    #[pyo3(signature = (q, n, m, seed, stream=0))]
    fn random(q: u32, n: usize, m: usize, seed: u64, stream: u64) -> PyResult<Self> {
        let f = field(q)?;
        let mut rng = fqmatroid::rng::trial_rng(seed, stream);
        Ok(PyMatrix(fqmatroid::random_uniform_matrix(n, m, &f, &mut rng)))
    }

    /// Parses the fixture text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyMatrix(FqMatrix::parse_text(text).map_err(py_err)?))
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.field().q()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn rows(&self) -> Vec<Vec<Elem>> {
        self.0.rows()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn kernel_basis(&self) -> Vec<Vec<Elem>> {
        self.0.kernel_basis()
    }

    fn delete(&self, x: Vec<usize>) -> PyResult<Self> {
        check_indices(&x, self.0.m())?;
        Ok(PyMatrix(self.0.delete(&x)))
    }

    fn contract(&self, x: Vec<usize>) -> PyResult<Self> {
        check_indices(&x, self.0.m())?;
        Ok(PyMatrix(self.0.contract(&x)))
    }

    fn __repr__(&self) -> String {
        format!("Matrix(q={}, n={}, m={})", self.0.field().q(), self.0.n(), self.0.m())
    }
}

fn check_indices(x: &[usize], m: usize) -> PyResult<()> {
    match x.iter().find(|&&i| i >= m) {
        Some(i) => Err(PyValueError::new_err(format!("column {i} out of range 0..{m}"))),
        None => Ok(()),
    }
}

/// The matroid of the columns of a matrix.
#[pyclass(name = "Matroid", frozen)]
struct PyMatroid(RepMatroid);

#[pymethods]
impl PyMatroid {
    #[new]
    fn new(matrix: &PyMatrix) -> Self {
        PyMatroid(RepMatroid::new(matrix.0.clone()))
    }

    #[staticmethod]
    fn uniform(q: u32, r: usize, m: usize) -> PyResult<Self> {
        Ok(PyMatroid(RepMatroid::uniform(&field(q)?, r, m).map_err(py_err)?))
    }

    /// PG(n-1, q).
    #[staticmethod]
    fn projective_geometry(q: u32, n: usize) -> PyResult<Self> {
        Ok(PyMatroid(RepMatroid::projective_geometry(&field(q)?, n)))
    }

    fn matrix(&self) -> PyMatrix {
        PyMatrix(self.0.matrix().clone())
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn corank(&self) -> usize {
        self.0.corank()
    }

    fn rank_of(&self, s: Vec<usize>) -> PyResult<usize> {
        check_indices(&s, self.0.size())?;
        Ok(self.0.rank_of_subset(&s))
    }

    fn is_circuit(&self, s: Vec<usize>) -> PyResult<bool> {
        check_indices(&s, self.0.size())?;
        Ok(self.0.is_circuit(&s))
    }

    fn is_simple(&self) -> bool {
        self.0.is_simple()
    }

    fn delete(&self, x: Vec<usize>) -> PyResult<Self> {
        check_indices(&x, self.0.size())?;
        Ok(PyMatroid(self.0.delete(&x)))
    }

    fn contract(&self, x: Vec<usize>) -> PyResult<Self> {
        check_indices(&x, self.0.size())?;
        Ok(PyMatroid(self.0.contract(&x)))
    }

    fn girth(&self) -> PyResult<Option<usize>> {
        self.0.girth(&Budget::default()).map(ext).map_err(py_err)
    }

    /// Number of circuits of each length.
    fn circuit_spectrum(&self) -> PyResult<BTreeMap<usize, u64>> {
        self.0.circuit_spectrum(&Budget::default()).map_err(py_err)
    }

    fn vertical_connectivity(&self) -> PyResult<Option<usize>> {
        let c = self.0.vertical_connectivity(&Budget::default()).map_err(py_err)?;
        Ok(ext(c.value))
    }

    fn cyclic_connectivity(&self) -> PyResult<Option<usize>> {
        let c = self.0.cyclic_connectivity(&Budget::default()).map_err(py_err)?;
        Ok(ext(c.value))
    }

    fn tutte_connectivity(&self) -> PyResult<Option<usize>> {
        let c = self.0.tutte_connectivity(&Budget::default()).map_err(py_err)?;
        Ok(ext(c.value))
    }

    fn critical_number(&self) -> PyResult<usize> {
        self.0.critical_number(&Budget::default()).map_err(py_err)
    }

    /// Whether `other` is a minor; returns `(contract, delete)` of a witness.
    fn has_minor(&self, other: &PyMatroid) -> PyResult<Option<(Vec<usize>, Vec<usize>)>> {
        let w = self.0.has_minor(&other.0, &Budget::default()).map_err(py_err)?;
        Ok(w.map(|w| (w.contract, w.delete)))
    }

    fn contains_pg(&self, r: usize) -> PyResult<bool> {
        self.0.contains_pg(r, &Budget::default()).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Matroid(size={}, rank={})", self.0.size(), self.0.rank())
    }
}

/// The process A_1, A_2, ... adding uniform columns in F_q^n.
#[pyclass(name = "Process")]
struct PyProcess(ProcessState);

#[pymethods]
impl PyProcess {
    #[new]
    #[pyo3(signature = (q, n, seed, trial=0))]
    fn new(q: u32, n: usize, seed: u64, trial: u64) -> PyResult<Self> {
        Ok(PyProcess(ProcessState::new(&field(q)?, n, seed, trial)))
    }

    /// Adds one column; returns a dict describing the step.
    fn step<'py>(&mut self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let r = self.0.step();
        let d = pyo3::types::PyDict::new(py);
        d.set_item("m", r.m)?;
        d.set_item("rank", r.rank)?;
        d.set_item("corank", r.corank)?;
        d.set_item("dependent", r.dependent)?;
        d.set_item("zero_column", r.zero_column)?;
        d.set_item("circuit", r.circuit)?;
        Ok(d)
    }

    /// Steps until the corank reaches `c`; returns that step.
    fn run_until_corank(&mut self, c: usize) -> usize {
        self.0.run_until_corank(c)
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn corank(&self) -> usize {
        self.0.corank()
    }

    fn matrix(&self) -> PyMatrix {
        PyMatrix(self.0.matrix().clone())
    }

    fn matroid(&self) -> PyMatroid {
        PyMatroid(RepMatroid::new(self.0.matrix().clone()))
    }
}

#[pyfunction]
fn gaussian_binomial(n: u64, k: u64, q: u64) -> PyResult<String> {
    if k > n {
        return Err(PyValueError::new_err("need k <= n"));
    }
    Ok(theory::gaussian_binomial(n, k, q).to_string())
}

#[pyfunction]
fn rank_full_prob(n: u64, m: u64, q: u64) -> f64 {
    theory::rank_full_prob(n, m, q)
}

#[pyfunction]
fn corank_pmf(n: u64, m: u64, q: u64) -> Vec<f64> {
    theory::corank_pmf(n, q, m)
}

#[pyfunction]
fn limit_cck(q: u64, c: u64, k: i64) -> PyResult<f64> {
    if c == 0 {
        return Err(PyValueError::new_err("need c >= 1"));
    }
    Ok(theory::limit_cck(q, c, k))
}

#[pyfunction]
fn gamma_qc(q: u64, c: u64) -> PyResult<f64> {
    if c == 0 {
        return Err(PyValueError::new_err("need c >= 1"));
    }
    Ok(theory::gamma_qc(q, c))
}

#[pyfunction]
fn b_of_a(q: u64, a: f64) -> PyResult<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(PyValueError::new_err("need 0 < a <= 1"));
    }
    Ok(theory::b_of_a(q, a))
}

#[pyfunction]
fn conn_limit_prob(q: u64, k: u64, c: f64) -> PyResult<f64> {
    if k < 2 {
        return Err(PyValueError::new_err("need k >= 2"));
    }
    Ok(theory::conn_limit_prob(q, k, c))
}

/// Runs a preset and returns its JSON output. Keyword arguments override
/// the preset's defaults.
#[pyfunction]
#[pyo3(signature = (preset, seed=1, trials=None, n=None, q=None, m=None, k=None, c=None, r=None))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    py: Python<'_>,
    preset: &str,
    seed: u64,
    trials: Option<u64>,
    n: Option<usize>,
    q: Option<u32>,
    m: Option<usize>,
    k: Option<usize>,
    c: Option<usize>,
    r: Option<usize>,
) -> PyResult<String> {
    let p: Preset = preset.parse().map_err(py_err)?;
    let mut cfg = ExperimentConfig::for_preset(p);
    cfg.seed = seed;
    cfg.trials = trials.unwrap_or(cfg.trials);
    cfg.n = n.unwrap_or(cfg.n);
    cfg.q = q.unwrap_or(cfg.q);
    cfg.m = m.or(cfg.m);
    cfg.k = k.or(cfg.k);
    cfg.c = c.or(cfg.c);
    cfg.r = r.or(cfg.r);
    let res = py.detach(|| montecarlo::run_experiment(&cfg)).map_err(py_err)?;
    let mut buf = Vec::new();
    montecarlo::emit_json(&res, &mut buf).map_err(py_err)?;
    String::from_utf8(buf).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Runs the oracle suites; returns `(name, cases, failed)` per suite.
#[pyfunction]
#[pyo3(signature = (max_n=5))]
fn selfcheck(py: Python<'_>, max_n: usize) -> Vec<(String, u64, u64)> {
    let opts = SelfcheckOptions {
        max_n,
        ..SelfcheckOptions::default()
    };
    py.detach(|| sc::run_all(&opts))
        .into_iter()
        .map(|s| (s.name.to_string(), s.cases, s.failed))
        .collect()
}

#[pymodule]
#[pyo3(name = "fqmatroid")]
fn fqmatroid_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyMatroid>()?;
    m.add_class::<PyProcess>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(rank_full_prob, m)?)?;
    m.add_function(wrap_pyfunction!(corank_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(limit_cck, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_qc, m)?)?;
    m.add_function(wrap_pyfunction!(b_of_a, m)?)?;
    m.add_function(wrap_pyfunction!(conn_limit_prob, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(selfcheck, m)?)?;
    Ok(())
}
