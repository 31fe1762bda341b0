//! Python bindings: `spf_lab.Algebra`, `spf_lab.Module` and a few drivers.
//! Reports come back as plain dicts decoded from the same JSON the CLI prints.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;
use spf_core::expr::parse;
use spf_core::injective::{self, Strategy};
use spf_core::module::{self, FunctorModule};
use spf_core::schur::SchurAlgebra;
use spf_core::{formality, suites, Error, Field};

create_exception!(spf_lab, SpfError, PyException);
create_exception!(spf_lab, ParseError, SpfError);
create_exception!(spf_lab, GuardError, SpfError);

const DEFAULT_GUARD: usize = 20_000;

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } => ParseError::new_err(e.to_string()),
        Error::Guard { .. } => GuardError::new_err(e.to_string()),
        _ => SpfError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| SpfError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn strategy(name: &str, seed: u64) -> PyResult<Strategy> {
    match name {
        "greedy" => Ok(Strategy::Greedy),
        "weight-basis" => Ok(Strategy::WeightBasis),
        "shuffled" => Ok(Strategy::Shuffled(seed)),
        _ => Err(SpfError::new_err(format!("unknown strategy {name:?}"))),
    }
}

/// The Schur algebra `S(n, d)` over `F_p`.
#[pyclass(frozen, module = "spf_lab")]
struct Algebra(Arc<SchurAlgebra>);

#[pymethods]
impl Algebra {
    #[new]
    fn new(p: u32, n: usize, d: usize) -> PyResult<Self> {
        let field = Field::new(p).map_err(err)?;
        Ok(Algebra(Arc::new(SchurAlgebra::new(field, n, d).map_err(err)?)))
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.field().p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn weights(&self) -> Vec<Vec<u32>> {
        self.0.weights().into_iter().map(|w| w.0).collect()
    }

    #[pyo3(signature = (expr, guard = None))]
    fn module(&self, expr: &str, guard: Option<usize>) -> PyResult<Module> {
        FunctorModule::parse(&self.0, expr, guard.unwrap_or(DEFAULT_GUARD))
            .map(Module)
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Algebra(p={}, n={}, d={})", self.p(), self.n(), self.d())
    }
}

/// A strict polynomial functor evaluated as an `S(n, d)`-module.
#[pyclass(frozen, module = "spf_lab")]
struct Module(FunctorModule);

#[pymethods]
impl Module {
    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `(weight, dim)` for the nonzero weight spaces.
    fn weight_dims(&self) -> Vec<(Vec<u32>, usize)> {
        self.0.weights().iter().map(|w| (w.0.clone(), self.0.block_dim(w))).collect()
    }

    fn hom_dim(&self, other: &Module) -> usize {
        module::hom_dim(&self.0, &other.0)
    }

    #[pyo3(signature = (other, imax = 4, strategy = "greedy", seed = suites::DEFAULT_SEED))]
    fn ext_dims(&self, other: &Module, imax: usize, strategy: &str, seed: u64) -> PyResult<Vec<usize>> {
        injective::ext_dims(&self.0, &other.0, imax, self::strategy(strategy, seed)?).map_err(err)
    }

    /// Term dimensions and homology of an injective coresolution through `top`.
    fn coresolve(&self, top: i32) -> PyResult<Vec<(i32, usize, usize)>> {
        let res = injective::coresolve(&self.0, top, Strategy::Greedy).map_err(err)?;
        let j = &res.injectives;
        Ok((j.start()..=j.end())
            .map(|i| {
                let dim = j.term(i).map_or(0, |t| t.module().dim());
                (i, dim, j.complex().homology(i).dim())
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        let a = self.0.algebra();
        format!("Module({:?} over S({}, {}) at p={})", self.0.label(), a.n(), a.d(), a.field().p())
    }
}

/// Canonical printed form and degree of an expression.
#[pyfunction]
fn parse_expr(text: &str, p: u32) -> PyResult<(String, u64)> {
    let e = parse(text).map_err(err)?;
    Ok((e.to_string(), e.degree(p)))
}

#[pyfunction]
#[pyo3(signature = (g, d, n, guard = DEFAULT_GUARD))]
fn formality_verify<'py>(py: Python<'py>, g: &str, d: usize, n: usize, guard: usize) -> PyResult<Bound<'py, PyAny>> {
    let e = parse(g).map_err(err)?;
    let report = formality::formality_verify_p2r1(&e, d, n, guard).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (name, seed = suites::DEFAULT_SEED))]
fn run_suite<'py>(py: Python<'py>, name: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let report = suites::run_suite(name, seed).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn spf_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Module>()?;
    m.add_function(wrap_pyfunction!(parse_expr, m)?)?;
    m.add_function(wrap_pyfunction!(formality_verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("SUITES", suites::SUITES.to_vec())?;
    m.add("SpfError", m.py().get_type::<SpfError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("GuardError", m.py().get_type::<GuardError>())?;
    Ok(())
}
