//! Python bindings. Reports come back as JSON text with the same layout the
//! `invalg` binary prints; `json.loads` turns them into dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use invalg::{catalog, json as ij, rep};
use invalg_cli::{Common, SideArg};

fn py_err(e: invalg::Error) -> PyErr {
    if e.is_limit() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn common(tol: f64, seed: u64) -> Common {
    Common {
        tol,
        seed,
        out: None,
    }
}

fn text(m: serde_json::Map<String, serde_json::Value>) -> String {
    invalg_cli::render(&serde_json::Value::Object(m))
}

/// A (possibly projective) representation of a finite group.
#[pyclass(name = "Representation", module = "invalg", frozen)]
pub struct PyRepresentation {
    inner: rep::Representation,
}

#[pymethods]
impl PyRepresentation {
    /// Built-in representation, e.g. `Representation.catalog("S3:std")`.
    #[staticmethod]
    fn catalog(key: &str) -> PyResult<Self> {
        let (_, inner) = catalog::resolve(key).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Parse the JSON input format (`group` plus `representation`).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (_, inner) = ij::parse_input(text).map_err(py_err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&ij::input_to_json(&self.inner)).expect("inputs serialize")
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.group().order()
    }

    #[getter]
    fn is_linear(&self) -> bool {
        self.inner.is_linear()
    }

    /// Matrix of group element `g` as rows of `complex`.
    fn matrix(&self, g: usize) -> PyResult<Vec<Vec<(f64, f64)>>> {
        let m = self
            .inner
            .matrices()
            .get(g)
            .ok_or_else(|| PyValueError::new_err("element index out of range"))?;
        Ok((0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| (m[(i, j)].re, m[(i, j)].im))
                    .collect()
            })
            .collect())
    }

    #[pyo3(signature = (tol = invalg::DEFAULT_TOL, seed = invalg::DEFAULT_SEED))]
    fn validate(&self, tol: f64, seed: u64) -> PyResult<String> {
        invalg_cli::validate_report(&self.inner, &common(tol, seed))
            .map(text)
            .map_err(py_err)
    }

    /// `side` is `"left"`, `"right"` or `"both"`.
    #[pyo3(signature = (side = "both", tol = invalg::DEFAULT_TOL, seed = invalg::DEFAULT_SEED))]
    fn ideals(&self, side: &str, tol: f64, seed: u64) -> PyResult<String> {
        let side = match side {
            "left" => SideArg::Left,
            "right" => SideArg::Right,
            "both" => SideArg::Both,
            other => return Err(PyValueError::new_err(format!("unknown side {other:?}"))),
        };
        invalg_cli::ideals_report(&self.inner, side, &common(tol, seed))
            .map(text)
            .map_err(py_err)
    }

    #[pyo3(signature = (verify = false, tol = invalg::DEFAULT_TOL, seed = invalg::DEFAULT_SEED))]
    fn subalgebras(&self, py: Python<'_>, verify: bool, tol: f64, seed: u64) -> PyResult<String> {
        let c = common(tol, seed);
        py.detach(|| invalg_cli::subalgebras_report(&self.inner, verify, &c))
            .map(text)
            .map_err(py_err)
    }

    #[pyo3(signature = (tol = invalg::DEFAULT_TOL, seed = invalg::DEFAULT_SEED))]
    fn factor(&self, py: Python<'_>, tol: f64, seed: u64) -> PyResult<String> {
        let c = common(tol, seed);
        py.detach(|| invalg_cli::factor_report(&self.inner, &c))
            .map(text)
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Representation(order={}, dim={}, linear={})",
            self.order(),
            self.dim(),
            self.is_linear()
        )
    }
}

/// Catalog keys of the built-in groups.
#[pyfunction]
fn catalog_keys() -> Vec<&'static str> {
    catalog::KEYS.to_vec()
}

/// Listing of the catalog, or the JSON export of one key (`"all"` for every key).
#[pyfunction]
#[pyo3(signature = (export = None))]
fn catalog_report(export: Option<&str>) -> PyResult<String> {
    let c = common(invalg::DEFAULT_TOL, invalg::DEFAULT_SEED);
    invalg_cli::cmd_catalog(export, &c)
        .map(|v| invalg_cli::render(&v))
        .map_err(py_err)
}

/// Invariant subalgebras of a highest-weight module, e.g. `lie("A1xA1", "[1];[1]")`.
#[pyfunction]
fn lie(types: &str, weights: &str) -> PyResult<String> {
    let c = common(invalg::DEFAULT_TOL, invalg::DEFAULT_SEED);
    invalg_cli::cmd_lie(types, weights, &c)
        .map(|v| invalg_cli::render(&v))
        .map_err(py_err)
}

/// Dimension of the irreducible module with the given Dynkin labels.
#[pyfunction]
fn weyl_dim(types: &str, weights: &str) -> PyResult<String> {
    let factors = invalg::lie::parse_factors(types, weights).map_err(py_err)?;
    let dims = factors
        .iter()
        .map(|(sys, w)| invalg::lie::weyl_dim(sys, w))
        .collect::<invalg::Result<Vec<_>>>();
    Ok(dims
        .map_err(py_err)?
        .into_iter()
        .product::<num_bigint::BigUint>()
        .to_string())
}

#[pymodule(name = "invalg")]
fn invalg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRepresentation>()?;
    m.add_function(wrap_pyfunction!(catalog_keys, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_report, m)?)?;
    m.add_function(wrap_pyfunction!(lie, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_dim, m)?)?;
    Ok(())
}
