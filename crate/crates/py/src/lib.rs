//! Python bindings for exforge.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use exforge::catalog;
use exforge::classify::{self, Table2Options};
use exforge::io;
use exforge::liealg::{self, JacobiMode};
use exforge::report::Report;
use exforge::tits::{self, Summand};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts a JSON value into plain Python objects.
fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn serialize<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(v).map_err(value_err)?)
}

fn report_dict<'py>(py: Python<'py>, r: &Report) -> PyResult<Bound<'py, PyAny>> {
    let d = PyDict::new(py);
    d.set_item("passed", r.passed())?;
    d.set_item("checks", serialize(py, &r.checks)?)?;
    Ok(d.into_any())
}

fn jacobi_mode(jacobi: &str, seed: u64) -> PyResult<JacobiMode> {
    if jacobi == "full" {
        return Ok(JacobiMode::Full);
    }
    jacobi
        .strip_prefix("sample:")
        .and_then(|n| n.parse::<usize>().ok())
        .map(|n| JacobiMode::Sample { n, seed })
        .ok_or_else(|| PyValueError::new_err(format!("expected 'full' or 'sample:N', got {jacobi:?}")))
}

/// A Lie algebra given by exact rational structure constants.
#[pyclass(name = "LieAlgebra", module = "exforge", frozen)]
struct PyLieAlgebra {
    inner: liealg::LieAlgebra,
}

#[pymethods]
impl PyLieAlgebra {
    /// Parses canonical `.lie` JSON.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyLieAlgebra { inner: io::lie_from_json(text).map_err(value_err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Self::from_json(&text)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn basis_names(&self) -> Vec<String> {
        self.inner.basis_names().to_vec()
    }

    /// `[e_i, e_j]` as `(k, "p/q")` pairs.
    fn bracket(&self, i: usize, j: usize) -> PyResult<Vec<(usize, String)>> {
        let n = self.inner.dim();
        if i >= n || j >= n {
            return Err(PyValueError::new_err(format!("basis index out of range for dim {n}")));
        }
        Ok(self.inner.bracket_basis(i, j).into_iter().map(|(k, c)| (k, c.to_string())).collect())
    }

    /// Killing form inertia `(n_plus, n_minus, n_zero)`.
    fn signature(&self) -> (usize, usize, usize) {
        let s = self.inner.signature();
        (s.n_plus, s.n_minus, s.n_zero)
    }

    #[getter]
    fn delta(&self) -> i64 {
        self.inner.signature().delta()
    }

    #[pyo3(signature = (jacobi = "full", seed = 1))]
    fn verify<'py>(&self, py: Python<'py>, jacobi: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let mode = jacobi_mode(jacobi, seed)?;
        let r = py.detach(|| liealg::verify_lie(&self.inner, mode));
        report_dict(py, &r)
    }

    #[pyo3(signature = (seed = 1))]
    fn simplicity<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| classify::simplicity_certificate(&self.inner, seed));
        report_dict(py, &r)
    }

    #[pyo3(signature = (seed = 1))]
    fn identify<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let id = py.detach(|| classify::identify(&self.inner, seed));
        serialize(py, &id)
    }

    fn to_json(&self) -> String {
        io::lie_to_json(&self.inner)
    }

    /// SHA-256 of the sorted constant list.
    fn checksum(&self) -> String {
        io::lie_checksum(&self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra(dim={})", self.inner.dim())
    }
}

/// The Lie algebra of an octonion algebra and a cubic Jordan algebra.
#[pyclass(name = "TitsAlgebra", module = "exforge", frozen)]
struct PyTitsAlgebra {
    inner: tits::TitsAlgebra,
}

#[pymethods]
impl PyTitsAlgebra {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn lie(&self) -> PyLieAlgebra {
        PyLieAlgebra { inner: self.inner.lie.clone() }
    }

    /// Bracket coefficients `(mu1, mu2, mu3)` as exact strings.
    #[getter]
    fn mu(&self) -> (String, String, String) {
        let c = &self.inner.coeffs;
        (c.mu1.to_string(), c.mu2.to_string(), c.mu3.to_string())
    }

    #[getter]
    fn summand_tags(&self) -> Vec<&'static str> {
        self.inner
            .summand_tags
            .iter()
            .map(|t| match t {
                Summand::DerO => "DerO",
                Summand::DerJ => "DerJ",
                Summand::Tensor => "Tensor",
            })
            .collect()
    }

    fn dual_pair<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| tits::dual_pair_check(&self.inner));
        report_dict(py, &r)
    }

    /// Checks the standard Cartan involution against the Killing form.
    fn cartan_involution<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| {
            let (to, tj) = classify::standard_involutions(&self.inner);
            classify::cartan_involution_check(&self.inner, &to, &tj)
        });
        report_dict(py, &r.map_err(value_err)?)
    }

    /// Writes `.lie` and sidecar; returns the checksum.
    fn save(&self, path: &str) -> PyResult<String> {
        io::write_tits(&self.inner, std::path::Path::new(path)).map_err(|e| PyIOError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let c = &self.inner.coeffs;
        format!("TitsAlgebra(dim={}, mu=({}, {}, {}))", self.inner.dim(), c.mu1, c.mu2, c.mu3)
    }
}

/// Builds the Tits algebra from catalog names or explicit parameters.
#[pyfunction]
fn construct(py: Python<'_>, octonion: &str, jordan: &str) -> PyResult<PyTitsAlgebra> {
    let o = catalog::octonion(octonion).map_err(value_err)?;
    let j = catalog::jordan(jordan).map_err(value_err)?;
    let g = py.detach(|| tits::construct(&o, &j)).map_err(value_err)?;
    Ok(PyTitsAlgebra { inner: g })
}

/// Catalog entries as dicts with name, kind, gammas and rho.
#[pyfunction]
fn catalog_entries(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    serialize(py, &catalog::catalog())
}

#[pyfunction]
fn real_form_label(dim: usize, n_plus: usize, n_minus: usize) -> PyResult<String> {
    let ty =
        classify::ComplexType::from_dim(dim).ok_or_else(|| value_err(format!("no exceptional type of dim {dim}")))?;
    let sig = exforge::exactlin::Signature { n_plus, n_minus, n_zero: 0 };
    classify::real_form_label(ty, &sig).map(|l| l.label).map_err(value_err)
}

#[pyfunction]
fn table1(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let (rows, _) = py.detach(classify::table1).map_err(value_err)?;
    serialize(py, &rows)
}

/// The 22 real-form cells in row-major order.
#[pyfunction]
#[pyo3(signature = (jacobi_samples = 20_000, seed = 1))]
fn table2(py: Python<'_>, jacobi_samples: usize, seed: u64) -> PyResult<Bound<'_, PyAny>> {
    let opts = Table2Options { jacobi_samples, seed, ..Table2Options::default() };
    let cells = py.detach(|| classify::table2(&opts)).map_err(value_err)?;
    serialize(py, &cells)
}

#[pymodule]
#[pyo3(name = "exforge")]
fn exforge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLieAlgebra>()?;
    m.add_class::<PyTitsAlgebra>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_entries, m)?)?;
    m.add_function(wrap_pyfunction!(real_form_label, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(table2, m)?)?;
    m.add("OCTONIONS", catalog::OCTONION_NAMES.to_vec())?;
    m.add("JORDAN_COLUMNS", catalog::JORDAN_COLUMNS.to_vec())?;
    Ok(())
}
