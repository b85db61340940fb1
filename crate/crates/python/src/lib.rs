//! Python bindings. Reports cross the boundary as plain dicts and lists
//! (serialized through JSON); rationals are exchanged as strings like "-3/7".

use polya_pila::arcs::decompose_arcs;
use polya_pila::differential::{wronskians, TangentOperator};
use polya_pila::interpolation::fit_curve;
use polya_pila::pipeline::{run_pipeline, PipelineConfig};
use polya_pila::points::{enumerate_rational_points, RationalPoint};
use polya_pila::solve::Rect;
use polya_pila::{BigRational, Error, PlaneCurve};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse(_)
        | Error::Precondition(_)
        | Error::IdenticallyZero
        | Error::NonPositiveDegree
        | Error::NotSquareFree
        | Error::Reducible
        | Error::DegenerateAxis(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_rational(s: &str) -> PyResult<BigRational> {
    s.trim().parse::<BigRational>().map_err(|e| PyValueError::new_err(format!("bad rational {s:?}: {e}")))
}

fn point_pair(p: &RationalPoint) -> (String, String) {
    (p.x.to_string(), p.y.to_string())
}

/// A square-free plane curve P(x, y) = 0 with rational coefficients.
#[pyclass(name = "Curve", frozen)]
struct PyCurve {
    inner: PlaneCurve,
}

#[pymethods]
impl PyCurve {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        PlaneCurve::parse(text).map(|inner| PyCurve { inner }).map_err(to_py)
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn __str__(&self) -> String {
        self.inner.defining().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Curve('{}')", self.inner.defining())
    }

    /// Rational points of height at most `h`, as (x, y) string pairs.
    #[pyo3(signature = (h, unit_box = false))]
    fn rational_points(&self, py: Python<'_>, h: u64, unit_box: bool) -> Vec<(String, String)> {
        let region = unit_box.then(Rect::unit);
        py.detach(|| enumerate_rational_points(&self.inner, h, region.as_ref()).iter().map(point_pair).collect())
    }

    /// The Wronskians W_1..W_k as polynomial strings.
    fn wronskians(&self, py: Python<'_>, k: usize) -> PyResult<Vec<String>> {
        let op = TangentOperator::new(&self.inner);
        let seq = py.detach(|| wronskians(&op, k)).map_err(to_py)?;
        Ok(seq.polys().iter().map(|p| p.to_string()).collect())
    }

    /// Monotone arc decomposition of the curve inside [0,1]^2.
    fn arcs<'py>(&self, py: Python<'py>, k: usize, r: usize) -> PyResult<Bound<'py, PyAny>> {
        let dec = py.detach(|| decompose_arcs(&self.inner, k, r)).map_err(to_py)?;
        json_to_py(py, &dec)
    }

    /// Full counting report. `config` is an optional JSON object with the
    /// same fields as the CLI config file; `h` overrides its height.
    #[pyo3(signature = (h, config = None))]
    fn count<'py>(&self, py: Python<'py>, h: u64, config: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let mut cfg = match config {
            Some(text) => PipelineConfig::from_json(text).map_err(to_py)?,
            None => PipelineConfig::default(),
        };
        cfg.h = h;
        let report = py.detach(|| run_pipeline(&self.inner, &cfg)).map_err(to_py)?;
        json_to_py(py, &report)
    }
}

/// Number of monomials of total degree at most k.
#[pyfunction]
fn mu(k: usize) -> usize {
    polya_pila::mu(k)
}

/// Degree-k curve through the given points, or None when no nonzero
/// polynomial of degree k vanishes on all of them.
#[pyfunction]
fn fit(points: Vec<(String, String)>, k: usize) -> PyResult<Option<String>> {
    let pts = points
        .iter()
        .map(|(x, y)| Ok(RationalPoint::new(parse_rational(x)?, parse_rational(y)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let aux = fit_curve(&pts, k).map_err(to_py)?;
    Ok(aux.map(|a| a.poly.to_string()))
}

#[pymodule]
#[pyo3(name = "polya_pila")]
fn py_polya_pila(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    Ok(())
}
