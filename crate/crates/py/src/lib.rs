//! Python bindings: `import qnl`.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use qnl_core::audit::{render_table, run_audit, AuditConfig};
use qnl_core::constants::{self, RatioId, SearchConfig, SkewParams};
use qnl_core::norms::{self, SupGrid};
use qnl_core::Error;

create_exception!(qnl, DivergentError, PyArithmeticError, "The quantity is infinite.");
create_exception!(qnl, SearchError, PyRuntimeError, "Every search candidate was invalid.");

fn err(e: Error) -> PyErr {
    match e {
        Error::Divergent(m) => DivergentError::new_err(m),
        Error::SearchFailed(m) => SearchError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(xs) => {
            let l = PyList::empty(py);
            for x in xs {
                l.append(to_py(py, x)?)?;
            }
            l.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

/// An N-function: `NFunction("power:2")`, `"powerlog:2"` or `"expminus"`.
#[pyclass(frozen, eq, skip_from_py_object, module = "qnl")]
#[derive(Clone, PartialEq)]
struct NFunction(qnl_core::NFunction);

#[pymethods]
impl NFunction {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(NFunction).map_err(err)
    }

    fn __call__(&self, t: f64) -> PyResult<f64> {
        self.0.eval(t).map_err(err)
    }

    fn inv(&self, y: f64) -> PyResult<f64> {
        self.0.inv(y).map_err(err)
    }

    fn index_ratio(&self, t: f64) -> PyResult<f64> {
        self.0.index_ratio(t).map_err(err)
    }

    /// `(alpha_bar, beta_bar, argmin_t, argmax_t)`.
    fn indices(&self) -> PyResult<(f64, f64, f64, f64)> {
        let ix = self.0.indices().map_err(err)?;
        Ok((ix.alpha_bar, ix.beta_bar, ix.argmin_t, ix.argmax_t))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("NFunction('{}')", self.0)
    }
}

/// A piecewise function on the line, from a literal such as
/// `"powerleft(1,0.5) on (0,1)"`.
#[pyclass(frozen, eq, skip_from_py_object, module = "qnl")]
#[derive(Clone, PartialEq)]
struct Function(qnl_core::PiecewiseFunction);

#[pymethods]
impl Function {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        literal.parse().map(Function).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (a, b, height = 1.0))]
    fn char_fn(a: f64, b: f64, height: f64) -> PyResult<Self> {
        qnl_core::PiecewiseFunction::char_fn(a, b, height).map(Function).map_err(err)
    }

    #[staticmethod]
    fn power_left(a: f64, b: f64, coef: f64, exponent: f64) -> PyResult<Self> {
        qnl_core::PiecewiseFunction::power_left(a, b, coef, exponent).map(Function).map_err(err)
    }

    #[staticmethod]
    fn power_right(a: f64, b: f64, coef: f64, exponent: f64) -> PyResult<Self> {
        qnl_core::PiecewiseFunction::power_right(a, b, coef, exponent).map(Function).map_err(err)
    }

    /// From `(a, b, height)` cells.
    #[staticmethod]
    fn steps(cells: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        qnl_core::PiecewiseFunction::steps(&cells).map(Function).map_err(err)
    }

    /// `a·f + b·g`.
    #[staticmethod]
    fn lincomb(a: f64, f: &Function, b: f64, g: &Function) -> PyResult<Self> {
        qnl_core::PiecewiseFunction::lincomb(a, &f.0, b, &g.0).map(Function).map_err(err)
    }

    fn scale(&self, c: f64) -> PyResult<Self> {
        self.0.scale(c).map(Function).map_err(err)
    }

    fn __call__(&self, x: f64) -> f64 {
        self.0.eval(x)
    }

    /// `|{|f| > t}|`.
    fn distribution(&self, t: f64) -> PyResult<f64> {
        self.0.distribution(t).map_err(err)
    }

    /// `∫₀^m f*`.
    fn rearrangement_integral(&self, m: f64) -> PyResult<f64> {
        self.0.rearrangement_integral(m).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Function('{}')", self.0)
    }
}

/// A quasi-normed space: `"lp:2"`, `"weak-lp:2"`, `"orlicz:power:2"`,
/// `"weak-orlicz:expminus"`.
#[pyclass(frozen, eq, skip_from_py_object, module = "qnl")]
#[derive(Clone, PartialEq)]
struct Space(qnl_core::SpaceSpec);

#[pymethods]
impl Space {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(Space).map_err(err)
    }

    fn norm(&self, py: Python<'_>, f: &Function) -> PyResult<f64> {
        py.detach(|| self.0.norm(&f.0)).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Space('{}')", self.0)
    }
}

#[pyfunction]
fn norm(py: Python<'_>, f: &Function, space: &str) -> PyResult<f64> {
    let s: qnl_core::SpaceSpec = space.parse().map_err(err)?;
    py.detach(|| s.norm(&f.0)).map_err(err)
}

#[pyfunction]
fn weak_lp_norm(f: &Function, p: f64) -> PyResult<f64> {
    norms::weak_lp_norm(&f.0, p, &SupGrid::default()).map_err(err)
}

#[pyfunction]
fn weak_orlicz_norm(f: &Function, phi: &NFunction) -> PyResult<f64> {
    norms::weak_orlicz_norm(&f.0, &phi.0, &SupGrid::default()).map_err(err)
}

#[pyfunction]
fn kolmogorov_functional(f: &Function, p: f64) -> PyResult<f64> {
    norms::kolmogorov_functional(&f.0, p, &SupGrid::default()).map_err(err)
}

/// Ratio functional `constant` (e.g. `"c1"`, `"nj"`, `"skew-c"`) at `(f, g)`.
#[pyfunction]
#[pyo3(signature = (constant, f, g, space, lam = 1.0, mu = 1.0))]
fn ratio(constant: &str, f: &Function, g: &Function, space: &str, lam: f64, mu: f64) -> PyResult<f64> {
    let id: RatioId = constant.parse().map_err(err)?;
    let s: qnl_core::SpaceSpec = space.parse().map_err(err)?;
    let sk = SkewParams::new(lam, mu).map_err(err)?;
    constants::ratio(&id, &f.0, &g.0, &sk, &s).map_err(err)
}

/// Seeded supremum search; returns the estimate as a dict.
#[pyfunction]
#[pyo3(signature = (constant, space, lam = 1.0, mu = 1.0, family = "mixed", budget = 2000, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn estimate(
    py: Python<'_>,
    constant: &str,
    space: &str,
    lam: f64,
    mu: f64,
    family: &str,
    budget: usize,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let id: RatioId = constant.parse().map_err(err)?;
    let s: qnl_core::SpaceSpec = space.parse().map_err(err)?;
    let sk = SkewParams::new(lam, mu).map_err(err)?;
    let cfg = SearchConfig { seed, budget, family: family.parse().map_err(err)?, ..SearchConfig::default() };
    let e = py.detach(|| constants::estimate(&id, &s, &sk, &cfg)).map_err(err)?;
    to_py(py, &serde_json::to_value(&e).expect("estimate serializes"))
}

/// Runs the claim audit. `config` is an optional JSON object of audit
/// settings; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (config = None, slow_oracle = false))]
fn audit(py: Python<'_>, config: Option<&str>, slow_oracle: bool) -> PyResult<Py<PyAny>> {
    let mut cfg: AuditConfig = match config {
        Some(text) => serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        None => AuditConfig::default(),
    };
    cfg.slow_oracle |= slow_oracle;
    let report = py.detach(|| run_audit(&cfg)).map_err(err)?;
    to_py(py, &serde_json::to_value(&report).expect("report serializes"))
}

/// The audit as an aligned text table.
#[pyfunction]
#[pyo3(signature = (config = None))]
fn audit_table(py: Python<'_>, config: Option<&str>) -> PyResult<String> {
    let cfg: AuditConfig = match config {
        Some(text) => serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        None => AuditConfig::default(),
    };
    let report = py.detach(|| run_audit(&cfg)).map_err(err)?;
    Ok(render_table(&report))
}

#[pymodule]
fn qnl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", qnl_core::VERSION)?;
    m.add("DivergentError", m.py().get_type::<DivergentError>())?;
    m.add("SearchError", m.py().get_type::<SearchError>())?;
    m.add_class::<NFunction>()?;
    m.add_class::<Function>()?;
    m.add_class::<Space>()?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(weak_lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(weak_orlicz_norm, m)?)?;
    m.add_function(wrap_pyfunction!(kolmogorov_functional, m)?)?;
    m.add_function(wrap_pyfunction!(ratio, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(audit_table, m)?)?;
    Ok(())
}
