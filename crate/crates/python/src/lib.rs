//! Python bindings for `cedensity`.
//!
//! Structured results are returned as plain dicts and lists. Non-finite
//! floats inside them come back as `None`; infinite depths and extents as
//! `float('inf')`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use cedensity::balls::{self, BallFamily};
use cedensity::boxes::{self, BoxSearch};
use cedensity::classify::{self, VerdictConfig};
use cedensity::{orbit, returns, Error, MapFamily};

fn err(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_)
        | Error::InvalidTheta(_)
        | Error::ParameterOutOfDomain { .. }
        | Error::NoSuchCritical { .. }
        | Error::NotIntervalMap { .. }
        | Error::DegenerateCritical { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn value_to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any().unbind(),
            (None, Some(f)) => f.into_pyobject(py)?.into_any().unbind(),
            _ => py.None(),
        },
        Value::String(s) if s == "inf" => f64::INFINITY.into_pyobject(py)?.into_any().unbind(),
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(a) => {
            let items = a.iter().map(|x| value_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, value_to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    value_to_py(py, &v)
}

/// One-parameter family of interval maps.
#[pyclass(name = "Family", module = "cedensity_py", frozen)]
struct PyFamily {
    inner: MapFamily,
}

#[pymethods]
impl PyFamily {
    /// The logistic family `a x (1 - x)`, `a ∈ [0, 4]`.
    #[staticmethod]
    fn logistic() -> Self {
        PyFamily {
            inner: cedensity::make_logistic(),
        }
    }

    /// Fixed-endpoint polynomial family.
    #[staticmethod]
    #[pyo3(signature = (coeffs, direction=None, base=0.0, domain=None))]
    fn poly(coeffs: Vec<f64>, direction: Option<Vec<f64>>, base: f64, domain: Option<(f64, f64)>) -> PyResult<Self> {
        let inner = cedensity::family::make_poly_family_with(&coeffs, direction.as_deref(), base, domain).map_err(err)?;
        Ok(PyFamily { inner })
    }

    /// `"logistic"` or a path to a family JSON file.
    #[staticmethod]
    fn resolve(arg: &str) -> PyResult<Self> {
        Ok(PyFamily {
            inner: MapFamily::resolve(arg).map_err(err)?,
        })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        self.inner.parameter_domain()
    }

    #[getter]
    fn base(&self) -> f64 {
        self.inner.base_parameter()
    }

    /// `(f, df/dx, d2f/dx2, df/dt)` at `(t, x)`.
    fn jet(&self, t: f64, x: f64) -> PyResult<(f64, f64, f64, f64)> {
        let j = self.inner.jet(t, x).map_err(err)?;
        Ok((j.f, j.dfx, j.d2fx, j.dft))
    }

    /// List of `(position, order)` pairs.
    fn critical_points(&self, t: f64) -> Vec<(f64, f64)> {
        self.inner.critical_points(t).iter().map(|c| (c.position, c.order)).collect()
    }

    fn __repr__(&self) -> String {
        let (lo, hi) = self.inner.parameter_domain();
        format!("Family({}, domain=[{lo}, {hi}])", self.inner.label())
    }
}

/// Critical orbit with log-space derivative products.
#[pyclass(name = "Orbit", module = "cedensity_py", frozen)]
struct PyOrbit {
    inner: cedensity::OrbitData,
}

#[pymethods]
impl PyOrbit {
    #[getter]
    fn points(&self) -> Vec<f64> {
        self.inner.points.clone()
    }

    /// `log |D_n|`.
    #[getter]
    fn log_deriv(&self) -> Vec<f64> {
        self.inner.cum_deriv.iter().map(|d| d.logmag).collect()
    }

    #[getter]
    fn sign_deriv(&self) -> Vec<i8> {
        self.inner.cum_deriv.iter().map(|d| d.sign).collect()
    }

    #[getter]
    fn crit_dist(&self) -> Vec<f64> {
        self.inner.crit_dist.clone()
    }

    #[getter]
    fn escaped(&self) -> Option<usize> {
        self.inner.escaped
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }

    fn summability(&self, n: usize) -> PyResult<f64> {
        Ok(orbit::summability_partial(&self.inner, n).map_err(err)?.partial)
    }

    fn ce_rate(&self, n_min: usize) -> PyResult<f64> {
        Ok(orbit::ce_exponent(&self.inner, n_min).map_err(err)?.inf_rate)
    }
}

#[pyfunction]
#[pyo3(signature = (family, t, n, crit=0))]
fn critical_orbit(family: &PyFamily, t: f64, n: usize, crit: usize) -> PyResult<PyOrbit> {
    Ok(PyOrbit {
        inner: cedensity::critical_orbit(&family.inner, t, crit, n).map_err(err)?,
    })
}

/// Truncated transversality sum with its tail bound.
#[pyfunction]
#[pyo3(signature = (family, t, n, crit=0))]
fn nv_check(py: Python<'_>, family: &PyFamily, t: f64, n: usize, crit: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &orbit::nv_check(&family.inner, t, crit, n).map_err(err)?)
}

/// Return records with essential and free flags.
#[pyfunction]
#[pyo3(signature = (family, t, eps, n=1000, crit=0, theta0=0.1))]
fn return_records(py: Python<'_>, family: &PyFamily, t: f64, eps: f64, n: usize, crit: usize, theta0: f64) -> PyResult<Py<PyAny>> {
    let o = cedensity::critical_orbit(&family.inner, t, crit, n).map_err(err)?;
    let (_, recs) = returns::analyze_returns(&family.inner, &o, eps, theta0).map_err(err)?;
    to_py(py, &recs)
}

fn verdict_config(c: f64, tau: f64, n_max: usize, lambda_samples: usize) -> VerdictConfig {
    VerdictConfig {
        c,
        tau,
        n_max,
        lambda_samples,
        ..VerdictConfig::default()
    }
}

/// Verdict row at one parameter; `passes` is added to the dict.
#[pyfunction]
#[pyo3(signature = (family, t, eps, c=20.0, tau=2.0, n_max=10_000))]
fn evaluate_row(py: Python<'_>, family: &PyFamily, t: f64, eps: f64, c: f64, tau: f64, n_max: usize) -> PyResult<Py<PyAny>> {
    let row = classify::evaluate_row(&family.inner, t, eps, &verdict_config(c, tau, n_max, 0));
    let obj = to_py(py, &row)?;
    obj.bind(py).cast::<PyDict>()?.set_item("passes", row.passes())?;
    Ok(obj)
}

/// Density sweep summary per window; rows are omitted unless `rows=True`.
#[pyfunction]
#[pyo3(signature = (family, center, eps, grid=500, seed=0, c=20.0, tau=2.0, n_max=10_000, lambda_samples=32, rows=false))]
#[allow(clippy::too_many_arguments)]
fn density_sweep(
    py: Python<'_>,
    family: &PyFamily,
    center: f64,
    eps: Vec<f64>,
    grid: usize,
    seed: u64,
    c: f64,
    tau: f64,
    n_max: usize,
    lambda_samples: usize,
    rows: bool,
) -> PyResult<Py<PyAny>> {
    let config = verdict_config(c, tau, n_max, lambda_samples);
    let mut res = py
        .detach(|| classify::density_sweep(&family.inner, center, &eps, grid, seed, &config))
        .map_err(err)?;
    if !rows {
        for w in &mut res.windows {
            w.rows.clear();
        }
    }
    to_py(py, &res)
}

/// Family of parameter balls.
#[pyclass(name = "BallFamily", module = "cedensity_py", frozen)]
struct PyBallFamily {
    inner: BallFamily,
}

#[pymethods]
impl PyBallFamily {
    #[new]
    fn new(balls: Vec<(f64, f64)>) -> PyResult<Self> {
        let balls = balls
            .into_iter()
            .map(|(c, r)| balls::Ball::new(c, r))
            .collect::<cedensity::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PyBallFamily {
            inner: BallFamily::new(balls).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (seed, count, height, scale=1.0))]
    fn random(seed: u64, count: usize, height: usize, scale: f64) -> PyResult<Self> {
        Ok(PyBallFamily {
            inner: balls::random_special_family(seed, count, height, scale).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyBallFamily {
            inner: BallFamily::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    fn balls(&self) -> Vec<(f64, f64)> {
        self.inner.balls.iter().map(|b| (b.center, b.radius)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn is_special(&self) -> PyResult<bool> {
        Ok(self.inner.is_special().map_err(err)?.special)
    }

    fn height(&self) -> PyResult<usize> {
        self.inner.height().map_err(err)
    }

    /// Total depth at `x`; `inf` at a center.
    fn total_depth(&self, x: f64) -> f64 {
        self.inner.total_depth(x).as_f64()
    }

    /// Intervals where the total depth is at least `n`, and their measure.
    fn deep_set(&self, n: u32) -> (Vec<(f64, f64)>, f64) {
        let s = balls::deep_set(&self.inner, n);
        (s.intervals, s.total_measure)
    }

    fn lemma_bound_check(&self, py: Python<'_>, n: u32, kappa: f64) -> PyResult<Py<PyAny>> {
        to_py(py, &balls::lemma_bound_check(&self.inner, n, kappa).map_err(err)?)
    }
}

/// Parameters in `[lo, hi]` whose order-`m` orbit hits a critical point.
#[pyfunction]
#[pyo3(signature = (family, lo, hi, m, crit=0, grid=4000))]
fn find_precritical(family: &PyFamily, lo: f64, hi: f64, m: usize, crit: usize, grid: usize) -> PyResult<Vec<f64>> {
    let roots = boxes::find_precritical(&family.inner, lo, hi, crit, m, grid).map_err(err)?;
    Ok(roots.into_iter().map(|r| r.t).collect())
}

/// Parameter boxes around pre-critical parameters, with specialness data.
#[pyfunction]
#[pyo3(signature = (family, lo, hi, m_max=4, eps=0.01, lam=2.0, theta=0.01, crit=0))]
#[allow(clippy::too_many_arguments)]
fn box_family(
    py: Python<'_>,
    family: &PyFamily,
    lo: f64,
    hi: f64,
    m_max: usize,
    eps: f64,
    lam: f64,
    theta: f64,
    crit: usize,
) -> PyResult<Py<PyAny>> {
    let cfg = BoxSearch {
        m_max,
        eps,
        lambda: lam,
        theta,
        ..BoxSearch::default()
    };
    let res = py.detach(|| boxes::box_family(&family.inner, lo, hi, crit, &cfg)).map_err(err)?;
    to_py(py, &res)
}

#[pymodule]
fn cedensity_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamily>()?;
    m.add_class::<PyOrbit>()?;
    m.add_class::<PyBallFamily>()?;
    m.add_function(wrap_pyfunction!(critical_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(nv_check, m)?)?;
    m.add_function(wrap_pyfunction!(return_records, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_row, m)?)?;
    m.add_function(wrap_pyfunction!(density_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(find_precritical, m)?)?;
    m.add_function(wrap_pyfunction!(box_family, m)?)?;
    m.add("lemma_constant_half", balls::lemma_constant(0.5))?;
    Ok(())
}
