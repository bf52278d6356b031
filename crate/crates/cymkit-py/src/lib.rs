//! Python bindings: instantons, continuation of coupled pairs, exact
//! stability invariants and the radial decay probe.

use cymkit::coupled::{self, ContinuationConfig};
use cymkit::gauge::{self, InstantonSpec};
use cymkit::grid::RadialGrid;
use cymkit::stability::{self, SheafOnP1, TestConfig, Triple};
use cymkit::weighted::{self, InstantonProfile};
use cymkit::Quaternion;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: cymkit::Error) -> PyErr {
    if e.is_input() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn bad_json(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Coefficients of the basic instanton at `x`, as four quaternions `[w, x, y, z]`.
#[pyfunction]
fn basic_instanton(x: [f64; 4]) -> Vec<[f64; 4]> {
    gauge::basic_instanton(Quaternion::from_array(x)).iter().map(|q| [q.w, q.x, q.y, q.z]).collect()
}

/// `(1/8π²)∫tr F∧F` of a 't Hooft instanton.
#[pyfunction]
#[pyo3(signature = (centers, scales, tol = 1e-3))]
fn instanton_charge(centers: Vec<[f64; 4]>, scales: Vec<f64>, tol: f64) -> PyResult<f64> {
    let spec = InstantonSpec::new(centers.into_iter().map(Quaternion::from_array).collect(), scales).map_err(err)?;
    Ok(gauge::charge_quadrature(&spec, tol).map_err(err)?.value)
}

/// A radial coupled pair on ℂ².
#[pyclass(name = "SolutionPair", module = "cymkit_py")]
#[derive(Clone)]
struct PySolutionPair {
    inner: coupled::SolutionPair,
}

#[pymethods]
impl PySolutionPair {
    /// Flat metric with the basic instanton.
    #[staticmethod]
    #[pyo3(signature = (r_min = 1e-2, r_max = 1e3, intervals = 2000, lam2 = 1.0))]
    fn seed(r_min: f64, r_max: f64, intervals: usize, lam2: f64) -> PyResult<Self> {
        let grid = RadialGrid::new(r_min, r_max, intervals).map_err(err)?;
        Ok(PySolutionPair { inner: coupled::SolutionPair::seed(grid, lam2).map_err(err)? })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// `(hermitian, scalar)` sup norms of the residual.
    #[getter]
    fn residuals(&self) -> (f64, f64) {
        (self.inner.norms.hermitian, self.inner.norms.scalar)
    }

    #[getter]
    fn scalar_spread(&self) -> f64 {
        self.inner.scalar_spread()
    }

    #[getter]
    fn instanton_number(&self) -> f64 {
        self.inner.instanton_number()
    }

    /// CYM functional value at coupling constant `c`.
    fn cym(&self, c: f64) -> PyResult<f64> {
        let s = self.inner.samples().map_err(err)?;
        Ok(coupled::cym_functional(&s, self.inner.coupling, c).value)
    }

    fn rescale(&self, beta: f64) -> PyResult<Self> {
        Ok(PySolutionPair { inner: coupled::rescale_solution(&self.inner, beta).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(bad_json)
    }

    fn __repr__(&self) -> String {
        format!("SolutionPair(alpha={}, nodes={})", self.inner.alpha, self.inner.grid.len())
    }
}

/// Pairs along the branch from `seed` to `alpha_target`, seed first.
/// Raises when the branch cannot be followed to the target.
#[pyfunction]
#[pyo3(signature = (seed, alpha_target, tol = 1e-10))]
fn continuation(seed: &PySolutionPair, alpha_target: f64, tol: f64) -> PyResult<Vec<PySolutionPair>> {
    let cfg = ContinuationConfig { tol, ..ContinuationConfig::to(alpha_target) };
    let out = coupled::newton_continuation(seed.inner.clone(), &cfg).map_err(err)?;
    if !out.reached_target {
        return Err(PyRuntimeError::new_err(out.diagnostic.unwrap_or_default()));
    }
    Ok(out.pairs.into_iter().map(|inner| PySolutionPair { inner }).collect())
}

/// Verdict JSON for a triple given as JSON; `alpha` is an exact rational string.
#[pyfunction]
fn stability_verdict(triple_json: &str, alpha: &str) -> PyResult<String> {
    let t: Triple = serde_json::from_str(triple_json).map_err(bad_json)?;
    let a = stability::poly::parse(alpha).ok_or_else(|| PyValueError::new_err(format!("{alpha} is not a rational")))?;
    let v = stability::stability_verdict(&t, &a).map_err(err)?;
    serde_json::to_string(&v).map_err(bad_json)
}

/// `(F₀, F₁, F₂)` of a configuration on `(P¹, O(p), ⊕O(a_i))` as `"p/q"` strings.
#[pyfunction]
#[pyo3(signature = (splitting, config_json, polarization_power = 1))]
fn weight_expansion(splitting: Vec<i64>, config_json: &str, polarization_power: u32) -> PyResult<(String, String, String)> {
    let cfg: TestConfig = serde_json::from_str(config_json).map_err(bad_json)?;
    let e = SheafOnP1::new(splitting).map_err(err)?;
    let p = stability::alpha_pieces(&cfg, &e, polarization_power).map_err(err)?.bundle;
    let s = stability::poly::to_string;
    Ok((s(&p.f0), s(&p.f1), s(&p.f2)))
}

/// `(algebraic, numeric, discrepancy)` for a configuration on P¹.
#[pyfunction]
fn bridge_check(splitting: Vec<i64>, config_json: &str, alpha0: f64, alpha1: f64) -> PyResult<(f64, f64, f64)> {
    let cfg: TestConfig = serde_json::from_str(config_json).map_err(bad_json)?;
    let e = SheafOnP1::new(splitting).map_err(err)?;
    let r = stability::bridge_check(&e, &cfg, alpha0, alpha1).map_err(err)?;
    Ok((r.algebraic, r.numeric, r.discrepancy))
}

#[pyfunction]
fn indicial_roots(eigenvalues: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    weighted::indicial_roots(&eigenvalues).map_err(err)
}

/// Fitted decay exponent of the radial Laplacian's response to a bump at `r = 1`.
#[pyfunction]
#[pyo3(signature = (lam, instanton = true, intervals = 3000))]
fn decay_exponent(lam: f64, instanton: bool, intervals: usize) -> PyResult<f64> {
    let grid = RadialGrid::new(1e-3, 1e6, intervals).map_err(err)?;
    let profile = if instanton { InstantonProfile::BASIC } else { InstantonProfile::FLAT };
    let op = weighted::assemble_radial_laplacian(&grid, lam, profile).map_err(err)?;
    let rep = weighted::decay_probe(&op, &weighted::bump_rhs(&op, 1.0, 0.05)).map_err(err)?;
    rep.exponent.ok_or_else(|| PyRuntimeError::new_err("zero solution"))
}

#[pymodule]
fn cymkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySolutionPair>()?;
    m.add_function(wrap_pyfunction!(basic_instanton, m)?)?;
    m.add_function(wrap_pyfunction!(instanton_charge, m)?)?;
    m.add_function(wrap_pyfunction!(continuation, m)?)?;
    m.add_function(wrap_pyfunction!(stability_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(weight_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(bridge_check, m)?)?;
    m.add_function(wrap_pyfunction!(indicial_roots, m)?)?;
    m.add_function(wrap_pyfunction!(decay_exponent, m)?)?;
    Ok(())
}
