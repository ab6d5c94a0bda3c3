//! Python module `diffnorm`: grids, sampled functions, the norm family, weight and
//! symbol conditions, and the half-space multiplier sweep.

use diffnorm_core as core;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use core::difference::{Levels, MeanMode, SeminormRequest, TLevels};
use core::symbols::{dilation_conditions, hoelder_conditions, RadialSampling};
use core::weights::{Cube, MRange};
use core::{FunctionDesc, Kernel, NormMode, Symbol, Weight};

create_exception!(diffnorm, DiffnormError, PyValueError);

fn err(e: core::Error) -> PyErr {
    DiffnormError::new_err(format!("{}: {e}", e.kind()))
}

fn parse<T: std::str::FromStr<Err = core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => match s.as_str() {
            "inf" => f64::INFINITY.into_pyobject(py)?.into_any(),
            "-inf" => f64::NEG_INFINITY.into_pyobject(py)?.into_any(),
            "NaN" | "nan" => f64::NAN.into_pyobject(py)?.into_any(),
            _ => s.into_pyobject(py)?.into_any(),
        },
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

/// Converts a report through serde_json; non-finite floats arrive as None.
fn report<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| DiffnormError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn default_kernel(w: &Weight) -> Kernel {
    if w.is_unit() {
        Kernel::IndicatorCube
    } else {
        Kernel::gauss()
    }
}

#[pyclass(name = "Grid", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrid(core::GridSpec);

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (d, n, period))]
    fn new(d: usize, n: usize, period: f64) -> PyResult<Self> {
        Ok(PyGrid(core::make_grid(d, n, period).map_err(err)?))
    }
    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }
    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }
    #[getter]
    fn period(&self) -> f64 {
        self.0.period()
    }
    #[getter]
    fn spacing(&self) -> f64 {
        self.0.spacing()
    }
    #[getter]
    fn nyquist(&self) -> f64 {
        self.0.nyquist()
    }
    fn __len__(&self) -> usize {
        self.0.len()
    }
    /// Node coordinates, axis 0 slowest.
    fn points(&self) -> Vec<Vec<f64>> {
        (0..self.0.len()).map(|i| self.0.point(i)[..self.0.d()].to_vec()).collect()
    }
    fn frequencies(&self) -> Vec<Vec<f64>> {
        (0..self.0.len()).map(|i| self.0.frequency(i)[..self.0.d()].to_vec()).collect()
    }
    fn __repr__(&self) -> String {
        format!("Grid(d={}, n={}, period={})", self.0.d(), self.0.n(), self.0.period())
    }
}

#[pyclass(name = "Function", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFunction(core::SampledFunction);

#[pymethods]
impl PyFunction {
    /// Samples a descriptor such as "gauss:1", "modgauss:0.5,3" or "vec[gauss;bump:1,0]".
    #[staticmethod]
    #[pyo3(signature = (grid, desc, space = "scalar"))]
    fn sample(grid: &PyGrid, desc: &str, space: &str) -> PyResult<Self> {
        let d: FunctionDesc = parse(desc)?;
        Ok(PyFunction(core::sample(&grid.0, &d, parse(space)?).map_err(err)?))
    }
    /// Component-major values: component c at node i sits at c·len + i.
    #[staticmethod]
    #[pyo3(signature = (grid, values, space = "scalar"))]
    fn from_values(grid: &PyGrid, values: Vec<Complex64>, space: &str) -> PyResult<Self> {
        Ok(PyFunction(core::SampledFunction::new(grid.0, parse(space)?, values).map_err(err)?))
    }
    #[staticmethod]
    fn read_csv(path: &str) -> PyResult<Self> {
        let file = std::fs::File::open(path).map_err(|e| DiffnormError::new_err(format!("{path}: {e}")))?;
        Ok(PyFunction(core::SampledFunction::read_csv(std::io::BufReader::new(file)).map_err(err)?))
    }
    fn write_csv(&self, path: &str) -> PyResult<()> {
        let file = std::fs::File::create(path).map_err(|e| DiffnormError::new_err(format!("{path}: {e}")))?;
        self.0.write_csv(std::io::BufWriter::new(file)).map_err(err)
    }
    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(*self.0.grid())
    }
    #[getter]
    fn space(&self) -> String {
        self.0.space().to_string()
    }
    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }
    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }
    fn __repr__(&self) -> String {
        format!("Function(n={}, d={}, space={})", self.0.grid().n(), self.0.grid().d(), self.0.space())
    }
}

#[pyfunction]
#[pyo3(signature = (f, p, w = "const:1"))]
fn lp_norm(f: &PyFunction, p: f64, w: &str) -> PyResult<f64> {
    core::lp_norm(&f.0, p, &parse(w)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (f, s, p, w = "const:1"))]
fn bessel_norm(f: &PyFunction, s: f64, p: f64, w: &str) -> PyResult<f64> {
    Ok(core::bessel_norm(&f.0, s, p, &parse(w)?).map_err(err)?.value)
}

#[pyfunction]
fn bessel_potential(f: &PyFunction, s: f64) -> PyResult<PyFunction> {
    Ok(PyFunction(core::bessel_potential(&f.0, s).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (f, s, p, q, w = "const:1", phi_a = 1.0, phi_b = 1.5, n_max = 16))]
#[allow(clippy::too_many_arguments)]
fn triebel_norm(f: &PyFunction, s: f64, p: f64, q: f64, w: &str, phi_a: f64, phi_b: f64, n_max: usize) -> PyResult<f64> {
    let phi = core::make_phi(phi_a, phi_b, n_max).map_err(err)?;
    Ok(core::triebel_norm(&f.0, s, p, q, &parse(w)?, &phi).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (f, s, p, w = "const:1", trials = 1024, seed = 0))]
fn randomized_lp_norm<'py>(py: Python<'py>, f: &PyFunction, s: f64, p: f64, w: &str, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let phi = core::PhiSequence::default();
    report(py, &core::randomized_lp_norm(&f.0, s, p, &parse(w)?, &phi, phi.n_max, trials, seed).map_err(err)?)
}

/// Difference-type norm: "difference" (L^p part plus seminorm), "seminorm" or "square".
#[pyfunction]
#[pyo3(signature = (f, s, p, w = "const:1", m = 2, kernel = None, j_max = 16, levels = "natural", estimator = "square", trials = 1024, seed = 0, kind = "difference"))]
#[allow(clippy::too_many_arguments)]
fn difference_norm<'py>(
    py: Python<'py>,
    f: &PyFunction,
    s: f64,
    p: f64,
    w: &str,
    m: usize,
    kernel: Option<&str>,
    j_max: usize,
    levels: &str,
    estimator: &str,
    trials: usize,
    seed: u64,
    kind: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let weight: Weight = parse(w)?;
    let k = match kernel {
        Some(k) => parse(k)?,
        None => default_kernel(&weight),
    };
    let mut req = SeminormRequest::new(s, p, m, weight.clone(), k.clone());
    req.levels = match levels {
        "natural" => Levels::Natural { j_max },
        "integer" => Levels::Integer { j_max },
        other => return Err(DiffnormError::new_err(format!("unknown level set '{other}'"))),
    };
    req.estimator = match estimator {
        "square" => NormMode::Square,
        "rademacher" => NormMode::Rademacher { trials, seed },
        other => return Err(DiffnormError::new_err(format!("unknown estimator '{other}'"))),
    };
    req.mean_mode = MeanMode::Spectral;
    let r = match kind {
        "difference" => core::full_difference_norm(&f.0, &req),
        "seminorm" => core::difference_seminorm(&f.0, &req),
        "square" => core::square_difference_norm(&f.0, s, p, &weight, m, &k, j_max),
        other => return Err(DiffnormError::new_err(format!("unknown norm kind '{other}'"))),
    }
    .map_err(err)?;
    report(py, &r)
}

#[pyfunction]
#[pyo3(signature = (f, s, p, w = "const:1"))]
fn strichartz_norm(f: &PyFunction, s: f64, p: f64, w: &str) -> PyResult<f64> {
    Ok(core::strichartz_norm(&f.0, s, p, &parse(w)?, TLevels::for_grid(f.0.grid())).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (f, m, h))]
fn difference(f: &PyFunction, m: usize, h: Vec<f64>) -> PyResult<PyFunction> {
    let step = [h.first().copied().unwrap_or(0.0), h.get(1).copied().unwrap_or(0.0)];
    Ok(PyFunction(core::difference(&f.0, m, step).map_err(err)?))
}

/// ess-sup over cubes centred at the origin with the given half-widths.
#[pyfunction]
#[pyo3(signature = (w, p, d = 1, radii = None))]
fn ap_characteristic(w: &str, p: f64, d: usize, radii: Option<Vec<f64>>) -> PyResult<f64> {
    let radii = radii.unwrap_or_else(|| (-10..=10).map(|k| 2f64.powi(k)).collect());
    let cubes = Cube::origin_family(d, &radii);
    Ok(core::ap_characteristic_estimate(&parse(w)?, p, &cubes).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (w, s, p, d = 1, nu_max = 40))]
fn inclusion_condition<'py>(py: Python<'py>, w: &str, s: f64, p: f64, d: usize, nu_max: u32) -> PyResult<Bound<'py, PyAny>> {
    report(py, &core::inclusion_condition(d, &parse(w)?, s, p, nu_max, &MRange::boundary(0)).map_err(err)?)
}

/// Dilation-type conditions, or the Hölder-type ones when `gamma` is given. Diverging
/// quantities are reported as inf.
#[pyfunction]
#[pyo3(signature = (symbol, d = 1, delta0 = 0.5, delta_inf = 0.5, order = None, gamma = None, theta = 0.9))]
#[allow(clippy::too_many_arguments)]
fn conditions<'py>(
    py: Python<'py>,
    symbol: &str,
    d: usize,
    delta0: f64,
    delta_inf: f64,
    order: Option<usize>,
    gamma: Option<f64>,
    theta: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let m: Symbol = parse(symbol)?;
    let sampling = RadialSampling::default();
    let r = match gamma {
        Some(g) => hoelder_conditions(&m, g, delta0, delta_inf, theta, &sampling),
        None => dilation_conditions(&m, d, delta0, delta_inf, order.unwrap_or(d + 2), &sampling),
    }
    .map_err(err)?;
    let out = PyDict::new(py);
    for q in &r.quantities {
        out.set_item(&q.name, if q.finite() { q.value } else { f64::INFINITY })?;
    }
    Ok(out.into_any())
}

#[pyfunction]
#[pyo3(signature = (s, p, w = "const:1", n0 = 512, levels = 10, corpus = None))]
fn multiplier_sweep<'py>(
    py: Python<'py>,
    s: f64,
    p: f64,
    w: &str,
    n0: usize,
    levels: usize,
    corpus: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut exp = core::HalfspaceExperiment::new(s, p, parse(w)?);
    exp.n0 = n0;
    exp.levels = levels;
    if let Some(c) = corpus {
        exp.corpus = c.iter().map(|d| parse(d)).collect::<PyResult<_>>()?;
    }
    let sweep = py.detach(|| core::multiplier_sweep(&exp)).map_err(err)?;
    report(py, &sweep)
}

#[pyfunction]
#[pyo3(signature = (alphas, betas, ps, factors = None))]
fn threshold_grid(alphas: Vec<f64>, betas: Vec<f64>, ps: Vec<f64>, factors: Option<Vec<f64>>) -> Vec<(f64, f64, f64, f64)> {
    let factors = factors.unwrap_or_else(|| core::halfspace::SWEEP_FACTORS.to_vec());
    core::halfspace::threshold_grid(&alphas, &betas, &ps, &factors)
}

#[pymodule]
fn diffnorm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DiffnormError", m.py().get_type::<DiffnormError>())?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyFunction>()?;
    m.add_function(wrap_pyfunction!(lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_norm, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_potential, m)?)?;
    m.add_function(wrap_pyfunction!(triebel_norm, m)?)?;
    m.add_function(wrap_pyfunction!(randomized_lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(difference_norm, m)?)?;
    m.add_function(wrap_pyfunction!(strichartz_norm, m)?)?;
    m.add_function(wrap_pyfunction!(difference, m)?)?;
    m.add_function(wrap_pyfunction!(ap_characteristic, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion_condition, m)?)?;
    m.add_function(wrap_pyfunction!(conditions, m)?)?;
    m.add_function(wrap_pyfunction!(multiplier_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_grid, m)?)?;
    Ok(())
}
