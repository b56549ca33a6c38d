//! Python bindings exposing the formula parser, the signal monitors, and a
//! train-then-evaluate entry point.
//!
//! ```python
//! import robustl_python as rl
//! phi = rl.parse_formula("F[0,3) x < 1")
//! verdict = rl.monitor("F[0,3) x < 1", [[5.0], [0.0], [5.0], [5.0]], delta=1)
//! report = rl.train_and_evaluate(config_json, n_eval=200)
//! ```

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robustl::config::RunConfig;
use robustl::learn::greedy_policy;
use robustl::stl::{
    self, boolean_sat, spatial_robustness, temporal_robustness, worst_shift_robustness, Region,
    Signal,
};
use std::collections::BTreeMap;

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Parsed STL formula.
#[pyclass(name = "Formula", module = "robustl_python", skip_from_py_object)]
#[derive(Clone)]
struct PyFormula {
    inner: stl::Formula,
}

#[pymethods]
impl PyFormula {
    /// Number of samples needed to evaluate the formula at a time point.
    fn horizon(&self) -> usize {
        self.inner.horizon_len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({})", self.inner)
    }
}

/// Parses a formula text into a [`PyFormula`].
#[pyfunction]
fn parse_formula(text: &str) -> PyResult<PyFormula> {
    stl::parse_formula(text)
        .map(|inner| PyFormula { inner })
        .map_err(value_error)
}

fn region_table(
    regions: Option<BTreeMap<String, (f64, f64, f64, f64)>>,
) -> BTreeMap<String, Region> {
    regions
        .unwrap_or_default()
        .into_iter()
        .map(|(name, (lo_x, hi_x, lo_y, hi_y))| {
            (name, Region::new([lo_x, lo_y], [hi_x, hi_y]))
        })
        .collect()
}

/// Evaluates a formula on a signal at time zero.
///
/// `samples` is one point per time step; `regions` maps region names to
/// `(lo_x, hi_x, lo_y, hi_y)` boxes for `in(...)` atoms. Returns a dict with
/// `rho`, `sat`, `theta`, `robust_ok`, and `rho_delta`.
#[pyfunction]
#[pyo3(signature = (formula, samples, delta = 0, regions = None))]
fn monitor<'py>(
    py: Python<'py>,
    formula: &str,
    samples: Vec<Vec<f64>>,
    delta: u32,
    regions: Option<BTreeMap<String, (f64, f64, f64, f64)>>,
) -> PyResult<Bound<'py, PyDict>> {
    let parsed = stl::parse_formula(formula).map_err(value_error)?;
    let resolved = parsed.resolve(&region_table(regions)).map_err(value_error)?;
    let signal = Signal::new(samples).map_err(value_error)?;

    let rho = spatial_robustness(&resolved, &signal, 0).map_err(value_error)?;
    let sat = boolean_sat(&resolved, &signal, 0).map_err(value_error)?;
    let d_max = resolved.horizon_len() + 1;
    let theta = temporal_robustness(&resolved, &signal, 0, d_max).map_err(value_error)?;
    let rho_delta = worst_shift_robustness(&resolved, &signal, delta).map_err(value_error)?;

    let dict = PyDict::new(py);
    dict.set_item("rho", rho)?;
    dict.set_item("sat", sat)?;
    dict.set_item("theta", theta)?;
    dict.set_item("robust_ok", theta >= delta as i64)?;
    dict.set_item("rho_delta", rho_delta)?;
    Ok(dict)
}

/// Trains a policy from a JSON run configuration and evaluates it with
/// `n_eval` greedy rollouts. Returns the report fields plus the number of
/// training episodes and exponent clamping events.
#[pyfunction]
#[pyo3(signature = (config_json, n_eval = 1000))]
fn train_and_evaluate<'py>(
    py: Python<'py>,
    config_json: &str,
    n_eval: usize,
) -> PyResult<Bound<'py, PyDict>> {
    if n_eval == 0 {
        return Err(PyValueError::new_err("n_eval must be at least 1"));
    }
    let config: RunConfig = serde_json::from_str(config_json).map_err(value_error)?;
    let run = config.resolve().map_err(value_error)?;
    let result = robustl::learn::train(&run.grid, &run.task, &run.reward, &run.hyper, run.seed)
        .map_err(value_error)?;
    let policy = greedy_policy(&result.q);
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    rng.set_stream(1);
    let (report, _) = robustl::eval::evaluate(
        &run.grid,
        &policy,
        &run.task,
        &run.reward,
        run.hyper.exp_clamp,
        n_eval,
        &mut rng,
        result.q.entries(),
    )
    .map_err(value_error)?;

    let dict = PyDict::new(py);
    dict.set_item("n_traj", report.n_traj)?;
    dict.set_item("sat_rate", report.sat_rate)?;
    dict.set_item("robust_rate", report.robust_rate)?;
    dict.set_item("mean_rho", report.mean_rho)?;
    dict.set_item("mean_theta", report.mean_theta)?;
    dict.set_item("q_entries", report.q_entries)?;
    dict.set_item("episodes", run.hyper.episodes)?;
    dict.set_item("clamp_events", result.clamp_events)?;
    dict.set_item("tau", run.task.tau)?;
    Ok(dict)
}

#[pymodule]
fn robustl_python(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_function(wrap_pyfunction!(parse_formula, m)?)?;
    m.add_function(wrap_pyfunction!(monitor, m)?)?;
    m.add_function(wrap_pyfunction!(train_and_evaluate, m)?)?;
    Ok(())
}
