//! Python bindings: run identity checks and read back JSON reports.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use supercalc::checks::{self, CheckParams, IDENTITY_IDS};
use supercalc::identities;
use supercalc::report::ReportFile;
use supercalc::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::Precondition(_) | Error::Dimension(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Parses a JSON object of check parameters; missing keys take their defaults.
pub fn parse_params(json: Option<&str>) -> supercalc::Result<CheckParams> {
    let Some(text) = json else {
        return Ok(CheckParams::default());
    };
    let mut base = serde_json::to_value(CheckParams::default()).expect("params serialize");
    let patch: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("params: {e}")))?;
    let serde_json::Value::Object(fields) = patch else {
        return Err(Error::Config("params must be a JSON object".into()));
    };
    for (k, v) in fields {
        if base.get(&k).is_none() {
            return Err(Error::Config(format!("unknown parameter '{k}'")));
        }
        base[k] = v;
    }
    serde_json::from_value(base).map_err(|e| Error::Config(format!("params: {e}")))
}

/// Report JSON for one identity check.
pub fn check_json(identity: &str, params: Option<&str>) -> supercalc::Result<String> {
    let p = parse_params(params)?;
    Ok(ReportFile::new(p.seed, checks::run_check(identity, &p)?).to_json())
}

/// Report JSON for one acceptance criterion, or all of them when `criterion` is None.
pub fn report_json(criterion: Option<u8>, seed: u64) -> supercalc::Result<String> {
    let grid = match criterion {
        None => checks::full_grid(seed),
        Some(k) if (1..=14).contains(&k) => checks::criterion_grid(k, seed),
        Some(k) => return Err(Error::Config(format!("criterion {k} is outside 1-14"))),
    };
    Ok(ReportFile::new(seed, checks::run_grid(&grid)?).to_json())
}

#[pyfunction]
fn identity_ids() -> Vec<&'static str> {
    IDENTITY_IDS.to_vec()
}

/// run_check(identity, params=None) -> str
///
/// `params` is a JSON object with any of beta, a, b, c, d, e, m_max, f, eps, psi, nodes,
/// samples, seed, tol.
#[pyfunction]
#[pyo3(signature = (identity, params=None))]
fn run_check(py: Python<'_>, identity: &str, params: Option<&str>) -> PyResult<String> {
    py.detach(|| check_json(identity, params)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (criterion=None, seed=7))]
fn report(py: Python<'_>, criterion: Option<u8>, seed: u64) -> PyResult<String> {
    py.detach(|| report_json(criterion, seed)).map_err(to_py)
}

/// The predicted ratio of the two normalization constants as a complex number.
#[pyfunction]
fn constant_ratio(beta: u8, a: usize, c: usize, d: usize) -> PyResult<(f64, f64)> {
    let r = identities::constant_ratio(beta, a, c, d).map_err(to_py)?;
    Ok((r.re, r.im))
}

/// κ as an exact fraction (numerator, denominator).
#[pyfunction]
fn kappa(beta: u8, a: usize, c: usize, d: usize) -> PyResult<(String, String)> {
    let k = identities::kappa(beta, a, c, d).map_err(to_py)?;
    Ok((k.numer().to_string(), k.denom().to_string()))
}

#[pymodule]
fn supercalc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(identity_ids, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(constant_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    Ok(())
}
