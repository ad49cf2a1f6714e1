//! Python bindings: classification in, JSON result text out.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hermclass::files::parse_rational;
use hermclass::oracle::count_satisfying;
use hermclass::{
    classify as classify_full, classify_practical, gen_random_system, ClassifyOptions, ResultFile, SystemFile,
    Variant,
};

fn value_error(e: hermclass::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Classifies the system given as TOML text and returns the result file as
/// JSON text.  `variant` is `"full"` or `"determinants-first"`; when absent
/// the file's own option, then `"full"`.
#[pyfunction]
#[pyo3(signature = (toml, variant=None, seed=None))]
fn classify(py: Python<'_>, toml: &str, variant: Option<&str>, seed: Option<u64>) -> PyResult<String> {
    let system = SystemFile::from_toml(toml).and_then(|f| f.parse()).map_err(value_error)?;
    let mut opts = system.classify_options(&ClassifyOptions::default());
    if let Some(s) = seed {
        opts.seed = s;
    }
    let variant = match variant {
        Some(v) => v.parse::<Variant>().map_err(value_error)?,
        None => system.options.variant.unwrap_or(Variant::Full),
    };
    let c = py
        .detach(|| {
            let (sp, f, g) = (&system.space, &system.equations, &system.inequalities);
            match variant {
                Variant::Full => classify_full(sp, f, g, &opts),
                Variant::DeterminantsFirst => classify_practical(sp, f, g, &opts),
            }
        })
        .map_err(value_error)?;
    Ok(ResultFile::from_classification(&c, None).to_json())
}

/// Real solutions of the system at a parameter point (rationals as text,
/// like `"3/4"`) where every inequality is positive.
#[pyfunction]
fn count_solutions(toml: &str, point: Vec<String>) -> PyResult<usize> {
    let system = SystemFile::from_toml(toml).and_then(|f| f.parse()).map_err(value_error)?;
    if point.len() != system.space.t() {
        return Err(PyValueError::new_err(format!("expected {} parameter values, got {}", system.space.t(), point.len())));
    }
    let eta = point.iter().map(|s| parse_rational(s)).collect::<hermclass::Result<Vec<_>>>().map_err(value_error)?;
    count_satisfying(&system.equations, &system.inequalities, &eta).map_err(value_error)
}

/// Dense random system as TOML text.
#[pyfunction]
#[pyo3(signature = (n, t, s, d, seed=1))]
fn random_system(n: usize, t: usize, s: usize, d: u32, seed: u64) -> PyResult<String> {
    gen_random_system(n, t, s, d, seed).map(|f| f.to_toml()).map_err(value_error)
}

#[pymodule]
#[pyo3(name = "hermclass")]
fn hermclass_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(count_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(random_system, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
