//! Python bindings for `mifs_lab`.
//!
//! Extended reals cross the boundary as floats: `+inf`/`-inf` map to the
//! IEEE infinities and indeterminate values to `nan`.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use mifs_lab::estimation::{
    estimate_entropy_1d, estimate_mi_class, estimate_mi_features, EstimatedProvider, Grid2d, Sample,
};
use mifs_lab::oracle::{self, BaseDistribution, FeatureId, OracleProvider, Scenario, ScenarioSpec};
use mifs_lab::relevance::{analyze, LabeledJoint};
use mifs_lab::selection::{select_all, MethodSpec, MiProvider, SelectionTrace, TableProvider};
use mifs_lab::simlab::{self, ExperimentConfig};
use mifs_lab::{Error, XReal};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_grid(grid: &str) -> PyResult<Grid2d> {
    match grid.to_ascii_lowercase().replace('_', "-").as_str() {
        "total-cells" => Ok(Grid2d::TotalCells),
        "per-axis" => Ok(Grid2d::PerAxis),
        other => Err(PyValueError::new_err(format!(
            "unknown grid `{other}` (expected total-cells or per-axis)"
        ))),
    }
}

fn feature(f: &str) -> PyResult<FeatureId> {
    f.parse().map_err(to_py)
}

/// Result of one forward selection run.
#[pyclass(name = "Trace", module = "mifslab", frozen)]
struct PyTrace {
    inner: SelectionTrace,
}

#[pymethods]
impl PyTrace {
    #[getter]
    fn method(&self) -> String {
        self.inner.method.to_string()
    }

    /// Zero-based indices in selection order.
    #[getter]
    fn selected(&self) -> Vec<usize> {
        self.inner.selected.clone()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.selected_names().into_iter().map(String::from).collect()
    }

    #[getter]
    fn halt(&self) -> String {
        self.inner.halt.to_string()
    }

    /// Per step, a list of `(feature, objective, admissible)` tuples.
    fn steps(&self) -> Vec<Vec<(String, f64, bool)>> {
        self.inner
            .steps
            .iter()
            .map(|s| {
                s.candidates
                    .iter()
                    .map(|c| (self.inner.names[c.feature].clone(), c.objective.to_f64(), c.admissible))
                    .collect()
            })
            .collect()
    }

    fn summary(&self) -> String {
        self.inner.summary()
    }

    fn to_tsv(&self) -> String {
        self.inner.to_tsv()
    }

    fn __repr__(&self) -> String {
        format!("Trace({}: {})", self.inner.method, self.inner.summary())
    }
}

fn method(name: &str, beta: Option<f64>) -> PyResult<MethodSpec> {
    MethodSpec::parse(name, beta).map_err(to_py)
}

/// Ground-truth information quantities of the ten-feature benchmark.
#[pyclass(name = "Oracle", module = "mifslab", frozen)]
struct PyOracle {
    inner: OracleProvider,
}

#[pymethods]
impl PyOracle {
    #[new]
    #[pyo3(signature = (scenario, k, delta=0.5, a=3.0, b=1.0, d=2.0))]
    fn new(scenario: &str, k: f64, delta: f64, a: f64, b: f64, d: f64) -> PyResult<Self> {
        let scenario: Scenario = scenario.parse().map_err(to_py)?;
        let spec = ScenarioSpec {
            scenario,
            delta,
            a,
            b,
            d,
            k,
        };
        Ok(PyOracle {
            inner: oracle::oracle_provider(&spec).map_err(to_py)?,
        })
    }

    fn entropy(&self, f: &str) -> PyResult<f64> {
        Ok(self.inner.entropy(feature(f)?.index()).to_f64())
    }

    fn class_mi(&self, f: &str) -> PyResult<f64> {
        Ok(self.inner.class_mi(feature(f)?.index()).to_f64())
    }

    fn pairwise_mi(&self, f: &str, g: &str) -> PyResult<f64> {
        Ok(self.inner.pairwise_mi(feature(f)?.index(), feature(g)?.index()).to_f64())
    }

    #[pyo3(signature = (method_name, beta=None))]
    fn select(&self, method_name: &str, beta: Option<f64>) -> PyResult<PyTrace> {
        Ok(PyTrace {
            inner: select_all(&method(method_name, beta)?, &self.inner),
        })
    }

    /// Rows of `(feature, entropy, class_mi)`.
    fn table(&self) -> Vec<(String, f64, f64)> {
        FeatureId::ALL
            .iter()
            .map(|f| {
                let i = f.index();
                (f.name(), self.inner.entropy(i).to_f64(), self.inner.class_mi(i).to_f64())
            })
            .collect()
    }
}

fn xreal(v: f64) -> XReal {
    if v.is_nan() {
        XReal::Indet(mifs_lab::IndetKind::ZeroOverZero)
    } else {
        XReal::from_f64(v)
    }
}

/// Selection over user-supplied information values. `pairwise` is a full
/// p x p matrix given as nested lists; `inf` entries are allowed.
#[pyfunction]
#[pyo3(signature = (names, entropy, class_mi, pairwise, method_name, beta=None))]
fn select_with_provider(
    names: Vec<String>,
    entropy: Vec<f64>,
    class_mi: Vec<f64>,
    pairwise: Vec<Vec<f64>>,
    method_name: &str,
    beta: Option<f64>,
) -> PyResult<PyTrace> {
    let p = TableProvider::new(
        names,
        entropy.into_iter().map(xreal).collect(),
        class_mi.into_iter().map(xreal).collect(),
        pairwise.into_iter().flatten().map(xreal).collect(),
    )
    .map_err(to_py)?;
    Ok(PyTrace {
        inner: select_all(&method(method_name, beta)?, &p),
    })
}

#[pyfunction]
fn entropy_1d(x: Vec<f64>) -> PyResult<f64> {
    estimate_entropy_1d(&x).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (x, y, grid="total-cells"))]
fn mi_features(x: Vec<f64>, y: Vec<f64>, grid: &str) -> PyResult<f64> {
    estimate_mi_features(&x, &y, parse_grid(grid)?).map_err(to_py)
}

#[pyfunction]
fn mi_class(x: Vec<f64>, labels: Vec<u8>) -> PyResult<f64> {
    estimate_mi_class(&x, &labels).map_err(to_py)
}

/// Returns `(columns, labels)` for one replicate of the benchmark.
#[pyfunction]
#[pyo3(signature = (scenario, k, n, seed=0, replicate=0))]
fn generate_sample(scenario: &str, k: f64, n: usize, seed: u64, replicate: usize) -> PyResult<(Vec<Vec<f64>>, Vec<u8>)> {
    let spec = ScenarioSpec::new(scenario.parse().map_err(to_py)?, k).map_err(to_py)?;
    let mut rng = simlab::replicate_rng(seed, k, n, replicate);
    let s = simlab::generate_sample(&spec, n, &mut rng).map_err(to_py)?;
    Ok((s.columns, s.labels))
}

#[pyfunction]
#[pyo3(signature = (columns, labels, method_name, beta=None, grid="total-cells"))]
fn select_from_sample(
    columns: Vec<Vec<f64>>,
    labels: Vec<u8>,
    method_name: &str,
    beta: Option<f64>,
    grid: &str,
) -> PyResult<PyTrace> {
    let sample = Sample::new(Sample::default_names(columns.len()), columns, labels).map_err(to_py)?;
    let p = EstimatedProvider::new(sample, parse_grid(grid)?).map_err(to_py)?;
    Ok(PyTrace {
        inner: select_all(&method(method_name, beta)?, &p),
    })
}

/// Runs a replicated experiment; methods are strings like `"mifs:0.5"`.
/// Returns one dict per (k, n, method) cell.
#[pyfunction]
#[pyo3(signature = (scenario, ks, ns, methods, replicates=100, seed=0, grid="total-cells"))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    py: Python<'_>,
    scenario: &str,
    ks: Vec<f64>,
    ns: Vec<usize>,
    methods: Vec<String>,
    replicates: usize,
    seed: u64,
    grid: &str,
) -> PyResult<Vec<Py<pyo3::types::PyDict>>> {
    let scenario: Scenario = scenario.parse().map_err(to_py)?;
    let methods: Vec<MethodSpec> = methods
        .iter()
        .map(|m| m.parse().map_err(to_py))
        .collect::<PyResult<_>>()?;
    let k0 = *ks.first().ok_or_else(|| PyValueError::new_err("ks is empty"))?;
    let spec = ScenarioSpec::new(scenario, k0).map_err(to_py)?;
    let mut config = ExperimentConfig::new(spec, ks, ns, methods, replicates, seed);
    config.grid = parse_grid(grid)?;
    let result = py.detach(|| simlab::run_experiment(&config)).map_err(to_py)?;
    result
        .cells
        .iter()
        .map(|c| {
            let d = pyo3::types::PyDict::new(py);
            d.set_item("scenario", c.scenario.to_string())?;
            d.set_item("k", c.k)?;
            d.set_item("n", c.n)?;
            d.set_item("method", c.method.to_string())?;
            d.set_item("hits", c.hits)?;
            d.set_item("replicates", c.replicates)?;
            d.set_item("failures", c.failures)?;
            d.set_item("frequency", c.frequency())?;
            Ok(d.unbind())
        })
        .collect()
}

/// Numerical check that X^2 carries no class information; returns the
/// integrated MI. `base` is `"uniform"` (with `delta`) or `"normal"`.
#[pyfunction]
#[pyo3(signature = (k, base="normal", delta=0.5))]
fn square_class_mi(k: f64, base: &str, delta: f64) -> PyResult<f64> {
    let base = match base.to_ascii_lowercase().as_str() {
        "uniform" => BaseDistribution::Uniform { delta },
        "normal" | "gaussian" => BaseDistribution::Normal,
        other => return Err(PyValueError::new_err(format!("unknown base `{other}`"))),
    };
    oracle::square_class_mi(k, base).map_err(to_py)
}

/// Relevance analysis of a labeled joint distribution given as JSON text.
#[pyfunction]
fn relevance_report(joint_json: &str) -> PyResult<String> {
    let j = LabeledJoint::from_json(joint_json).map_err(to_py)?;
    Ok(analyze(&j).map_err(to_py)?.render())
}

#[pymodule]
fn mifslab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOracle>()?;
    m.add_class::<PyTrace>()?;
    m.add_function(wrap_pyfunction!(select_with_provider, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_1d, m)?)?;
    m.add_function(wrap_pyfunction!(mi_features, m)?)?;
    m.add_function(wrap_pyfunction!(mi_class, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sample, m)?)?;
    m.add_function(wrap_pyfunction!(select_from_sample, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(square_class_mi, m)?)?;
    m.add_function(wrap_pyfunction!(relevance_report, m)?)?;
    Ok(())
}
