//! Python bindings, built as the `bandit_kmedoids_py` extension module.
//!
//! A thin layer: `Dataset` wraps the row-major matrix, `fit` runs any of
//! the five algorithms and returns a `FitResult` whose fields mirror the
//! CLI's JSON output, and `distance`, `clustering_loss`, and
//! `generate_synthetic` cover the free functions a notebook needs.
//! Bad parameters raise `ValueError`; unreadable or malformed input files
//! raise `IOError`.

use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;

use bandit_kmedoids::{Algorithm, BanditConfig, ErrorKind, Instrumentation, Metric};

fn to_py_err(e: bandit_kmedoids::Error) -> PyErr {
    match e.kind() {
        ErrorKind::Data => PyIOError::new_err(e.to_string()),
        ErrorKind::Usage => PyValueError::new_err(e.to_string()),
    }
}

fn parse_metric(tag: &str) -> PyResult<Metric> {
    Metric::from_tag(tag).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown metric {tag:?}; expected one of l1, l2, sql2, cosine"
        ))
    })
}

fn parse_algorithm(tag: &str) -> PyResult<Algorithm> {
    Algorithm::from_tag(tag).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown algorithm {tag:?}; expected one of pam, bp, bp-va, bp-pic, bp++"
        ))
    })
}

/// A row-major matrix of points, one row per point.
#[pyclass(frozen)]
struct Dataset {
    inner: bandit_kmedoids::Dataset,
}

#[pymethods]
impl Dataset {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Dataset> {
        // Bad in-memory rows are a bad argument, not a bad file.
        let inner = bandit_kmedoids::Dataset::from_rows(rows)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Dataset { inner })
    }

    /// Gaussian mixture: `clusters` centers, `per_cluster` points around
    /// each at the given spread, seeded and reproducible.
    #[staticmethod]
    fn synthetic(
        clusters: usize,
        per_cluster: usize,
        dim: usize,
        spread: f64,
        seed: u64,
    ) -> PyResult<Dataset> {
        let inner = bandit_kmedoids::generate_synthetic(clusters, per_cluster, dim, spread, seed)
            .map_err(to_py_err)?;
        Ok(Dataset { inner })
    }

    /// Load a numeric CSV, one point per line.
    #[staticmethod]
    #[pyo3(signature = (path, has_header = false))]
    fn from_csv(path: &str, has_header: bool) -> PyResult<Dataset> {
        let inner = bandit_kmedoids::load_csv(path, has_header).map_err(to_py_err)?;
        Ok(Dataset { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn row(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.n() {
            return Err(PyIndexError::new_err(format!(
                "row {i} out of range for {} points",
                self.inner.n()
            )));
        }
        Ok(self.inner.row(i).to_vec())
    }

    fn to_rows(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Dataset(n={}, dim={})", self.inner.n(), self.inner.dim())
    }
}

/// The outcome of one fit: medoids, loss, and the instrumentation
/// counters, mirroring the CLI's JSON fields.
#[pyclass(frozen)]
struct FitResult {
    inner: bandit_kmedoids::ClusteringResult,
}

#[pymethods]
impl FitResult {
    #[getter]
    fn algorithm(&self) -> &'static str {
        self.inner.algorithm.tag()
    }

    #[getter]
    fn metric(&self) -> &'static str {
        self.inner.metric.tag()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// Selected medoid indices, ascending.
    #[getter]
    fn medoids(&self) -> Vec<usize> {
        self.inner.medoids.clone()
    }

    #[getter]
    fn loss(&self) -> f64 {
        self.inner.loss
    }

    #[getter]
    fn swap_iterations(&self) -> u64 {
        self.inner.swap_iterations
    }

    #[getter]
    fn build_distance_count(&self) -> u64 {
        self.inner.build_distance_count
    }

    #[getter]
    fn swap_distance_count(&self) -> u64 {
        self.inner.swap_distance_count
    }

    #[getter]
    fn cache_hits(&self) -> u64 {
        self.inner.cache_hits
    }

    #[getter]
    fn cache_misses(&self) -> u64 {
        self.inner.cache_misses
    }

    #[getter]
    fn normalized_distance_count(&self) -> f64 {
        self.inner.normalized_distance_count
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn wall_ms(&self) -> f64 {
        self.inner.wall_ms
    }

    /// Accepted swaps as `(swap, point, medoid_position, loss)` tuples.
    #[getter]
    fn trace(&self) -> Vec<(u64, usize, usize, f64)> {
        self.inner
            .trace
            .iter()
            .map(|t| (t.swap, t.point, t.medoid_position, t.loss))
            .collect()
    }

    /// The same JSON document the CLI's `run` subcommand prints.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "FitResult(algorithm={:?}, k={}, loss={}, swap_iterations={})",
            self.inner.algorithm.tag(),
            self.inner.k,
            self.inner.loss,
            self.inner.swap_iterations
        )
    }
}

/// Fit `k` medoids with the chosen algorithm.
///
/// `algorithm` is one of `pam`, `bp`, `bp-va`, `bp-pic`, `bp++`; `metric`
/// one of `l1`, `l2`, `sql2`, `cosine`. `delta` defaults to `1/(k*n^3)`,
/// `max_swaps` to `k`. The seed drives all sampling, so identical
/// arguments reproduce identical results.
#[pyfunction]
#[pyo3(signature = (
    data,
    k,
    algorithm = "bp++",
    metric = "l2",
    seed = 0,
    delta = None,
    max_swaps = None,
    cache_width = 1000,
    batch_size = 100,
))]
#[allow(clippy::too_many_arguments)]
fn fit(
    data: &Dataset,
    k: usize,
    algorithm: &str,
    metric: &str,
    seed: u64,
    delta: Option<f64>,
    max_swaps: Option<usize>,
    cache_width: usize,
    batch_size: usize,
) -> PyResult<FitResult> {
    let config = BanditConfig {
        delta,
        batch_size,
        max_swaps,
        cache_width,
        seed,
        ..BanditConfig::default()
    };
    let inner = bandit_kmedoids::fit(
        &data.inner,
        parse_metric(metric)?,
        k,
        parse_algorithm(algorithm)?,
        &config,
        &Instrumentation::new(),
    )
    .map_err(to_py_err)?;
    Ok(FitResult { inner })
}

/// Distance between two points under the named metric.
#[pyfunction]
fn distance(metric: &str, a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    if a.len() != b.len() {
        return Err(PyValueError::new_err(format!(
            "dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(bandit_kmedoids::distance(parse_metric(metric)?, &a, &b))
}

/// Sum over all points of the distance to their nearest medoid.
#[pyfunction]
fn clustering_loss(data: &Dataset, metric: &str, medoids: Vec<usize>) -> PyResult<f64> {
    bandit_kmedoids::clustering_loss(&data.inner, parse_metric(metric)?, &medoids)
        .map_err(to_py_err)
}

/// Module-level alias for [`Dataset::synthetic`].
#[pyfunction]
fn generate_synthetic(
    clusters: usize,
    per_cluster: usize,
    dim: usize,
    spread: f64,
    seed: u64,
) -> PyResult<Dataset> {
    Dataset::synthetic(clusters, per_cluster, dim, spread, seed)
}

#[pymodule]
fn bandit_kmedoids_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dataset>()?;
    m.add_class::<FitResult>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(clustering_loss, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
