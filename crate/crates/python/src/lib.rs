use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use otrisym_core::dcbm::{self, InferConfig};
use otrisym_core::frost::{frost_solve, update_theta, FrostConfig};
use otrisym_core::generator::{self, PlantedSpec};
use otrisym_core::graph::{self, IndexMode, Listing, LoadOptions};
use otrisym_core::runner::{self, DetectConfig, Init, Method};
use otrisym_core::svca::{self, SvcaConfig};
use otrisym_core::{metrics, Error, Labels, Partition, ScaledAssignment};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        Error::NoConvergence { .. } | Error::DegenerateDirection(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn method(name: &str) -> PyResult<Method> {
    match name {
        "frost" => Ok(Method::Frost),
        "kn" => Ok(Method::Kn),
        "klem" => Ok(Method::Klem),
        _ => Err(PyValueError::new_err(format!("unknown method {name:?}; use frost, kn or klem"))),
    }
}

fn init(name: &str) -> PyResult<Init> {
    match name {
        "svca" => Ok(Init::Svca),
        "random" => Ok(Init::Random),
        _ => Err(PyValueError::new_err(format!("unknown init {name:?}; use svca or random"))),
    }
}

fn partition(labels: Vec<usize>, r: Option<usize>) -> PyResult<Partition> {
    let r = r.unwrap_or_else(|| labels.iter().max().map_or(1, |m| m + 1));
    Partition::new(labels, r).map_err(to_py)
}

/// Undirected multigraph with nonnegative integer edge counts.
#[pyclass(name = "Graph", module = "otrisym", frozen)]
struct PyGraph(otrisym_core::Graph);

#[pymethods]
impl PyGraph {
    /// Builds a graph from `(i, j)` or `(i, j, count)` edges on nodes `0..n`.
    #[new]
    fn new(n: usize, edges: Vec<Vec<u64>>) -> PyResult<Self> {
        let edges = edges
            .into_iter()
            .map(|e| match e[..] {
                [i, j] => Ok((i as usize, j as usize, 1)),
                [i, j, c] => Ok((i as usize, j as usize, c)),
                _ => Err(PyValueError::new_err("edges must be (i, j) or (i, j, count)")),
            })
            .collect::<PyResult<Vec<_>>>()?;
        otrisym_core::Graph::from_edges(n, edges).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (path, one_based=false, zero_based=false, entries=false, drop_self_loops=false))]
    fn load(path: PathBuf, one_based: bool, zero_based: bool, entries: bool, drop_self_loops: bool) -> PyResult<Self> {
        let index = match (one_based, zero_based) {
            (true, true) => return Err(PyValueError::new_err("one_based and zero_based are exclusive")),
            (true, false) => IndexMode::OneBased,
            (false, true) => IndexMode::ZeroBased,
            _ => IndexMode::Dense,
        };
        let opts = LoadOptions {
            index,
            listing: if entries { Listing::Entries } else { Listing::Edges },
            drop_self_loops,
            ..LoadOptions::default()
        };
        graph::load_edge_list(path, opts).map(Self).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    /// Sum of all adjacency entries, i.e. twice the edge count.
    #[getter]
    fn total(&self) -> u64 {
        self.0.total()
    }

    fn degrees(&self) -> Vec<u64> {
        self.0.degrees().to_vec()
    }

    /// Original node ids in index order.
    fn ids(&self) -> Vec<u64> {
        self.0.ids().to_vec()
    }

    fn to_dense(&self) -> Vec<Vec<u64>> {
        self.0.to_dense()
    }

    /// Labels file mapped onto this graph's indices; unlabeled nodes are None.
    fn load_labels(&self, path: PathBuf) -> PyResult<Vec<Option<usize>>> {
        graph::load_labels(path, &self.0).map(|l| l.assignment).map_err(to_py)
    }

    /// Returns `(component, new_to_old)` for the largest connected component.
    fn largest_component(&self) -> PyResult<(PyGraph, Vec<usize>)> {
        let c = graph::largest_connected_component(&self.0).map_err(to_py)?;
        Ok((PyGraph(c.graph), c.new_to_old))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.0.n(), self.0.total() / 2)
    }
}

fn factors<'py>(py: Python<'py>, z: &ScaledAssignment, theta: &otrisym_core::MixingMatrix) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("v", z.v.clone())?;
    d.set_item("w", z.w.clone())?;
    d.set_item("theta", theta.to_rows())?;
    Ok(d)
}

/// Samples a planted-partition graph; returns `(graph, labels)`.
#[pyfunction]
#[pyo3(signature = (n, r, mu=0.2, avg_degree=20.0, seed=0, gamma=None, max_degree=50.0))]
#[allow(clippy::too_many_arguments)]
fn generate(
    py: Python<'_>,
    n: usize,
    r: usize,
    mu: f64,
    avg_degree: f64,
    seed: u64,
    gamma: Option<f64>,
    max_degree: f64,
) -> PyResult<(PyGraph, Vec<usize>)> {
    let mut spec = PlantedSpec::balanced(n, r, mu, avg_degree, seed);
    if let Some(gamma) = gamma {
        spec = spec.with_power_law(gamma, max_degree);
    }
    let planted = py.detach(|| generator::generate(&spec)).map_err(to_py)?;
    Ok((PyGraph(planted.graph), planted.factors.partition.assignment))
}

/// Separable initialization; returns a dict with `v`, `w`, `theta`, `labels`.
#[pyfunction]
#[pyo3(signature = (graph, r, seed=0, p=None))]
fn svca_init<'py>(py: Python<'py>, graph: &PyGraph, r: usize, seed: u64, p: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = SvcaConfig { p, ..SvcaConfig::with_seed(seed) };
    let init = py.detach(|| svca::svca_init(&graph.0, r, &cfg)).map_err(to_py)?;
    let d = factors(py, &init.z, &init.theta)?;
    d.set_item("labels", init.partition.assignment)?;
    Ok(d)
}

/// Frobenius trifactorization started from hard labels (SVCA labels when omitted).
#[pyfunction]
#[pyo3(signature = (graph, r, labels=None, seed=0, max_iter=500, rel_tol=1e-6))]
fn frost<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    r: usize,
    labels: Option<Vec<usize>>,
    seed: u64,
    max_iter: usize,
    rel_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let g = &graph.0;
    let start = match labels {
        Some(l) => Some(partition(l, Some(r))?),
        None => None,
    };
    let cfg = FrostConfig { max_outer_iterations: max_iter, rel_tol, seed, ..FrostConfig::default() };
    let res = py
        .detach(|| {
            let (z, theta) = match start {
                Some(p) => {
                    let z = ScaledAssignment::from_partition(&p);
                    let theta = update_theta(g, &z);
                    (z, theta)
                }
                None => {
                    let init = svca::svca_init(g, r, &SvcaConfig::with_seed(seed))?;
                    (init.z, init.theta)
                }
            };
            frost_solve(g, z, theta, &cfg)
        })
        .map_err(to_py)?;
    let d = factors(py, &res.z, &res.theta)?;
    let labels = res
        .z
        .to_partition(otrisym_core::model::ZeroRowPolicy::Random(seed))
        .map_err(to_py)?;
    d.set_item("labels", labels.assignment)?;
    d.set_item("error", res.error())?;
    d.set_item("iterations", res.iterations())?;
    d.set_item("trace", res.trace.iter().map(|t| t.frobenius_error).collect::<Vec<_>>())?;
    Ok(d)
}

fn infer(
    py: Python<'_>,
    graph: &PyGraph,
    labels: Vec<usize>,
    r: Option<usize>,
    seed: u64,
    f: fn(&otrisym_core::Graph, &Partition, &InferConfig) -> otrisym_core::Result<dcbm::InferResult>,
) -> PyResult<(Vec<usize>, f64)> {
    let p = partition(labels, r)?;
    let res = py.detach(|| f(&graph.0, &p, &InferConfig::with_seed(seed))).map_err(to_py)?;
    Ok((res.partition.assignment, res.log_likelihood))
}

/// Kernighan–Lin refinement of the block-model likelihood; returns `(labels, log_likelihood)`.
#[pyfunction]
#[pyo3(signature = (graph, labels, r=None, seed=0))]
fn kn(py: Python<'_>, graph: &PyGraph, labels: Vec<usize>, r: Option<usize>, seed: u64) -> PyResult<(Vec<usize>, f64)> {
    infer(py, graph, labels, r, seed, dcbm::kn_infer)
}

/// Simultaneous best-move refinement; returns `(labels, log_likelihood)`.
#[pyfunction]
#[pyo3(signature = (graph, labels, r=None))]
fn klem(py: Python<'_>, graph: &PyGraph, labels: Vec<usize>, r: Option<usize>) -> PyResult<(Vec<usize>, f64)> {
    infer(py, graph, labels, r, 0, dcbm::klem_infer)
}

#[pyfunction]
#[pyo3(signature = (graph, labels, r=None))]
fn log_likelihood(graph: &PyGraph, labels: Vec<usize>, r: Option<usize>) -> PyResult<f64> {
    let p = partition(labels, r)?;
    Ok(dcbm::log_likelihood(&dcbm::block_stats(&graph.0, &p)))
}

#[pyfunction]
fn nmi(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    metrics::nmi(&a, &b).map_err(to_py)
}

/// Adjusted mutual information with max-entropy normalization.
#[pyfunction]
fn ami(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    metrics::ami_max(&a, &b).map_err(to_py)
}

/// Best of several seeded runs; returns a dict with the best run's fields,
/// `labels`, and `runs` (one dict per run).
#[pyfunction]
#[pyo3(signature = (graph, r, method="frost", init="svca", runs=10, seed=0, truth=None, workers=None))]
#[allow(clippy::too_many_arguments)]
fn detect<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    r: usize,
    method: &str,
    init: &str,
    runs: usize,
    seed: u64,
    truth: Option<Vec<Option<usize>>>,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = DetectConfig::new(r, self::method(method)?, self::init(init)?).runs(runs).seed(seed);
    cfg.workers = workers;
    let truth = truth.map(|assignment| {
        let r = assignment.iter().flatten().max().map_or(1, |m| m + 1);
        Labels { assignment, r }
    });
    let out = py.detach(|| runner::detect(&graph.0, truth.as_ref(), &cfg)).map_err(to_py)?;
    let run_dict = |o: &runner::RunOutput| -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        let res = &o.result;
        d.set_item("run", res.run)?;
        d.set_item("seed", res.seed)?;
        d.set_item("objective", res.objective.value())?;
        d.set_item("runtime_seconds", res.runtime_seconds)?;
        d.set_item("iterations", res.iterations)?;
        d.set_item("timed_out", res.timed_out)?;
        d.set_item("nmi", res.nmi)?;
        d.set_item("ami", res.ami)?;
        Ok(d)
    };
    let best = run_dict(out.best())?;
    best.set_item("labels", out.best().partition.assignment.clone())?;
    if let Some((z, theta)) = &out.best().factors {
        best.set_item("factors", factors(py, z, theta)?)?;
    }
    best.set_item("runs", out.runs.iter().map(run_dict).collect::<PyResult<Vec<_>>>()?)?;
    Ok(best)
}

#[pymodule(name = "otrisym")]
fn otrisym_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(svca_init, m)?)?;
    m.add_function(wrap_pyfunction!(frost, m)?)?;
    m.add_function(wrap_pyfunction!(kn, m)?)?;
    m.add_function(wrap_pyfunction!(klem, m)?)?;
    m.add_function(wrap_pyfunction!(log_likelihood, m)?)?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(ami, m)?)?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    Ok(())
}
