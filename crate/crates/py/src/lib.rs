//! Python module `dmcs`: networks, requests, the three solvers, validation,
//! instance generation and LP export.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dmcs_core::baselines;
use dmcs_core::generator::{self, GenConfig};
use dmcs_core::greedy;
use dmcs_core::multilevel::MaxDelayScope;
use dmcs_core::network::{Cost, Delay, NodeId};
use dmcs_core::Error;

create_exception!(
    dmcs,
    InfeasibleError,
    PyException,
    "The request has no feasible embedding."
);

fn to_py(err: Error) -> PyErr {
    if err.is_infeasible() {
        InfeasibleError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

#[pyclass(frozen)]
struct Network(dmcs_core::Network);

#[pymethods]
impl Network {
    /// Parses an instance document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        dmcs_core::Network::from_json(text)
            .map(Network)
            .map_err(to_py)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| to_py(e.into()))?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn node_ids(&self) -> Vec<NodeId> {
        self.0.nodes().iter().map(|n| n.id).collect()
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(nodes={}, edges={})",
            self.0.node_count(),
            self.0.edge_count()
        )
    }
}

#[pyclass(frozen, get_all)]
struct Request {
    source: NodeId,
    target: NodeId,
    chain_length: usize,
    delay_bound: Delay,
}

impl Request {
    fn inner(&self) -> dmcs_core::Request {
        dmcs_core::Request::new(
            self.source,
            self.target,
            self.chain_length,
            self.delay_bound,
        )
    }
}

#[pymethods]
impl Request {
    #[new]
    fn new(source: NodeId, target: NodeId, chain_length: usize, delay_bound: Delay) -> Self {
        Request {
            source,
            target,
            chain_length,
            delay_bound,
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Request(source={}, target={}, chain_length={}, delay_bound={})",
            self.source, self.target, self.chain_length, self.delay_bound
        )
    }
}

#[pyclass(frozen)]
struct Embedding(dmcs_core::Embedding);

#[pymethods]
impl Embedding {
    #[getter]
    fn walk(&self) -> Vec<NodeId> {
        self.0.walk.clone()
    }

    #[getter]
    fn hosts(&self) -> Vec<NodeId> {
        self.0.hosts.clone()
    }

    #[getter]
    fn host_positions(&self) -> Vec<usize> {
        self.0.host_positions.clone()
    }

    #[getter]
    fn total_cost(&self) -> Cost {
        self.0.total_cost
    }

    #[getter]
    fn total_delay(&self) -> Delay {
        self.0.total_delay
    }

    #[getter]
    fn algorithm(&self) -> String {
        self.0.algorithm.clone()
    }

    /// The solution document as JSON.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.0.to_document())
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Embedding(algorithm={:?}, walk={:?}, hosts={:?}, total_cost={}, total_delay={})",
            self.0.algorithm, self.0.walk, self.0.hosts, self.0.total_cost, self.0.total_delay
        )
    }
}

#[pyfunction]
#[pyo3(signature = (net, req, max_delay_scope = "candidates"))]
fn solve_greedy(net: &Network, req: &Request, max_delay_scope: &str) -> PyResult<Embedding> {
    let scope = match max_delay_scope {
        "candidates" => MaxDelayScope::Candidates,
        "all" => MaxDelayScope::AllNodes,
        other => {
            return Err(PyValueError::new_err(format!(
                "max_delay_scope must be 'candidates' or 'all', not {other:?}"
            )))
        }
    };
    greedy::solve_greedy_with(&net.0, &req.inner(), scope)
        .map(Embedding)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (net, req, k = baselines::DEFAULT_K))]
fn solve_ksp(net: &Network, req: &Request, k: usize) -> PyResult<Embedding> {
    baselines::solve_ksp(&net.0, &req.inner(), k)
        .map(Embedding)
        .map_err(to_py)
}

/// Optimum over walks (relays may repeat).
#[pyfunction]
#[pyo3(signature = (net, req, node_limit = baselines::DEFAULT_NODE_LIMIT))]
fn solve_exact(net: &Network, req: &Request, node_limit: usize) -> PyResult<Embedding> {
    baselines::solve_exact(&net.0, &req.inner(), node_limit)
        .map(Embedding)
        .map_err(to_py)
}

/// Optimum over simple paths only.
#[pyfunction]
#[pyo3(signature = (net, req, node_limit = baselines::DEFAULT_NODE_LIMIT))]
fn solve_exact_simple(net: &Network, req: &Request, node_limit: usize) -> PyResult<Embedding> {
    baselines::solve_exact_simple(&net.0, &req.inner(), node_limit)
        .map(Embedding)
        .map_err(to_py)
}

/// Returns `(passed, failures)` where failures are `(check, detail)` pairs.
#[pyfunction]
fn validate(net: &Network, req: &Request, emb: &Embedding) -> (bool, Vec<(String, String)>) {
    let report = dmcs_core::validate_embedding(&net.0, &req.inner(), &emb.0);
    let failures = report
        .failures()
        .map(|c| (c.name.to_string(), c.detail.clone()))
        .collect();
    (report.passed(), failures)
}

#[pyfunction]
fn export_lp(net: &Network, req: &Request) -> PyResult<String> {
    baselines::export_lp(&net.0, &req.inner()).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, seed, p = None))]
fn generate(n: usize, seed: u64, p: Option<f64>) -> PyResult<Network> {
    generator::generate(&GenConfig {
        p,
        ..GenConfig::new(n, seed)
    })
    .map(Network)
    .map_err(to_py)
}

/// `{"mscp": ..., "msdp": ...}`.
#[pyfunction]
fn topology_stats<'py>(py: Python<'py>, net: &Network) -> PyResult<Bound<'py, PyDict>> {
    let stats = generator::topology_stats(&net.0).map_err(to_py)?;
    let dict = PyDict::new(py);
    dict.set_item("mscp", stats.mscp)?;
    dict.set_item("msdp", stats.msdp)?;
    Ok(dict)
}

#[pymodule]
fn dmcs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_class::<Request>()?;
    m.add_class::<Embedding>()?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add_function(wrap_pyfunction!(solve_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(solve_ksp, m)?)?;
    m.add_function(wrap_pyfunction!(solve_exact, m)?)?;
    m.add_function(wrap_pyfunction!(solve_exact_simple, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(export_lp, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(topology_stats, m)?)?;
    Ok(())
}
