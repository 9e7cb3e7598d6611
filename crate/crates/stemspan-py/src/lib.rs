//! Python bindings: graphs, invariants, solvers and generators.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::sync::Arc;

use stemspan::exact::{self, BudgetOutcome};
use stemspan::graph::Graph;
use stemspan::invariants::{self, SigmaValue, TheoremId};
use stemspan::io as sio;
use stemspan::limits::Limits;
use stemspan::search::{self, CertificateKind, SolveOutcome};
use stemspan::sharp::{self, SharpFamilyParams};
use stemspan::tree::{self, TreeSubgraph};
use stemspan::Edge;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn limits_from(node_limit: Option<u64>, iter_limit: Option<u64>) -> Limits {
    let mut l = Limits::default();
    if let Some(v) = node_limit {
        l.search_nodes = v;
    }
    if let Some(v) = iter_limit {
        l.max_iterations = v;
    }
    l
}

/// Immutable simple undirected graph.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: Graph::new(n, &edges).map_err(err)? })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: sio::parse_edge_list(text).map_err(err)? })
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph { inner: Graph::complete(n) }
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph { inner: Graph::path(n) }
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyGraph { inner: Graph::cycle(n) }
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().iter().map(|e| (e.u, e.v)).collect()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.inner.degree(v).map_err(err)
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.order() {
            return Err(err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn is_claw_free(&self) -> bool {
        self.inner.is_claw_free()
    }

    /// (center, [a, b, c]) of an induced claw, or None.
    fn claw_witness(&self) -> Option<(usize, Vec<usize>)> {
        self.inner.claw_witness().map(|w| (w.center, w.leaves.to_vec()))
    }

    /// Hop distance, or None when unreachable.
    fn distance(&self, u: usize, v: usize) -> Option<u32> {
        self.inner.all_pairs_distances().get(u, v)
    }

    /// Induced subgraph plus the new-to-old vertex map.
    fn induced_subgraph(&self, s: Vec<usize>) -> PyResult<(PyGraph, Vec<usize>)> {
        let (g, map) = self.inner.induced_subgraph(&s).map_err(err)?;
        Ok((PyGraph { inner: g }, map))
    }

    fn serialize(&self) -> String {
        sio::serialize_edge_list(&self.inner, &[])
    }

    fn __repr__(&self) -> String {
        format!("Graph(order={}, edges={})", self.inner.order(), self.inner.edge_count())
    }
}

fn tree_from_edges(g: &PyGraph, edges: Vec<(usize, usize)>) -> PyResult<TreeSubgraph> {
    let host = Arc::new(g.inner.clone());
    if edges.is_empty() {
        return TreeSubgraph::singleton(host, 0).map_err(err);
    }
    let edges: Vec<Edge> = edges.into_iter().map(|(a, b)| Edge::new(a, b)).collect();
    TreeSubgraph::from_edges(host, edges).map_err(err)
}

/// Leaf/stem decomposition of a tree given by its edges.
#[pyfunction]
fn stem_profile_of<'py>(
    py: Python<'py>,
    g: &PyGraph,
    edges: Vec<(usize, usize)>,
) -> PyResult<Bound<'py, PyDict>> {
    let t = tree_from_edges(g, edges)?;
    let p = tree::stem_profile(&t);
    let d = PyDict::new(py);
    d.set_item("tree_order", p.tree_order)?;
    d.set_item("leaves", p.leaves.iter().copied().collect::<Vec<_>>())?;
    d.set_item("stem_vertices", p.stem_vertices.iter().copied().collect::<Vec<_>>())?;
    d.set_item(
        "stem_branch_vertices",
        p.stem_branch_vertices.iter().copied().collect::<Vec<_>>(),
    )?;
    d.set_item("stem_leaves", p.stem_leaves.iter().copied().collect::<Vec<_>>())?;
    d.set_item("degree_two_stem", p.degree_two_stem.iter().copied().collect::<Vec<_>>())?;
    d.set_item("stem_max_degree", p.stem_max_degree)?;
    d.set_item("is_spider_stem", p.is_spider_stem)?;
    Ok(d)
}

/// Direct leaf count and the degree-identity count, as a pair.
#[pyfunction]
fn leaf_counts(g: &PyGraph, edges: Vec<(usize, usize)>) -> PyResult<(usize, usize)> {
    let t = tree_from_edges(g, edges)?;
    let direct = tree::leaves(&t).len();
    let formula = tree::count_leaves_by_formula(&t).map_err(err)?;
    Ok((direct, formula))
}

/// Maximum size of a set with pairwise distance >= l, with a witness.
#[pyfunction]
#[pyo3(signature = (g, l, node_limit=None))]
fn alpha(g: &PyGraph, l: u32, node_limit: Option<u64>) -> PyResult<(usize, Vec<usize>)> {
    invariants::distance_independence_number(&g.inner, l, &limits_from(node_limit, None))
        .map_err(err)
}

/// Minimum degree sum of a k-set with pairwise distance >= l; None means no
/// such set exists.
#[pyfunction]
#[pyo3(signature = (g, l, k, node_limit=None))]
fn sigma(
    g: &PyGraph,
    l: u32,
    k: usize,
    node_limit: Option<u64>,
) -> PyResult<(Option<usize>, Option<Vec<usize>>)> {
    let r = invariants::sigma(&g.inner, l, k, &limits_from(node_limit, None)).map_err(err)?;
    let value = match r.value {
        SigmaValue::Finite(s) => Some(s),
        SigmaValue::Infinite => None,
    };
    Ok((value, r.witness_set))
}

/// Evaluate a named degree-sum condition; returns a dict.
#[pyfunction]
#[pyo3(signature = (g, theorem, k, node_limit=None))]
fn check_hypothesis<'py>(
    py: Python<'py>,
    g: &PyGraph,
    theorem: &str,
    k: usize,
    node_limit: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let id = TheoremId::parse(theorem).map_err(err)?;
    let v = invariants::check_hypothesis(&g.inner, id, k, &limits_from(node_limit, None))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("theorem", v.theorem_id.name())?;
    d.set_item("k", v.k)?;
    d.set_item("holds", v.holds)?;
    d.set_item(
        "lhs",
        match v.lhs {
            SigmaValue::Finite(s) => Some(s),
            SigmaValue::Infinite => None,
        },
    )?;
    d.set_item("rhs", v.rhs)?;
    d.set_item("claw_free", v.claw_free)?;
    d.set_item("witness", v.witness_set)?;
    d.set_item("conclusion_if_holds", id.conclusion())?;
    Ok(d)
}

/// Exhaustive minimum of stem branch vertices over spanning trees.
#[pyfunction]
#[pyo3(signature = (g, node_limit=None))]
fn min_branch_spanning_tree<'py>(
    py: Python<'py>,
    g: &PyGraph,
    node_limit: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let r =
        exact::min_branch_spanning_tree(&g.inner, &limits_from(node_limit, None)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("min_stem_branch_vertices", r.min_stem_branch_vertices)?;
    d.set_item(
        "optimal_tree",
        r.optimal_tree.edges().iter().map(|e| (e.u, e.v)).collect::<Vec<_>>(),
    )?;
    d.set_item("trees_explored", r.trees_explored)?;
    d.set_item("search_nodes", r.search_nodes)?;
    d.set_item("exhausted", r.exhausted)?;
    Ok(d)
}

/// ("yes", edges) / ("no", None) / ("inconclusive", None).
#[pyfunction]
#[pyo3(signature = (g, k, node_limit=None))]
fn has_spanning_tree_with_budget(
    g: &PyGraph,
    k: usize,
    node_limit: Option<u64>,
) -> PyResult<(String, Option<Vec<(usize, usize)>>)> {
    let r = exact::has_spanning_tree_with_budget(&g.inner, k, &limits_from(node_limit, None))
        .map_err(err)?;
    Ok(match r {
        BudgetOutcome::Yes(t) => (
            "yes".into(),
            Some(t.edges().iter().map(|e| (e.u, e.v)).collect()),
        ),
        BudgetOutcome::No => ("no".into(), None),
        BudgetOutcome::Inconclusive => ("inconclusive".into(), None),
    })
}

/// Local-search solve; returns a dict with the outcome and its payload.
#[pyfunction]
#[pyo3(signature = (g, k, iter_limit=None))]
fn solve<'py>(
    py: Python<'py>,
    g: &PyGraph,
    k: usize,
    iter_limit: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let report = search::solve(&g.inner, k, &limits_from(None, iter_limit)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("iterations", report.iterations)?;
    d.set_item("moves_applied", report.moves_applied.clone())?;
    match &report.outcome {
        SolveOutcome::Feasible(t) => {
            d.set_item("outcome", "feasible")?;
            d.set_item("tree", t.edges().iter().map(|e| (e.u, e.v)).collect::<Vec<_>>())?;
        }
        SolveOutcome::Certificate(c) => {
            d.set_item("outcome", "certificate")?;
            d.set_item("kind", c.kind.name())?;
            d.set_item("vertices", c.vertices.clone())?;
            d.set_item("degree_sum", c.degree_sum)?;
            d.set_item("bound", c.bound)?;
        }
        SolveOutcome::Stuck { reason, .. } => {
            d.set_item("outcome", "stuck")?;
            d.set_item("reason", reason)?;
        }
    }
    Ok(d)
}

/// Re-checks a certificate (kind, vertex list) from scratch.
#[pyfunction]
fn verify_certificate(
    g: &PyGraph,
    kind: &str,
    vertices: Vec<usize>,
    k: usize,
) -> PyResult<(bool, Vec<String>)> {
    let kind = CertificateKind::parse(kind).map_err(err)?;
    let mut vertices = vertices;
    vertices.sort_unstable();
    if let Some(&v) = vertices.iter().find(|&&v| v >= g.inner.order()) {
        return Err(err(format!("vertex {v} out of range")));
    }
    let degree_sum = vertices.iter().map(|&v| g.inner.neighbors(v).len()).sum();
    let n = g.inner.order() as i64;
    let bound = match kind {
        CertificateKind::T17Witness => n - 2 * k as i64 - 6,
        CertificateKind::T18Witness => n - 3 * k as i64 - 7,
    };
    let cert = search::Certificate { kind, vertices, distances_ok: true, degree_sum, bound };
    Ok(search::verify_certificate(&g.inner, &cert, k))
}

/// Extremal family member; returns (graph, roles) with roles like "z1".
#[pyfunction]
fn build_sharp_graph(m: usize, k: usize) -> PyResult<(PyGraph, Vec<String>)> {
    let p = SharpFamilyParams::new(m, k).map_err(err)?;
    let s = sharp::build_sharp_graph(p);
    let roles = s.roles.iter().map(|r| r.to_string()).collect();
    Ok((PyGraph { inner: s.graph }, roles))
}

/// Deterministic corpus of connected claw-free graphs.
#[pyfunction]
fn generate_corpus(
    seed: u64,
    count: usize,
    order_min: usize,
    order_max: usize,
) -> PyResult<Vec<PyGraph>> {
    let graphs =
        sio::generate_clawfree_corpus(seed, count, order_min, order_max).map_err(err)?;
    Ok(graphs.into_iter().map(|g| PyGraph { inner: g }).collect())
}

/// Line graph of a base graph.
#[pyfunction]
fn line_graph(g: &PyGraph) -> PyGraph {
    PyGraph { inner: sio::line_graph(&g.inner) }
}

#[pymodule]
fn stemspan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(stem_profile_of, m)?)?;
    m.add_function(wrap_pyfunction!(leaf_counts, m)?)?;
    m.add_function(wrap_pyfunction!(alpha, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(check_hypothesis, m)?)?;
    m.add_function(wrap_pyfunction!(min_branch_spanning_tree, m)?)?;
    m.add_function(wrap_pyfunction!(has_spanning_tree_with_budget, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(build_sharp_graph, m)?)?;
    m.add_function(wrap_pyfunction!(generate_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(line_graph, m)?)?;
    Ok(())
}
