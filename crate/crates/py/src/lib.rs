//! Python bindings: instances, intersection graphs, separators, oracles
//! and coloring.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::geodisk::coloring::q_color_via_separator;
use ::geodisk::instance::{self, GeneratorParams};
use ::geodisk::oracle::{build_separator_tree, exact_hop_distance, HopDistance, SeparatorTree};
use ::geodisk::render::{render_svg, Overlays};
use ::geodisk::separator::{compute_schedule, separate_graph, to_f64, verify_separator, Clique, CliqueSeparator};
use ::geodisk::{build_intersection_graph, Error, IntersectionGraph, Point};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::UnknownDisk(_) => PyKeyError::new_err(e.to_string()),
        Error::NonPlanar | Error::InconsistentPaths { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn hops(d: HopDistance) -> Option<u32> {
    d.value()
}

/// A free space with disks.
#[pyclass(name = "Instance", module = "geodisk", frozen)]
struct PyInstance {
    inner: instance::Instance,
}

#[pymethods]
impl PyInstance {
    /// Parses an instance document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: instance::parse_instance(text).map_err(py_err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (name, n = 5))]
    fn preset(name: &str, n: usize) -> PyResult<Self> {
        Ok(PyInstance {
            inner: instance::preset(name, n).map_err(py_err)?,
        })
    }

    /// Random instance of constant disk density.
    #[staticmethod]
    #[pyo3(signature = (n, holes = 0, seed = 1))]
    fn random(n: usize, holes: usize, seed: u64) -> PyResult<Self> {
        Ok(PyInstance {
            inner: instance::generate_instance(&GeneratorParams::family(n, holes, seed)).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        instance::write_instance(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn holes(&self) -> usize {
        self.inner.hole_count()
    }

    /// `(id, (x, y), radius)` for every disk.
    #[getter]
    fn disks(&self) -> Vec<(usize, (f64, f64), f64)> {
        self.inner.disks.iter().map(|d| (d.id, (d.center.x, d.center.y), d.radius)).collect()
    }

    fn graph(&self) -> PyResult<PyGraph> {
        let (_, g) = build_intersection_graph(&self.inner.free_space, &self.inner.disks).map_err(py_err)?;
        Ok(PyGraph { inner: g })
    }

    /// Geodesic distance between two points of the free space.
    fn distance(&self, p: (f64, f64), q: (f64, f64)) -> PyResult<f64> {
        let (v, _) = build_intersection_graph(&self.inner.free_space, &[]).map_err(py_err)?;
        v.distance_between(Point::new(p.0, p.1), Point::new(q.0, q.1)).map_err(py_err)
    }

    /// SVG figure, optionally with a separator overlay.
    #[pyo3(signature = (separator = None))]
    fn render_svg(&self, separator: Option<&PySeparator>) -> String {
        let overlays = Overlays {
            separator: separator.map(|s| &s.inner),
            ..Default::default()
        };
        render_svg(&self.inner, &overlays)
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, holes={})", self.inner.len(), self.inner.hole_count())
    }
}

/// Intersection graph of the disks of an instance.
#[pyclass(name = "Graph", module = "geodisk", frozen)]
struct PyGraph {
    inner: IntersectionGraph,
}

#[pymethods]
impl PyGraph {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// Edges as sorted pairs of disk ids.
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edge_ids()
    }

    fn neighbors(&self, id: usize) -> PyResult<Vec<usize>> {
        let local = self.inner.local(id).map_err(py_err)?;
        Ok(self.inner.neighbors(local).iter().map(|&w| self.inner.disk(w).id).collect())
    }

    /// Number of disks containing the point.
    fn ply(&self, p: (f64, f64)) -> PyResult<usize> {
        self.inner.ply_at_point(Point::new(p.0, p.1)).map_err(py_err)
    }

    /// BFS hop distance; `None` when disconnected.
    fn hop_distance(&self, i: usize, j: usize) -> PyResult<Option<u32>> {
        Ok(hops(exact_hop_distance(&self.inner, i, j).map_err(py_err)?))
    }

    fn separate(&self, epsilon: f64) -> PyResult<PySeparator> {
        Ok(PySeparator {
            inner: separate_graph(&self.inner, epsilon).map_err(py_err)?,
        })
    }

    /// Invariant violations of a separator of this graph.
    fn verify(&self, separator: &PySeparator) -> PyResult<Vec<String>> {
        verify_separator(&self.inner, &separator.inner).map_err(py_err)
    }

    fn oracle(&self, epsilon: f64) -> PyResult<PyOracle> {
        Ok(PyOracle {
            inner: build_separator_tree(&self.inner, epsilon).map_err(py_err)?,
        })
    }

    /// `(feasible, {id: color})`.
    #[pyo3(signature = (q, epsilon = 0.25))]
    fn color(&self, q: usize, epsilon: f64) -> PyResult<(bool, BTreeMap<usize, usize>)> {
        let r = q_color_via_separator(&self.inner, q, epsilon).map_err(py_err)?;
        Ok((r.feasible, r.assignment))
    }
}

/// Clique-based separator with its two sides.
#[pyclass(name = "Separator", module = "geodisk", frozen)]
struct PySeparator {
    inner: CliqueSeparator,
}

#[pymethods]
impl PySeparator {
    /// `(kind, members)` per clique, kind `point_clique` or `singleton`.
    #[getter]
    fn cliques(&self) -> Vec<(&'static str, Vec<usize>)> {
        self.inner
            .cliques
            .iter()
            .map(|c| match c {
                Clique::PointClique { members, .. } => ("point_clique", members.clone()),
                Clique::Singleton { member } => ("singleton", vec![*member]),
            })
            .collect()
    }

    #[getter]
    fn a(&self) -> Vec<usize> {
        self.inner.a.clone()
    }

    #[getter]
    fn b(&self) -> Vec<usize> {
        self.inner.b.clone()
    }

    #[getter]
    fn balance(&self) -> f64 {
        self.inner.balance()
    }

    fn __repr__(&self) -> String {
        format!(
            "Separator(cliques={}, a={}, b={})",
            self.inner.cliques.len(),
            self.inner.a.len(),
            self.inner.b.len()
        )
    }
}

/// Hop-distance oracle with additive error at most one.
#[pyclass(name = "Oracle", module = "geodisk", frozen)]
struct PyOracle {
    inner: SeparatorTree,
}

#[pymethods]
impl PyOracle {
    /// Estimate `d` with `d <= hdist(i, j) <= d + 1`; `None` when disconnected.
    fn query(&self, i: usize, j: usize) -> PyResult<Option<u32>> {
        Ok(hops(self.inner.query(i, j).map_err(py_err)?))
    }

    #[getter]
    fn entries(&self) -> usize {
        self.inner.entry_count()
    }

    fn to_snapshot(&self) -> String {
        self.inner.to_snapshot()
    }

    #[staticmethod]
    fn from_snapshot(text: &str) -> PyResult<Self> {
        Ok(PyOracle {
            inner: SeparatorTree::from_snapshot(text).map_err(py_err)?,
        })
    }
}

/// `(k, alphas, exponent)`, exponents as `"p/q"` strings plus the float
/// exponent.
#[pyfunction]
fn schedule(epsilon: f64) -> PyResult<(u32, Vec<String>, String, f64)> {
    let s = compute_schedule(epsilon).map_err(py_err)?;
    let alphas = s.alphas.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect();
    let exponent = format!("{}/{}", s.exponent.numer(), s.exponent.denom());
    Ok((s.k, alphas, exponent, to_f64(&s.exponent)))
}

#[pymodule]
fn geodisk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PySeparator>()?;
    m.add_class::<PyOracle>()?;
    m.add_function(wrap_pyfunction!(schedule, m)?)?;
    Ok(())
}
