//! Python bindings. Reports come back as plain dicts and lists.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use matchstick_core::combinatorics::{check_harborth, claim_trace, face_census};
use matchstick_core::components::decompose;
use matchstick_core::graph::{self, connectivity, validate, MatchstickGraph, ValidGraph, DEFAULT_TOL};
use matchstick_core::io::{graph_from_json, graph_to_json, render_svg};
use matchstick_core::isoperimetry::{self as iso, DirectionSet, DEFAULT_ANGLE_TOL};
use matchstick_core::{extremal, lattice, oracle, Error};

create_exception!(matchstick, InconsistencyError, PyException, "A theorem-level invariant failed.");

fn err(e: Error) -> PyErr {
    match e {
        Error::Inconsistent(m) => InconsistencyError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Converts through JSON into dicts, lists and numbers.
fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

#[pyclass(name = "EisensteinPoint", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyPoint(lattice::EisensteinPoint);

#[pymethods]
impl PyPoint {
    #[new]
    fn new(m: i64, n: i64) -> Self {
        PyPoint(lattice::EisensteinPoint::new(m, n))
    }

    #[getter]
    fn m(&self) -> i64 {
        self.0.m
    }

    #[getter]
    fn n(&self) -> i64 {
        self.0.n
    }

    fn norm(&self) -> i64 {
        self.0.norm()
    }

    fn rotate60(&self) -> Self {
        PyPoint(self.0.rotate60())
    }

    fn reflect(&self) -> Self {
        PyPoint(self.0.reflect())
    }

    #[allow(clippy::wrong_self_convention)]
    fn to_cartesian(&self) -> (f64, f64) {
        let [x, y] = self.0.to_cartesian();
        (x, y)
    }

    fn unit_neighbors(&self) -> Vec<PyPoint> {
        lattice::unit_neighbors(self.0).into_iter().map(PyPoint).collect()
    }

    fn __repr__(&self) -> String {
        format!("EisensteinPoint({}, {})", self.0.m, self.0.n)
    }
}

/// A matchstick graph drawing. Methods that need a valid drawing validate
/// it first with tolerance `tol`.
#[pyclass(name = "Graph", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(MatchstickGraph);

impl PyGraph {
    fn valid(&self, tol: f64) -> PyResult<ValidGraph> {
        ValidGraph::new(self.0.clone(), tol, false).map_err(err)
    }
}

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        graph_from_json(s).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn from_lattice_points(points: Vec<(i64, i64)>) -> Self {
        let pts: Vec<_> = points.into_iter().map(|(m, n)| lattice::EisensteinPoint::new(m, n)).collect();
        PyGraph(MatchstickGraph::from_lattice_points(&pts))
    }

    #[staticmethod]
    fn from_free(points: Vec<(f64, f64)>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let pts: Vec<[f64; 2]> = points.into_iter().map(|(x, y)| [x, y]).collect();
        MatchstickGraph::from_free(&pts, &edges).map(PyGraph).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        graph_to_json(&self.0).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn e(&self) -> usize {
        self.0.e()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn positions(&self) -> Vec<(f64, f64)> {
        self.0.positions().into_iter().map(|[x, y]| (x, y)).collect()
    }

    #[pyo3(signature = (tol = DEFAULT_TOL, penny = false))]
    fn validate<'py>(&self, py: Python<'py>, tol: f64, penny: bool) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &validate(&self.0, tol, penny))
    }

    fn connectivity<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &connectivity(&self.0))
    }

    /// Face cycles as vertex-id lists and the index of the outer face.
    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn faces(&self, tol: f64) -> PyResult<(Vec<Vec<usize>>, usize)> {
        let f = graph::faces(&self.valid(tol)?).map_err(err)?;
        Ok((f.faces, f.outer_face_index))
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn boundary(&self, tol: f64) -> PyResult<Vec<usize>> {
        Ok(graph::boundary(&self.valid(tol)?).map_err(err)?.0)
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn census<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &face_census(&self.valid(tol)?).map_err(err)?)
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn harborth<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &check_harborth(&self.valid(tol)?).map_err(err)?)
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn decompose<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &decompose(&self.valid(tol)?).map_err(err)?)
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn trace<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &claim_trace(&self.valid(tol)?).map_err(err)?)
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn audit<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let g = self.valid(tol)?;
        let rep = decompose(&g).map_err(err)?;
        to_py(py, &iso::graph_isoperimetric_audit(&g, &rep).map_err(err)?)
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn render_svg(&self, tol: f64) -> String {
        match self.valid(tol) {
            Ok(g) => {
                let rep = decompose(&g).ok();
                let cycle = graph::boundary(&g).ok().map(|(c, _)| c);
                render_svg(&self.0, rep.as_ref(), cycle.as_deref())
            }
            Err(_) => render_svg(&self.0, None, None),
        }
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, e={})", self.0.n(), self.0.e())
    }
}

#[pyclass(name = "Polygon", skip_from_py_object)]
#[derive(Clone)]
struct PyPolygon(iso::Polygon);

#[pymethods]
impl PyPolygon {
    #[new]
    fn new(vertices: Vec<(f64, f64)>) -> PyResult<Self> {
        iso::Polygon::new(vertices.into_iter().map(|(x, y)| [x, y]).collect()).map(PyPolygon).map_err(err)
    }

    fn vertices(&self) -> Vec<(f64, f64)> {
        self.0.vertices().iter().map(|&[x, y]| (x, y)).collect()
    }

    fn area(&self) -> f64 {
        self.0.area()
    }

    fn perimeter(&self) -> f64 {
        self.0.perimeter()
    }

    fn is_convex(&self) -> bool {
        self.0.is_convex()
    }

    fn convexify(&self) -> Self {
        PyPolygon(iso::convexify_rearrangement(&self.0))
    }

    #[pyo3(signature = (theta0 = 0.0, angle_tol = DEFAULT_ANGLE_TOL))]
    fn split<'py>(&self, py: Python<'py>, theta0: f64, angle_tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &iso::hex_parallel_split(&self.0, &DirectionSet::new(theta0), angle_tol))
    }

    fn check_classic<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &iso::check_classic(&self.0).map_err(err)?)
    }

    #[pyo3(signature = (theta0 = 0.0, angle_tol = DEFAULT_ANGLE_TOL))]
    fn check_hexagonal<'py>(&self, py: Python<'py>, theta0: f64, angle_tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &iso::check_hexagonal(&self.0, &DirectionSet::new(theta0), angle_tol).map_err(err)?)
    }

    #[pyo3(signature = (theta0 = 0.0, angle_tol = DEFAULT_ANGLE_TOL))]
    fn hexagonal_chain<'py>(&self, py: Python<'py>, theta0: f64, angle_tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &iso::hexagonal_chain(&self.0, &DirectionSet::new(theta0), angle_tol).map_err(err)?)
    }

    fn max_area_rearrangement(&self) -> PyResult<f64> {
        oracle::max_area_rearrangement(&self.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Polygon({} vertices)", self.0.len())
    }
}

#[pyfunction]
fn harborth_bound(n: u64) -> PyResult<u64> {
    lattice::harborth_bound(n).map_err(err)
}

#[pyfunction]
fn phi(x: f64) -> PyResult<f64> {
    lattice::phi(x).map_err(err)
}

#[pyfunction]
fn concavity_gap(a: f64, b: f64, c: f64) -> PyResult<f64> {
    lattice::concavity_gap(a, b, c).map_err(err)
}

#[pyfunction]
fn complete_unit_pair(a: (i64, i64), b: (i64, i64)) -> PyResult<Vec<PyPoint>> {
    let (a, b) = (lattice::EisensteinPoint::new(a.0, a.1), lattice::EisensteinPoint::new(b.0, b.1));
    Ok(lattice::complete_unit_pair(a, b).map_err(err)?.into_iter().map(PyPoint).collect())
}

#[pyfunction]
fn build_extremal(n: usize) -> PyResult<PyGraph> {
    extremal::build_extremal(n).map(PyGraph).map_err(err)
}

#[pyfunction]
fn build_hexagon_patch(k: u32) -> PyGraph {
    PyGraph(extremal::build_hexagon_patch(k))
}

#[pyfunction]
#[pyo3(signature = (n, seed, require_2connected = false))]
fn random_lattice_subgraph(n: usize, seed: u64, require_2connected: bool) -> PyResult<PyGraph> {
    extremal::random_lattice_subgraph(n, seed, require_2connected).map(PyGraph).map_err(err)
}

#[pyfunction]
fn max_edges_lattice<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| oracle::max_edges_lattice(n)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn lemma5_fuzz<'py>(py: Python<'py>, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &oracle::lemma5_fuzz(trials, seed).map_err(err)?)
}

#[pymodule]
fn matchstick(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("InconsistencyError", m.py().get_type::<InconsistencyError>())?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPolygon>()?;
    m.add_function(wrap_pyfunction!(harborth_bound, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(concavity_gap, m)?)?;
    m.add_function(wrap_pyfunction!(complete_unit_pair, m)?)?;
    m.add_function(wrap_pyfunction!(build_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(build_hexagon_patch, m)?)?;
    m.add_function(wrap_pyfunction!(random_lattice_subgraph, m)?)?;
    m.add_function(wrap_pyfunction!(max_edges_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(lemma5_fuzz, m)?)?;
    Ok(())
}
