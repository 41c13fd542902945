//! Lattice components: maximal 2-connected subgraphs (on at least three
//! vertices) whose vertices all lie on one triangular lattice.
//!
//! A unit edge determines its lattice uniquely (the lattice generated by the
//! edge vector and its 60° rotation), so every edge is a seed. For each
//! distinct lattice we collect the vertices lying on it and the edges joining
//! them; the components on that lattice are the blocks of this subgraph with
//! at least three vertices. Any 2-connected subgraph on the lattice lives in
//! one such block, which makes the blocks maximal.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::f64::consts::FRAC_PI_3;

use serde::{Deserialize, Serialize};

use crate::combinatorics::face_census;
use crate::error::{Error, Result};
use crate::graph::{
    block_indices, boundary_indices, connectivity, MatchstickGraph, ValidGraph, Vertex, VertexCoord, VertexId,
};
use crate::lattice::{phi, phi_at_most, unit_neighbors, EisensteinPoint, LatticeFrame, ScaledLatticeVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeComponent {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub frame: LatticeFrame,
    pub coords: BTreeMap<VertexId, EisensteinPoint>,
    pub n: usize,
    pub e: usize,
    /// Length of the component's own outer face.
    pub b: usize,
    /// The component's outer boundary, counterclockwise.
    pub boundary: Vec<VertexId>,
}

impl LatticeComponent {
    /// The component as a stand-alone lattice-mode graph in its own frame.
    pub fn to_graph(&self) -> MatchstickGraph {
        let vertices = self
            .vertices
            .iter()
            .map(|&id| Vertex { id, coord: VertexCoord::Lattice { frame: 0, point: self.coords[&id] } })
            .collect();
        MatchstickGraph::new(vec![self.frame], vertices, &self.edges).expect("component is a simple graph")
    }

    fn edge_set(&self) -> HashSet<(VertexId, VertexId)> {
        self.edges.iter().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageBounds {
    pub sum_n_i: usize,
    pub lower: i64,
    pub upper: i64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    /// Sorted by decreasing size, then by smallest vertex id.
    pub components: Vec<LatticeComponent>,
    pub sum_n: usize,
    /// `n − 2F ≤ Σ n_i ≤ n + 4F`, when the input is 2-connected.
    pub coverage: Option<CoverageBounds>,
    /// Boundary edges of the input not on the boundary of the largest component.
    pub b_star: Option<usize>,
}

/// Splits a validated graph into its lattice components.
pub fn decompose(g: &ValidGraph) -> Result<DecompositionReport> {
    let graph = g.graph();
    let mut components = match (g.lattice(), graph.lattice_points()) {
        (Some(pts), Some((frame, _))) => {
            let all: Vec<usize> = (0..g.n()).collect();
            components_on_lattice(g, graph.frames()[frame], pts, &all, graph.index_edges(), false)
        }
        _ => free_components(g),
    };

    // identical or nested components can only arise from distinct seeds of
    // one lattice; keep the maximal ones
    components.sort_by(|a, b| b.n.cmp(&a.n).then_with(|| a.vertices.cmp(&b.vertices)));
    let mut kept: Vec<LatticeComponent> = Vec::new();
    for c in components {
        let es = c.edge_set();
        if kept.iter().all(|k| !es.is_subset(&k.edge_set())) {
            kept.push(c);
        }
    }
    let components = kept;
    for (i, a) in components.iter().enumerate() {
        let ea = a.edge_set();
        for b in &components[i + 1..] {
            if b.edges.iter().any(|e| ea.contains(e)) {
                return Err(Error::Inconsistent("two lattice components share an edge".into()));
            }
        }
    }

    let sum_n = components.iter().map(|c| c.n).sum();
    let mut report = DecompositionReport { components, sum_n, coverage: None, b_star: None };
    if connectivity(graph).two_connected {
        report.coverage = Some(coverage_bounds(g, &report)?);
        if !report.components.is_empty() {
            report.b_star = Some(b_star(g, &report)?);
        }
    }
    Ok(report)
}

fn free_components(g: &ValidGraph) -> Vec<LatticeComponent> {
    let graph = g.graph();
    let pos = g.positions();
    let edges = graph.index_edges();
    let mut grouped = vec![false; edges.len()];
    let mut out = Vec::new();
    for (k, &(a, b)) in edges.iter().enumerate() {
        if grouped[k] {
            continue;
        }
        let angle = (pos[b][1] - pos[a][1]).atan2(pos[b][0] - pos[a][0]);
        let frame = LatticeFrame::new(pos[a], angle);
        let snapped: Vec<Option<EisensteinPoint>> = pos.iter().map(|&p| frame.snap(p, g.tol())).collect();
        let mut lattice_edges = Vec::new();
        for (k2, &(i, j)) in edges.iter().enumerate() {
            if let (Some(p), Some(q)) = (snapped[i], snapped[j]) {
                if (q - p).norm() == 1 {
                    grouped[k2] = true;
                    lattice_edges.push((i, j));
                }
            }
        }
        let on: Vec<usize> = (0..pos.len()).filter(|&v| snapped[v].is_some()).collect();
        let pts: Vec<EisensteinPoint> = snapped.iter().map(|p| p.unwrap_or_default()).collect();
        out.extend(components_on_lattice(g, frame, &pts, &on, &lattice_edges, true));
    }
    out
}

/// Blocks with at least three vertices among `edges`, all of whose endpoints
/// carry lattice points `pts` in `frame`.
fn components_on_lattice(
    g: &ValidGraph,
    frame: LatticeFrame,
    pts: &[EisensteinPoint],
    vertices: &[usize],
    edges: &[(usize, usize)],
    canonicalize: bool,
) -> Vec<LatticeComponent> {
    let local: HashMap<usize, usize> = vertices.iter().enumerate().map(|(l, &v)| (v, l)).collect();
    let mut adj = vec![Vec::new(); vertices.len()];
    for &(i, j) in edges {
        adj[local[&i]].push(local[&j]);
        adj[local[&j]].push(local[&i]);
    }
    block_indices(vertices.len(), &adj)
        .into_iter()
        .filter(|(vs, _)| vs.len() >= 3)
        .map(|(vs, es)| {
            let vs: Vec<usize> = vs.iter().map(|&l| vertices[l]).collect();
            let es: Vec<(usize, usize)> = es.iter().map(|&(a, b)| (vertices[a], vertices[b])).collect();
            build_component(g, frame, pts, &vs, &es, canonicalize)
        })
        .collect()
}

fn build_component(
    g: &ValidGraph,
    frame: LatticeFrame,
    pts: &[EisensteinPoint],
    vs: &[usize],
    es: &[(usize, usize)],
    canonicalize: bool,
) -> LatticeComponent {
    let graph = g.graph();
    let (frame, coords): (LatticeFrame, BTreeMap<VertexId, EisensteinPoint>) = if canonicalize {
        // origin at the smallest id, basis angle reduced to [0, 60°)
        let anchor = *vs.iter().min_by_key(|&&v| graph.id(v)).unwrap();
        let base = frame.to_cartesian(pts[anchor]);
        let mut angle = frame.angle.rem_euclid(FRAC_PI_3);
        if FRAC_PI_3 - angle < 1e-12 {
            angle = 0.0;
        }
        let canon = LatticeFrame::new(base, angle);
        let coords = vs
            .iter()
            .map(|&v| {
                let p = canon.snap(g.positions()[v], 1e-6).expect("same lattice after change of frame");
                (graph.id(v), p)
            })
            .collect();
        (canon, coords)
    } else {
        (frame, vs.iter().map(|&v| (graph.id(v), pts[v])).collect())
    };

    let sub = graph.subgraph(vs, es);
    let mut ids: Vec<VertexId> = vs.iter().map(|&v| graph.id(v)).collect();
    ids.sort_unstable();
    let mut edges: Vec<(VertexId, VertexId)> = sub.edges().map(|(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort_unstable();
    let mut comp = LatticeComponent {
        n: ids.len(),
        e: edges.len(),
        vertices: ids,
        edges,
        frame,
        coords,
        b: 0,
        boundary: Vec::new(),
    };
    let own = ValidGraph::assume_valid(comp.to_graph(), g.tol(), false);
    let cycle = boundary_indices(&own).expect("blocks with three or more vertices are 2-connected");
    comp.b = cycle.len();
    comp.boundary = cycle.into_iter().map(|i| own.graph().id(i)).collect();
    comp
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub b: usize,
    pub phi_n: f64,
    pub holds: bool,
}

/// `b_i ≥ √(12 n_i − 3) − 3`, decided in integers. This always holds for
/// 2-connected lattice graphs, so a failure is an internal error.
pub fn component_boundary_check(comp: &LatticeComponent) -> Result<BoundaryCheck> {
    let holds = phi_at_most(comp.n as u64, comp.b as u64);
    let check = BoundaryCheck { b: comp.b, phi_n: phi(comp.n as f64)?, holds };
    if !holds {
        return Err(Error::Inconsistent(format!(
            "component boundary {} below phi({}) = {}",
            comp.b, comp.n, check.phi_n
        )));
    }
    Ok(check)
}

/// Closed point-in-polygon on scaled lattice coordinates (affine image of the plane).
fn inside_closed(poly: &[ScaledLatticeVector], p: ScaledLatticeVector) -> bool {
    let k = poly.len();
    let mut winding = 0i32;
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        let side = (b - a).cross(p - a);
        if side == 0 {
            let t = (b - a).dot(p - a);
            if t >= 0 && t <= (b - a).dot(b - a) {
                return true;
            }
        }
        if a.v <= p.v {
            if b.v > p.v && side > 0 {
                winding += 1;
            }
        } else if b.v <= p.v && side < 0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// The component with every lattice point inside its boundary added, along
/// with every unit edge inside the boundary. New vertices get fresh ids above
/// the component's largest id.
pub fn fill_component(comp: &LatticeComponent) -> MatchstickGraph {
    let poly: Vec<ScaledLatticeVector> = comp.boundary.iter().map(|id| comp.coords[id].scaled()).collect();
    let doubled: Vec<ScaledLatticeVector> =
        poly.iter().map(|p| ScaledLatticeVector { u: 2 * p.u, v: 2 * p.v }).collect();
    let (umin, umax) = (poly.iter().map(|p| p.u).min().unwrap(), poly.iter().map(|p| p.u).max().unwrap());
    let (vmin, vmax) = (poly.iter().map(|p| p.v).min().unwrap(), poly.iter().map(|p| p.v).max().unwrap());

    let existing: HashMap<EisensteinPoint, VertexId> = comp.coords.iter().map(|(&id, &p)| (p, id)).collect();
    let mut next_id = comp.vertices.iter().max().map_or(0, |m| m + 1);
    let mut points: BTreeMap<EisensteinPoint, VertexId> = BTreeMap::new();
    for n in vmin..=vmax {
        for u in umin..=umax {
            if (u - n).rem_euclid(2) != 0 {
                continue;
            }
            let p = EisensteinPoint::new((u - n) / 2, n);
            if !inside_closed(&poly, p.scaled()) {
                continue;
            }
            let id = match existing.get(&p) {
                Some(&id) => id,
                None => {
                    next_id += 1;
                    next_id - 1
                }
            };
            points.insert(p, id);
        }
    }
    let mut edges = BTreeSet::new();
    for (&p, &a) in &points {
        for q in unit_neighbors(p) {
            let Some(&b) = points.get(&q) else { continue };
            let mid = ScaledLatticeVector { u: p.scaled().u + q.scaled().u, v: p.scaled().v + q.scaled().v };
            if a < b && inside_closed(&doubled, mid) {
                edges.insert((a, b));
            }
        }
    }
    let vertices =
        points.iter().map(|(&point, &id)| Vertex { id, coord: VertexCoord::Lattice { frame: 0, point } }).collect();
    let edges: Vec<_> = edges.into_iter().collect();
    MatchstickGraph::new(vec![comp.frame], vertices, &edges).expect("filled lattice region")
}

fn boundary_edge_set(cycle: &[VertexId]) -> HashSet<(VertexId, VertexId)> {
    (0..cycle.len())
        .map(|k| {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            (a.min(b), a.max(b))
        })
        .collect()
}

/// Number of boundary edges of `g` that are not boundary edges of the largest component.
pub fn b_star(g: &ValidGraph, report: &DecompositionReport) -> Result<usize> {
    let g1 =
        report.components.first().ok_or_else(|| Error::Domain("b_star needs at least one lattice component".into()))?;
    let outer: Vec<VertexId> = boundary_indices(g)?.into_iter().map(|i| g.graph().id(i)).collect();
    let inner = boundary_edge_set(&g1.boundary);
    Ok(boundary_edge_set(&outer).difference(&inner).count())
}

/// `n − 2F ≤ Σ n_i ≤ n + 4F`, evaluated, not enforced.
pub fn coverage_bounds(g: &ValidGraph, report: &DecompositionReport) -> Result<CoverageBounds> {
    let census = face_census(g)?;
    let n = g.n() as i64;
    let f = census.weighted_non_triangles as i64;
    let sum = report.sum_n as i64;
    let (lower, upper) = (n - 2 * f, n + 4 * f);
    Ok(CoverageBounds { sum_n_i: report.sum_n, lower, upper, within: lower <= sum && sum <= upper })
}
