//! Matchstick graphs: representation, geometric validation, rotation systems,
//! face traversal and block decomposition.
//!
//! Vertices carry either exact lattice coordinates in one of the graph's
//! frames or free floating coordinates. When every vertex sits on the same
//! frame all predicates are exact integer tests; otherwise lattice vertices
//! are mapped to the plane and checked with an absolute tolerance.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{EisensteinPoint, LatticeFrame, ScaledLatticeVector};

pub type VertexId = usize;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VertexCoord {
    Lattice { frame: usize, point: EisensteinPoint },
    Free { x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    pub coord: VertexCoord,
}

/// A straight-line drawing: vertices with coordinates and an edge list.
///
/// Construction enforces the structural invariants (distinct ids, no loops,
/// no duplicate edges, known frames). Geometric validity is a separate step,
/// see [`validate`] and [`ValidGraph`].
#[derive(Debug, Clone, PartialEq)]
pub struct MatchstickGraph {
    frames: Vec<LatticeFrame>,
    vertices: Vec<Vertex>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    edges: Vec<(usize, usize)>,
    index: HashMap<VertexId, usize>,
}

impl MatchstickGraph {
    pub fn new(frames: Vec<LatticeFrame>, vertices: Vec<Vertex>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {}", v.id)));
            }
            if let VertexCoord::Lattice { frame, .. } = v.coord {
                if frame >= frames.len() {
                    return Err(Error::InvalidGraph(format!("vertex {} references unknown frame {frame}", v.id)));
                }
            }
            if let VertexCoord::Free { x, y } = v.coord {
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::InvalidGraph(format!("vertex {} has non-finite coordinates", v.id)));
                }
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut idx_edges = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) references an unknown vertex")));
            };
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            let e = (i.min(j), i.max(j));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
            idx_edges.push(e);
        }
        idx_edges.sort_unstable();
        Ok(MatchstickGraph { frames, vertices, edges: idx_edges, index })
    }

    /// Lattice points in the default frame with ids `0..n` and every unit edge among them.
    pub fn from_lattice_points(points: &[EisensteinPoint]) -> Self {
        Self::from_lattice_points_in(LatticeFrame::default(), points)
    }

    pub fn from_lattice_points_in(frame: LatticeFrame, points: &[EisensteinPoint]) -> Self {
        let lookup: HashMap<EisensteinPoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut edges = Vec::new();
        for (i, &p) in points.iter().enumerate() {
            for q in crate::lattice::unit_neighbors(p) {
                if let Some(&j) = lookup.get(&q) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let vertices = points
            .iter()
            .enumerate()
            .map(|(id, &point)| Vertex { id, coord: VertexCoord::Lattice { frame: 0, point } })
            .collect();
        MatchstickGraph::new(vec![frame], vertices, &edges).expect("lattice point set with distinct points")
    }

    /// Free vertices with ids `0..n`.
    pub fn from_free(points: &[[f64; 2]], edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let vertices =
            points.iter().enumerate().map(|(id, &[x, y])| Vertex { id, coord: VertexCoord::Free { x, y } }).collect();
        MatchstickGraph::new(Vec::new(), vertices, edges)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn frames(&self) -> &[LatticeFrame] {
        &self.frames
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn id(&self, index: usize) -> VertexId {
        self.vertices[index].id
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Edges as id pairs, smaller index first.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().map(|&(i, j)| (self.vertices[i].id, self.vertices[j].id))
    }

    pub(crate) fn index_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn position(&self, index: usize) -> [f64; 2] {
        match self.vertices[index].coord {
            VertexCoord::Free { x, y } => [x, y],
            VertexCoord::Lattice { frame, point } => self.frames[frame].to_cartesian(point),
        }
    }

    pub fn positions(&self) -> Vec<[f64; 2]> {
        (0..self.n()).map(|i| self.position(i)).collect()
    }

    /// The shared frame and per-vertex lattice points, when every vertex lies
    /// on the same frame. This is the regime of exact predicates.
    pub fn lattice_points(&self) -> Option<(usize, Vec<EisensteinPoint>)> {
        let mut frame = None;
        let mut pts = Vec::with_capacity(self.n());
        for v in &self.vertices {
            match v.coord {
                VertexCoord::Lattice { frame: f, point } => {
                    if *frame.get_or_insert(f) != f {
                        return None;
                    }
                    pts.push(point);
                }
                VertexCoord::Free { .. } => return None,
            }
        }
        frame.map(|f| (f, pts))
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Subgraph on the given vertex indices and index edges, keeping ids and frames.
    pub(crate) fn subgraph(&self, vertex_indices: &[usize], edges: &[(usize, usize)]) -> MatchstickGraph {
        let vertices = vertex_indices.iter().map(|&i| self.vertices[i]).collect();
        let id_edges: Vec<_> = edges.iter().map(|&(i, j)| (self.id(i), self.id(j))).collect();
        MatchstickGraph::new(self.frames.clone(), vertices, &id_edges).expect("subgraph of a valid graph")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationKind {
    NonUnitEdge,
    Crossing,
    VertexOnEdge,
    DuplicateVertexPosition,
    PennyDistance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ids: Vec<VertexId>,
    /// Edge length, point distance, or 0 for crossings.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn summary(&self) -> String {
        let mut s = format!("{} violation(s)", self.violations.len());
        for v in self.violations.iter().take(5) {
            s.push_str(&format!("; {:?} {:?} ({})", v.kind, v.ids, v.value));
        }
        s
    }
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn bbox_disjoint(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2], pad: f64) -> bool {
    a[0].max(b[0]) + pad < c[0].min(d[0])
        || c[0].max(d[0]) + pad < a[0].min(b[0])
        || a[1].max(b[1]) + pad < c[1].min(d[1])
        || c[1].max(d[1]) + pad < a[1].min(b[1])
}

/// Checks unit lengths, non-crossing, no vertex inside an edge, distinct
/// positions and, with `penny`, pairwise distance at least 1.
///
/// Exact when every vertex shares one lattice frame (`tol` is then ignored).
pub fn validate(g: &MatchstickGraph, tol: f64, penny: bool) -> ValidationReport {
    let violations = match g.lattice_points() {
        Some((_, pts)) => validate_lattice(g, &pts, penny),
        None => validate_free(g, tol, penny),
    };
    ValidationReport { ok: violations.is_empty(), violations }
}

fn validate_lattice(g: &MatchstickGraph, pts: &[EisensteinPoint], penny: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let id = |i: usize| g.id(i);
    let s: Vec<ScaledLatticeVector> = pts.iter().map(|p| p.scaled()).collect();

    for &(i, j) in &g.edges {
        let nrm = (pts[j] - pts[i]).norm();
        if nrm != 1 {
            out.push(Violation {
                kind: ViolationKind::NonUnitEdge,
                ids: vec![id(i), id(j)],
                value: (nrm as f64).sqrt(),
            });
        }
    }

    let mut by_point: BTreeMap<EisensteinPoint, Vec<usize>> = BTreeMap::new();
    for (i, &p) in pts.iter().enumerate() {
        by_point.entry(p).or_default().push(i);
    }
    for group in by_point.values().filter(|g| g.len() > 1) {
        for (k, &a) in group.iter().enumerate() {
            for &b in &group[k + 1..] {
                out.push(Violation {
                    kind: ViolationKind::DuplicateVertexPosition,
                    ids: vec![id(a), id(b)],
                    value: 0.0,
                });
                if penny {
                    out.push(Violation { kind: ViolationKind::PennyDistance, ids: vec![id(a), id(b)], value: 0.0 });
                }
            }
        }
    }

    let sign = |x: i64| x.signum();
    for (k, &(a, b)) in g.edges.iter().enumerate() {
        for &(c, d) in &g.edges[k + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let o1 = sign((s[b] - s[a]).cross(s[c] - s[a]));
            let o2 = sign((s[b] - s[a]).cross(s[d] - s[a]));
            let o3 = sign((s[d] - s[c]).cross(s[a] - s[c]));
            let o4 = sign((s[d] - s[c]).cross(s[b] - s[c]));
            let proper = o1 * o2 < 0 && o3 * o4 < 0;
            let overlap = o1 == 0 && o2 == 0 && {
                // collinear: project onto ab and test interval overlap of positive length
                let dir = s[b] - s[a];
                let len = dir.dot(dir);
                let tc = dir.dot(s[c] - s[a]);
                let td = dir.dot(s[d] - s[a]);
                tc.min(td) < len && tc.max(td) > 0
            };
            if proper || overlap {
                out.push(Violation {
                    kind: ViolationKind::Crossing,
                    ids: vec![id(a), id(b), id(c), id(d)],
                    value: 0.0,
                });
            }
        }
    }

    for &(a, b) in &g.edges {
        let dir = s[b] - s[a];
        let len = dir.dot(dir);
        for w in 0..pts.len() {
            if w == a || w == b {
                continue;
            }
            let rel = s[w] - s[a];
            if dir.cross(rel) == 0 {
                let t = dir.dot(rel);
                if t > 0 && t < len {
                    out.push(Violation {
                        kind: ViolationKind::VertexOnEdge,
                        ids: vec![id(w), id(a), id(b)],
                        value: 0.0,
                    });
                }
            }
        }
    }
    out
}

fn validate_free(g: &MatchstickGraph, tol: f64, penny: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let id = |i: usize| g.id(i);
    let p = g.positions();

    for &(i, j) in &g.edges {
        let len = dist(p[i], p[j]);
        if (len - 1.0).abs() > tol {
            out.push(Violation { kind: ViolationKind::NonUnitEdge, ids: vec![id(i), id(j)], value: len });
        }
    }

    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let d = dist(p[i], p[j]);
            if d <= tol {
                out.push(Violation { kind: ViolationKind::DuplicateVertexPosition, ids: vec![id(i), id(j)], value: d });
            }
            if penny && d < 1.0 - tol {
                out.push(Violation { kind: ViolationKind::PennyDistance, ids: vec![id(i), id(j)], value: d });
            }
        }
    }

    for (k, &(a, b)) in g.edges.iter().enumerate() {
        for &(c, d) in &g.edges[k + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if bbox_disjoint(p[a], p[b], p[c], p[d], tol) {
                continue;
            }
            let o1 = orient(p[a], p[b], p[c]);
            let o2 = orient(p[a], p[b], p[d]);
            let o3 = orient(p[c], p[d], p[a]);
            let o4 = orient(p[c], p[d], p[b]);
            let clear = |o: f64| o.abs() > tol;
            let proper = clear(o1) && clear(o2) && clear(o3) && clear(o4) && o1 * o2 < 0.0 && o3 * o4 < 0.0;
            let overlap = !clear(o1) && !clear(o2) && {
                let dir = [p[b][0] - p[a][0], p[b][1] - p[a][1]];
                let len = dir[0].hypot(dir[1]);
                let proj = |q: [f64; 2]| ((q[0] - p[a][0]) * dir[0] + (q[1] - p[a][1]) * dir[1]) / len;
                let (tc, td) = (proj(p[c]), proj(p[d]));
                tc.min(td) < len - tol && tc.max(td) > tol
            };
            if proper || overlap {
                out.push(Violation {
                    kind: ViolationKind::Crossing,
                    ids: vec![id(a), id(b), id(c), id(d)],
                    value: 0.0,
                });
            }
        }
    }

    for &(a, b) in &g.edges {
        let dir = [p[b][0] - p[a][0], p[b][1] - p[a][1]];
        let len = dir[0].hypot(dir[1]);
        if len <= tol {
            continue;
        }
        for w in 0..p.len() {
            if w == a || w == b {
                continue;
            }
            let rel = [p[w][0] - p[a][0], p[w][1] - p[a][1]];
            let t = (rel[0] * dir[0] + rel[1] * dir[1]) / len;
            let off = (dir[0] * rel[1] - dir[1] * rel[0]).abs() / len;
            if off <= tol && t > tol && t < len - tol {
                out.push(Violation { kind: ViolationKind::VertexOnEdge, ids: vec![id(w), id(a), id(b)], value: off });
            }
        }
    }
    out
}

/// A graph that passed [`validate`], with its rotation system precomputed.
#[derive(Debug, Clone)]
pub struct ValidGraph {
    graph: MatchstickGraph,
    penny: bool,
    tol: f64,
    lattice: Option<Vec<EisensteinPoint>>,
    positions: Vec<[f64; 2]>,
    /// Neighbour indices of each vertex in counterclockwise order.
    rotation: Vec<Vec<usize>>,
}

impl ValidGraph {
    pub fn new(graph: MatchstickGraph, tol: f64, penny: bool) -> Result<Self> {
        let report = validate(&graph, tol, penny);
        if !report.ok {
            return Err(Error::InvalidGraph(report.summary()));
        }
        Ok(Self::assume_valid(graph, tol, penny))
    }

    /// For graphs valid by construction, e.g. subgraphs of a validated graph.
    pub(crate) fn assume_valid(graph: MatchstickGraph, tol: f64, penny: bool) -> Self {
        let lattice = graph.lattice_points().map(|(_, pts)| pts);
        let positions = graph.positions();
        let mut rotation = graph.adjacency();
        for (v, nbrs) in rotation.iter_mut().enumerate() {
            match &lattice {
                Some(pts) => nbrs.sort_by_key(|&w| (pts[w] - pts[v]).direction_index().unwrap_or(usize::MAX)),
                None => {
                    let key = |w: usize| {
                        let d = [positions[w][0] - positions[v][0], positions[w][1] - positions[v][1]];
                        d[1].atan2(d[0]).rem_euclid(std::f64::consts::TAU)
                    };
                    nbrs.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
                }
            }
        }
        ValidGraph { graph, penny, tol, lattice, positions, rotation }
    }

    pub fn graph(&self) -> &MatchstickGraph {
        &self.graph
    }

    pub fn into_graph(self) -> MatchstickGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn e(&self) -> usize {
        self.graph.e()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_penny_checked(&self) -> bool {
        self.penny
    }

    pub fn lattice(&self) -> Option<&[EisensteinPoint]> {
        self.lattice.as_deref()
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// Shoelace sum over a closed walk of vertex indices. Exact sign in lattice mode.
    pub(crate) fn signed_area(&self, walk: &[usize]) -> f64 {
        if walk.len() < 3 {
            return 0.0;
        }
        match &self.lattice {
            Some(pts) => {
                let twice: i64 = (0..walk.len())
                    .map(|k| pts[walk[k]].scaled().cross(pts[walk[(k + 1) % walk.len()]].scaled()))
                    .sum();
                // cross of scaled vectors is 4/√3 times the cartesian cross
                twice as f64 * crate::lattice::SQRT3 / 8.0
            }
            None => {
                let p = &self.positions;
                let twice: f64 = (0..walk.len())
                    .map(|k| {
                        let a = p[walk[k]];
                        let b = p[walk[(k + 1) % walk.len()]];
                        a[0] * b[1] - a[1] * b[0]
                    })
                    .sum();
                twice / 2.0
            }
        }
    }
}

/// Neighbours of every vertex in counterclockwise order of edge direction.
pub fn rotation_system(g: &ValidGraph) -> BTreeMap<VertexId, Vec<VertexId>> {
    g.rotation
        .iter()
        .enumerate()
        .map(|(v, nbrs)| (g.graph.id(v), nbrs.iter().map(|&w| g.graph.id(w)).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceStructure {
    /// Each face as its closed dart walk, listed by vertex id.
    pub faces: Vec<Vec<VertexId>>,
    pub outer_face_index: usize,
    pub face_of_dart: BTreeMap<(VertexId, VertexId), usize>,
}

impl FaceStructure {
    pub fn outer(&self) -> &[VertexId] {
        &self.faces[self.outer_face_index]
    }

    pub fn inner(&self) -> impl Iterator<Item = &Vec<VertexId>> {
        let outer = self.outer_face_index;
        self.faces.iter().enumerate().filter(move |&(i, _)| i != outer).map(|(_, f)| f)
    }
}

/// Face walks as vertex-index lists plus the outer face index.
pub(crate) fn face_walks(g: &ValidGraph) -> Result<(Vec<Vec<usize>>, usize)> {
    if !connectivity(&g.graph).connected {
        return Err(Error::NotConnected);
    }
    let rot = &g.rotation;
    if g.e() == 0 {
        return Ok((vec![Vec::new()], 0));
    }
    let mut offset = Vec::with_capacity(rot.len() + 1);
    offset.push(0);
    for nbrs in rot {
        offset.push(offset.last().unwrap() + nbrs.len());
    }
    let head = |d: usize| -> (usize, usize) {
        let v = offset.partition_point(|&o| o <= d) - 1;
        (v, rot[v][d - offset[v]])
    };
    let position: HashMap<(usize, usize), usize> = (0..offset[rot.len()]).map(|d| (head(d), d)).collect();

    let ndarts = offset[rot.len()];
    let mut face_of = vec![usize::MAX; ndarts];
    let mut walks = Vec::new();
    for start in 0..ndarts {
        if face_of[start] != usize::MAX {
            continue;
        }
        let f = walks.len();
        let mut walk = Vec::new();
        let mut d = start;
        while face_of[d] == usize::MAX {
            face_of[d] = f;
            let (u, v) = head(d);
            walk.push(u);
            // next dart leaves v towards the neighbour just clockwise of u
            let j = position[&(v, u)] - offset[v];
            let deg = rot[v].len();
            d = offset[v] + (j + deg - 1) % deg;
        }
        walks.push(walk);
    }
    let outer = (0..walks.len())
        .min_by(|&a, &b| g.signed_area(&walks[a]).total_cmp(&g.signed_area(&walks[b])))
        .expect("at least one face");
    Ok((walks, outer))
}

/// All faces by the next-dart rule; inner faces come out counterclockwise and
/// the outer face, the one with negative signed area, clockwise.
pub fn faces(g: &ValidGraph) -> Result<FaceStructure> {
    let (walks, outer) = face_walks(g)?;
    let mut face_of_dart = BTreeMap::new();
    for (f, w) in walks.iter().enumerate() {
        for k in 0..w.len() {
            let u = g.graph.id(w[k]);
            let v = g.graph.id(w[(k + 1) % w.len()]);
            face_of_dart.insert((u, v), f);
        }
    }
    let faces = walks.iter().map(|w| w.iter().map(|&i| g.graph.id(i)).collect()).collect();
    Ok(FaceStructure { faces, outer_face_index: outer, face_of_dart })
}

/// Outer boundary cycle of a 2-connected graph as vertex indices,
/// counterclockwise, starting at the smallest index.
pub(crate) fn boundary_indices(g: &ValidGraph) -> Result<Vec<usize>> {
    if !connectivity(&g.graph).two_connected {
        return Err(Error::NotTwoConnected);
    }
    let (walks, outer) = face_walks(g)?;
    let mut cycle = walks[outer].clone();
    cycle.reverse();
    let start = cycle.iter().enumerate().min_by_key(|&(_, &v)| v).map(|(k, _)| k).unwrap_or(0);
    cycle.rotate_left(start);
    Ok(cycle)
}

/// The boundary cycle (counterclockwise, vertex ids) and its length.
pub fn boundary(g: &ValidGraph) -> Result<(Vec<VertexId>, usize)> {
    let cycle = boundary_indices(g)?;
    let b = cycle.len();
    Ok((cycle.into_iter().map(|i| g.graph.id(i)).collect(), b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    pub two_connected: bool,
    pub min_degree: usize,
    pub blocks: Vec<Block>,
}

/// Blocks as (vertex indices, edge index pairs), each sorted.
/// Vertex indices and edges of one block.
pub(crate) type IndexBlock = (Vec<usize>, Vec<(usize, usize)>);

pub(crate) fn block_indices(n: usize, adj: &[Vec<usize>]) -> Vec<IndexBlock> {
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (vertex, parent, next neighbour position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut it)) = stack.last_mut() {
            if *it < adj[v].len() {
                let w = adj[v][*it];
                *it += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut verts = Vec::new();
                        let mut edges = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            verts.push(e.0);
                            verts.push(e.1);
                            edges.push((e.0.min(e.1), e.0.max(e.1)));
                            if e == (u, v) {
                                break;
                            }
                        }
                        verts.sort_unstable();
                        verts.dedup();
                        edges.sort_unstable();
                        blocks.push((verts, edges));
                    }
                }
            }
        }
    }
    blocks.sort_by(|a, b| a.0[0].cmp(&b.0[0]).then_with(|| a.0.cmp(&b.0)));
    blocks
}

/// Connectivity, 2-connectivity, minimum degree and the block decomposition.
///
/// Blocks are edge-maximal 2-connected pieces (bridges form two-vertex
/// blocks), ordered by smallest vertex id. A graph is 2-connected when it has
/// at least 3 vertices and a single block.
pub fn connectivity(g: &MatchstickGraph) -> Connectivity {
    let n = g.n();
    let adj = g.adjacency();
    let min_degree = adj.iter().map(Vec::len).min().unwrap_or(0);

    let mut seen = vec![false; n];
    let mut components = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let connected = components <= 1;

    let raw = block_indices(n, &adj);
    let two_connected = connected && n >= 3 && raw.len() == 1;
    let mut blocks: Vec<Block> = raw
        .into_iter()
        .map(|(vs, es)| Block {
            vertices: {
                let mut ids: Vec<_> = vs.iter().map(|&i| g.id(i)).collect();
                ids.sort_unstable();
                ids
            },
            edges: {
                let mut ids: Vec<_> = es
                    .iter()
                    .map(|&(i, j)| {
                        let (a, b) = (g.id(i), g.id(j));
                        (a.min(b), a.max(b))
                    })
                    .collect();
                ids.sort_unstable();
                ids
            },
        })
        .collect();
    blocks.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Connectivity { connected, two_connected, min_degree, blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SQRT3;

    fn ep(m: i64, n: i64) -> EisensteinPoint {
        EisensteinPoint::new(m, n)
    }

    fn triangle() -> MatchstickGraph {
        MatchstickGraph::from_lattice_points(&[ep(0, 0), ep(1, 0), ep(0, 1)])
    }

    fn hexagon() -> MatchstickGraph {
        let mut pts = vec![ep(0, 0)];
        pts.extend(crate::lattice::UNIT_DIRECTIONS);
        MatchstickGraph::from_lattice_points(&pts)
    }

    #[test]
    fn structural_errors() {
        let v = |id| Vertex { id, coord: VertexCoord::Free { x: id as f64, y: 0.0 } };
        assert!(MatchstickGraph::new(vec![], vec![v(0), v(0)], &[]).is_err());
        assert!(MatchstickGraph::new(vec![], vec![v(0), v(1)], &[(0, 0)]).is_err());
        assert!(MatchstickGraph::new(vec![], vec![v(0), v(1)], &[(0, 1), (1, 0)]).is_err());
        assert!(MatchstickGraph::new(vec![], vec![v(0), v(1)], &[(0, 2)]).is_err());
        let lv = Vertex { id: 0, coord: VertexCoord::Lattice { frame: 3, point: ep(0, 0) } };
        assert!(MatchstickGraph::new(vec![], vec![lv], &[]).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&triangle(), DEFAULT_TOL, false).ok);
        let double = MatchstickGraph::from_lattice_points(&[ep(0, 0), ep(1, 0), ep(0, 1), ep(1, -1)]);
        assert_eq!(double.e(), 5);
        assert!(validate(&double, DEFAULT_TOL, true).ok);

        let k4 = MatchstickGraph::from_free(
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
        )
        .unwrap();
        let r = validate(&k4, DEFAULT_TOL, false);
        assert!(!r.ok);
        let crossing = r.violations.iter().find(|v| v.kind == ViolationKind::Crossing).unwrap();
        assert_eq!(crossing.ids, vec![0, 2, 1, 3]);
        let long: Vec<_> = r.violations.iter().filter(|v| v.kind == ViolationKind::NonUnitEdge).collect();
        assert_eq!(long.len(), 2);
        assert!((long[0].value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn validate_lattice_violations() {
        // vertex (1,0) sits in the middle of the length-2 edge (0,0)-(2,0)
        let pts = [ep(0, 0), ep(2, 0), ep(1, 0), ep(1, 1), ep(1, -1)];
        let vertices: Vec<_> = pts
            .iter()
            .enumerate()
            .map(|(id, &point)| Vertex { id, coord: VertexCoord::Lattice { frame: 0, point } })
            .collect();
        let g = MatchstickGraph::new(vec![LatticeFrame::default()], vertices.clone(), &[(0, 1), (3, 4)]).unwrap();
        let r = validate(&g, DEFAULT_TOL, false);
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::NonUnitEdge));
        assert!(kinds.contains(&ViolationKind::VertexOnEdge));
        assert!(kinds.contains(&ViolationKind::Crossing));

        let mut dup = vertices[..2].to_vec();
        dup[1].coord = VertexCoord::Lattice { frame: 0, point: ep(0, 0) };
        let g = MatchstickGraph::new(vec![LatticeFrame::default()], dup, &[]).unwrap();
        let r = validate(&g, DEFAULT_TOL, true);
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert_eq!(kinds, vec![ViolationKind::DuplicateVertexPosition, ViolationKind::PennyDistance]);
    }

    #[test]
    fn validate_free_vertex_on_edge_and_penny() {
        let g = MatchstickGraph::from_free(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.0]], &[(0, 1)]).unwrap();
        let r = validate(&g, DEFAULT_TOL, false);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::VertexOnEdge);
        assert_eq!(r.violations[0].ids, vec![2, 0, 1]);

        let g = MatchstickGraph::from_free(&[[0.0, 0.0], [0.9, 0.0]], &[]).unwrap();
        assert!(validate(&g, DEFAULT_TOL, false).ok);
        let r = validate(&g, DEFAULT_TOL, true);
        assert_eq!(r.violations[0].kind, ViolationKind::PennyDistance);
        assert!((r.violations[0].value - 0.9).abs() < 1e-12);
    }

    #[test]
    fn free_mode_accepts_rotated_lattice() {
        let h = hexagon();
        let f = LatticeFrame::new([0.25, -3.0], 0.4);
        let pts: Vec<[f64; 2]> = match h.lattice_points() {
            Some((_, p)) => p.iter().map(|&q| f.to_cartesian(q)).collect(),
            None => unreachable!(),
        };
        let edges: Vec<_> = h.edges().collect();
        let g = MatchstickGraph::from_free(&pts, &edges).unwrap();
        assert!(validate(&g, DEFAULT_TOL, true).ok);
    }

    #[test]
    fn rotation_examples() {
        let g = ValidGraph::new(hexagon(), DEFAULT_TOL, false).unwrap();
        let rot = rotation_system(&g);
        assert_eq!(rot[&0], vec![1, 2, 3, 4, 5, 6]);
        let g = ValidGraph::new(triangle(), DEFAULT_TOL, false).unwrap();
        assert_eq!(rotation_system(&g)[&0], vec![1, 2]);
        let path = MatchstickGraph::from_free(&[[0.0, 0.0], [1.0, 0.0]], &[(0, 1)]).unwrap();
        let g = ValidGraph::new(path, DEFAULT_TOL, false).unwrap();
        assert_eq!(rotation_system(&g)[&1], vec![0]);
    }

    #[test]
    fn rotation_free_matches_angles() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, SQRT3 / 2.0], [-1.0, 0.0]];
        let g = MatchstickGraph::from_free(&pts, &[(0, 3), (0, 2), (0, 1)]).unwrap();
        let g = ValidGraph::new(g, DEFAULT_TOL, false).unwrap();
        assert_eq!(rotation_system(&g)[&0], vec![1, 2, 3]);
    }

    #[test]
    fn faces_examples() {
        let g = ValidGraph::new(triangle(), DEFAULT_TOL, false).unwrap();
        let fs = faces(&g).unwrap();
        assert_eq!(fs.faces.len(), 2);
        assert_eq!(fs.outer().len(), 3);

        let g = ValidGraph::new(hexagon(), DEFAULT_TOL, false).unwrap();
        let fs = faces(&g).unwrap();
        assert_eq!(fs.faces.len(), 7);
        assert_eq!(fs.outer().len(), 6);
        assert!(fs.inner().all(|f| f.len() == 3));
        assert_eq!(7 - 12 + fs.faces.len() as i64, 2);
        assert_eq!(fs.face_of_dart.len(), 24);

        let double = MatchstickGraph::from_lattice_points(&[ep(0, 0), ep(1, 0), ep(0, 1), ep(1, -1)]);
        let g = ValidGraph::new(double, DEFAULT_TOL, false).unwrap();
        let fs = faces(&g).unwrap();
        assert_eq!(fs.faces.len(), 3);
        assert_eq!(fs.outer().len(), 4);
        assert_eq!(fs.inner().filter(|f| f.len() == 3).count(), 2);
    }

    #[test]
    fn faces_tree_and_single_vertex() {
        let path = MatchstickGraph::from_free(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], &[(0, 1), (1, 2)]).unwrap();
        let g = ValidGraph::new(path, DEFAULT_TOL, false).unwrap();
        let fs = faces(&g).unwrap();
        assert_eq!(fs.faces.len(), 1);
        assert_eq!(fs.outer().len(), 4);

        let single = MatchstickGraph::from_lattice_points(&[ep(0, 0)]);
        let g = ValidGraph::new(single, DEFAULT_TOL, false).unwrap();
        assert_eq!(faces(&g).unwrap().faces.len(), 1);

        let two = MatchstickGraph::from_lattice_points(&[ep(0, 0), ep(5, 0)]);
        let g = ValidGraph::new(two, DEFAULT_TOL, false).unwrap();
        assert!(matches!(faces(&g), Err(Error::NotConnected)));
    }

    #[test]
    fn boundary_examples() {
        let g = ValidGraph::new(triangle(), DEFAULT_TOL, false).unwrap();
        assert_eq!(boundary(&g).unwrap(), (vec![0, 1, 2], 3));
        let g = ValidGraph::new(hexagon(), DEFAULT_TOL, false).unwrap();
        assert_eq!(boundary(&g).unwrap(), (vec![1, 2, 3, 4, 5, 6], 6));
        let path = MatchstickGraph::from_free(&[[0.0, 0.0], [1.0, 0.0]], &[(0, 1)]).unwrap();
        let g = ValidGraph::new(path, DEFAULT_TOL, false).unwrap();
        assert!(matches!(boundary(&g), Err(Error::NotTwoConnected)));
    }

    #[test]
    fn connectivity_examples() {
        let c = connectivity(&triangle());
        assert!(c.connected && c.two_connected);
        assert_eq!(c.min_degree, 2);
        assert_eq!(c.blocks.len(), 1);
        assert_eq!(c.blocks[0].vertices, vec![0, 1, 2]);

        let bowtie = MatchstickGraph::from_lattice_points(&[ep(0, 0), ep(1, 0), ep(0, 1), ep(-1, 0), ep(0, -1)]);
        let c = connectivity(&bowtie);
        assert!(c.connected && !c.two_connected);
        assert_eq!(c.min_degree, 2);
        assert_eq!(c.blocks.len(), 2);
        assert_eq!(c.blocks[0].vertices, vec![0, 1, 2]);
        assert_eq!(c.blocks[1].vertices, vec![0, 3, 4]);

        let disjoint =
            MatchstickGraph::from_free(&[[0.0, 0.0], [1.0, 0.0], [5.0, 0.0], [6.0, 0.0]], &[(0, 1), (2, 3)]).unwrap();
        let c = connectivity(&disjoint);
        assert!(!c.connected && !c.two_connected);
        assert_eq!(c.min_degree, 1);
        assert_eq!(c.blocks.len(), 2);
    }
}
