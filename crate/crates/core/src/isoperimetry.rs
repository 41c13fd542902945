//! Polygon measures and the two isoperimetric inequalities: the classic one
//! and the variant where sides parallel to a fixed regular hexagon are free.
//!
//! The hexagonal inequality is checked both directly and through its proof
//! chain: convex rearrangement, circumscribed hexagon, 120° corner triangles.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{face_census, HEX_SLACK};
use crate::components::{b_star, DecompositionReport};
use crate::error::{Error, Result};
use crate::graph::{boundary_indices, ValidGraph};
use crate::lattice::SQRT3;

pub const DEFAULT_ANGLE_TOL: f64 = 1e-9;
const MARGIN: f64 = 1e-9;

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn len(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

fn shoelace(pts: &[[f64; 2]]) -> f64 {
    let m = pts.len();
    (0..m).map(|i| cross(pts[i], pts[(i + 1) % m])).sum::<f64>() / 2.0
}

/// Closed-segment intersection, touching included. `eps` bounds orientations treated as zero.
fn segments_meet(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2], eps: f64) -> bool {
    let o = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        let v = cross(sub(q, p), sub(r, p));
        if v.abs() <= eps {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let within = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        r[0] >= p[0].min(q[0]) - eps.sqrt()
            && r[0] <= p[0].max(q[0]) + eps.sqrt()
            && r[1] >= p[1].min(q[1]) - eps.sqrt()
            && r[1] <= p[1].max(q[1]) + eps.sqrt()
    };
    let (o1, o2, o3, o4) = (o(a, b, c), o(a, b, d), o(c, d, a), o(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within(a, b, c))
        || (o2 == 0 && within(a, b, d))
        || (o3 == 0 && within(c, d, a))
        || (o4 == 0 && within(c, d, b))
}

fn extent(pts: &[[f64; 2]]) -> f64 {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    len(sub(hi, lo)).max(f64::MIN_POSITIVE)
}

/// Whether the closed polygon through `pts` is simple.
pub fn is_simple(pts: &[[f64; 2]]) -> bool {
    let m = pts.len();
    if m < 3 {
        return false;
    }
    let scale = extent(pts);
    let eps = 1e-12 * scale * scale;
    let edge = |i: usize| (pts[i], pts[(i + 1) % m]);
    for i in 0..m {
        let (a, b) = edge(i);
        let (_, c) = edge((i + 1) % m);
        if len(sub(b, a)) <= 1e-12 * scale {
            return false;
        }
        // consecutive edges may only share their common vertex
        if cross(sub(b, a), sub(c, b)).abs() <= eps && dot(sub(b, a), sub(c, b)) < 0.0 {
            return false;
        }
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (c, d) = edge(j);
            if segments_meet(a, b, c, d, eps) {
                return false;
            }
        }
    }
    true
}

/// A simple polygon, stored counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonJson", into = "PolygonJson")]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    vertices: Vec<[f64; 2]>,
}

impl TryFrom<PolygonJson> for Polygon {
    type Error = Error;
    fn try_from(p: PolygonJson) -> Result<Self> {
        Polygon::new(p.vertices)
    }
}

impl From<Polygon> for PolygonJson {
    fn from(p: Polygon) -> Self {
        PolygonJson { vertices: p.vertices }
    }
}

impl Polygon {
    /// Clockwise input is reversed.
    pub fn new(mut vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!("{} vertices, need at least 3", vertices.len())));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite coordinate".into()));
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidPolygon("not simple".into()));
        }
        let a = shoelace(&vertices);
        if a == 0.0 {
            return Err(Error::InvalidPolygon("zero area".into()));
        }
        if a < 0.0 {
            vertices[1..].reverse();
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge vectors; edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge_vectors(&self) -> Vec<[f64; 2]> {
        let m = self.len();
        (0..m).map(|i| sub(self.vertices[(i + 1) % m], self.vertices[i])).collect()
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_vectors().into_iter().map(len).sum()
    }

    pub fn is_convex(&self) -> bool {
        let e = self.edge_vectors();
        let s = extent(&self.vertices);
        let m = e.len();
        (0..m).all(|i| cross(e[i], e[(i + 1) % m]) >= -1e-12 * s * s)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|p| [p[0] * lambda, p[1] * lambda]).collect())
    }
}

pub fn area(p: &Polygon) -> f64 {
    p.area()
}

pub fn perimeter(p: &Polygon) -> f64 {
    p.perimeter()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicRecord {
    /// 4πA
    pub lhs: f64,
    /// b²
    pub rhs: f64,
    pub holds: bool,
    pub margin: f64,
}

fn classic_record(a: f64, b: f64) -> Result<ClassicRecord> {
    let (lhs, rhs) = (4.0 * PI * a, b * b);
    let rec = ClassicRecord { lhs, rhs, holds: lhs < rhs, margin: rhs - lhs };
    if !rec.holds {
        return Err(Error::Inconsistent(format!("4πA = {lhs} is not below b² = {rhs}")));
    }
    Ok(rec)
}

/// `4πA < b²`.
pub fn check_classic(p: &Polygon) -> Result<ClassicRecord> {
    classic_record(p.area(), p.perimeter())
}

/// The sides of a regular hexagon turned by `base_angle`: three undirected slopes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DirectionSet {
    pub base_angle: f64,
}

impl DirectionSet {
    pub fn new(base_angle: f64) -> Self {
        DirectionSet { base_angle }
    }

    /// Slopes in `[0, π)`.
    pub fn slope_classes(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| (self.base_angle + k as f64 * FRAC_PI_3).rem_euclid(PI))
    }

    /// Outward normal of side `k` of a hexagon with these sides, at `θ₀ + 30° + k·60°`.
    pub fn normal(&self, k: usize) -> [f64; 2] {
        let t = self.base_angle + FRAC_PI_6 + k as f64 * FRAC_PI_3;
        [t.cos(), t.sin()]
    }

    pub fn is_parallel(&self, v: [f64; 2], angle_tol: f64) -> bool {
        let s = v[1].atan2(v[0]).rem_euclid(PI);
        self.slope_classes().iter().any(|&c| {
            let d = (s - c).abs();
            d.min(PI - d) <= angle_tol
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitLengths {
    pub b_parallel: f64,
    pub b_star: f64,
}

pub fn hex_parallel_split(p: &Polygon, d: &DirectionSet, angle_tol: f64) -> SplitLengths {
    let (mut b_parallel, mut b_star) = (0.0, 0.0);
    for e in p.edge_vectors() {
        if d.is_parallel(e, angle_tol) {
            b_parallel += len(e);
        } else {
            b_star += len(e);
        }
    }
    SplitLengths { b_parallel, b_star }
}

/// The convex polygon with the same directed edge vectors, sorted by angle.
///
/// It starts at `p`'s first vertex with `p`'s first edge, so a convex input
/// comes back unchanged.
pub fn convexify_rearrangement(p: &Polygon) -> Polygon {
    let edges = p.edge_vectors();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    let angle = |v: [f64; 2]| v[1].atan2(v[0]);
    order.sort_by(|&i, &j| angle(edges[i]).total_cmp(&angle(edges[j])).then(i.cmp(&j)));
    let first = order.iter().position(|&i| i == 0).unwrap();
    order.rotate_left(first);
    let mut pts = Vec::with_capacity(edges.len());
    let mut cur = p.vertices[0];
    for &i in &order {
        pts.push(cur);
        cur = [cur[0] + edges[i][0], cur[1] + edges[i][1]];
    }
    Polygon::new(pts.clone()).unwrap_or(Polygon { vertices: pts })
}

/// A hexagon with sides parallel to a direction set, given by support offsets.
///
/// Side `k` lies on `⟨x, n_k⟩ = offsets[k]`; vertex `k` joins sides `k` and `k+1`.
/// Sides may have length zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hexagon {
    pub directions: DirectionSet,
    pub offsets: [f64; 6],
    pub vertices: [[f64; 2]; 6],
    pub sides: [f64; 6],
}

impl Hexagon {
    pub fn from_offsets(directions: DirectionSet, offsets: [f64; 6]) -> Self {
        let vertices = std::array::from_fn(|k| {
            let (a, b) = (directions.normal(k), directions.normal((k + 1) % 6));
            let (h, g) = (offsets[k], offsets[(k + 1) % 6]);
            let det = cross(a, b);
            [(h * b[1] - g * a[1]) / det, (a[0] * g - b[0] * h) / det]
        });
        let sides = std::array::from_fn(|k| {
            (2.0 * (offsets[(k + 5) % 6] + offsets[(k + 1) % 6] - offsets[k]) / SQRT3).max(0.0)
        });
        Hexagon { directions, offsets, vertices, sides }
    }

    pub fn perimeter(&self) -> f64 {
        self.sides.iter().sum()
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn contains(&self, q: [f64; 2], slack: f64) -> bool {
        (0..6).all(|k| dot(q, self.directions.normal(k)) <= self.offsets[k] + slack)
    }
}

/// Smallest hexagon with sides parallel to `d` containing the convex polygon `p`.
pub fn circumscribed_hexagon(p: &Polygon, d: &DirectionSet) -> Result<Hexagon> {
    if !p.is_convex() {
        return Err(Error::InvalidPolygon("circumscribed hexagon needs a convex polygon".into()));
    }
    let offsets = std::array::from_fn(|k| {
        let n = d.normal(k);
        p.vertices.iter().map(|&v| dot(v, n)).fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(Hexagon::from_offsets(*d, offsets))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexagonalRecord {
    /// 8√3·A
    pub lhs: f64,
    /// (b + (2/√3 − 1)·b_*)²
    pub rhs: f64,
    pub area: f64,
    pub b: f64,
    pub b_star: f64,
    pub holds: bool,
    pub margin: f64,
}

fn hexagonal_record(a: f64, b: f64, b_star: f64) -> Result<HexagonalRecord> {
    let lhs = 8.0 * SQRT3 * a;
    let rhs = (b + HEX_SLACK * b_star).powi(2);
    let margin = rhs - lhs;
    let holds = margin >= -MARGIN * rhs.max(1.0);
    if !holds {
        return Err(Error::Inconsistent(format!("8√3·A = {lhs} exceeds (b + c·b_*)² = {rhs}")));
    }
    Ok(HexagonalRecord { lhs, rhs, area: a, b, b_star, holds, margin })
}

/// `8√3·A ≤ (b + (2/√3 − 1)·b_*)²`.
pub fn check_hexagonal(p: &Polygon, d: &DirectionSet, angle_tol: f64) -> Result<HexagonalRecord> {
    let split = hex_parallel_split(p, d, angle_tol);
    hexagonal_record(p.area(), p.perimeter(), split.b_star)
}

/// `|pr| + |qr| ≤ (2/√3)·|pq|` for a triangle with a 120° angle at `r`.
pub fn obtuse_chord_bound(pq: f64, pr: f64, qr: f64) -> Result<bool> {
    if [pq, pr, qr].iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::Domain("side lengths must be finite and nonnegative".into()));
    }
    let law = pr * pr + qr * qr + pr * qr;
    if (pq * pq - law).abs() > 1e-9 * law.max(pq * pq).max(1.0) {
        return Err(Error::Domain(format!("not a 120° triangle: pq² = {}, pr² + qr² + pr·qr = {law}", pq * pq)));
    }
    Ok(pr + qr <= 2.0 / SQRT3 * pq + MARGIN)
}

/// `A(H) ≤ (√3/24)·b(H)²`.
pub fn hexagon_isoperimetric_check(h: &Hexagon) -> Result<bool> {
    let (a, bound) = (h.area(), SQRT3 / 24.0 * h.perimeter().powi(2));
    if a > bound + MARGIN * bound.max(1.0) {
        return Err(Error::Inconsistent(format!("hexagon area {a} exceeds √3/24·b(H)² = {bound}")));
    }
    Ok(true)
}

/// Corner `k` of the circumscribed hexagon, between the last contact `q`
/// on side `k` and the first contact `p` on side `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerTriangle {
    pub corner: usize,
    pub q_r: f64,
    pub r_p: f64,
    pub chord: f64,
    /// Length of the polygon path from `q` to `p`.
    pub path: f64,
    pub chord_bound: bool,
}

/// Every quantity in the proof of the hexagonal inequality, step by step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexagonalChain {
    pub area: f64,
    pub area_convex: f64,
    pub area_hexagon: f64,
    /// √3/24·b(H)²
    pub hexagon_bound: f64,
    /// √3/24·(b + c·b_*)²
    pub final_bound: f64,
    pub b: f64,
    pub b_star: f64,
    pub b_hexagon: f64,
    /// Σ over corners of the path lengths; matches b_* up to classification tolerance.
    pub path_total: f64,
    pub hexagon: Hexagon,
    pub corners: Vec<CornerTriangle>,
    pub holds: bool,
}

/// The contact run of `pts` on the support line with normal `n`: first and last index, counterclockwise.
fn contact_run(pts: &[[f64; 2]], n: [f64; 2], h: f64, eps: f64) -> (usize, usize) {
    let m = pts.len();
    let on = |i: usize| dot(pts[i % m], n) >= h - eps;
    let top = (0..m).max_by(|&i, &j| dot(pts[i], n).total_cmp(&dot(pts[j], n))).unwrap();
    let (mut p, mut q) = (top, top);
    for _ in 0..m {
        if !on(p + m - 1) {
            break;
        }
        p = (p + m - 1) % m;
    }
    for _ in 0..m {
        if !on(q + 1) {
            break;
        }
        q = (q + 1) % m;
    }
    (p, q)
}

pub fn hexagonal_chain(p: &Polygon, d: &DirectionSet, angle_tol: f64) -> Result<HexagonalChain> {
    let convex = convexify_rearrangement(p);
    let hexagon = circumscribed_hexagon(&convex, d)?;
    let pts = convex.vertices();
    let m = pts.len();
    let eps = 1e-10 * extent(pts);
    let runs: Vec<(usize, usize)> = (0..6).map(|k| contact_run(pts, d.normal(k), hexagon.offsets[k], eps)).collect();
    let edge_len: Vec<f64> = convex.edge_vectors().into_iter().map(len).collect();
    let mut corners = Vec::with_capacity(6);
    for k in 0..6 {
        let (qi, pi) = (runs[k].1, runs[(k + 1) % 6].0);
        let r = hexagon.vertices[k];
        let (q, pp) = (pts[qi], pts[pi]);
        let (q_r, r_p, chord) = (len(sub(r, q)), len(sub(pp, r)), len(sub(pp, q)));
        let mut path = 0.0;
        let mut i = qi;
        while i != pi {
            path += edge_len[i];
            i = (i + 1) % m;
        }
        let chord_bound = obtuse_chord_bound(chord, q_r, r_p)?;
        corners.push(CornerTriangle { corner: k, q_r, r_p, chord, path, chord_bound });
    }
    let b = p.perimeter();
    let b_star = hex_parallel_split(p, d, angle_tol).b_star;
    let b_hexagon = hexagon.perimeter();
    let (area, area_convex, area_hexagon) = (p.area(), convex.area(), hexagon.area());
    let hexagon_bound = SQRT3 / 24.0 * b_hexagon.powi(2);
    let final_bound = SQRT3 / 24.0 * (b + HEX_SLACK * b_star).powi(2);
    let path_total = corners.iter().map(|c| c.path).sum();
    let tol = |x: f64| MARGIN * x.abs().max(1.0);
    let holds = area <= area_convex + tol(area_convex)
        && area_convex <= area_hexagon + tol(area_hexagon)
        && hexagon_isoperimetric_check(&hexagon)?
        && b_hexagon <= b + HEX_SLACK * b_star + tol(b)
        && hexagon_bound <= final_bound + tol(final_bound)
        && corners.iter().all(|c| c.chord_bound && c.chord <= c.path + tol(c.path));
    Ok(HexagonalChain {
        area,
        area_convex,
        area_hexagon,
        hexagon_bound,
        final_bound,
        b,
        b_star,
        b_hexagon,
        path_total,
        hexagon,
        corners,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub n: usize,
    pub e: usize,
    pub b: usize,
    pub area: f64,
    pub f3: usize,
    /// (√3/4)·f_3
    pub triangle_area: f64,
    pub theta0: f64,
    /// Boundary edges off the largest lattice component's boundary.
    pub b_star: usize,
    /// Boundary length not parallel to the largest component's lattice.
    pub b_star_geometric: f64,
    pub classic: ClassicRecord,
    pub hexagonal: HexagonalRecord,
}

/// Area, classic and hexagonal inequalities for the boundary polygon of a 2-connected graph.
///
/// θ₀ is the frame angle of the largest lattice component. Without any
/// component, θ₀ = 0 and every boundary edge counts towards b_*.
pub fn graph_isoperimetric_audit(g: &ValidGraph, report: &DecompositionReport) -> Result<AuditRecord> {
    let cycle = boundary_indices(g)?;
    let pos = g.positions();
    let poly_pts: Vec<[f64; 2]> = cycle.iter().map(|&i| pos[i]).collect();
    let b = cycle.len();
    let area = g.signed_area(&cycle).abs();
    let census = face_census(g)?;
    let triangle_area = SQRT3 / 4.0 * census.f3 as f64;
    if area < triangle_area - MARGIN * triangle_area.max(1.0) {
        return Err(Error::Inconsistent(format!("boundary area {area} below (√3/4)·f_3 = {triangle_area}")));
    }
    let (theta0, bs) = match report.components.first() {
        Some(c) => (c.frame.angle, b_star(g, report)?),
        None => (0.0, b),
    };
    let d = DirectionSet::new(theta0);
    let b_star_geometric = if g.lattice().is_some() {
        // one frame: every boundary edge is a lattice unit vector
        0.0
    } else {
        let m = poly_pts.len();
        (0..m)
            .map(|i| sub(poly_pts[(i + 1) % m], poly_pts[i]))
            .filter(|&v| !d.is_parallel(v, DEFAULT_ANGLE_TOL))
            .map(len)
            .sum()
    };
    Ok(AuditRecord {
        n: g.n(),
        e: g.e(),
        b,
        area,
        f3: census.f3,
        triangle_area,
        theta0,
        b_star: bs,
        b_star_geometric,
        classic: classic_record(area, b as f64)?,
        hexagonal: hexagonal_record(area, b as f64, bs as f64)?,
    })
}

/// Random simple polygon on `k` uniform points of the unit square, by space partitioning.
pub fn random_simple_polygon<R: Rng>(rng: &mut R, k: usize) -> Result<Polygon> {
    if k < 3 {
        return Err(Error::Domain("a polygon needs at least 3 vertices".into()));
    }
    for _ in 0..64 {
        let pts: Vec<[f64; 2]> = (0..k).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let (s, t) = (pts[i], pts[j]);
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (idx, &p) in pts.iter().enumerate() {
            if idx == i || idx == j {
                continue;
            }
            if cross(sub(t, s), sub(p, s)) > 0.0 {
                left.push(p);
            } else {
                right.push(p);
            }
        }
        let mut cycle = vec![s];
        cycle.extend(partition_chain(rng, s, t, right));
        cycle.push(t);
        cycle.extend(partition_chain(rng, t, s, left));
        if let Ok(p) = Polygon::new(cycle) {
            return Ok(p);
        }
    }
    Err(Error::RetriesExhausted(64))
}

/// Orders `pts` into a simple chain from `f` to `l` (endpoints excluded).
fn partition_chain<R: Rng>(rng: &mut R, f: [f64; 2], l: [f64; 2], pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    if pts.len() <= 1 {
        return pts;
    }
    let r = pts[rng.gen_range(0..pts.len())];
    let t: f64 = rng.gen();
    let s = [f[0] + t * (l[0] - f[0]), f[1] + t * (l[1] - f[1])];
    let side_f = cross(sub(s, r), sub(f, r)) > 0.0;
    let (mut near_f, mut near_l) = (Vec::new(), Vec::new());
    for p in pts {
        if p == r {
            continue;
        }
        if (cross(sub(s, r), sub(p, r)) > 0.0) == side_f {
            near_f.push(p);
        } else {
            near_l.push(p);
        }
    }
    let mut out = partition_chain(rng, f, r, near_f);
    out.push(r);
    out.extend(partition_chain(rng, r, l, near_l));
    out
}

/// `count` seeded random simple polygons with 3 to `max_vertices` vertices.
pub fn random_polygon_corpus(seed: u64, count: usize, max_vertices: usize) -> Result<Vec<Polygon>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(3..=max_vertices.max(3));
            random_simple_polygon(&mut rng, k)
        })
        .collect()
}
