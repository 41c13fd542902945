//! Exhaustive searches used as ground truth: maximum edge counts over small
//! lattice point sets, and maximum-area rearrangements of small polygons.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isoperimetry::{is_simple, Polygon};
use crate::lattice::{complete_unit_pair, unit_neighbors, EisensteinPoint, LatticeFrame, UNIT_DIRECTIONS};

pub const MAX_LATTICE_N: usize = 12;
pub const MAX_REARRANGEMENT_EDGES: usize = 8;

/// A lattice point set up to translation, rotation and reflection.
///
/// Stored as the lexicographically smallest sorted image among the twelve
/// symmetries, translated so its smallest point is the origin.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalPointSet {
    pub points: Vec<EisensteinPoint>,
}

impl CanonicalPointSet {
    pub fn new(points: &[EisensteinPoint]) -> Self {
        let mut best: Option<Vec<EisensteinPoint>> = None;
        let mut img: Vec<EisensteinPoint> = points.to_vec();
        for reflect in [false, true] {
            if reflect {
                img = points.iter().map(|p| p.reflect()).collect();
            }
            for _ in 0..6 {
                img = img.iter().map(|p| p.rotate60()).collect();
                let cand = normalized(&img);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        CanonicalPointSet { points: best.unwrap_or_default() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn normalized(points: &[EisensteinPoint]) -> Vec<EisensteinPoint> {
    let mut v = points.to_vec();
    v.sort();
    v.dedup();
    if let Some(&first) = v.first() {
        for p in &mut v {
            *p = *p - first;
        }
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxEdges {
    pub n: usize,
    pub max_e: usize,
    pub witness: CanonicalPointSet,
    /// Number of connected point sets visited, counted up to translation.
    pub animals: u64,
}

/// Occupancy grid for points with `0 ≤ n < size` and `|m| < size`.
#[derive(Clone)]
struct Grid {
    size: i64,
    cells: Vec<u8>,
}

const IN_SET: u8 = 1;
const SEEN: u8 = 2;

impl Grid {
    fn new(size: usize) -> Self {
        let size = size as i64;
        Grid { size, cells: vec![0; ((2 * size + 1) * (size + 1)) as usize] }
    }

    fn slot(&self, p: EisensteinPoint) -> Option<usize> {
        let (m, n) = (p.m + self.size, p.n);
        (n >= 0 && n <= self.size && (0..=2 * self.size).contains(&m)).then(|| (n * (2 * self.size + 1) + m) as usize)
    }

    fn get(&self, p: EisensteinPoint) -> u8 {
        self.slot(p).map_or(0, |s| self.cells[s])
    }

    fn set(&mut self, p: EisensteinPoint, flag: u8, on: bool) {
        if let Some(s) = self.slot(p) {
            if on {
                self.cells[s] |= flag;
            } else {
                self.cells[s] &= !flag;
            }
        }
    }
}

/// Points after the anchor in the enumeration order; the anchor is the smallest point.
fn after_anchor(p: EisensteinPoint) -> bool {
    p.n > 0 || (p.n == 0 && p.m > 0)
}

#[derive(Clone)]
struct State {
    grid: Grid,
    cells: Vec<EisensteinPoint>,
    untried: Vec<EisensteinPoint>,
    edges: usize,
}

#[derive(Default)]
struct Best {
    max_e: usize,
    witness: Option<CanonicalPointSet>,
    animals: u64,
}

impl Best {
    fn offer(&mut self, e: usize, cells: &[EisensteinPoint]) {
        self.animals += 1;
        if e < self.max_e && self.witness.is_some() {
            return;
        }
        let c = CanonicalPointSet::new(cells);
        if self.witness.is_none() || e > self.max_e || Some(&c) < self.witness.as_ref() {
            self.max_e = e;
            self.witness = Some(c);
        }
    }

    fn merge(mut self, o: Best) -> Best {
        let animals = self.animals + o.animals;
        if let Some(w) = o.witness {
            if self.witness.is_none()
                || o.max_e > self.max_e
                || (o.max_e == self.max_e && Some(&w) < self.witness.as_ref())
            {
                self.max_e = o.max_e;
                self.witness = Some(w);
            }
        }
        self.animals = animals;
        self
    }
}

/// Redelmeier growth. With `split = Some(d)`, states of size `d` are collected instead of expanded.
fn grow(st: &mut State, n: usize, split: Option<usize>, best: &mut Best, out: &mut Vec<State>) {
    if split == Some(st.cells.len()) {
        out.push(st.clone());
        return;
    }
    while let Some(c) = st.untried.pop() {
        let gain = unit_neighbors(c).iter().filter(|&&q| st.grid.get(q) & IN_SET != 0).count();
        st.grid.set(c, IN_SET, true);
        st.cells.push(c);
        st.edges += gain;
        if st.cells.len() == n {
            best.offer(st.edges, &st.cells);
        } else {
            let fresh: Vec<EisensteinPoint> =
                unit_neighbors(c).into_iter().filter(|&q| after_anchor(q) && st.grid.get(q) & SEEN == 0).collect();
            for &q in &fresh {
                st.grid.set(q, SEEN, true);
            }
            let saved = st.untried.clone();
            st.untried.extend(fresh.iter().copied());
            grow(st, n, split, best, out);
            st.untried = saved;
            for &q in &fresh {
                st.grid.set(q, SEEN, false);
            }
        }
        st.edges -= gain;
        st.cells.pop();
        st.grid.set(c, IN_SET, false);
    }
}

/// Exact maximum number of unit edges over connected `n`-point lattice sets.
///
/// Enumerates every connected set once up to translation. The work is split
/// into independent subtrees after a few levels and run on the rayon pool;
/// the result does not depend on the thread count.
pub fn max_edges_lattice(n: usize) -> Result<MaxEdges> {
    if n < 1 {
        return Err(Error::Domain("max_edges_lattice needs n >= 1".into()));
    }
    if n > MAX_LATTICE_N {
        return Err(Error::Budget(format!("max_edges_lattice is limited to n <= {MAX_LATTICE_N}, got {n}")));
    }
    let origin = EisensteinPoint::ORIGIN;
    let mut grid = Grid::new(n);
    grid.set(origin, IN_SET | SEEN, true);
    let untried: Vec<EisensteinPoint> = UNIT_DIRECTIONS.into_iter().filter(|&q| after_anchor(q)).collect();
    for &q in &untried {
        grid.set(q, SEEN, true);
    }
    let mut root = State { grid, cells: vec![origin], untried, edges: 0 };
    let mut best = Best::default();
    if n == 1 {
        best.offer(0, &root.cells);
    } else {
        let split = n.min(4);
        let mut tasks = Vec::new();
        grow(&mut root, n, Some(split), &mut best, &mut tasks);
        best = tasks
            .into_par_iter()
            .map(|mut st| {
                let mut b = Best::default();
                if st.cells.len() == n {
                    b.offer(st.edges, &st.cells);
                } else {
                    grow(&mut st, n, None, &mut b, &mut Vec::new());
                }
                b
            })
            .reduce(Best::default, Best::merge)
            .merge(best);
    }
    Ok(MaxEdges {
        n,
        max_e: best.max_e,
        witness: best.witness.unwrap_or_else(|| CanonicalPointSet { points: vec![] }),
        animals: best.animals,
    })
}

/// Largest area over all orders of `p`'s directed edge vectors that close into a simple polygon.
pub fn max_area_rearrangement(p: &Polygon) -> Result<f64> {
    let edges = p.edge_vectors();
    let m = edges.len();
    if m > MAX_REARRANGEMENT_EDGES {
        return Err(Error::Budget(format!(
            "max_area_rearrangement is limited to {MAX_REARRANGEMENT_EDGES} edges, got {m}"
        )));
    }
    // cyclic shifts give translates, so the first edge stays put
    let mut best = f64::NEG_INFINITY;
    let mut pts = vec![[0.0; 2]; m];
    for perm in (1..m).permutations(m - 1) {
        let mut cur = edges[0];
        pts[1] = cur;
        for (k, &i) in perm.iter().enumerate().take(m - 2) {
            cur = [cur[0] + edges[i][0], cur[1] + edges[i][1]];
            pts[k + 2] = cur;
        }
        if !is_simple(&pts) {
            continue;
        }
        let a = (0..m).map(|i| pts[i][0] * pts[(i + 1) % m][1] - pts[i][1] * pts[(i + 1) % m][0]).sum::<f64>() / 2.0;
        best = best.max(a);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub points_matched: usize,
}

/// Intersections of the unit circles around two points, analytically.
pub fn unit_circle_intersections(a: [f64; 2], b: [f64; 2]) -> Vec<[f64; 2]> {
    let d = [b[0] - a[0], b[1] - a[1]];
    let dist2 = d[0] * d[0] + d[1] * d[1];
    if dist2 == 0.0 || dist2 > 4.0 {
        return vec![];
    }
    let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let h = (1.0 - dist2 / 4.0).max(0.0).sqrt() / dist2.sqrt();
    let perp = [-d[1] * h, d[0] * h];
    if h == 0.0 {
        return vec![mid];
    }
    vec![[mid[0] + perp[0], mid[1] + perp[1]], [mid[0] - perp[0], mid[1] - perp[1]]]
}

/// Random lattice pairs closer than 2, in random frames: every plane point at
/// unit distance from both must be one of the lattice points found exactly.
pub fn lemma5_fuzz(trials: usize, seed: u64) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps: Vec<EisensteinPoint> = (-2..=2)
        .flat_map(|m| (-2..=2).map(move |n| EisensteinPoint::new(m, n)))
        .filter(|d| (1..4).contains(&d.norm()))
        .collect();
    let mut matched = 0;
    for _ in 0..trials {
        let frame = LatticeFrame::new(
            [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)],
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let a = EisensteinPoint::new(rng.gen_range(-100..=100), rng.gen_range(-100..=100));
        let b = a + steps[rng.gen_range(0..steps.len())];
        let lattice: Vec<[f64; 2]> = complete_unit_pair(a, b)?.into_iter().map(|c| frame.to_cartesian(c)).collect();
        let plane = unit_circle_intersections(frame.to_cartesian(a), frame.to_cartesian(b));
        let fail = || Error::Inconsistent(format!("unit circles around {a:?} and {b:?} meet off the lattice"));
        if plane.len() != lattice.len() {
            return Err(fail());
        }
        for q in plane {
            if !lattice.iter().any(|c| (c[0] - q[0]).hypot(c[1] - q[1]) < 1e-9) {
                return Err(fail());
            }
            matched += 1;
        }
    }
    Ok(FuzzReport { trials, points_matched: matched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::build_hexagon_patch;
    use crate::isoperimetry::convexify_rearrangement;
    use crate::lattice::harborth_bound;

    #[test]
    fn canonical_form_is_symmetric() {
        let pts = [
            EisensteinPoint::new(0, 0),
            EisensteinPoint::new(1, 0),
            EisensteinPoint::new(1, 1),
            EisensteinPoint::new(3, -1),
        ];
        let c = CanonicalPointSet::new(&pts);
        let mut img = pts.to_vec();
        for _ in 0..6 {
            img = img.iter().map(|p| p.rotate60() + EisensteinPoint::new(5, -2)).collect();
            assert_eq!(CanonicalPointSet::new(&img), c);
            let refl: Vec<_> = img.iter().map(|p| p.reflect()).collect();
            assert_eq!(CanonicalPointSet::new(&refl), c);
        }
        assert_eq!(c.points[0], EisensteinPoint::ORIGIN);
    }

    #[test]
    fn animal_counts_match_fixed_polyhexes() {
        // fixed site animals on the triangular lattice
        let known = [1u64, 3, 11, 44, 186, 814, 3652];
        for (i, &k) in known.iter().enumerate() {
            assert_eq!(max_edges_lattice(i + 1).unwrap().animals, k, "n={}", i + 1);
        }
    }

    #[test]
    fn small_maxima() {
        assert_eq!(max_edges_lattice(1).unwrap().max_e, 0);
        assert_eq!(max_edges_lattice(3).unwrap().max_e, 3);
        assert_eq!(max_edges_lattice(4).unwrap().max_e, 5);
        let r = max_edges_lattice(7).unwrap();
        assert_eq!(r.max_e, 12);
        assert_eq!(r.witness, CanonicalPointSet::new(build_hexagon_patch(1).lattice_points().unwrap().1.as_slice()));
        for n in 1..=8 {
            assert_eq!(max_edges_lattice(n).unwrap().max_e as u64, harborth_bound(n as u64).unwrap());
        }
        assert!(matches!(max_edges_lattice(13), Err(Error::Budget(_))));
    }

    #[test]
    fn rearrangements() {
        let l = Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap();
        assert!((max_area_rearrangement(&l).unwrap() - 4.0).abs() < 1e-9);
        assert!((max_area_rearrangement(&convexify_rearrangement(&l)).unwrap() - 4.0).abs() < 1e-9);
        let sq = Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!((max_area_rearrangement(&sq).unwrap() - 1.0).abs() < 1e-9);
        let big = Polygon::new(
            (0..9)
                .map(|i| {
                    let t = i as f64 * std::f64::consts::TAU / 9.0;
                    [t.cos(), t.sin()]
                })
                .collect(),
        )
        .unwrap();
        assert!(matches!(max_area_rearrangement(&big), Err(Error::Budget(_))));
    }

    #[test]
    fn circle_intersections() {
        let s = 3f64.sqrt() / 2.0;
        let mut got = unit_circle_intersections([0.0, 0.0], [1.0, 0.0]);
        got.sort_by(|a, b| a[1].total_cmp(&b[1]));
        assert!((got[0][0] - 0.5).abs() < 1e-12 && (got[0][1] + s).abs() < 1e-12);
        assert!((got[1][1] - s).abs() < 1e-12);
        assert_eq!(unit_circle_intersections([0.0, 0.0], [2.0, 0.0]), vec![[1.0, 0.0]]);
        assert!(unit_circle_intersections([0.0, 0.0], [3.0, 0.0]).is_empty());
    }

    #[test]
    fn fuzz_passes() {
        let r = lemma5_fuzz(2000, 42).unwrap();
        assert_eq!(r.points_matched, 4000);
    }
}
