//! Lattice constructions: filled hexagons, spiral prefixes meeting the edge
//! bound with equality, and seeded random lattice subgraphs for testing.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{connectivity, MatchstickGraph};
use crate::lattice::{harborth_bound, unit_neighbors, EisensteinPoint, UNIT_DIRECTIONS};

/// Points of hexagonal ring `k` in counterclockwise order.
///
/// Ring `k ≥ 1` starts one step past the corner `(k, -k)`, at `(k, 1 - k)`,
/// and ends on that corner. Ring 1 therefore starts at `(1, 0)`.
pub fn ring(k: i64) -> Vec<EisensteinPoint> {
    if k == 0 {
        return vec![EisensteinPoint::ORIGIN];
    }
    let mut pts = Vec::with_capacity(6 * k as usize);
    let mut p = EisensteinPoint::new(k, 0);
    // side i walks k steps along direction i + 2
    for side in 0..6 {
        let step = UNIT_DIRECTIONS[(side + 2) % 6];
        for _ in 0..k {
            pts.push(p);
            p = p + step;
        }
    }
    // the last side runs (k,-k) -> (k,0); start right after its corner
    let start = pts.iter().position(|&q| q == EisensteinPoint::new(k, 1 - k)).unwrap();
    pts.rotate_left(start);
    pts
}

/// The first `count` points of the spiral: origin, then ring 1, ring 2, ...
pub fn spiral_order(count: usize) -> Vec<EisensteinPoint> {
    let mut pts = Vec::with_capacity(count);
    let mut k = 0;
    while pts.len() < count {
        pts.extend(ring(k).into_iter().take(count - pts.len()));
        k += 1;
    }
    pts
}

/// All lattice points within `k` steps of the origin, with every unit edge.
pub fn build_hexagon_patch(k: u32) -> MatchstickGraph {
    let n = 3 * (k as usize).pow(2) + 3 * k as usize + 1;
    MatchstickGraph::from_lattice_points(&spiral_order(n))
}

/// An `n`-vertex lattice graph with exactly `harborth_bound(n)` edges.
pub fn build_extremal(n: usize) -> Result<MatchstickGraph> {
    if n < 1 {
        return Err(Error::Domain("build_extremal needs n >= 1".into()));
    }
    let bound = harborth_bound(n as u64)? as usize;
    let g = MatchstickGraph::from_lattice_points(&spiral_order(n));
    if g.e() == bound {
        return Ok(g);
    }
    eprintln!(
        "warning: spiral prefix of {n} points has {} edges, bound is {bound}; falling back to augmentation search",
        g.e()
    );
    let pts = augmentation_search(n, bound)?;
    Ok(MatchstickGraph::from_lattice_points(&pts))
}

fn edge_count(pts: &[EisensteinPoint]) -> usize {
    let set: HashSet<_> = pts.iter().copied().collect();
    pts.iter().map(|&p| unit_neighbors(p).iter().filter(|q| set.contains(q)).count()).sum::<usize>() / 2
}

/// Grows each spiral prefix one point at a time, trying every frontier point
/// that adds the most edges, depth first until `bound` is met.
fn augmentation_search(n: usize, bound: usize) -> Result<Vec<EisensteinPoint>> {
    fn grow(pts: &mut Vec<EisensteinPoint>, n: usize, bound: usize) -> bool {
        if pts.len() == n {
            return edge_count(pts) >= bound;
        }
        let set: HashSet<_> = pts.iter().copied().collect();
        let frontier: BTreeSet<_> = pts.iter().flat_map(|&p| unit_neighbors(p)).filter(|q| !set.contains(q)).collect();
        let gain = |q: &EisensteinPoint| unit_neighbors(*q).iter().filter(|r| set.contains(r)).count();
        let best = frontier.iter().map(gain).max().unwrap_or(0);
        for q in frontier.iter().filter(|q| gain(q) == best) {
            pts.push(*q);
            if grow(pts, n, bound) {
                return true;
            }
            pts.pop();
        }
        false
    }
    for start in (1..n).rev() {
        let mut pts = spiral_order(start);
        if grow(&mut pts, n, bound) {
            return Ok(pts);
        }
    }
    Err(Error::Inconsistent(format!("no lattice graph on {n} vertices with {bound} edges found")))
}

const RETRY_BUDGET: usize = 64;

/// A connected random lattice point set grown from the origin, with all unit edges.
///
/// Without `require_2connected` each step adds a uniformly chosen frontier
/// point. With it, growth starts from a unit triangle and only adds frontier
/// points touching at least two current points, which keeps the graph
/// 2-connected; the result is still checked and regrown on failure.
pub fn random_lattice_subgraph(n: usize, seed: u64, require_2connected: bool) -> Result<MatchstickGraph> {
    if require_2connected && n < 3 {
        return Err(Error::Domain("a 2-connected graph needs n >= 3".into()));
    }
    if n == 0 {
        return Err(Error::Domain("random_lattice_subgraph needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let pts = grow_random(n, &mut rng, require_2connected);
        let g = MatchstickGraph::from_lattice_points(&pts);
        if !require_2connected || connectivity(&g).two_connected {
            return Ok(g);
        }
    }
    Err(Error::RetriesExhausted(RETRY_BUDGET))
}

fn grow_random(n: usize, rng: &mut ChaCha8Rng, ears: bool) -> Vec<EisensteinPoint> {
    let mut pts = vec![EisensteinPoint::ORIGIN];
    if ears {
        let d = rng.gen_range(0..6);
        pts.push(UNIT_DIRECTIONS[d]);
        pts.push(UNIT_DIRECTIONS[(d + 1) % 6]);
    }
    pts.truncate(n);
    let mut set: HashSet<_> = pts.iter().copied().collect();
    let mut frontier: BTreeSet<EisensteinPoint> = BTreeSet::new();
    for &p in &pts {
        frontier.extend(unit_neighbors(p).into_iter().filter(|q| !set.contains(q)));
    }
    while pts.len() < n {
        let candidates: Vec<_> = if ears {
            frontier
                .iter()
                .copied()
                .filter(|&q| unit_neighbors(q).iter().filter(|r| set.contains(r)).count() >= 2)
                .collect()
        } else {
            frontier.iter().copied().collect()
        };
        let q = candidates[rng.gen_range(0..candidates.len())];
        frontier.remove(&q);
        set.insert(q);
        pts.push(q);
        frontier.extend(unit_neighbors(q).into_iter().filter(|r| !set.contains(r)));
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate, DEFAULT_TOL};

    #[test]
    fn rings_have_6k_points_at_distance_k() {
        for k in 1..8 {
            let r = ring(k);
            assert_eq!(r.len(), 6 * k as usize);
            assert!(r.iter().all(|p| p.hex_distance() == k));
            let distinct: HashSet<_> = r.iter().collect();
            assert_eq!(distinct.len(), r.len());
            for w in r.windows(2) {
                assert_eq!((w[1] - w[0]).norm(), 1);
            }
        }
        assert_eq!(ring(1)[0], EisensteinPoint::new(1, 0));
    }

    #[test]
    fn spiral_points_stay_close() {
        let pts = spiral_order(500);
        for (j, p) in pts.iter().enumerate() {
            assert!((p.norm() as f64).sqrt() <= (j as f64).sqrt().ceil() + 1.0, "j={j}");
        }
    }

    #[test]
    fn hexagon_patch_closed_forms() {
        assert_eq!(build_hexagon_patch(0).n(), 1);
        for k in 1..=5u32 {
            let g = build_hexagon_patch(k);
            let k = k as usize;
            assert_eq!(g.n(), 3 * k * k + 3 * k + 1);
            assert_eq!(g.e(), 9 * k * k + 3 * k);
        }
        assert_eq!(build_hexagon_patch(1).e(), 12);
        assert_eq!(build_hexagon_patch(2).e(), 42);
    }

    #[test]
    fn extremal_examples() {
        assert_eq!(build_extremal(2).unwrap().e(), 1);
        assert_eq!(build_extremal(5).unwrap().e(), 7);
        assert_eq!(build_extremal(7).unwrap(), build_hexagon_patch(1));
        assert!(build_extremal(0).is_err());
    }

    #[test]
    fn extremal_meets_bound_up_to_200() {
        let mut prev = 0;
        for n in 1..=200usize {
            let g = build_extremal(n).unwrap();
            assert!(validate(&g, DEFAULT_TOL, true).ok);
            let h = harborth_bound(n as u64).unwrap() as usize;
            assert_eq!(g.e(), h, "n={n}");
            if n > 1 {
                assert_eq!(g.e() - prev, h - harborth_bound(n as u64 - 1).unwrap() as usize);
            }
            prev = g.e();
        }
    }

    #[test]
    fn corner_start_spiral_would_miss_the_bound() {
        // starting ring 2 at the corner (2,0) adds a point with one neighbour
        let mut pts = spiral_order(7);
        pts.push(EisensteinPoint::new(2, 0));
        assert_eq!(edge_count(&pts), 13);
        assert_eq!(harborth_bound(8).unwrap(), 14);
    }

    #[test]
    fn augmentation_search_reaches_bound() {
        for n in [4, 8, 12] {
            let bound = harborth_bound(n as u64).unwrap() as usize;
            let pts = augmentation_search(n, bound).unwrap();
            assert_eq!(pts.len(), n);
            assert_eq!(edge_count(&pts), bound);
        }
    }

    #[test]
    fn random_subgraphs() {
        let g = random_lattice_subgraph(3, 9, true).unwrap();
        assert_eq!(g.e(), 3);
        let a = random_lattice_subgraph(20, 1, false).unwrap();
        let b = random_lattice_subgraph(20, 1, false).unwrap();
        assert_eq!(a, b);
        assert!(validate(&a, DEFAULT_TOL, true).ok);
        assert!(a.e() <= 44);
        assert!(connectivity(&a).connected);
        for seed in 0..30 {
            let g = random_lattice_subgraph(25, seed, true).unwrap();
            assert!(connectivity(&g).two_connected);
            assert_eq!(g.n(), 25);
        }
        assert!(random_lattice_subgraph(2, 0, true).is_err());
    }
}
