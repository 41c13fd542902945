use std::collections::BTreeMap;

use proptest::prelude::*;

use matchstick_core::combinatorics::face_census;
use matchstick_core::components::decompose;
use matchstick_core::extremal::random_lattice_subgraph;
use matchstick_core::graph::{faces, MatchstickGraph, ValidGraph, Vertex, VertexCoord, DEFAULT_TOL};
use matchstick_core::isoperimetry::{
    circumscribed_hexagon, convexify_rearrangement, hex_parallel_split, random_simple_polygon, DirectionSet, Polygon,
};
use matchstick_core::lattice::{phi, unit_neighbors, EisensteinPoint, LatticeFrame};
use matchstick_core::oracle::CanonicalPointSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = EisensteinPoint> {
    (-1000i64..1000, -1000i64..1000).prop_map(|(m, n)| EisensteinPoint::new(m, n))
}

fn polygon() -> impl Strategy<Value = Polygon> {
    (any::<u64>(), 3usize..14)
        .prop_map(|(seed, k)| random_simple_polygon(&mut ChaCha8Rng::seed_from_u64(seed), k).unwrap())
}

fn sorted_edges(p: &Polygon) -> Vec<[f64; 2]> {
    let mut e = p.edge_vectors();
    e.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    e
}

proptest! {
    #[test]
    fn norm_is_squared_distance(p in point(), q in point(), angle in 0.0..6.3f64) {
        let frame = LatticeFrame::new([0.5, -2.0], angle);
        let (a, b) = (frame.to_cartesian(p), frame.to_cartesian(q));
        let d2 = (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
        let exact = (q - p).norm() as f64;
        prop_assert!((d2 - exact).abs() <= 1e-12 * exact.max(1.0) * 10.0);
    }

    #[test]
    fn neighbours_closed_under_rotation(p in point()) {
        let nb = unit_neighbors(p);
        for q in nb {
            prop_assert_eq!((q - p).norm(), 1);
            prop_assert!(nb.contains(&((q - p).rotate60() + p)));
        }
    }

    #[test]
    fn phi_square_identity(x in 1.0..1e6f64) {
        let s = (12.0 * x - 3.0).sqrt();
        let lhs = phi(x).unwrap().powi(2) / 6.0;
        prop_assert!((lhs - (2.0 * x + 1.0 - s)).abs() < 1e-9 * x.max(1.0));
    }

    #[test]
    fn faces_ignore_insertion_order(seed in 0u64..500, n in 3usize..30, rot in 0usize..100) {
        let g = random_lattice_subgraph(n, seed, true).unwrap();
        let census = face_census(&ValidGraph::new(g.clone(), DEFAULT_TOL, false).unwrap()).unwrap();
        let mut verts: Vec<Vertex> = g.vertices().to_vec();
        verts.reverse();
        let k = verts.len();
        verts.rotate_left(rot % k);
        let mut edges: Vec<(usize, usize)> = g.edges().map(|(a, b)| (b, a)).collect();
        edges.reverse();
        let h = MatchstickGraph::new(g.frames().to_vec(), verts, &edges).unwrap();
        let vh = ValidGraph::new(h, DEFAULT_TOL, false).unwrap();
        prop_assert_eq!(face_census(&vh).unwrap(), census);
        let mut a: Vec<Vec<usize>> = faces(&vh).unwrap().faces.into_iter().map(canonical_cycle).collect();
        let vg = ValidGraph::new(g, DEFAULT_TOL, false).unwrap();
        let mut b: Vec<Vec<usize>> = faces(&vg).unwrap().faces.into_iter().map(canonical_cycle).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn free_mode_matches_lattice_mode(seed in 0u64..200, n in 3usize..25, angle in 0.0..1.0f64) {
        let g = random_lattice_subgraph(n, seed, true).unwrap();
        let frame = LatticeFrame::new([0.3, 0.7], angle);
        let verts: Vec<Vertex> = g.vertices().iter().map(|v| match v.coord {
            VertexCoord::Lattice { point, .. } => {
                let [x, y] = frame.to_cartesian(point);
                Vertex { id: v.id, coord: VertexCoord::Free { x, y } }
            }
            free => Vertex { id: v.id, coord: free },
        }).collect();
        let edges: Vec<_> = g.edges().collect();
        let h = MatchstickGraph::new(vec![], verts, &edges).unwrap();
        let (vg, vh) = (ValidGraph::new(g, DEFAULT_TOL, true).unwrap(), ValidGraph::new(h, DEFAULT_TOL, true).unwrap());
        prop_assert_eq!(face_census(&vg).unwrap(), face_census(&vh).unwrap());
        let (dg, dh) = (decompose(&vg).unwrap(), decompose(&vh).unwrap());
        prop_assert_eq!(dg.components.len(), dh.components.len());
        prop_assert_eq!(dg.components[0].n, dh.components[0].n);
        prop_assert_eq!(dg.b_star, dh.b_star);
    }

    #[test]
    fn convexify_keeps_edges_and_grows(p in polygon(), theta in 0.0..3.2f64) {
        let c = convexify_rearrangement(&p);
        // vertices are accumulated sums, so edges come back to within rounding
        for (a, b) in sorted_edges(&c).iter().zip(sorted_edges(&p)) {
            prop_assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12, "{:?} vs {:?}", a, b);
        }
        prop_assert!(c.is_convex());
        prop_assert!(c.area() >= p.area() - 1e-12);
        prop_assert!((c.perimeter() - p.perimeter()).abs() < 1e-12);
        let d = DirectionSet::new(theta);
        prop_assert!((hex_parallel_split(&c, &d, 1e-9).b_star - hex_parallel_split(&p, &d, 1e-9).b_star).abs() < 1e-12);
    }

    #[test]
    fn hexagon_contains_and_bounds(p in polygon(), theta in 0.0..3.2f64) {
        let d = DirectionSet::new(theta);
        let c = convexify_rearrangement(&p);
        let h = circumscribed_hexagon(&c, &d).unwrap();
        for &v in c.vertices() {
            prop_assert!(h.contains(v, 1e-12));
        }
        let bs = hex_parallel_split(&c, &d, 1e-9).b_star;
        prop_assert!(h.perimeter() <= c.perimeter() + (2.0 / 3f64.sqrt() - 1.0) * bs + 1e-9);
    }

    #[test]
    fn hexagonal_status_is_scale_invariant(p in polygon(), theta in 0.0..3.2f64) {
        let d = DirectionSet::new(theta);
        let base = matchstick_core::isoperimetry::check_hexagonal(&p, &d, 1e-9).unwrap();
        for lambda in [0.1, 10.0] {
            let q = p.scaled(lambda).unwrap();
            let r = matchstick_core::isoperimetry::check_hexagonal(&q, &d, 1e-9).unwrap();
            prop_assert!((r.lhs - lambda * lambda * base.lhs).abs() <= 1e-9 * r.lhs.max(1.0));
            prop_assert!((r.rhs - lambda * lambda * base.rhs).abs() <= 1e-9 * r.rhs.max(1.0));
            prop_assert_eq!(r.holds, base.holds);
        }
    }

    #[test]
    fn canonical_form_is_invariant(pts in prop::collection::btree_set((-6i64..6, -6i64..6), 1..10), k in 0usize..6, flip: bool, shift in point()) {
        let pts: Vec<EisensteinPoint> = pts.into_iter().map(|(m, n)| EisensteinPoint::new(m, n)).collect();
        let img: Vec<EisensteinPoint> = pts.iter().map(|&p| {
            let mut q = if flip { p.reflect() } else { p };
            for _ in 0..k {
                q = q.rotate60();
            }
            q + shift
        }).collect();
        prop_assert_eq!(CanonicalPointSet::new(&img), CanonicalPointSet::new(&pts));
    }
}

/// Rotation of a face cycle starting at its smallest id.
fn canonical_cycle(mut c: Vec<usize>) -> Vec<usize> {
    if let Some(i) = c.iter().enumerate().min_by_key(|&(_, v)| *v).map(|(i, _)| i) {
        c.rotate_left(i);
    }
    c
}

#[test]
fn census_histogram_is_sorted_map() {
    let g = random_lattice_subgraph(12, 3, true).unwrap();
    let c = face_census(&ValidGraph::new(g, DEFAULT_TOL, false).unwrap()).unwrap();
    let m: BTreeMap<usize, usize> = c.f.clone();
    assert_eq!(m.values().sum::<usize>(), c.inner_faces());
}
