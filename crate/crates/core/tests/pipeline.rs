use matchstick_core::combinatorics::{check_harborth, claim_trace, face_census, ClaimStatus};
use matchstick_core::components::decompose;
use matchstick_core::extremal::{build_extremal, build_hexagon_patch};
use matchstick_core::graph::{MatchstickGraph, ValidGraph, DEFAULT_TOL};
use matchstick_core::io::{graph_from_json, graph_to_json, render_svg};
use matchstick_core::isoperimetry::graph_isoperimetric_audit;
use matchstick_core::lattice::SQRT3;
use matchstick_core::Error;

fn valid(g: MatchstickGraph) -> ValidGraph {
    ValidGraph::new(g, DEFAULT_TOL, false).unwrap()
}

/// Patch k=1 with a unit rhombus hinged at 40° on the edge from (1,0) to (0,1).
fn patch_with_appendage() -> MatchstickGraph {
    let patch = build_hexagon_patch(1);
    let mut pts = patch.positions();
    let a = 40f64.to_radians();
    pts.push([pts[1][0] + a.cos(), pts[1][1] + a.sin()]);
    pts.push([pts[2][0] + a.cos(), pts[2][1] + a.sin()]);
    let mut edges: Vec<_> = patch.edges().collect();
    edges.extend([(1, 7), (7, 8), (8, 2)]);
    MatchstickGraph::from_free(&pts, &edges).unwrap()
}

#[test]
fn json_round_trip_keeps_stats() {
    for n in [7, 12, 37, 50] {
        let g = build_extremal(n).unwrap();
        let back = graph_from_json(&graph_to_json(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        assert_eq!(face_census(&valid(back)).unwrap(), face_census(&valid(g)).unwrap());
    }
    let g = patch_with_appendage();
    let back = graph_from_json(&graph_to_json(&g).unwrap()).unwrap();
    assert_eq!(back.positions(), g.positions());
}

#[test]
fn audit_with_appendage() {
    let g = valid(patch_with_appendage());
    let rep = decompose(&g).unwrap();
    let a = graph_isoperimetric_audit(&g, &rep).unwrap();
    assert_eq!(a.f3, 6);
    assert!(a.area > a.triangle_area + 0.1);
    assert!((a.area - (6.0 * SQRT3 / 4.0 + rhombus_area())).abs() < 1e-9);
    assert_eq!(a.b_star, 3);
    assert!(a.hexagonal.holds && a.classic.holds);
}

/// The rhombus spanned by (−1/2, √3/2) and the 40° direction.
fn rhombus_area() -> f64 {
    let a = 40f64.to_radians();
    (-0.5 * a.sin() - SQRT3 / 2.0 * a.cos()).abs()
}

#[test]
fn harborth_and_trace_on_appendage() {
    let g = valid(patch_with_appendage());
    let h = check_harborth(&g).unwrap();
    assert_eq!((h.e, h.bound), (15, 16));
    let t = claim_trace(&g).unwrap();
    assert!(!t.assumption1);
    assert_eq!(t.weighted_non_triangles, Some(1));
    assert!(t.records.iter().all(|r| r.status != ClaimStatus::NotApplicable));
}

#[test]
fn trace_on_a_path_marks_later_claims() {
    let g = valid(MatchstickGraph::from_free(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], &[(0, 1), (1, 2)]).unwrap());
    let t = claim_trace(&g).unwrap();
    assert!(!t.two_connected);
    assert!(t.records.iter().any(|r| r.status == ClaimStatus::NotApplicable));
    assert!(matches!(graph_isoperimetric_audit(&g, &decompose(&g).unwrap()), Err(Error::NotTwoConnected)));
}

#[test]
fn svg_for_free_graph() {
    let g = valid(patch_with_appendage());
    let rep = decompose(&g).unwrap();
    let svg = render_svg(g.graph(), Some(&rep), None);
    assert_eq!(svg.matches("<line").count(), 15);
    assert!(svg.contains("#555555"));
}
