//! JSON graph and polygon formats, and SVG figures.
//!
//! Graph JSON:
//! `{"frames":[{"id":0,"origin":[x,y],"angle":a}],
//!   "vertices":[{"id":0,"lattice":{"frame":0,"m":0,"n":0}}, {"id":1,"free":[x,y]}],
//!   "edges":[[0,1]]}`.
//! Floats are written with 17 significant digits.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

use crate::components::DecompositionReport;
use crate::error::{Error, Result};
use crate::graph::{MatchstickGraph, Vertex, VertexCoord, VertexId};
use crate::lattice::{EisensteinPoint, LatticeFrame};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameJson {
    pub id: usize,
    pub origin: [f64; 2],
    pub angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeCoordJson {
    pub frame: usize,
    pub m: i64,
    pub n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordJson {
    Lattice(LatticeCoordJson),
    Free([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    #[serde(flatten)]
    pub coord: CoordJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    #[serde(default)]
    pub frames: Vec<FrameJson>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[VertexId; 2]>,
}

impl From<&MatchstickGraph> for GraphJson {
    fn from(g: &MatchstickGraph) -> Self {
        let frames =
            g.frames().iter().enumerate().map(|(id, f)| FrameJson { id, origin: f.origin, angle: f.angle }).collect();
        let vertices = g
            .vertices()
            .iter()
            .map(|v| VertexJson {
                id: v.id,
                coord: match v.coord {
                    VertexCoord::Lattice { frame, point } => {
                        CoordJson::Lattice(LatticeCoordJson { frame, m: point.m, n: point.n })
                    }
                    VertexCoord::Free { x, y } => CoordJson::Free([x, y]),
                },
            })
            .collect();
        GraphJson { frames, vertices, edges: g.edges().map(|(a, b)| [a, b]).collect() }
    }
}

impl TryFrom<GraphJson> for MatchstickGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let mut slot = HashMap::new();
        for (i, f) in j.frames.iter().enumerate() {
            if slot.insert(f.id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate frame id {}", f.id)));
            }
        }
        let frames = j.frames.iter().map(|f| LatticeFrame::new(f.origin, f.angle)).collect();
        let vertices = j
            .vertices
            .iter()
            .map(|v| {
                let coord = match v.coord {
                    CoordJson::Lattice(c) => VertexCoord::Lattice {
                        frame: *slot.get(&c.frame).ok_or_else(|| {
                            Error::InvalidGraph(format!("vertex {} references unknown frame {}", v.id, c.frame))
                        })?,
                        point: EisensteinPoint::new(c.m, c.n),
                    },
                    CoordJson::Free([x, y]) => VertexCoord::Free { x, y },
                };
                Ok(Vertex { id: v.id, coord })
            })
            .collect::<Result<Vec<_>>>()?;
        let edges: Vec<(VertexId, VertexId)> = j.edges.iter().map(|&[a, b]| (a, b)).collect();
        MatchstickGraph::new(frames, vertices, &edges)
    }
}

/// Writes every float as `{:.16e}`, i.e. 17 significant digits.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_json_exact<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn graph_to_json(g: &MatchstickGraph) -> Result<String> {
    to_json_exact(&GraphJson::from(g))
}

pub fn graph_from_json(s: &str) -> Result<MatchstickGraph> {
    let j: GraphJson = serde_json::from_str(s)?;
    j.try_into()
}

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"];

/// SVG drawing of `g`: edges as segments, lattice components coloured,
/// the boundary cycle (if given) drawn on top in red.
pub fn render_svg(
    g: &MatchstickGraph,
    components: Option<&DecompositionReport>,
    boundary: Option<&[VertexId]>,
) -> String {
    let pos = g.positions();
    let (mut lo, mut hi) = ([0.0f64; 2], [1.0f64; 2]);
    if let Some(first) = pos.first() {
        lo = *first;
        hi = *first;
        for p in &pos {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
    }
    let unit = 60.0;
    let pad = 0.5;
    let (w, h) = ((hi[0] - lo[0] + 2.0 * pad) * unit, (hi[1] - lo[1] + 2.0 * pad) * unit);
    let at = |id: VertexId| {
        let p = pos[g.index_of(id).expect("id from this graph")];
        ((p[0] - lo[0] + pad) * unit, (hi[1] - p[1] + pad) * unit)
    };
    let mut colour: HashMap<(VertexId, VertexId), &str> = HashMap::new();
    if let Some(rep) = components {
        for (i, c) in rep.components.iter().enumerate() {
            for &(a, b) in &c.edges {
                colour.insert((a.min(b), a.max(b)), PALETTE[i % PALETTE.len()]);
            }
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r#"<g stroke-linecap="round">"#);
    for (a, b) in g.edges() {
        let ((x1, y1), (x2, y2)) = (at(a), at(b));
        let c = colour.get(&(a.min(b), a.max(b))).copied().unwrap_or("#555555");
        let _ =
            writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{c}" stroke-width="3"/>"#);
    }
    let _ = writeln!(s, "</g>");
    if let Some(cycle) = boundary.filter(|c| !c.is_empty()) {
        let pts: Vec<String> = cycle.iter().map(|&v| at(v)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="none" stroke="#d62728" stroke-width="1.5" stroke-dasharray="6 3"/>"##,
            pts.join(" ")
        );
    }
    let on_boundary: BTreeSet<VertexId> = boundary.unwrap_or(&[]).iter().copied().collect();
    for v in g.vertices() {
        let (x, y) = at(v.id);
        let fill = if on_boundary.contains(&v.id) { "#d62728" } else { "#000000" };
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
