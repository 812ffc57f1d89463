//! JSON documents for divides, and DOT / SVG renderings.
//!
//! A document lists the counterclockwise rotation of every double point; the
//! two darts of an edge are `d` and `d ^ 1`.
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "free_loops": 0,
//!   "metadata": { "expected": { "circles": 2 }, "name": "minimal-g1" },
//!   "vertices": [[1, 4, 3, 6], [5, 2, 7, 0]]
//! }
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divide::{Divide, DualGraph};
use crate::fiber::FiberComplex;
use crate::map::{Dart, HalfEdgeMap};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("declared {field} = {declared}, traced {traced}")]
    InvariantMismatch {
        field: &'static str,
        declared: String,
        traced: String,
    },
}

/// Invariants a document may declare; each present field is checked on load.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedInvariants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circles: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub double_points: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding_components: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page_genus: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedInvariants>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivideDocument {
    pub format_version: String,
    pub vertices: Vec<Vec<Dart>>,
    #[serde(default)]
    pub free_loops: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl DivideDocument {
    /// Document for a divide whose map uses the pairing `d ^ 1`. Other
    /// pairings are relabeled first.
    pub fn from_divide(divide: &Divide) -> Self {
        let map = xor_paired(divide.map());
        Self {
            format_version: FORMAT_VERSION.to_string(),
            vertices: map.rotations().to_vec(),
            free_loops: divide.free_loops(),
            metadata: None,
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.metadata.get_or_insert_with(Metadata::default).name = Some(name.to_string());
        self
    }

    /// Records the traced invariants of `divide` as expectations.
    pub fn with_expected(mut self, divide: &Divide) -> Self {
        self.metadata.get_or_insert_with(Metadata::default).expected = Some(traced(divide));
        self
    }

    /// Builds the divide and checks the declared invariants.
    pub fn to_divide(&self) -> Result<Divide, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Schema(format!(
                "unsupported format_version {:?}",
                self.format_version
            )));
        }
        for (i, rot) in self.vertices.iter().enumerate() {
            if rot.len() != 4 {
                return Err(IoError::Schema(format!(
                    "vertex {i} has {} darts, expected 4",
                    rot.len()
                )));
            }
        }
        let map = HalfEdgeMap::with_xor_pairing(self.vertices.clone())
            .map_err(|e| IoError::Schema(e.to_string()))?;
        let divide = Divide::new(map, self.free_loops).map_err(|e| IoError::Schema(e.to_string()))?;
        if let Some(expected) = self.metadata.as_ref().and_then(|m| m.expected.as_ref()) {
            check_expected(expected, &divide)?;
        }
        Ok(divide)
    }

    pub fn to_text(&self) -> String {
        // Value objects keep keys sorted
        let value = serde_json::to_value(self).expect("documents serialize");
        let mut text = serde_json::to_string_pretty(&value).expect("documents serialize");
        text.push('\n');
        text
    }

    pub fn from_text(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| {
            if e.is_syntax() || e.is_eof() {
                IoError::Syntax {
                    line: e.line(),
                    column: e.column(),
                    message: strip_position(&e.to_string()),
                }
            } else {
                IoError::Schema(strip_position(&e.to_string()))
            }
        })
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn traced(divide: &Divide) -> ExpectedInvariants {
    let c = divide.circle_count() as u32;
    let v = divide.double_points() as u32;
    ExpectedInvariants {
        ambient_genus: divide.ambient_genus().ok(),
        circles: Some(c),
        double_points: Some(v),
        binding_components: Some(2 * c),
        page_genus: (1 + v).checked_sub(c),
    }
}

fn check_expected(expected: &ExpectedInvariants, divide: &Divide) -> Result<(), IoError> {
    let actual = traced(divide);
    let fields = [
        ("ambient_genus", expected.ambient_genus, actual.ambient_genus),
        ("circles", expected.circles, actual.circles),
        ("double_points", expected.double_points, actual.double_points),
        (
            "binding_components",
            expected.binding_components,
            actual.binding_components,
        ),
        ("page_genus", expected.page_genus, actual.page_genus),
    ];
    for (field, declared, traced) in fields {
        if let Some(declared) = declared {
            if Some(declared) != traced {
                return Err(IoError::InvariantMismatch {
                    field,
                    declared: declared.to_string(),
                    traced: traced.map_or_else(|| "undefined".to_string(), |t| t.to_string()),
                });
            }
        }
    }
    Ok(())
}

/// Relabels darts so that every edge is `{2i, 2i + 1}`.
fn xor_paired(map: &HalfEdgeMap) -> HalfEdgeMap {
    let n = map.dart_count();
    if (0..n).all(|d| map.pair(d) == d ^ 1) {
        return map.clone();
    }
    let mut perm = vec![usize::MAX; n];
    let mut next_label = 0;
    for d in 0..n {
        if perm[d] == usize::MAX {
            perm[d] = next_label;
            perm[map.pair(d)] = next_label + 1;
            next_label += 2;
        }
    }
    map.relabel(&perm).expect("edge labeling is a permutation")
}

pub fn parse_divide(text: &str) -> Result<Divide, IoError> {
    DivideDocument::from_text(text)?.to_divide()
}

pub fn emit_divide(divide: &Divide) -> String {
    DivideDocument::from_divide(divide).to_text()
}

/// The dual graph as an undirected DOT multigraph: one node per circle, one
/// edge per double point.
pub fn emit_dot(graph: &DualGraph) -> String {
    let mut out = String::from("graph dual {\n");
    for c in 0..graph.vertex_count {
        writeln!(out, "  c{c};").unwrap();
    }
    for (x, &(a, b)) in graph.edges.iter().enumerate() {
        writeln!(out, "  c{a} -- c{b} [label=\"x{x}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

/// Schematic of the fiber: roundabouts on a grid, bands as curves between
/// their attachment points, and the two sides of every band stroked in the
/// color of the boundary component running along it.
pub fn emit_svg(fiber: &FiberComplex) -> String {
    let roundabouts = fiber.roundabouts();
    let cols = (roundabouts.len() as f64).sqrt().ceil().max(1.0) as usize;
    let rows = roundabouts.len().div_ceil(cols).max(1);
    let (cell, radius) = (160.0, 36.0);
    let width = cols as f64 * cell;
    let height = rows as f64 * cell;
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    out.push_str("<style>.roundabout,.annulus{fill:none;stroke:#000;stroke-width:10;stroke-opacity:0.25}.band{fill:none;stroke:#999;stroke-width:8}.side{fill:none;stroke-width:1.5}</style>\n");

    if roundabouts.is_empty() {
        let (cx, cy) = (width / 2.0, height / 2.0);
        writeln!(out, "<circle class=\"annulus\" cx=\"{cx}\" cy=\"{cy}\" r=\"{radius}\"/>").unwrap();
        for (i, r) in [radius - 5.0, radius + 5.0].iter().enumerate() {
            writeln!(
                out,
                "<circle class=\"side boundary-{i}\" cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" stroke=\"{}\"/>",
                PALETTE[i]
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        return out;
    }

    let ribbon = fiber.ribbon();
    let (_, boundary_of) = ribbon.face_labels();
    let centre = |x: usize| {
        let (r, c) = (x / cols, x % cols);
        ((c as f64 + 0.5) * cell, (r as f64 + 0.5) * cell)
    };
    let mut attach = vec![(0.0, 0.0); 4 * roundabouts.len()];
    let mut angle_of = vec![0.0; 4 * roundabouts.len()];
    for rb in roundabouts {
        let (cx, cy) = centre(rb.double_point);
        writeln!(
            out,
            "<circle class=\"roundabout\" cx=\"{cx}\" cy=\"{cy}\" r=\"{radius}\"><title>x{}</title></circle>",
            rb.double_point
        )
        .unwrap();
        for (slot, &d) in rb.darts.iter().enumerate() {
            // counterclockwise on the page means decreasing y
            let angle = std::f64::consts::FRAC_PI_2 * slot as f64;
            attach[d] = (cx + radius * angle.cos(), cy - radius * angle.sin());
            angle_of[d] = angle;
        }
    }
    for band in fiber.bands() {
        let (d, e) = band.ends;
        let (p, q) = (attach[d], attach[e]);
        let reach = 0.6 * cell;
        let c1 = (p.0 + reach * angle_of[d].cos(), p.1 - reach * angle_of[d].sin());
        let c2 = (q.0 + reach * angle_of[e].cos(), q.1 - reach * angle_of[e].sin());
        let path = format!(
            "M {:.1} {:.1} C {:.1} {:.1} {:.1} {:.1} {:.1} {:.1}",
            p.0, p.1, c1.0, c1.1, c2.0, c2.1, q.0, q.1
        );
        let inside = |outer: bool| if outer { "outer" } else { "inner" };
        writeln!(
            out,
            "<path class=\"band\" d=\"{path}\" data-ends=\"{d} {e}\" data-sides=\"{} {}\"/>",
            inside(band.outer.0),
            inside(band.outer.1)
        )
        .unwrap();
        for (offset, dart) in [(-3.0, 3 * d), (3.0, 3 * e)] {
            let b = boundary_of[dart];
            writeln!(
                out,
                "<path class=\"side boundary-{b}\" d=\"{path}\" stroke=\"{}\" transform=\"translate({offset} {offset})\"/>",
                PALETTE[b % PALETTE.len()]
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}
