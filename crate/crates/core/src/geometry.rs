//! Toric Calabi-Yau threefolds as graphs of torus-fixed points and invariant
//! lines.
//!
//! Every vertex carries a [`Frame`] placing its local characters in the
//! global character lattice, and three incident slots, one per local axis.
//! A slot is either a compact edge or an open ray. An edge runs from a source
//! end to a target end; its normal degrees `(m, m')` belong to the source's
//! lower and upper transverse axes, and its partition is read in the source
//! chart.
//!
//! # File format
//!
//! Geometries are TOML documents:
//!
//! ```toml
//! classes = ["C"]
//!
//! [[vertex]]
//! id = "a"
//! frame = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]   # matrix rows
//! incident = ["c", "open", "open"]           # slots for local axes 1, 2, 3
//!
//! [[vertex]]
//! id = "b"
//! frame = [[-1, 1, 1], [0, 1, 0], [0, 0, 1]]
//! incident = ["c", "open", "open"]
//!
//! [[edge]]
//! id = "c"
//! from = "a"
//! to = "b"
//! m = -1
//! mprime = -1
//! class = "C"
//! ```
//!
//! The frame is the integer matrix `M` with `global = M · local`. The axis of
//! an edge at each endpoint is the position of the edge id in that vertex's
//! `incident` list.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::charcalc::{EdgeFrame, Frame};
use crate::partitions::{transverse, Partition2D};

pub const BUILTIN_NAMES: [&str; 4] = ["c3", "conifold", "local_p2", "local_p1p1"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Open,
    Edge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct End {
    pub vertex: usize,
    pub axis: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub frame: Frame,
    pub incident: [Slot; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: End,
    pub to: End,
    pub frame: EdgeFrame,
    pub class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricCY3 {
    pub classes: Vec<String>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SlotMismatch { vertex: String, axis: usize },
    SelfLoop { edge: String },
    NotUnimodular { vertex: String, det: i64 },
    ProductNotPreserved { vertex: String },
    NotCalabiYau { edge: String, m: i64, mprime: i64 },
    FrameInconsistent { edge: String },
    UnknownClass { edge: String, class: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SlotMismatch { vertex, axis } => write!(
                f,
                "vertex {vertex}: slot {} disagrees with the edge list",
                axis + 1
            ),
            Violation::SelfLoop { edge } => write!(f, "edge {edge} is a loop"),
            Violation::NotUnimodular { vertex, det } => {
                write!(f, "vertex {vertex}: frame has determinant {det}")
            }
            Violation::ProductNotPreserved { vertex } => {
                write!(f, "vertex {vertex}: frame does not fix t1*t2*t3")
            }
            Violation::NotCalabiYau { edge, m, mprime } => {
                write!(f, "edge {edge}: m + m' = {m} + {mprime} != -2")
            }
            Violation::FrameInconsistent { edge } => write!(
                f,
                "edge {edge}: endpoint frames are not related by the transition rule"
            ),
            Violation::UnknownClass { edge, class } => {
                write!(f, "edge {edge}: class index {class} out of range")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "pass");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("unknown builtin geometry {0:?} (expected one of c3, conifold, local_p2, local_p1p1)")]
    UnknownBuiltin(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("edge {edge:?}: unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {edge:?}: unknown class {class:?}")]
    UnknownClassLabel { edge: String, class: String },
    #[error("vertex {vertex:?}: unknown slot {slot:?}")]
    UnknownSlot { vertex: String, slot: String },
    #[error("edge {edge:?} must occupy exactly one slot of vertex {vertex:?}")]
    EdgeSlot { edge: String, vertex: String },
    #[error("invalid geometry: {0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    classes: Vec<String>,
    #[serde(default)]
    vertex: Vec<VertexRecord>,
    #[serde(default)]
    edge: Vec<EdgeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: String,
    frame: [[i64; 3]; 3],
    incident: [String; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    id: String,
    from: String,
    to: String,
    m: i64,
    mprime: i64,
    class: String,
}

const OPEN: &str = "open";

pub fn builtin(name: &str) -> Result<ToricCY3, GeometryError> {
    let text = match name {
        "c3" => include_str!("../geometries/c3.toml"),
        "conifold" => include_str!("../geometries/conifold.toml"),
        "local_p2" => include_str!("../geometries/local_p2.toml"),
        "local_p1p1" => include_str!("../geometries/local_p1p1.toml"),
        other => return Err(GeometryError::UnknownBuiltin(other.to_string())),
    };
    parse(text)
}

pub fn load(path: impl AsRef<Path>) -> Result<ToricCY3, GeometryError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| GeometryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

/// Parses and validates a geometry document.
pub fn parse(text: &str) -> Result<ToricCY3, GeometryError> {
    let file: GeometryFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|span| line_column(text, span.start))
            .unwrap_or((0, 0));
        GeometryError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let g = ToricCY3::from_file(file)?;
    let report = g.validate();
    if report.is_ok() {
        Ok(g)
    } else {
        Err(GeometryError::Invalid(report))
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl ToricCY3 {
    fn from_file(file: GeometryFile) -> Result<Self, GeometryError> {
        let mut vertex_index = BTreeMap::new();
        for (k, v) in file.vertex.iter().enumerate() {
            if vertex_index.insert(v.id.clone(), k).is_some() {
                return Err(GeometryError::DuplicateId(v.id.clone()));
            }
        }
        let mut edge_index = BTreeMap::new();
        for (k, e) in file.edge.iter().enumerate() {
            if edge_index.insert(e.id.clone(), k).is_some() || vertex_index.contains_key(&e.id) {
                return Err(GeometryError::DuplicateId(e.id.clone()));
            }
        }

        let mut vertices = Vec::with_capacity(file.vertex.len());
        for v in &file.vertex {
            let mut incident = [Slot::Open; 3];
            for (axis, slot) in v.incident.iter().enumerate() {
                incident[axis] = if slot == OPEN {
                    Slot::Open
                } else {
                    let e = edge_index
                        .get(slot)
                        .ok_or_else(|| GeometryError::UnknownSlot {
                            vertex: v.id.clone(),
                            slot: slot.clone(),
                        })?;
                    Slot::Edge(*e)
                };
            }
            vertices.push(Vertex {
                id: v.id.clone(),
                frame: Frame::from_rows(v.frame),
                incident,
            });
        }

        let mut edges = Vec::with_capacity(file.edge.len());
        for (k, e) in file.edge.iter().enumerate() {
            let end = |name: &str| -> Result<End, GeometryError> {
                let vertex = *vertex_index
                    .get(name)
                    .ok_or_else(|| GeometryError::UnknownVertex {
                        edge: e.id.clone(),
                        vertex: name.to_string(),
                    })?;
                let axes: Vec<usize> = (0..3)
                    .filter(|&a| vertices[vertex].incident[a] == Slot::Edge(k))
                    .collect();
                match axes[..] {
                    [axis] => Ok(End { vertex, axis }),
                    _ => Err(GeometryError::EdgeSlot {
                        edge: e.id.clone(),
                        vertex: name.to_string(),
                    }),
                }
            };
            let class = file.classes.iter().position(|c| *c == e.class).ok_or_else(|| {
                GeometryError::UnknownClassLabel {
                    edge: e.id.clone(),
                    class: e.class.clone(),
                }
            })?;
            edges.push(Edge {
                id: e.id.clone(),
                from: end(&e.from)?,
                to: end(&e.to)?,
                frame: EdgeFrame::new(e.m, e.mprime),
                class,
            });
        }
        Ok(Self {
            classes: file.classes,
            vertices,
            edges,
        })
    }

    /// Serializes to the geometry file format.
    pub fn save(&self) -> String {
        let slot_name = |s: &Slot| match s {
            Slot::Open => OPEN.to_string(),
            Slot::Edge(e) => self.edges[*e].id.clone(),
        };
        let file = GeometryFile {
            classes: self.classes.clone(),
            vertex: self
                .vertices
                .iter()
                .map(|v| VertexRecord {
                    id: v.id.clone(),
                    frame: v.frame.rows(),
                    incident: std::array::from_fn(|a| slot_name(&v.incident[a])),
                })
                .collect(),
            edge: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    from: self.vertices[e.from.vertex].id.clone(),
                    to: self.vertices[e.to.vertex].id.clone(),
                    m: e.frame.m,
                    mprime: e.frame.mprime,
                    class: self.classes[e.class].clone(),
                })
                .collect(),
        };
        toml::to_string(&file).expect("geometry serializes")
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            let det = v.frame.det();
            if det.abs() != 1 {
                violations.push(Violation::NotUnimodular {
                    vertex: v.id.clone(),
                    det,
                });
            }
            if !v.frame.preserves_cy_product() {
                violations.push(Violation::ProductNotPreserved {
                    vertex: v.id.clone(),
                });
            }
            for (axis, slot) in v.incident.iter().enumerate() {
                let ok = match *slot {
                    Slot::Open => true,
                    Slot::Edge(e) => self.edges.get(e).is_some_and(|edge| {
                        edge.from == End { vertex: vi, axis } || edge.to == End { vertex: vi, axis }
                    }),
                };
                if !ok {
                    violations.push(Violation::SlotMismatch {
                        vertex: v.id.clone(),
                        axis,
                    });
                }
            }
        }
        for (ei, e) in self.edges.iter().enumerate() {
            for end in [e.from, e.to] {
                let listed = self
                    .vertices
                    .get(end.vertex)
                    .is_some_and(|v| end.axis < 3 && v.incident[end.axis] == Slot::Edge(ei));
                if !listed {
                    let vertex = self
                        .vertices
                        .get(end.vertex)
                        .map_or_else(|| format!("#{}", end.vertex), |v| v.id.clone());
                    violations.push(Violation::SlotMismatch {
                        vertex,
                        axis: end.axis,
                    });
                }
            }
            if e.from.vertex == e.to.vertex {
                violations.push(Violation::SelfLoop { edge: e.id.clone() });
            }
            if e.class >= self.classes.len() {
                violations.push(Violation::UnknownClass {
                    edge: e.id.clone(),
                    class: e.class,
                });
            }
            if !e.frame.is_calabi_yau() {
                violations.push(Violation::NotCalabiYau {
                    edge: e.id.clone(),
                    m: e.frame.m,
                    mprime: e.frame.mprime,
                });
            }
            let in_range = e.from.vertex < self.vertices.len() && e.to.vertex < self.vertices.len();
            if in_range && self.pairing(ei).is_none() {
                violations.push(Violation::FrameInconsistent { edge: e.id.clone() });
            }
        }
        ValidationReport { violations }
    }

    /// Global weights of the target chart's axes predicted from the source
    /// frame by `(x1, x2, x3) ↦ (x1⁻¹, x2 x1^{−m}, x3 x1^{−m'})`: the edge
    /// axis, then the images of the source's lower and upper transverse axes.
    pub fn transported_axes(&self, edge: usize) -> [[i64; 3]; 3] {
        let e = &self.edges[edge];
        let frame = &self.vertices[e.from.vertex].frame;
        let (b, c) = transverse(e.from.axis);
        let wa = frame.column(e.from.axis);
        let (wb, wc) = (frame.column(b), frame.column(c));
        let sub = |w: [i64; 3], k: i64| std::array::from_fn(|i| w[i] - k * wa[i]);
        [wa.map(|x| -x), sub(wb, e.frame.m), sub(wc, e.frame.mprime)]
    }

    /// How the source's transverse axes land at the target: `Some(false)` if
    /// lower goes to lower, `Some(true)` if they cross, `None` if the target
    /// frame is not the transported one.
    pub fn pairing(&self, edge: usize) -> Option<bool> {
        let e = &self.edges[edge];
        let [wa, wb, wc] = self.transported_axes(edge);
        let target = &self.vertices[e.to.vertex].frame;
        if target.column(e.to.axis) != wa {
            return None;
        }
        let (lo, hi) = transverse(e.to.axis);
        let (tlo, thi) = (target.column(lo), target.column(hi));
        if tlo == wb && thi == wc {
            Some(false)
        } else if tlo == wc && thi == wb {
            Some(true)
        } else {
            None
        }
    }

    /// Frame of the target vertex reconstructed from the source frame alone.
    pub fn transport_frame(&self, edge: usize) -> Option<Frame> {
        let e = &self.edges[edge];
        let crossed = self.pairing(edge)?;
        let [wa, wb, wc] = self.transported_axes(edge);
        let (lo, hi) = transverse(e.to.axis);
        let mut cols = [[0; 3]; 3];
        cols[e.to.axis] = wa;
        if crossed {
            cols[lo] = wc;
            cols[hi] = wb;
        } else {
            cols[lo] = wb;
            cols[hi] = wc;
        }
        Some(Frame::from_columns(cols))
    }

    /// The three leg diagrams at `vertex` induced by the edge partitions.
    pub fn vertex_legs(&self, vertex: usize, edge_partitions: &[Partition2D]) -> [Partition2D; 3] {
        std::array::from_fn(|axis| match self.vertices[vertex].incident[axis] {
            Slot::Open => Partition2D::empty(),
            Slot::Edge(e) => {
                let lambda = &edge_partitions[e];
                let edge = &self.edges[e];
                if edge.from == (End { vertex, axis }) {
                    lambda.clone()
                } else if self.pairing(e).expect("validated geometry") {
                    lambda.transpose()
                } else {
                    lambda.clone()
                }
            }
        })
    }

    /// Maps an exponent in the edge chart (edge axis, lower, upper transverse
    /// axis) to the source vertex's local exponent.
    pub fn edge_to_vertex_exponent(&self, edge: usize, k: [i64; 3]) -> [i64; 3] {
        let axis = self.edges[edge].from.axis;
        let (b, c) = transverse(axis);
        let mut out = [0; 3];
        out[axis] = k[0];
        out[b] = k[1];
        out[c] = k[2];
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            assert!(g.validate().is_ok(), "{name}: {}", g.validate());
        }
        assert!(matches!(
            builtin("quintic"),
            Err(GeometryError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn builtin_shapes() {
        let c3 = builtin("c3").unwrap();
        assert_eq!(c3.vertices.len(), 1);
        assert_eq!(c3.vertices[0].frame, Frame::IDENTITY);
        assert!(c3.edges.is_empty());

        let con = builtin("conifold").unwrap();
        assert_eq!((con.vertices.len(), con.edges.len(), con.num_classes()), (2, 1, 1));
        assert_eq!(con.edges[0].frame, EdgeFrame::new(-1, -1));

        let p2 = builtin("local_p2").unwrap();
        assert_eq!((p2.vertices.len(), p2.edges.len(), p2.num_classes()), (3, 3, 1));
        assert!(p2.edges.iter().all(|e| e.frame == EdgeFrame::new(1, -3)));

        let p1p1 = builtin("local_p1p1").unwrap();
        assert_eq!((p1p1.vertices.len(), p1p1.edges.len(), p1p1.num_classes()), (4, 4, 2));
        assert!(p1p1.edges.iter().all(|e| e.frame == EdgeFrame::new(0, -2)));
    }

    #[test]
    fn non_cy_edge_is_reported() {
        let mut g = builtin("conifold").unwrap();
        g.edges[0].frame = EdgeFrame::new(-1, 0);
        let report = g.validate();
        assert!(report
            .violations
            .contains(&Violation::NotCalabiYau { edge: "c".into(), m: -1, mprime: 0 }));
    }

    #[test]
    fn broken_frame_is_reported() {
        let mut g = builtin("conifold").unwrap();
        g.vertices[1].frame = Frame::from_rows([[-1, 1, 0], [0, 1, 1], [0, 0, 1]]);
        let report = g.validate();
        assert!(report
            .violations
            .contains(&Violation::FrameInconsistent { edge: "c".into() }));
    }

    #[test]
    fn transported_frames_match() {
        for name in BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            for (k, e) in g.edges.iter().enumerate() {
                assert_eq!(g.transport_frame(k), Some(g.vertices[e.to.vertex].frame));
            }
        }
    }

    #[test]
    fn line_column_counts_from_one() {
        assert_eq!(line_column("ab\ncd", 0), (1, 1));
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
    }
}
