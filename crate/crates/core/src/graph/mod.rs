//! Directed multigraphs: the data model, the line-oriented text format,
//! vertex classification, path combinatorics and relative Toeplitz data.
//!
//! Vertices and edges carry opaque string identifiers. Internally both are
//! addressed by their position in lexicographic identifier order, which is
//! also the row/column order of every matrix derived from a graph.

mod chain;
mod parse;
mod relative;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::matrix::IntMatrix;

pub use chain::{parse_chain, Chain};
pub use parse::parse_graph;
pub use relative::{relative_set, RelativeGraph};

/// Position of a vertex in its graph's identifier order.
pub type VertexIx = usize;
/// Position of an edge in its graph's identifier order.
pub type EdgeIx = usize;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references undeclared vertex `{vertex}`")]
    UndeclaredVertex { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("not a subgraph: {0}")]
    NotSubgraph(String),
    #[error("vertex `{0}` is not a source")]
    NotASource(String),
    #[error("vertex `{vertex}` cannot be relative: {reason}")]
    InvalidRelativeVertex { vertex: String, reason: String },
    #[error("stage {stage}: {message}")]
    Inadmissible { stage: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub origin: VertexIx,
    pub terminus: VertexIx,
}

/// A finite directed multigraph with per-vertex infinite-emitter flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    vertex_index: BTreeMap<String, VertexIx>,
    infinite: Vec<bool>,
    edges: Vec<Edge>,
    edge_index: BTreeMap<String, EdgeIx>,
    out_edges: Vec<Vec<EdgeIx>>,
    in_edges: Vec<Vec<EdgeIx>>,
}

/// Accumulates declarations and checks the graph invariants on `build`.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: BTreeMap<String, bool>,
    edges: BTreeMap<String, (String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(
        &mut self,
        id: impl Into<String>,
        infinite: bool,
    ) -> Result<&mut Self, GraphError> {
        let id = id.into();
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.vertices.insert(id, infinite);
        Ok(self)
    }

    pub fn edge(
        &mut self,
        id: impl Into<String>,
        origin: impl Into<String>,
        terminus: impl Into<String>,
    ) -> Result<&mut Self, GraphError> {
        let id = id.into();
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        self.edges.insert(id, (origin.into(), terminus.into()));
        Ok(self)
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertices.contains_key(id)
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.edges.contains_key(id)
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        let vertices: Vec<String> = self.vertices.keys().cloned().collect();
        let vertex_index: BTreeMap<String, VertexIx> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let infinite = self.vertices.values().copied().collect();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (id, (o, t)) in &self.edges {
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::UndeclaredVertex {
                        edge: id.clone(),
                        vertex: v.clone(),
                    })
            };
            edges.push(Edge {
                id: id.clone(),
                origin: lookup(o)?,
                terminus: lookup(t)?,
            });
        }
        Ok(Graph::assemble(vertices, vertex_index, infinite, edges))
    }
}

/// Sink/regular/infinite-emitter partition of the vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Sink,
    Regular,
    InfiniteEmitter,
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexKind::Sink => "sink",
            VertexKind::Regular => "regular",
            VertexKind::InfiniteEmitter => "infinite-emitter",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub kind: VertexKind,
    /// No in-edges. Independent of `kind`.
    pub source: bool,
}

/// A composable edge sequence; a vertex is the path of length zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub origin: VertexIx,
    pub terminus: VertexIx,
    pub edges: Vec<EdgeIx>,
}

impl Path {
    pub fn vertex(v: VertexIx) -> Self {
        Path {
            origin: v,
            terminus: v,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Edge counts `M(x, y) = |x E^1 y|`, with the rows of flagged vertices marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub matrix: IntMatrix,
    pub infinite_rows: BTreeSet<VertexIx>,
}

impl IncidenceMatrix {
    /// `(M^j)(x, y)` counts the paths of length `j` from `x` to `y`.
    pub fn power(&self, j: u32) -> IntMatrix {
        self.matrix.pow(j)
    }
}

impl Graph {
    fn assemble(
        vertices: Vec<String>,
        vertex_index: BTreeMap<String, VertexIx>,
        infinite: Vec<bool>,
        edges: Vec<Edge>,
    ) -> Graph {
        let n = vertices.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (ix, e) in edges.iter().enumerate() {
            out_edges[e.origin].push(ix);
            in_edges[e.terminus].push(ix);
        }
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        Graph {
            vertices,
            vertex_index,
            infinite,
            edges,
            edge_index,
            out_edges,
            in_edges,
        }
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// A builder pre-loaded with this graph's declarations.
    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            vertices: self
                .vertices
                .iter()
                .cloned()
                .zip(self.infinite.iter().copied())
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        e.id.clone(),
                        (
                            self.vertices[e.origin].clone(),
                            self.vertices[e.terminus].clone(),
                        ),
                    )
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: VertexIx) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, id: &str) -> Result<VertexIx, GraphError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeIx) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_by_id(&self, id: &str) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    pub fn is_infinite_emitter(&self, v: VertexIx) -> bool {
        self.infinite[v]
    }

    pub fn out_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.in_edges[v]
    }

    /// Out-edge identifiers at `v`, sorted.
    pub(crate) fn out_edge_ids(&self, v: VertexIx) -> BTreeSet<&str> {
        self.out_edges[v]
            .iter()
            .map(|&e| self.edges[e].id.as_str())
            .collect()
    }

    pub fn classify(&self, v: VertexIx) -> Classification {
        let kind = if self.infinite[v] {
            VertexKind::InfiniteEmitter
        } else if self.out_edges[v].is_empty() {
            VertexKind::Sink
        } else {
            VertexKind::Regular
        };
        Classification {
            kind,
            source: self.in_edges[v].is_empty(),
        }
    }

    pub fn classify_vertex(&self, id: &str) -> Result<Classification, GraphError> {
        Ok(self.classify(self.vertex(id)?))
    }

    pub fn is_regular(&self, v: VertexIx) -> bool {
        self.classify(v).kind == VertexKind::Regular
    }

    /// The non-singular vertices: finite nonempty listed out-degree and no flag.
    pub fn regular_set(&self) -> BTreeSet<VertexIx> {
        (0..self.vertex_count())
            .filter(|&v| self.is_regular(v))
            .collect()
    }

    pub fn sources(&self) -> Vec<VertexIx> {
        (0..self.vertex_count())
            .filter(|&v| self.in_edges[v].is_empty())
            .collect()
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        let n = self.vertex_count();
        let mut m = IntMatrix::zeros(n, n);
        for e in &self.edges {
            m[(e.origin, e.terminus)] += 1;
        }
        IncidenceMatrix {
            matrix: m,
            infinite_rows: (0..n).filter(|&v| self.infinite[v]).collect(),
        }
    }

    /// Out-neighbours of `v` with edge multiplicities, in terminus order.
    pub fn out_multiplicities(&self, v: VertexIx) -> Vec<(VertexIx, usize)> {
        let mut counts: BTreeMap<VertexIx, usize> = BTreeMap::new();
        for &e in &self.out_edges[v] {
            *counts.entry(self.edges[e].terminus).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// All paths of length `len` starting at `from`, optionally ending at `to`.
    pub fn enumerate_paths(&self, from: VertexIx, len: usize, to: Option<VertexIx>) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(len);
        self.extend_paths(from, from, len, to, &mut stack, &mut out);
        out
    }

    fn extend_paths(
        &self,
        origin: VertexIx,
        at: VertexIx,
        remaining: usize,
        to: Option<VertexIx>,
        stack: &mut Vec<EdgeIx>,
        out: &mut Vec<Path>,
    ) {
        if remaining == 0 {
            if to.is_none_or(|t| t == at) {
                out.push(Path {
                    origin,
                    terminus: at,
                    edges: stack.clone(),
                });
            }
            return;
        }
        for &e in &self.out_edges[at] {
            stack.push(e);
            self.extend_paths(
                origin,
                self.edges[e].terminus,
                remaining - 1,
                to,
                stack,
                out,
            );
            stack.pop();
        }
    }

    pub fn paths_by_id(
        &self,
        from: &str,
        len: usize,
        to: Option<&str>,
    ) -> Result<Vec<Path>, GraphError> {
        let from = self.vertex(from)?;
        let to = to.map(|t| self.vertex(t)).transpose()?;
        Ok(self.enumerate_paths(from, len, to))
    }

    /// `|F^j y|`: the number of length-`j` paths ending at `y`.
    pub fn paths_into(&self, y: VertexIx, j: u32) -> BigInt {
        let p = self.incidence().power(j);
        (0..self.vertex_count()).map(|x| p[(x, y)].clone()).sum()
    }

    /// True if every vertex and edge of `self` occurs in `other` with the same endpoints.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.subgraph_violation(other).is_none()
    }

    pub(crate) fn subgraph_violation(&self, other: &Graph) -> Option<String> {
        for v in &self.vertices {
            if !other.vertex_index.contains_key(v) {
                return Some(format!("vertex `{v}` missing"));
            }
        }
        for e in &self.edges {
            match other.edge_by_id(&e.id) {
                None => return Some(format!("edge `{}` missing", e.id)),
                Some(oe) => {
                    if other.vertices[oe.origin] != self.vertices[e.origin]
                        || other.vertices[oe.terminus] != self.vertices[e.terminus]
                    {
                        return Some(format!("edge `{}` has different endpoints", e.id));
                    }
                }
            }
        }
        None
    }

    /// Attaches a fresh vertex `ω` and a fresh edge `θ: ω → y` at the source `y`.
    /// K-theory is unchanged by this surgery.
    pub fn add_head(&self, y: VertexIx) -> Result<Graph, GraphError> {
        if !self.classify(y).source {
            return Err(GraphError::NotASource(self.vertices[y].clone()));
        }
        let omega = fresh_id("omega", |s| self.vertex_index.contains_key(s));
        let theta = fresh_id("theta", |s| self.edge_index.contains_key(s));
        let mut b = self.to_builder();
        b.vertex(omega.clone(), false)?;
        b.edge(theta, omega, self.vertices[y].clone())?;
        b.build()
    }

    /// Serializes in the graph file format; `parse_graph` inverts this.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, inf) in self.vertices.iter().zip(&self.infinite) {
            s.push_str("vertex ");
            s.push_str(v);
            if *inf {
                s.push_str(" inf");
            }
            s.push('\n');
        }
        for e in &self.edges {
            s.push_str(&format!(
                "edge {} {} {}\n",
                e.id, self.vertices[e.origin], self.vertices[e.terminus]
            ));
        }
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn fresh_id(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|s| !taken(s))
        .unwrap()
}
