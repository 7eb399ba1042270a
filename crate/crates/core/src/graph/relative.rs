use std::collections::BTreeSet;

use super::{Graph, GraphError, VertexIx};

/// A graph together with the vertex set where the full summation relation is
/// imposed. Every relative vertex has finite nonempty listed out-degree and
/// is not flagged as an infinite emitter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeGraph {
    graph: Graph,
    relative: Vec<bool>,
}

impl RelativeGraph {
    pub fn new<I, S>(graph: Graph, relative: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = vec![false; graph.vertex_count()];
        for id in relative {
            let v = graph.vertex(id.as_ref())?;
            check_relative(&graph, v)?;
            mask[v] = true;
        }
        Ok(RelativeGraph {
            graph,
            relative: mask,
        })
    }

    pub fn from_indices(graph: Graph, relative: &BTreeSet<VertexIx>) -> Result<Self, GraphError> {
        let ids: Vec<String> = relative
            .iter()
            .map(|&v| graph.vertex_id(v).to_string())
            .collect();
        Self::new(graph, ids)
    }

    /// The graph on its own: the relative set is the full regular set.
    pub fn standalone(graph: Graph) -> Self {
        let relative = (0..graph.vertex_count())
            .map(|v| graph.is_regular(v))
            .collect();
        RelativeGraph { graph, relative }
    }

    /// Empty relative set: the Toeplitz algebra of the graph.
    pub fn toeplitz(graph: Graph) -> Self {
        let relative = vec![false; graph.vertex_count()];
        RelativeGraph { graph, relative }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn is_relative(&self, v: VertexIx) -> bool {
        self.relative[v]
    }

    pub fn relative_vertices(&self) -> Vec<VertexIx> {
        (0..self.relative.len())
            .filter(|&v| self.relative[v])
            .collect()
    }

    pub fn relative_ids(&self) -> BTreeSet<&str> {
        self.relative_vertices()
            .into_iter()
            .map(|v| self.graph.vertex_id(v))
            .collect()
    }
}

fn check_relative(graph: &Graph, v: VertexIx) -> Result<(), GraphError> {
    let reason = if graph.is_infinite_emitter(v) {
        "flagged as an infinite emitter"
    } else if graph.out_edges(v).is_empty() {
        "no out-edges"
    } else {
        return Ok(());
    };
    Err(GraphError::InvalidRelativeVertex {
        vertex: graph.vertex_id(v).to_string(),
        reason: reason.to_string(),
    })
}

/// The vertices of the subgraph `f` that are regular in `e` and whose
/// out-edges in `f` are all of their out-edges in `e`.
pub fn relative_set(e: &Graph, f: &Graph) -> Result<BTreeSet<String>, GraphError> {
    if let Some(why) = f.subgraph_violation(e) {
        return Err(GraphError::NotSubgraph(why));
    }
    let mut out = BTreeSet::new();
    for (fv, id) in f.vertex_ids().iter().enumerate() {
        let ev = e.vertex(id)?;
        if e.is_regular(ev) && f.out_edge_ids(fv) == e.out_edge_ids(ev) {
            out.insert(id.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn relative_set_of_whole_graph_is_regular_set() {
        let e = parse_graph("vertex a\nvertex b\nvertex c inf\nedge x a b\nedge y c a\n").unwrap();
        let s = relative_set(&e, &e).unwrap();
        let regular: BTreeSet<String> = e
            .regular_set()
            .into_iter()
            .map(|v| e.vertex_id(v).to_string())
            .collect();
        assert_eq!(s, regular);
        assert_eq!(s, BTreeSet::from(["a".to_string()]));
    }

    #[test]
    fn missing_out_edge_drops_vertex() {
        let e = parse_graph("vertex v\nedge l1 v v\nedge l2 v v\n").unwrap();
        let f = parse_graph("vertex v\nedge l1 v v\n").unwrap();
        assert!(relative_set(&e, &f).unwrap().is_empty());
    }

    #[test]
    fn missing_in_edge_is_irrelevant() {
        let e = parse_graph("vertex u\nvertex v\nedge a u v\nedge b v v\n").unwrap();
        let f = parse_graph("vertex u\nvertex v\nedge b v v\n").unwrap();
        assert_eq!(
            relative_set(&e, &f).unwrap(),
            BTreeSet::from(["v".to_string()])
        );
    }

    #[test]
    fn rejects_non_subgraph() {
        let e = parse_graph("vertex v\n").unwrap();
        let f = parse_graph("vertex v\nvertex w\n").unwrap();
        assert!(matches!(
            relative_set(&e, &f),
            Err(GraphError::NotSubgraph(_))
        ));
        let f2 = parse_graph("vertex v\nedge a v v\n").unwrap();
        let e2 = parse_graph("vertex v\nvertex w\nedge a v w\n").unwrap();
        assert!(matches!(
            relative_set(&e2, &f2),
            Err(GraphError::NotSubgraph(_))
        ));
    }

    #[test]
    fn relative_vertices_validated() {
        let g = parse_graph("vertex v inf\nvertex w\nedge e v w\n").unwrap();
        assert!(matches!(
            RelativeGraph::new(g.clone(), ["v"]),
            Err(GraphError::InvalidRelativeVertex { .. })
        ));
        assert!(matches!(
            RelativeGraph::new(g.clone(), ["w"]),
            Err(GraphError::InvalidRelativeVertex { .. })
        ));
        assert!(matches!(
            RelativeGraph::new(g, ["x"]),
            Err(GraphError::UnknownVertex(_))
        ));
    }
}
