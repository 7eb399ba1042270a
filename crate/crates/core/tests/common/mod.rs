#![allow(dead_code)]

use graphk::graph::{Graph, GraphBuilder, RelativeGraph};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Graph data before validation: vertices `v0..`, edges as index pairs.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub infinite: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
}

impl RawGraph {
    pub fn build(&self) -> Graph {
        let mut b = GraphBuilder::new();
        for (i, &inf) in self.infinite.iter().enumerate() {
            b.vertex(format!("v{i}"), inf).unwrap();
        }
        for (k, &(o, t)) in self.edges.iter().enumerate() {
            b.edge(format!("e{k}"), format!("v{o}"), format!("v{t}"))
                .unwrap();
        }
        b.build().unwrap()
    }

    /// Edges re-indexed by the built graph's vertex order.
    pub fn indexed_edges(&self, g: &Graph) -> Vec<(usize, usize)> {
        let ix = |i: usize| g.vertex(&format!("v{i}")).unwrap();
        self.edges.iter().map(|&(o, t)| (ix(o), ix(t))).collect()
    }
}

pub fn raw_graph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = RawGraph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        (
            proptest::collection::vec(proptest::bool::weighted(0.15), n),
            proptest::collection::vec((0..n, 0..n), 0..=max_edges),
        )
            .prop_map(|(infinite, edges)| RawGraph { infinite, edges })
    })
}

/// A graph together with a random subset of its regular set.
pub fn relative_graph(
    max_vertices: usize,
    max_edges: usize,
) -> impl Strategy<Value = RelativeGraph> {
    (
        raw_graph(max_vertices, max_edges),
        proptest::collection::vec(proptest::bool::weighted(0.75), 16),
    )
        .prop_map(|(raw, keep)| {
            let g = raw.build();
            let ids: Vec<String> = g
                .regular_set()
                .into_iter()
                .filter(|&v| keep[v])
                .map(|v| g.vertex_id(v).to_string())
                .collect();
            RelativeGraph::new(g, ids).unwrap()
        })
}

pub fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}
