//! Small named graphs used by tests, the CLI and the data files.

use crate::graph::{Chain, Graph, GraphBuilder, RelativeGraph};

/// One vertex `v` with `n` loops.
pub fn cuntz(n: usize) -> Graph {
    let mut b = GraphBuilder::new();
    b.vertex("v", false).unwrap();
    for i in 0..n {
        b.edge(format!("e{i}"), "v", "v").unwrap();
    }
    b.build().unwrap()
}

/// A single vertex with no edges.
pub fn sink() -> Graph {
    cuntz(0)
}

/// Stage `n` of the two-sided ladder with a hub: vertices `-n..=n`, a loop at
/// every nonzero vertex, edges `k → k-1` and `-k → -(k-1)` for `2 ≤ k ≤ n`,
/// edges `±1 → 0`, and the hub `0` (an infinite emitter in the ambient graph)
/// with edges `0 → ±k` for `1 ≤ k ≤ n`. Every nonzero vertex is saturated.
pub fn hub_ladder_stage(n: i64) -> RelativeGraph {
    let mut b = GraphBuilder::new();
    b.vertex("0", true).unwrap();
    let mut relative = Vec::new();
    for k in 1..=n {
        for v in [k, -k] {
            b.vertex(v.to_string(), false).unwrap();
            relative.push(v.to_string());
        }
    }
    for k in 1..=n {
        for v in [k, -k] {
            let down = v - v.signum();
            b.edge(format!("l{v}"), v.to_string(), v.to_string())
                .unwrap();
            b.edge(format!("d{v}"), v.to_string(), down.to_string())
                .unwrap();
            b.edge(format!("h{v}"), "0", v.to_string()).unwrap();
        }
    }
    RelativeGraph::new(b.build().unwrap(), relative).unwrap()
}

/// The chain of hub-ladder stages `1..=n`.
pub fn hub_ladder_chain(n: i64) -> Chain {
    Chain::new((1..=n).map(hub_ladder_stage).collect()).unwrap()
}

pub fn hub_ladder_chain_text(n: i64) -> String {
    let mut text = String::from(
        "# Two-sided ladder with an infinite-emitting hub 0, truncated at 1..N.\n\
         # K0 of the limit is 0, K1 is Z generated by d(1) - d(-1).\n",
    );
    text.push_str(&hub_ladder_chain(n).to_text());
    text
}
