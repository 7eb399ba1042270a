mod common;

use std::collections::BTreeSet;

use common::{raw_graph, relative_graph};
use graphk::fixtures;
use graphk::graph::{parse_chain, parse_graph, relative_set, Chain, VertexKind};
use graphk_oracles::count_paths;
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(raw in raw_graph(6, 10)) {
        let g = raw.build();
        prop_assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn incidence_powers_count_paths(raw in raw_graph(6, 10), j in 0u32..=4) {
        let g = raw.build();
        let edges = raw.indexed_edges(&g);
        let p = g.incidence().power(j);
        for x in 0..g.vertex_count() {
            for y in 0..g.vertex_count() {
                let brute = count_paths(&edges, x, y, j as usize);
                prop_assert_eq!(&p[(x, y)], &BigInt::from(brute));
                prop_assert_eq!(g.enumerate_paths(x, j as usize, Some(y)).len() as u64, brute);
            }
        }
    }

    #[test]
    fn classification_partitions_vertices(raw in raw_graph(6, 10)) {
        let g = raw.build();
        for v in 0..g.vertex_count() {
            let c = g.classify(v);
            let out = g.out_edges(v).len();
            let expected = if g.is_infinite_emitter(v) {
                VertexKind::InfiniteEmitter
            } else if out == 0 {
                VertexKind::Sink
            } else {
                VertexKind::Regular
            };
            prop_assert_eq!(c.kind, expected);
            prop_assert_eq!(c.source, g.in_edges(v).is_empty());
            prop_assert_eq!(g.is_regular(v), expected == VertexKind::Regular);
        }
    }

    #[test]
    fn relative_set_of_graph_in_itself_is_regular_set(raw in raw_graph(6, 10)) {
        let g = raw.build();
        let regular: BTreeSet<String> =
            g.regular_set().into_iter().map(|v| g.vertex_id(v).to_string()).collect();
        prop_assert_eq!(relative_set(&g, &g).unwrap(), regular);
    }

    #[test]
    fn add_head_adds_one_vertex_and_one_edge(raw in raw_graph(6, 10)) {
        let g = raw.build();
        for s in g.sources() {
            let d = g.add_head(s).unwrap();
            prop_assert_eq!(d.vertex_count(), g.vertex_count() + 1);
            prop_assert_eq!(d.edge_count(), g.edge_count() + 1);
            prop_assert!(g.is_subgraph_of(&d));
        }
    }

    #[test]
    fn constant_chain_round_trips(f in relative_graph(4, 6)) {
        let c = Chain::new(vec![f.clone(), f]).unwrap();
        prop_assert_eq!(parse_chain(&c.to_text()).unwrap(), c);
    }
}

#[test]
fn example_chain_round_trips() {
    let c = fixtures::hub_ladder_chain(5);
    assert_eq!(parse_chain(&c.to_text()).unwrap(), c);
    assert_eq!(parse_chain(&fixtures::hub_ladder_chain_text(5)).unwrap(), c);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_graph("vertex a\nedge e a b\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    let err = parse_chain("stage\nvertex a\nedge e a a\nsaturate a\nstage\nvertex b\nedge f a b\n")
        .unwrap_err();
    assert!(err.to_string().contains("saturated"), "{err}");
}
