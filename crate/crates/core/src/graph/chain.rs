use std::collections::BTreeSet;

use super::parse::{apply_declarations, at_line, directives, Directive};
use super::{GraphBuilder, GraphError, RelativeGraph};

/// A nested sequence of relative graphs `F_1 ⊆ F_2 ⊆ … ⊆ F_N`.
///
/// Admissibility: vertex, edge and relative sets never shrink, flags never
/// change, and a vertex that is relative at some stage gains no out-edges later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    stages: Vec<RelativeGraph>,
}

impl Chain {
    pub fn new(stages: Vec<RelativeGraph>) -> Result<Self, GraphError> {
        for (i, pair) in stages.windows(2).enumerate() {
            check_step(&pair[0], &pair[1]).map_err(|message| GraphError::Inadmissible {
                stage: i + 2,
                message,
            })?;
        }
        Ok(Chain { stages })
    }

    pub fn stages(&self) -> &[RelativeGraph] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Serializes in the chain file format, each stage listing only what it adds.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut seen_v: BTreeSet<&str> = BTreeSet::new();
        let mut seen_e: BTreeSet<&str> = BTreeSet::new();
        let mut seen_s: BTreeSet<&str> = BTreeSet::new();
        for stage in &self.stages {
            let g = stage.graph();
            out.push_str("stage\n");
            for (v, id) in g.vertex_ids().iter().enumerate() {
                if seen_v.insert(id) {
                    let inf = if g.is_infinite_emitter(v) { " inf" } else { "" };
                    out.push_str(&format!("vertex {id}{inf}\n"));
                }
            }
            for e in g.edges() {
                if seen_e.insert(&e.id) {
                    out.push_str(&format!(
                        "edge {} {} {}\n",
                        e.id,
                        g.vertex_id(e.origin),
                        g.vertex_id(e.terminus)
                    ));
                }
            }
            for id in stage.relative_ids() {
                if seen_s.insert(id) {
                    out.push_str(&format!("saturate {id}\n"));
                }
            }
        }
        out
    }
}

fn check_step(prev: &RelativeGraph, next: &RelativeGraph) -> Result<(), String> {
    let (p, n) = (prev.graph(), next.graph());
    if let Some(why) = p.subgraph_violation(n) {
        return Err(format!(
            "previous stage is not contained in this one: {why}"
        ));
    }
    for (v, id) in p.vertex_ids().iter().enumerate() {
        let nv = n.vertex(id).map_err(|e| e.to_string())?;
        if p.is_infinite_emitter(v) != n.is_infinite_emitter(nv) {
            return Err(format!("infinite-emitter flag of vertex `{id}` changed"));
        }
        if prev.is_relative(v) {
            if !next.is_relative(nv) {
                return Err(format!("vertex `{id}` left the relative set"));
            }
            let before = p.out_edge_ids(v);
            if let Some(added) = n.out_edge_ids(nv).into_iter().find(|e| !before.contains(e)) {
                return Err(format!("edge `{added}` added at saturated vertex `{id}`"));
            }
        }
    }
    Ok(())
}

/// Parses a chain file: `stage` blocks of additive `vertex`/`edge` lines and
/// `saturate <vertex>` lines, which put the vertex in the relative set of the
/// current and every later stage.
pub fn parse_chain(text: &str) -> Result<Chain, GraphError> {
    let ds = directives(text)?;
    let mut blocks: Vec<Vec<(usize, Directive<'_>)>> = Vec::new();
    for (line, d) in ds {
        match d {
            Directive::Stage => blocks.push(Vec::new()),
            other => match blocks.last_mut() {
                Some(b) => b.push((line, other)),
                None => {
                    return Err(GraphError::Syntax {
                        line,
                        message: "expected `stage` before declarations".into(),
                    })
                }
            },
        }
    }
    if blocks.is_empty() {
        return Err(GraphError::Syntax {
            line: 0,
            message: "chain file has no stages".into(),
        });
    }

    let mut builder = GraphBuilder::new();
    let mut saturated: BTreeSet<String> = BTreeSet::new();
    let mut stages = Vec::with_capacity(blocks.len());
    for (i, block) in blocks.iter().enumerate() {
        apply_declarations(&mut builder, block)?;
        for (line, d) in block {
            if let Directive::Saturate(v) = d {
                if !builder.has_vertex(v) {
                    return Err(at_line(*line)(GraphError::UnknownVertex(v.to_string())));
                }
                saturated.insert(v.to_string());
            }
        }
        let graph = builder.build()?;
        let stage =
            RelativeGraph::new(graph, &saturated).map_err(|e| GraphError::Inadmissible {
                stage: i + 1,
                message: e.to_string(),
            })?;
        stages.push(stage);
    }
    Chain::new(stages)
}
