use super::{Graph, GraphBuilder, GraphError};

/// One meaningful line of a graph or chain file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Directive<'a> {
    Vertex {
        id: &'a str,
        infinite: bool,
    },
    Edge {
        id: &'a str,
        origin: &'a str,
        terminus: &'a str,
    },
    Stage,
    Saturate(&'a str),
}

/// Splits `text` into numbered directives, skipping blanks and `#` comments.
pub(crate) fn directives(text: &str) -> Result<Vec<(usize, Directive<'_>)>, GraphError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: &str| GraphError::Syntax {
            line,
            message: message.to_string(),
        };
        let d = match tokens.as_slice() {
            [] => continue,
            ["vertex", id] => Directive::Vertex {
                id,
                infinite: false,
            },
            ["vertex", id, "inf"] => Directive::Vertex { id, infinite: true },
            ["vertex", ..] => return Err(syntax("expected `vertex <id> [inf]`")),
            ["edge", id, origin, terminus] => Directive::Edge {
                id,
                origin,
                terminus,
            },
            ["edge", ..] => return Err(syntax("expected `edge <id> <origin> <terminus>`")),
            ["stage"] => Directive::Stage,
            ["stage", ..] => return Err(syntax("`stage` takes no arguments")),
            ["saturate", v] => Directive::Saturate(v),
            ["saturate", ..] => return Err(syntax("expected `saturate <vertex-id>`")),
            [other, ..] => return Err(syntax(&format!("unknown directive `{other}`"))),
        };
        out.push((line, d));
    }
    Ok(out)
}

pub(crate) fn at_line(line: usize) -> impl Fn(GraphError) -> GraphError {
    move |e| GraphError::AtLine {
        line,
        source: Box::new(e),
    }
}

/// Applies vertex and edge directives to `builder`. Edges may refer to vertices
/// declared later in the same batch.
pub(crate) fn apply_declarations(
    builder: &mut GraphBuilder,
    batch: &[(usize, Directive<'_>)],
) -> Result<(), GraphError> {
    for (line, d) in batch {
        if let Directive::Vertex { id, infinite } = d {
            builder.vertex(*id, *infinite).map_err(at_line(*line))?;
        }
    }
    for (line, d) in batch {
        if let Directive::Edge {
            id,
            origin,
            terminus,
        } = d
        {
            for v in [origin, terminus] {
                if !builder.has_vertex(v) {
                    return Err(at_line(*line)(GraphError::UndeclaredVertex {
                        edge: id.to_string(),
                        vertex: v.to_string(),
                    }));
                }
            }
            builder
                .edge(*id, *origin, *terminus)
                .map_err(at_line(*line))?;
        }
    }
    Ok(())
}

/// Parses the graph file format: `vertex <id> [inf]` and
/// `edge <id> <origin> <terminus>` lines, with `#` comments.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let ds = directives(text)?;
    if let Some((line, _)) = ds
        .iter()
        .find(|(_, d)| matches!(d, Directive::Stage | Directive::Saturate(_)))
    {
        return Err(GraphError::Syntax {
            line: *line,
            message: "`stage`/`saturate` belong in chain files".into(),
        });
    }
    let mut b = GraphBuilder::new();
    apply_declarations(&mut b, &ds)?;
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexKind;

    #[test]
    fn minimal_file() {
        let g = parse_graph("vertex v\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn two_loops() {
        let g = parse_graph("vertex v\nedge e1 v v\nedge e2 v v\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 2));
        assert!(g.edges().iter().all(|e| e.origin == 0 && e.terminus == 0));
    }

    #[test]
    fn flagged_vertex() {
        let g = parse_graph("vertex v inf\nedge e v v\n").unwrap();
        assert!(g.is_infinite_emitter(0));
        assert_eq!(g.out_edges(0).len(), 1);
        assert_eq!(g.classify(0).kind, VertexKind::InfiniteEmitter);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# header\n\nvertex a # trailing\nvertex b\nedge x a b\n").unwrap();
        assert_eq!(g.vertex_ids(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dup = parse_graph("vertex v\nvertex v\n").unwrap_err();
        assert_eq!(
            dup,
            GraphError::AtLine {
                line: 2,
                source: Box::new(GraphError::DuplicateVertex("v".into()))
            }
        );
        let undeclared = parse_graph("vertex v\n\nedge e v w\n").unwrap_err();
        assert!(matches!(undeclared, GraphError::AtLine { line: 3, .. }));
        assert_eq!(
            undeclared.to_string(),
            "line 3: edge `e` references undeclared vertex `w`"
        );
        let dup_edge = parse_graph("vertex v\nedge e v v\nedge e v v\n").unwrap_err();
        assert!(matches!(dup_edge, GraphError::AtLine { line: 3, .. }));
        let malformed = parse_graph("vertex v\nedge e v\n").unwrap_err();
        assert!(matches!(malformed, GraphError::Syntax { line: 2, .. }));
        let junk = parse_graph("vertx v\n").unwrap_err();
        assert!(matches!(junk, GraphError::Syntax { line: 1, .. }));
        assert!(parse_graph("stage\nvertex v\n").is_err());
    }
}
