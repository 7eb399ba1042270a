use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{AfError, Approximant, DefectBasisElement, ProjectionKind};
use crate::graph::RelativeGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliEdge {
    /// Index into the source layer's blocks.
    pub from: usize,
    /// Index into the next layer's blocks.
    pub to: usize,
    pub multiplicity: BigInt,
}

/// Bratteli diagram of `C_0 ⊆ C_1 ⊆ … ⊆ C_kmax`, rooted at `C_0 = span{s_y}`.
#[derive(Debug, Clone)]
pub struct BratteliDiagram {
    graph: RelativeGraph,
    /// `layers[k]` holds the blocks of `C_k`.
    pub layers: Vec<Vec<(DefectBasisElement, BigInt)>>,
    /// `edges[k]` joins layer `k` to layer `k + 1`.
    pub edges: Vec<Vec<BratteliEdge>>,
}

pub fn bratteli(f: &RelativeGraph, kmax: usize) -> Result<BratteliDiagram, AfError> {
    if kmax == 0 {
        return Err(AfError::CutoffZero);
    }
    let layers: Vec<_> = (0..=kmax)
        .map(|k| Approximant::with_cutoff(f, k).blocks())
        .collect();
    let g = f.graph();
    let mut edges = Vec::with_capacity(kmax);
    for (k, pair) in layers.windows(2).enumerate() {
        let (cur, next) = (&pair[0], &pair[1]);
        let position = |b: DefectBasisElement| {
            next.iter()
                .position(|(c, _)| *c == b)
                .expect("basis element present in next layer")
        };
        let mut out = Vec::new();
        for (from, (b, _)) in cur.iter().enumerate() {
            match b.kind {
                ProjectionKind::Defect => {
                    out.push(BratteliEdge {
                        from,
                        to: position(*b),
                        multiplicity: BigInt::from(1),
                    });
                }
                ProjectionKind::Full => {
                    let y = b.vertex;
                    if !f.is_relative(y) {
                        let to = position(DefectBasisElement::defect(k, y));
                        out.push(BratteliEdge {
                            from,
                            to,
                            multiplicity: BigInt::from(1),
                        });
                    }
                    for (z, m) in g.out_multiplicities(y) {
                        let to = position(DefectBasisElement::full(k + 1, z));
                        out.push(BratteliEdge {
                            from,
                            to,
                            multiplicity: BigInt::from(m),
                        });
                    }
                }
            }
        }
        edges.push(out);
    }
    Ok(BratteliDiagram {
        graph: f.clone(),
        layers,
        edges,
    })
}

impl BratteliDiagram {
    pub fn kmax(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn dimension(&self, k: usize) -> BigInt {
        self.layers[k].iter().map(|(_, s)| s * s).sum()
    }

    /// Block sizes of each layer pushed forward along the edges from the
    /// previous one; must agree with the computed sizes.
    pub fn sizes_consistent(&self) -> bool {
        self.edges.iter().enumerate().all(|(i, es)| {
            let mut pushed = vec![BigInt::zero(); self.layers[i + 1].len()];
            for e in es {
                pushed[e.to] += &e.multiplicity * &self.layers[i][e.from].1;
            }
            pushed
                .iter()
                .zip(&self.layers[i + 1])
                .all(|(p, (_, s))| p == s)
        })
    }

    pub fn to_table(&self) -> String {
        let g = self.graph.graph();
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            let blocks: Vec<String> = layer
                .iter()
                .map(|(b, s)| format!("{}[{s}]", b.label(g)))
                .collect();
            let _ = writeln!(
                out,
                "k={i}: dim {}  {}",
                self.dimension(i),
                blocks.join(" ")
            );
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let g = self.graph.graph();
        let node = |layer: usize, idx: usize| format!("n{layer}_{idx}");
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n");
        for (i, layer) in self.layers.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{i} {{");
            let _ = writeln!(out, "    label=\"k={i}\";");
            for (j, (b, s)) in layer.iter().enumerate() {
                let label = format!("{} [{s}]", b.label(g))
                    .replace('\\', "\\\\")
                    .replace('"', "\\\"");
                let _ = writeln!(out, "    {} [label=\"{label}\"];", node(i, j));
            }
            out.push_str("  }\n");
        }
        for (i, es) in self.edges.iter().enumerate() {
            for e in es {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label=\"{}\"];",
                    node(i, e.from),
                    node(i + 1, e.to),
                    e.multiplicity
                );
            }
        }
        out.push_str("}\n");
        out
    }
}
