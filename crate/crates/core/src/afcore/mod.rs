//! The finite-dimensional approximants `C_k(F, S_F)` of the AF core.
//!
//! A minimal projection of `C_k` is equivalent to exactly one formal class:
//! the defect class `ξ(y)@j` for `j < k` and `y ∉ S_F`, or the full class
//! `s(y)@k`. Block sizes are path counts `|F^j y|`. Vertex classes `[ζ_n s_x]`
//! expand over these with path-count coefficients, which turns the vanishing
//! of `Φ` into finitely many linear conditions.

mod bratteli;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{Graph, RelativeGraph, VertexIx};
use crate::matrix::IntMatrix;
use crate::zmodule::{Level, Level0Vector, LevelledModule, LevelledVector};

pub use bratteli::{bratteli, BratteliDiagram, BratteliEdge};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AfError {
    #[error("cutoff k must be at least 1")]
    CutoffZero,
    #[error("level {level} outside 0..={k}")]
    LevelOutOfRange { level: Level, k: usize },
    #[error("support term at ({vertex}, {level}) outside F⁰ × [0, {k}]")]
    SupportOutOfRange {
        vertex: String,
        level: Level,
        k: usize,
    },
    #[error("kernel condition fails at vertex `{vertex}`, level {level}")]
    ConditionsFail { vertex: String, level: usize },
    #[error("recursion result does not reproduce the input")]
    VerificationFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectionKind {
    /// `ξ(y)@j`, `j < k`, only for `y ∉ S_F`.
    Defect,
    /// `s(y)@k`.
    Full,
}

/// A minimal-projection class of `C_k(F, S_F)`. Ordered by (kind, level, vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefectBasisElement {
    pub kind: ProjectionKind,
    pub level: usize,
    pub vertex: VertexIx,
}

impl DefectBasisElement {
    pub fn defect(level: usize, vertex: VertexIx) -> Self {
        DefectBasisElement {
            kind: ProjectionKind::Defect,
            level,
            vertex,
        }
    }

    pub fn full(level: usize, vertex: VertexIx) -> Self {
        DefectBasisElement {
            kind: ProjectionKind::Full,
            level,
            vertex,
        }
    }

    pub fn label(&self, g: &Graph) -> String {
        let y = g.vertex_id(self.vertex);
        match self.kind {
            ProjectionKind::Defect => format!("ξ({y})@{}", self.level),
            ProjectionKind::Full => format!("s({y})@{}", self.level),
        }
    }
}

/// An integer combination of basis classes for fixed `(F, k)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefectCombination {
    terms: BTreeMap<DefectBasisElement, BigInt>,
}

impl DefectCombination {
    pub fn add_term(&mut self, b: DefectBasisElement, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn get(&self, b: &DefectBasisElement) -> BigInt {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DefectBasisElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        DisplayCombination { c: self, g }
    }
}

struct DisplayCombination<'a> {
    c: &'a DefectCombination,
    g: &'a Graph,
}

impl fmt::Display for DisplayCombination<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .map(|(b, c)| format!("{c:+}·{}", b.label(self.g)))
            .collect();
        f.write_str(&terms.join(" "))
    }
}

/// `C_k(F, S_F)` for a fixed relative graph and cutoff.
#[derive(Debug, Clone)]
pub struct Approximant<'a> {
    graph: &'a RelativeGraph,
    k: usize,
    // M_F^j for 0 ≤ j ≤ k
    powers: Vec<IntMatrix>,
}

impl<'a> Approximant<'a> {
    pub fn new(graph: &'a RelativeGraph, k: usize) -> Result<Self, AfError> {
        if k == 0 {
            return Err(AfError::CutoffZero);
        }
        Ok(Self::with_cutoff(graph, k))
    }

    /// Also allows `k = 0`, the root layer `C_0 = span{s_y}`.
    pub(crate) fn with_cutoff(graph: &'a RelativeGraph, k: usize) -> Self {
        let m = graph.graph().incidence().matrix;
        let mut powers = vec![IntMatrix::identity(m.rows())];
        for j in 0..k {
            let next = powers[j].mul(&m);
            powers.push(next);
        }
        Approximant { graph, k, powers }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn relative_graph(&self) -> &RelativeGraph {
        self.graph
    }

    fn vertex_count(&self) -> usize {
        self.graph.graph().vertex_count()
    }

    /// `|F^j y|`.
    fn paths_into(&self, j: usize, y: VertexIx) -> BigInt {
        (0..self.vertex_count())
            .map(|x| self.powers[j][(x, y)].clone())
            .sum()
    }

    /// The basis classes in order, each with its block size `|F^j y|`.
    pub fn blocks(&self) -> Vec<(DefectBasisElement, BigInt)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for j in 0..self.k {
            for y in (0..n).filter(|&y| !self.graph.is_relative(y)) {
                out.push((DefectBasisElement::defect(j, y), self.paths_into(j, y)));
            }
        }
        for y in 0..n {
            out.push((
                DefectBasisElement::full(self.k, y),
                self.paths_into(self.k, y),
            ));
        }
        out
    }

    /// `dim C_k = Σ (block size)²`.
    pub fn dimension(&self) -> BigInt {
        self.blocks().into_iter().map(|(_, s)| &s * &s).sum()
    }

    /// `[ζ_n s_x] = Σ_{n ≤ j < k} Σ_y M^{j−n}(x,y) ξ(y)@j + Σ_y M^{k−n}(x,y) s(y)@k`.
    pub fn expand_class(&self, x: VertexIx, n: Level) -> Result<DefectCombination, AfError> {
        if n < 0 || n as usize > self.k {
            return Err(AfError::LevelOutOfRange {
                level: n,
                k: self.k,
            });
        }
        let n = n as usize;
        let mut out = DefectCombination::default();
        for j in n..self.k {
            for y in (0..self.vertex_count()).filter(|&y| !self.graph.is_relative(y)) {
                out.add_term(
                    DefectBasisElement::defect(j, y),
                    self.powers[j - n][(x, y)].clone(),
                );
            }
        }
        for y in 0..self.vertex_count() {
            out.add_term(
                DefectBasisElement::full(self.k, y),
                self.powers[self.k - n][(x, y)].clone(),
            );
        }
        Ok(out)
    }

    fn check_support(&self, g: &LevelledVector) -> Result<(), AfError> {
        for (v, n, _) in g.iter() {
            if n < 0 || n as usize > self.k {
                return Err(AfError::SupportOutOfRange {
                    vertex: self.graph.graph().vertex_id(v).to_string(),
                    level: n,
                    k: self.k,
                });
            }
        }
        Ok(())
    }

    /// `Φ(g) = Σ g(x, i) [ζ_i s_x]` in the basis of `C_k`.
    pub fn phi_eval(&self, g: &LevelledVector) -> Result<DefectCombination, AfError> {
        self.check_support(g)?;
        let mut out = DefectCombination::default();
        for (x, n, c) in g.iter() {
            for (b, coeff) in self.expand_class(x, n)?.iter() {
                out.add_term(*b, c * coeff);
            }
        }
        Ok(out)
    }

    /// Running sums `c_j = g_j + A c_{j−1}` with `A = M_Fᵗ`, for `0 ≤ j ≤ k`.
    fn running_sums(&self, g: &LevelledVector) -> Vec<Level0Vector> {
        let graph = self.graph.graph();
        let mut sums: Vec<Level0Vector> = Vec::with_capacity(self.k + 1);
        for j in 0..=self.k {
            let mut c = g.slice(j as Level);
            if let Some(prev) = sums.last() {
                for (x, v) in prev.iter() {
                    for (y, m) in graph.out_multiplicities(x) {
                        c.add_term(y, v * BigInt::from(m));
                    }
                }
            }
            sums.push(c);
        }
        sums
    }

    /// The first violated condition, if any: `c_j(y) = 0` for `y ∉ S_F`, `j < k`,
    /// and `c_k = 0`.
    fn first_violation(&self, g: &LevelledVector) -> Option<(VertexIx, usize)> {
        let sums = self.running_sums(g);
        for (j, c) in sums.iter().enumerate() {
            let bad = c
                .iter()
                .find(|&(y, _)| j == self.k || !self.graph.is_relative(y));
            if let Some((y, _)) = bad {
                return Some((y, j));
            }
        }
        None
    }

    /// True iff `Φ(g)` vanishes in `K₀(C_k)`, computed through the linear
    /// conditions rather than the expansion.
    pub fn kernel_conditions(&self, g: &LevelledVector) -> Result<bool, AfError> {
        self.check_support(g)?;
        Ok(self.first_violation(g).is_none())
    }

    /// The `h ∈ W` with `(1 − αβ) h = g`: `h₀ = g₀`, `h_i = g_i + β₀ h_{i−1}`
    /// for `0 < i < k`, zero elsewhere. The result is verified before returning.
    pub fn build_h(&self, g: &LevelledVector) -> Result<LevelledVector, AfError> {
        self.check_support(g)?;
        if let Some((y, level)) = self.first_violation(g) {
            return Err(AfError::ConditionsFail {
                vertex: self.graph.graph().vertex_id(y).to_string(),
                level,
            });
        }
        let module = LevelledModule::new(self.graph);
        let mut h = LevelledVector::zero();
        let mut prev = Level0Vector::zero();
        for i in 0..self.k as Level {
            let image = module
                .beta0(&prev)
                .map_err(|_| AfError::VerificationFailed)?;
            let cur = &g.slice(i) + &image;
            h.add_slice(i, &cur);
            prev = cur;
        }
        match module.one_minus_alpha_beta(&h) {
            Ok(back) if &back == g => Ok(h),
            _ => Err(AfError::VerificationFailed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn circle_toeplitz() -> RelativeGraph {
        RelativeGraph::toeplitz(fixtures::cuntz(1))
    }

    #[test]
    fn blocks_of_toeplitz_circle() {
        let f = circle_toeplitz();
        let c = Approximant::new(&f, 2).unwrap();
        assert_eq!(
            c.blocks(),
            vec![
                (DefectBasisElement::defect(0, 0), bi(1)),
                (DefectBasisElement::defect(1, 0), bi(1)),
                (DefectBasisElement::full(2, 0), bi(1)),
            ]
        );
        assert_eq!(c.dimension(), bi(3));
    }

    #[test]
    fn blocks_of_saturated_o2() {
        let f = RelativeGraph::standalone(fixtures::cuntz(2));
        let c = Approximant::new(&f, 1).unwrap();
        assert_eq!(c.blocks(), vec![(DefectBasisElement::full(1, 0), bi(2))]);
        assert_eq!(c.dimension(), bi(4));
    }

    #[test]
    fn blocks_of_bare_vertex() {
        let f = RelativeGraph::toeplitz(fixtures::sink());
        let c = Approximant::new(&f, 1).unwrap();
        assert_eq!(
            c.blocks(),
            vec![
                (DefectBasisElement::defect(0, 0), bi(1)),
                (DefectBasisElement::full(1, 0), bi(0))
            ]
        );
        assert_eq!(c.dimension(), bi(1));
        assert_eq!(Approximant::new(&f, 0).unwrap_err(), AfError::CutoffZero);
    }

    #[test]
    fn expansions() {
        let f = circle_toeplitz();
        let c = Approximant::new(&f, 2).unwrap();
        let e = c.expand_class(0, 0).unwrap();
        assert_eq!(e.len(), 3);
        assert!(e.iter().all(|(_, k)| k == &bi(1)));
        let top = c.expand_class(0, 2).unwrap();
        assert_eq!(
            top.iter().collect::<Vec<_>>(),
            vec![(&DefectBasisElement::full(2, 0), &bi(1))]
        );
        assert!(matches!(
            c.expand_class(0, 3),
            Err(AfError::LevelOutOfRange { .. })
        ));

        let o2 = RelativeGraph::standalone(fixtures::cuntz(2));
        let c2 = Approximant::new(&o2, 2).unwrap();
        let e2 = c2.expand_class(0, 0).unwrap();
        assert_eq!(
            e2.iter().collect::<Vec<_>>(),
            vec![(&DefectBasisElement::full(2, 0), &bi(4))]
        );
    }

    #[test]
    fn phi_and_conditions() {
        let f = RelativeGraph::standalone(fixtures::cuntz(1));
        let c = Approximant::new(&f, 1).unwrap();
        assert!(c.phi_eval(&LevelledVector::zero()).unwrap().is_zero());
        assert!(c.kernel_conditions(&LevelledVector::zero()).unwrap());

        let d = LevelledVector::delta(0, 0);
        let phi = c.phi_eval(&d).unwrap();
        assert_eq!(phi.get(&DefectBasisElement::full(1, 0)), bi(1));
        assert!(!c.kernel_conditions(&d).unwrap());

        let m = LevelledModule::new(&f);
        let gen = m.one_minus_alpha_beta(&d).unwrap();
        assert!(c.phi_eval(&gen).unwrap().is_zero());
        assert!(c.kernel_conditions(&gen).unwrap());

        assert!(matches!(
            c.phi_eval(&LevelledVector::delta(0, -1)),
            Err(AfError::SupportOutOfRange { .. })
        ));
    }

    #[test]
    fn generator_on_ladder_vanishes() {
        let f = fixtures::hub_ladder_stage(2);
        let v = f.graph().vertex("2").unwrap();
        let c = Approximant::new(&f, 2).unwrap();
        let m = LevelledModule::new(&f);
        let g = m
            .one_minus_alpha_beta(&LevelledVector::delta(v, 0))
            .unwrap();
        assert!(c.phi_eval(&g).unwrap().is_zero());
    }

    #[test]
    fn build_h_inverts_generators() {
        let f = fixtures::hub_ladder_stage(2);
        let m = LevelledModule::new(&f);
        let c = Approximant::new(&f, 3).unwrap();
        let (one, two) = (
            f.graph().vertex("1").unwrap(),
            f.graph().vertex("-2").unwrap(),
        );
        let mut h0 = LevelledVector::delta(one, 0);
        h0.add_term(two, 2, bi(-3));
        let g = m.one_minus_alpha_beta(&h0).unwrap();
        assert_eq!(c.build_h(&g).unwrap(), h0);
        assert!(c.build_h(&LevelledVector::zero()).unwrap().is_zero());
    }

    #[test]
    fn build_h_rejects_top_level_failure() {
        let f = RelativeGraph::standalone(fixtures::cuntz(1));
        let c = Approximant::new(&f, 2).unwrap();
        // c_2 = δ_v ≠ 0
        let err = c.build_h(&LevelledVector::delta(0, 2)).unwrap_err();
        assert_eq!(
            err,
            AfError::ConditionsFail {
                vertex: "v".into(),
                level: 2
            }
        );
    }
}
