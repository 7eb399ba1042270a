//! The levelled integer modules `V = C_c(E⁰ × ℤ, ℤ)` and `W = C_c(S × ℤ, ℤ)`,
//! their level-0 counterparts, and the operators acting on them.
//!
//! Notation used in the docs below: `α` is the level shift, `β` applies the
//! transposed incidence matrix levelwise on `W`, `β₀` is its level-0 instance,
//! `E` collapses levels by summation and `φ` places a level-0 vector at level 0.
//! `I = (1 − αβ)(W)` is the subgroup whose cosets are the classes in `V/I`.
//!
//! Operators that need the graph live on [`LevelledModule`]; the set `S` is
//! the relative set of the underlying [`RelativeGraph`] (its regular set for a
//! standalone graph).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{Graph, RelativeGraph, VertexIx};

pub type Level = i64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("vector is not supported in the relative set: vertex `{vertex}`")]
    OutsideW { vertex: String },
    #[error("total is nonzero, so no finitely supported solution exists")]
    NonzeroTotal,
}

/// A finitely supported integer function on the vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level0Vector {
    terms: BTreeMap<VertexIx, BigInt>,
}

impl Level0Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(v: VertexIx) -> Self {
        let mut x = Self::zero();
        x.add_term(v, BigInt::from(1));
        x
    }

    pub fn from_dense(values: &[BigInt]) -> Self {
        let mut x = Self::zero();
        for (v, c) in values.iter().enumerate() {
            x.add_term(v, c.clone());
        }
        x
    }

    pub fn to_dense(&self, n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (&v, c) in &self.terms {
            out[v] = c.clone();
        }
        out
    }

    pub fn get(&self, v: VertexIx) -> BigInt {
        self.terms.get(&v).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, v: VertexIx, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(v).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexIx, &BigInt)> {
        self.terms.iter().map(|(&v, c)| (v, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (v, c) in self.iter() {
            out.add_term(v, c * k);
        }
        out
    }
}

impl Add for &Level0Vector {
    type Output = Level0Vector;
    fn add(self, rhs: &Level0Vector) -> Level0Vector {
        let mut out = self.clone();
        for (v, c) in rhs.iter() {
            out.add_term(v, c.clone());
        }
        out
    }
}

impl Sub for &Level0Vector {
    type Output = Level0Vector;
    fn sub(self, rhs: &Level0Vector) -> Level0Vector {
        self + &(-rhs)
    }
}

impl Neg for &Level0Vector {
    type Output = Level0Vector;
    fn neg(self) -> Level0Vector {
        Level0Vector {
            terms: self.terms.iter().map(|(&v, c)| (v, -c)).collect(),
        }
    }
}

/// A finitely supported integer function on `vertices × ℤ`. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LevelledVector {
    // keyed by (level, vertex) so that level slices are contiguous
    terms: BTreeMap<(Level, VertexIx), BigInt>,
}

impl LevelledVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(v: VertexIx, level: Level) -> Self {
        let mut f = Self::zero();
        f.add_term(v, level, BigInt::from(1));
        f
    }

    pub fn get(&self, v: VertexIx, level: Level) -> BigInt {
        self.terms.get(&(level, v)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, v: VertexIx, level: Level, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((level, v)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(level, v));
        }
    }

    /// `(vertex, level, coefficient)` triples in (level, vertex) order.
    pub fn iter(&self) -> impl Iterator<Item = (VertexIx, Level, &BigInt)> {
        self.terms.iter().map(|(&(n, v), c)| (v, n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Lowest and highest occupied levels.
    pub fn level_range(&self) -> Option<(Level, Level)> {
        let lo = self.terms.keys().next()?.0;
        let hi = self.terms.keys().next_back()?.0;
        Some((lo, hi))
    }

    /// The level slice `f_i`.
    pub fn slice(&self, level: Level) -> Level0Vector {
        let mut x = Level0Vector::zero();
        for (&(_, v), c) in self.terms.range((level, 0)..=(level, VertexIx::MAX)) {
            x.add_term(v, c.clone());
        }
        x
    }

    pub fn add_slice(&mut self, level: Level, x: &Level0Vector) {
        for (v, c) in x.iter() {
            self.add_term(v, level, c.clone());
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (v, n, c) in self.iter() {
            out.add_term(v, n, c * k);
        }
        out
    }

    /// Renders as `c·(vertex,level)` terms using the graph's identifiers.
    pub fn display<'a>(&'a self, graph: &'a Graph) -> impl fmt::Display + 'a {
        DisplayLevelled { f: self, graph }
    }
}

struct DisplayLevelled<'a> {
    f: &'a LevelledVector,
    graph: &'a Graph,
}

impl fmt::Display for DisplayLevelled<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_zero() {
            return out.write_str("0");
        }
        let terms: Vec<String> = self
            .f
            .iter()
            .map(|(v, n, c)| format!("{c:+}·({},{n})", self.graph.vertex_id(v)))
            .collect();
        out.write_str(&terms.join(" "))
    }
}

impl Add for &LevelledVector {
    type Output = LevelledVector;
    fn add(self, rhs: &LevelledVector) -> LevelledVector {
        let mut out = self.clone();
        for (v, n, c) in rhs.iter() {
            out.add_term(v, n, c.clone());
        }
        out
    }
}

impl Sub for &LevelledVector {
    type Output = LevelledVector;
    fn sub(self, rhs: &LevelledVector) -> LevelledVector {
        self + &(-rhs)
    }
}

impl Neg for &LevelledVector {
    type Output = LevelledVector;
    fn neg(self) -> LevelledVector {
        LevelledVector {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

/// `α^j`: `(α^j f)(x, n) = f(x, n - j)`.
pub fn shift(f: &LevelledVector, j: Level) -> LevelledVector {
    LevelledVector {
        terms: f
            .terms
            .iter()
            .map(|(&(n, v), c)| ((n + j, v), c.clone()))
            .collect(),
    }
}

/// `e_i`: keeps exactly level `i`.
pub fn e_proj(f: &LevelledVector, i: Level) -> LevelledVector {
    let mut out = LevelledVector::zero();
    out.add_slice(i, &f.slice(i));
    out
}

/// `q_i = Σ_{j ≤ i} e_j`: keeps the levels `≤ i`.
pub fn q_proj(f: &LevelledVector, i: Level) -> LevelledVector {
    LevelledVector {
        terms: f
            .terms
            .iter()
            .filter(|(&(n, _), _)| n <= i)
            .map(|(&k, c)| (k, c.clone()))
            .collect(),
    }
}

/// `E(f) = Σ_i f_i`.
pub fn total(f: &LevelledVector) -> Level0Vector {
    let mut x = Level0Vector::zero();
    for (v, _, c) in f.iter() {
        x.add_term(v, c.clone());
    }
    x
}

/// `φ(x)`: `x` placed at level 0.
pub fn embed(x: &Level0Vector) -> LevelledVector {
    let mut f = LevelledVector::zero();
    f.add_slice(0, x);
    f
}

/// `(1 − α⁻¹) f`.
pub fn one_minus_alpha_inv(f: &LevelledVector) -> LevelledVector {
    f - &shift(f, -1)
}

/// `T f = −Σ_{j<0} α^{−j} q_j f + Σ_{j≥0} α^{−j} (1 − q_j) f`.
///
/// Both sums are finite: `q_j f = 0` below the lowest level and `(1 − q_j) f = 0`
/// from the highest level on. `(1 − α⁻¹)(T f) = f − φ(E(f))` for every `f`.
pub fn telescope(f: &LevelledVector) -> LevelledVector {
    let Some((lo, hi)) = f.level_range() else {
        return LevelledVector::zero();
    };
    let mut acc = LevelledVector::zero();
    for j in lo..0 {
        acc = &acc - &shift(&q_proj(f, j), -j);
    }
    for j in 0..hi {
        acc = &acc + &shift(&(f - &q_proj(f, j)), -j);
    }
    acc
}

/// The finitely supported `g` with `(1 − α⁻¹) g = r`, namely `g_n = Σ_{i ≥ n} r_i`.
/// Exists iff `E(r) = 0`.
pub fn solve_telescoping(r: &LevelledVector) -> Result<LevelledVector, ModuleError> {
    if !total(r).is_zero() {
        return Err(ModuleError::NonzeroTotal);
    }
    let Some((lo, hi)) = r.level_range() else {
        return Ok(LevelledVector::zero());
    };
    let mut g = LevelledVector::zero();
    let mut tail = Level0Vector::zero();
    for n in (lo..=hi).rev() {
        tail = &tail + &r.slice(n);
        g.add_slice(n, &tail);
    }
    Ok(g)
}

/// Why a vector was proven not to lie in `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonMemberReason {
    /// The forced `h_level` has support at a vertex outside `S`.
    SupportLeavesS { level: Level, vertex: String },
    /// The free-running tail `h_{i+1} = β₀ h_i` returned to an earlier nonzero value.
    ForcedCycle { level: Level },
    /// The tail was still nonzero after more steps than there are vertices, so
    /// `β₀` is not nilpotent on it and it never vanishes.
    NonNilpotentTail { level: Level },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IMembership {
    /// `(1 − αβ) witness` equals the queried vector.
    Member {
        witness: LevelledVector,
    },
    NonMember(NonMemberReason),
    /// The iteration cap was reached before a verdict.
    Unknown {
        steps: usize,
    },
}

impl IMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, IMembership::Member { .. })
    }

    pub fn witness(&self) -> Option<&LevelledVector> {
        match self {
            IMembership::Member { witness } => Some(witness),
            _ => None,
        }
    }
}

/// The graph-dependent operators on `V` and `W`.
#[derive(Debug, Clone)]
pub struct LevelledModule<'a> {
    graph: &'a RelativeGraph,
    // β₀(δ_x) for each relative x
    images: Vec<Option<Level0Vector>>,
}

impl<'a> LevelledModule<'a> {
    pub fn new(graph: &'a RelativeGraph) -> Self {
        let g = graph.graph();
        let images = (0..g.vertex_count())
            .map(|x| {
                graph.is_relative(x).then(|| {
                    let mut img = Level0Vector::zero();
                    for (y, m) in g.out_multiplicities(x) {
                        img.add_term(y, BigInt::from(m));
                    }
                    img
                })
            })
            .collect();
        LevelledModule { graph, images }
    }

    pub fn relative_graph(&self) -> &RelativeGraph {
        self.graph
    }

    pub fn graph(&self) -> &Graph {
        self.graph.graph()
    }

    pub fn in_w0(&self, x: &Level0Vector) -> bool {
        x.iter().all(|(v, _)| self.graph.is_relative(v))
    }

    pub fn in_w(&self, f: &LevelledVector) -> bool {
        f.iter().all(|(v, _, _)| self.graph.is_relative(v))
    }

    fn outside(&self, v: VertexIx) -> ModuleError {
        ModuleError::OutsideW {
            vertex: self.graph().vertex_id(v).to_string(),
        }
    }

    /// `β₀(δ_x) = Σ_{e ∈ xF¹} δ_{t(e)}`, extended linearly over `W₀`.
    pub fn beta0(&self, x: &Level0Vector) -> Result<Level0Vector, ModuleError> {
        let mut out = Level0Vector::zero();
        for (v, c) in x.iter() {
            let img = self.images[v].as_ref().ok_or_else(|| self.outside(v))?;
            for (y, m) in img.iter() {
                out.add_term(y, c * m);
            }
        }
        Ok(out)
    }

    /// `β`: `β₀` applied at every level.
    pub fn beta(&self, f: &LevelledVector) -> Result<LevelledVector, ModuleError> {
        let mut out = LevelledVector::zero();
        for (v, n, c) in f.iter() {
            let img = self.images[v].as_ref().ok_or_else(|| self.outside(v))?;
            for (y, m) in img.iter() {
                out.add_term(y, n, c * m);
            }
        }
        Ok(out)
    }

    /// `(1 − αβ) h` for `h ∈ W`; these vectors make up `I`.
    pub fn one_minus_alpha_beta(&self, h: &LevelledVector) -> Result<LevelledVector, ModuleError> {
        Ok(h - &shift(&self.beta(h)?, 1))
    }

    /// Default cap: level span + vertex count + 64 steps.
    pub fn is_in_i(&self, v: &LevelledVector) -> IMembership {
        let span = v.level_range().map_or(0, |(lo, hi)| (hi - lo) as usize + 1);
        self.is_in_i_capped(v, span + self.graph().vertex_count() + 64)
    }

    /// Decides `v ∈ I` by running the forced recursion `h_i = v_i + β₀(h_{i−1})`
    /// upward from the lowest level of `v`. Below that level `h` must vanish,
    /// otherwise it would be nonzero at every lower level.
    pub fn is_in_i_capped(&self, v: &LevelledVector, cap: usize) -> IMembership {
        let Some((lo, hi)) = v.level_range() else {
            return IMembership::Member {
                witness: LevelledVector::zero(),
            };
        };
        let n = self.graph().vertex_count() as Level;
        let mut witness = LevelledVector::zero();
        let mut prev = Level0Vector::zero();
        let mut seen: HashSet<Level0Vector> = HashSet::new();
        for (steps, level) in (lo..).enumerate() {
            if steps >= cap {
                return IMembership::Unknown { steps };
            }
            // prev is in W₀ by the check below
            let cur = &v.slice(level) + &self.beta0(&prev).expect("forced h stays in W");
            if level > hi && cur.is_zero() {
                return IMembership::Member { witness };
            }
            if let Some((bad, _)) = cur.iter().find(|&(x, _)| !self.graph.is_relative(x)) {
                return IMembership::NonMember(NonMemberReason::SupportLeavesS {
                    level,
                    vertex: self.graph().vertex_id(bad).to_string(),
                });
            }
            if level >= hi {
                if !seen.insert(cur.clone()) {
                    return IMembership::NonMember(NonMemberReason::ForcedCycle { level });
                }
                if level - hi > n {
                    return IMembership::NonMember(NonMemberReason::NonNilpotentTail { level });
                }
            }
            witness.add_slice(level, &cur);
            prev = cur;
        }
        unreachable!()
    }

    /// Equality in `V/I`.
    pub fn classes_equal_mod_i(&self, u: &LevelledVector, v: &LevelledVector) -> IMembership {
        self.is_in_i(&(u - v))
    }
}
