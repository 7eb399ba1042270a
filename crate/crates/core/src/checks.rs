//! Seeded randomized suites for the module identities and the membership
//! constructions. Each suite draws from its own stream derived from the seed,
//! so results do not depend on which other suites ran.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::afcore::Approximant;
use crate::graph::{Graph, GraphBuilder, RelativeGraph, VertexIx};
use crate::ktheory::{b_matrix, kernel_basis};
use crate::zmodule::{
    e_proj, embed, one_minus_alpha_inv, q_proj, shift, solve_telescoping, telescope, total,
    IMembership, Level, Level0Vector, LevelledModule, LevelledVector,
};

/// Random graph on `v0, v1, …` with edges `e0, e1, …`; each vertex is flagged
/// as an infinite emitter with probability `infinite`.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
    infinite: f64,
) -> Graph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.vertex(format!("v{i}"), rng.gen_bool(infinite))
            .expect("fresh vertex");
    }
    for i in 0..rng.gen_range(0..=max_edges) {
        let (o, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        b.edge(format!("e{i}"), format!("v{o}"), format!("v{t}"))
            .expect("fresh edge");
    }
    b.build().expect("random graph is well formed")
}

/// Relative graph whose relative set is a random subset of the regular set.
pub fn random_relative<R: Rng>(rng: &mut R, g: Graph) -> RelativeGraph {
    let keep: BTreeSet<VertexIx> = g
        .regular_set()
        .into_iter()
        .filter(|_| rng.gen_bool(0.75))
        .collect();
    RelativeGraph::from_indices(g, &keep).expect("subset of the regular set")
}

/// Random vector supported on `vertices × levels`.
pub fn random_levelled<R: Rng>(
    rng: &mut R,
    vertices: &[VertexIx],
    levels: RangeInclusive<Level>,
    coeff: i64,
    max_terms: usize,
) -> LevelledVector {
    let mut f = LevelledVector::zero();
    if vertices.is_empty() {
        return f;
    }
    for _ in 0..rng.gen_range(0..=max_terms) {
        let v = *vertices.choose(rng).expect("nonempty");
        let n = rng.gen_range(levels.clone());
        f.add_term(v, n, BigInt::from(rng.gen_range(-coeff..=coeff)));
    }
    f
}

/// Where a suite draws its graphs from.
#[derive(Debug, Clone, Copy)]
pub enum Graphs<'a> {
    Fixed(&'a RelativeGraph),
    Random {
        max_vertices: usize,
        max_edges: usize,
    },
}

impl Graphs<'_> {
    fn draw<R: Rng>(&self, rng: &mut R) -> RelativeGraph {
        match *self {
            Graphs::Fixed(f) => f.clone(),
            Graphs::Random {
                max_vertices,
                max_edges,
            } => {
                let g = random_graph(rng, max_vertices, max_edges, 0.15);
                random_relative(rng, g)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// `f − φ(E f) = (1 − α⁻¹)(T f)`.
    Telescope,
    /// `solve_telescoping((1 − αβ)h) + φ(E h) ∈ I` when `E h ∈ ker(1 − β₀)`.
    Constructive,
    /// `(α⁻¹ − β)φ(x) = (1 − αβ)α⁻¹φ(x)` and the difference lies in `I`.
    Intertwining,
    /// Commutation rules among `α`, `β`, `e_i`, `q_i`, `E`, `φ`.
    Operators,
    /// `Φ(g) = 0 ⇔` kernel conditions, and `build_h` inverts when they hold.
    PhiKernel,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Telescope,
        Suite::Constructive,
        Suite::Intertwining,
        Suite::Operators,
        Suite::PhiKernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Telescope => "telescope-identity",
            Suite::Constructive => "constructive-membership",
            Suite::Intertwining => "intertwining",
            Suite::Operators => "operator-identities",
            Suite::PhiKernel => "phi-kernel-equivalence",
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failed: usize,
    /// Up to three failing cases, rendered.
    pub samples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} passed, {} failed",
            self.suite.name(),
            self.cases - self.failed,
            self.failed
        )
    }
}

pub fn run_suite(suite: Suite, graphs: Graphs<'_>, cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite.stream());
    let mut report = SuiteReport {
        suite,
        cases,
        failed: 0,
        samples: Vec::new(),
    };
    for i in 0..cases {
        let f = graphs.draw(&mut rng);
        let outcome = match suite {
            Suite::Telescope => telescope_case(&mut rng, &f),
            Suite::Constructive => constructive_case(&mut rng, &f),
            Suite::Intertwining => intertwining_case(&mut rng, &f),
            Suite::Operators => operators_case(&mut rng, &f),
            Suite::PhiKernel => phi_kernel_case(&mut rng, &f),
        };
        if let Err(msg) = outcome {
            report.failed += 1;
            if report.samples.len() < 3 {
                report.samples.push(format!("case {i}: {msg}"));
            }
        }
    }
    report
}

pub fn run_all(graphs: Graphs<'_>, cases: usize, seed: u64) -> Vec<SuiteReport> {
    Suite::ALL
        .iter()
        .map(|&s| run_suite(s, graphs, cases, seed))
        .collect()
}

type CaseResult = Result<(), String>;

fn all_vertices(f: &RelativeGraph) -> Vec<VertexIx> {
    (0..f.graph().vertex_count()).collect()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn telescope_case<R: Rng>(rng: &mut R, f: &RelativeGraph) -> CaseResult {
    let v = random_levelled(rng, &all_vertices(f), -4..=4, 5, 8);
    let lhs = &v - &embed(&total(&v));
    let rhs = one_minus_alpha_inv(&telescope(&v));
    ensure(lhs == rhs, || {
        format!("identity fails for {}", v.display(f.graph()))
    })
}

fn random_kernel_vector<R: Rng>(rng: &mut R, f: &RelativeGraph) -> Level0Vector {
    let b = b_matrix(f);
    let mut x = Level0Vector::zero();
    for basis in kernel_basis(&b.matrix) {
        let c = BigInt::from(rng.gen_range(-3..=3));
        for (j, coeff) in basis.iter().enumerate() {
            x.add_term(b.cols[j], &c * coeff);
        }
    }
    x
}

fn check_witness(m: &LevelledModule<'_>, v: &LevelledVector, verdict: &IMembership) -> CaseResult {
    match verdict {
        IMembership::Member { witness } => {
            let back = m.one_minus_alpha_beta(witness).map_err(|e| e.to_string())?;
            ensure(&back == v, || "witness does not reproduce the input".into())
        }
        other => Err(format!("expected membership, got {other:?}")),
    }
}

fn constructive_case<R: Rng>(rng: &mut R, f: &RelativeGraph) -> CaseResult {
    let m = LevelledModule::new(f);
    // random h ∈ W, then corrected so that E(h) is a kernel vector
    let h0 = random_levelled(rng, &f.relative_vertices(), -3..=3, 4, 6);
    let k = random_kernel_vector(rng, f);
    let h = &(&h0 - &embed(&total(&h0))) + &embed(&k);
    let r = m.one_minus_alpha_beta(&h).map_err(|e| e.to_string())?;
    let g = solve_telescoping(&r).map_err(|e| e.to_string())?;
    let v = &g + &embed(&total(&h));
    check_witness(&m, &v, &m.is_in_i(&v))
        .map_err(|e| format!("{e} for h = {}", h.display(f.graph())))
}

fn intertwining_case<R: Rng>(rng: &mut R, f: &RelativeGraph) -> CaseResult {
    let m = LevelledModule::new(f);
    let mut x = Level0Vector::zero();
    for &v in &f.relative_vertices() {
        x.add_term(v, BigInt::from(rng.gen_range(-5..=5)));
    }
    let px = embed(&x);
    let lhs = &shift(&px, -1) - &m.beta(&px).map_err(|e| e.to_string())?;
    let rhs = m
        .one_minus_alpha_beta(&shift(&px, -1))
        .map_err(|e| e.to_string())?;
    ensure(lhs == rhs, || "intertwining identity fails".into())?;
    check_witness(&m, &lhs, &m.is_in_i(&lhs))
}

fn operators_case<R: Rng>(rng: &mut R, f: &RelativeGraph) -> CaseResult {
    let m = LevelledModule::new(f);
    let w = random_levelled(rng, &f.relative_vertices(), -4..=4, 5, 8);
    let beta = |x: &LevelledVector| m.beta(x).map_err(|e| e.to_string());
    let i = rng.gen_range(-4..=4);
    let j = rng.gen_range(-3..=3);
    ensure(shift(&beta(&w)?, 1) == beta(&shift(&w, 1))?, || {
        "αβ ≠ βα".into()
    })?;
    ensure(m.in_w(&shift(&w, j)), || "α^j leaves W".into())?;
    ensure(e_proj(&beta(&w)?, i) == beta(&e_proj(&w, i))?, || {
        "e_i β ≠ β e_i".into()
    })?;
    ensure(q_proj(&beta(&w)?, i) == beta(&q_proj(&w, i))?, || {
        "q_i β ≠ β q_i".into()
    })?;
    ensure(
        shift(&e_proj(&w, i), j) == e_proj(&shift(&w, j), i + j),
        || "α^j e_i ≠ e_{i+j} α^j".into(),
    )?;
    ensure(total(&shift(&w, j)) == total(&w), || "E α ≠ E".into())?;
    let e_beta = total(&beta(&w)?);
    let beta0_e = m.beta0(&total(&w)).map_err(|e| e.to_string())?;
    ensure(e_beta == beta0_e, || "E β ≠ β₀ E".into())?;
    let x = total(&w);
    let lhs = embed(&m.beta0(&x).map_err(|e| e.to_string())?);
    ensure(lhs == beta(&embed(&x))?, || "φ β₀ ≠ β φ".into())
}

fn phi_kernel_case<R: Rng>(rng: &mut R, f: &RelativeGraph) -> CaseResult {
    let k = rng.gen_range(1..=4usize);
    let c = Approximant::new(f, k).map_err(|e| e.to_string())?;
    let m = LevelledModule::new(f);
    let top = k as Level;
    let g = if rng.gen_bool(0.5) {
        let h = random_levelled(rng, &f.relative_vertices(), 0..=top - 1, 3, 5);
        m.one_minus_alpha_beta(&h).map_err(|e| e.to_string())?
    } else {
        random_levelled(rng, &all_vertices(f), 0..=top, 3, 4)
    };
    let vanishes = c.phi_eval(&g).map_err(|e| e.to_string())?.is_zero();
    let conditions = c.kernel_conditions(&g).map_err(|e| e.to_string())?;
    ensure(vanishes == conditions, || {
        format!(
            "Φ(g) = 0 is {vanishes} but conditions give {conditions} for g = {}",
            g.display(f.graph())
        )
    })?;
    if conditions {
        let h = c.build_h(&g).map_err(|e| e.to_string())?;
        let back = m.one_minus_alpha_beta(&h).map_err(|e| e.to_string())?;
        ensure(back == g, || "build_h does not invert".into())?;
        ensure(m.is_in_i(&g).is_member(), || {
            "is_in_I disagrees with build_h".into()
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn suites_pass_on_random_graphs() {
        let graphs = Graphs::Random {
            max_vertices: 4,
            max_edges: 6,
        };
        for r in run_all(graphs, 40, 7) {
            assert!(r.passed(), "{r}: {:?}", r.samples);
        }
    }

    #[test]
    fn suites_pass_on_a_fixed_graph() {
        let f = fixtures::hub_ladder_stage(2);
        for r in run_all(Graphs::Fixed(&f), 20, 1) {
            assert!(r.passed(), "{r}: {:?}", r.samples);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let graphs = Graphs::Random {
            max_vertices: 3,
            max_edges: 4,
        };
        assert_eq!(run_all(graphs, 10, 99), run_all(graphs, 10, 99));
        assert_eq!(
            random_graph(&mut ChaCha8Rng::seed_from_u64(5), 5, 8, 0.2).to_text(),
            random_graph(&mut ChaCha8Rng::seed_from_u64(5), 5, 8, 0.2).to_text()
        );
    }
}
