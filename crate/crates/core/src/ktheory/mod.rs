//! K-groups of relative graphs: `K₁ = ker(1 − β₀)` and `K₀ = coker(1 − β₀)`,
//! the maps induced along chains, and direct-limit approximation.

mod group;
mod hermite;
mod limit;
mod smith;

use num_bigint::BigInt;
use thiserror::Error;

use crate::graph::{Chain, RelativeGraph, VertexIx};
use crate::matrix::IntMatrix;

pub use group::{transport, FgAbelianGroup, GroupHom};
pub use hermite::Echelon;
pub use limit::{direct_limit, LimitReport};
pub use smith::{smith, SmithDecomposition};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KError {
    #[error("induced map is not well defined: {0}")]
    HomNotWellDefined(String),
    #[error("stability window must be at least 2, got {0}")]
    WindowTooSmall(usize),
    #[error("chain has {len} stages; window {window} needs at least {}", window + 1)]
    ChainTooShort { len: usize, window: usize },
}

/// The matrix of `1 − β₀`: rows are all vertices, columns the relative
/// vertices, and column `x` is `δ_x − Σ_{e ∈ xF¹} δ_{t(e)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatrix {
    pub matrix: IntMatrix,
    pub rows: Vec<VertexIx>,
    pub cols: Vec<VertexIx>,
}

pub fn b_matrix(f: &RelativeGraph) -> BMatrix {
    let g = f.graph();
    let rows: Vec<VertexIx> = (0..g.vertex_count()).collect();
    let cols = f.relative_vertices();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (j, &x) in cols.iter().enumerate() {
        m[(x, j)] += 1;
        for (y, mult) in g.out_multiplicities(x) {
            m[(y, j)] -= mult;
        }
    }
    BMatrix {
        matrix: m,
        rows,
        cols,
    }
}

/// Echelon basis of the integer kernel of `a`; its size is `cols − rank`.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith(a);
    let raw: Vec<Vec<BigInt>> = (s.rank..a.cols()).map(|j| s.vt.column(j)).collect();
    Echelon::new(a.cols(), &raw).rows().to_vec()
}

#[derive(Debug, Clone)]
pub struct KGroups {
    /// Quotient of the vertex lattice; basis labelled by vertex ids.
    pub k0: FgAbelianGroup,
    /// Sublattice of the relative-vertex lattice; basis labelled by those ids.
    pub k1: FgAbelianGroup,
}

pub fn kgroups(f: &RelativeGraph) -> KGroups {
    let g = f.graph();
    let b = b_matrix(f);
    let vertex_labels: Vec<String> = g.vertex_ids().to_vec();
    let relative_labels: Vec<String> = b.cols.iter().map(|&v| g.vertex_id(v).to_string()).collect();
    let relations: Vec<Vec<BigInt>> = (0..b.matrix.cols()).map(|j| b.matrix.column(j)).collect();
    let k0 = FgAbelianGroup::cokernel(vertex_labels, &relations);
    let k1 = FgAbelianGroup::lattice(relative_labels, &kernel_basis(&b.matrix));
    KGroups { k0, k1 }
}

/// Connecting maps `K_•(F_N) → K_•(F_{N+1})` along a chain: on `K₀` induced by
/// `δ_x ↦ δ_x`, on `K₁` the inclusion of kernels.
pub fn induced_maps(c: &Chain) -> Result<Vec<(GroupHom, GroupHom)>, KError> {
    let groups: Vec<KGroups> = c.stages().iter().map(kgroups).collect();
    groups
        .windows(2)
        .map(|w| {
            Ok((
                GroupHom::induced_by_labels(&w[0].k0, &w[1].k0)?,
                GroupHom::induced_by_labels(&w[0].k1, &w[1].k1)?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::parse_graph;
    use num_traits::Zero;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn b_matrix_examples() {
        let o3 = RelativeGraph::standalone(fixtures::cuntz(3));
        assert_eq!(b_matrix(&o3).matrix, IntMatrix::from_i64(1, 1, &[-2]));
        let arrow =
            RelativeGraph::standalone(parse_graph("vertex v\nvertex w\nedge e v w\n").unwrap());
        assert_eq!(b_matrix(&arrow).matrix, IntMatrix::from_i64(2, 1, &[1, -1]));
        let t = RelativeGraph::toeplitz(fixtures::cuntz(2));
        assert_eq!(b_matrix(&t).matrix.cols(), 0);
    }

    #[test]
    fn kernel_basis_examples() {
        assert_eq!(
            kernel_basis(&IntMatrix::from_i64(1, 1, &[0])),
            vec![vec![bi(1)]]
        );
        for n in 2..6 {
            assert!(kernel_basis(&IntMatrix::from_i64(1, 1, &[1 - n])).is_empty());
        }
        let stage = fixtures::hub_ladder_stage(3);
        let b = b_matrix(&stage);
        let ids: Vec<&str> = b.cols.iter().map(|&v| stage.graph().vertex_id(v)).collect();
        let basis = kernel_basis(&b.matrix);
        assert_eq!(basis.len(), 1);
        let nonzero: Vec<(&str, &BigInt)> = ids
            .iter()
            .zip(&basis[0])
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (*i, c))
            .collect();
        assert_eq!(nonzero, vec![("-1", &bi(-1)), ("1", &bi(1))]);
    }

    #[test]
    fn kgroups_examples() {
        let k = kgroups(&RelativeGraph::standalone(fixtures::cuntz(3)));
        assert_eq!(
            (k.k0.canonical(), k.k1.canonical()),
            ("Z/2".into(), "0".into())
        );
        let k = kgroups(&RelativeGraph::standalone(fixtures::sink()));
        assert_eq!(
            (k.k0.canonical(), k.k1.canonical()),
            ("Z".into(), "0".into())
        );
        let k = kgroups(&RelativeGraph::standalone(fixtures::cuntz(1)));
        assert_eq!(
            (k.k0.canonical(), k.k1.canonical()),
            ("Z".into(), "Z".into())
        );
        let g = parse_graph("vertex a\nvertex b\nvertex c\nedge x a b\nedge y b b\n").unwrap();
        let k = kgroups(&RelativeGraph::toeplitz(g));
        assert_eq!(
            (k.k0.canonical(), k.k1.canonical()),
            ("Z^3".into(), "0".into())
        );
    }

    #[test]
    fn sink_relation_is_not_imposed() {
        // v → w with w a sink: only v contributes a relation, so K₀ = ℤ with d(v) = d(w)
        let g = parse_graph("vertex v\nvertex w\nedge e v w\n").unwrap();
        let k = kgroups(&RelativeGraph::standalone(g));
        assert_eq!(k.k0.canonical(), "Z");
        assert_eq!(k.k0.render_vector(&k.k0.generators()[0]), "+1·d(v)");
    }

    #[test]
    fn constant_chain_maps_are_identities() {
        let s = RelativeGraph::standalone(fixtures::cuntz(3));
        let chain = Chain::new(vec![s.clone(), s]).unwrap();
        let maps = induced_maps(&chain).unwrap();
        assert_eq!(maps.len(), 1);
        assert!(maps[0].0.is_isomorphism() && maps[0].1.is_isomorphism());
        assert_eq!(maps[0].0.matrix, IntMatrix::identity(1));
    }
}
