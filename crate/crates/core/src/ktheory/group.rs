//! Finitely generated abelian groups presented as subquotients `(H + L) / L`
//! of a labelled free group `ℤ^n`, and homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::hermite::Echelon;
use super::smith::{smith, SmithDecomposition};
use super::KError;
use crate::matrix::IntMatrix;

/// `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_m` with `2 ≤ d₁ | d₂ | …`, together with
/// generator vectors in a named ambient basis.
///
/// Generators are listed free first, then torsion in increasing order. They
/// are reduced modulo the relation lattice, and the free ones are put in
/// echelon form, so equal inputs give equal generators.
#[derive(Debug, Clone)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
    basis: Vec<String>,
    generators: Vec<Vec<BigInt>>,
    relations: Echelon,
    // coordinate machinery, see `coordinates`
    spanning: SmithDecomposition,
    gen_count: usize,
    inner: SmithDecomposition,
    free_slots: Vec<usize>,
    torsion_slots: Vec<usize>,
    free_change: IntMatrix,
}

impl FgAbelianGroup {
    /// The subgroup of `ℤ^basis / ⟨relations⟩` generated by the classes of `gens`.
    pub fn subquotient(
        basis: Vec<String>,
        relations: &[Vec<BigInt>],
        gens: &[Vec<BigInt>],
    ) -> FgAbelianGroup {
        let n = basis.len();
        let g = gens.len();
        let gmat = IntMatrix::from_columns(n, gens);
        let rmat = IntMatrix::from_columns(n, relations);
        let spanning = smith(&gmat.hcat(&rmat));

        // a ∈ ℤ^g with G a ∈ ⟨relations⟩: projections of ker [G | R]
        let total_cols = g + relations.len();
        let dependencies: Vec<Vec<BigInt>> = (spanning.rank..total_cols)
            .map(|j| (0..g).map(|i| spanning.vt[(i, j)].clone()).collect())
            .collect();
        let inner = smith(&IntMatrix::from_columns(g, &dependencies));
        let factors = inner.invariant_factors();
        let factor = |i: usize| factors.get(i).cloned().unwrap_or_default();

        let free_slots: Vec<usize> = (inner.rank..g).collect();
        let torsion_slots: Vec<usize> = (0..inner.rank).filter(|&i| !factor(i).is_one()).collect();
        let torsion: Vec<BigInt> = torsion_slots.iter().map(|&i| factor(i)).collect();

        let relations_echelon = Echelon::new(n, relations);
        let ambient = |slot: usize| {
            let a = inner.u_inv.column(slot);
            relations_echelon.reduce(&gmat.mul_vec(&a))
        };
        let free_raw: Vec<Vec<BigInt>> = free_slots.iter().map(|&s| ambient(s)).collect();
        let (free_echelon, _, change_inv) = Echelon::with_transform(n, &free_raw);
        debug_assert_eq!(free_echelon.rank(), free_raw.len());
        let mut generators: Vec<Vec<BigInt>> = free_echelon
            .rows()
            .iter()
            .map(|r| relations_echelon.reduce(r))
            .collect();
        generators.extend(torsion_slots.iter().map(|&s| ambient(s)));

        FgAbelianGroup {
            rank: free_slots.len(),
            torsion,
            basis,
            generators,
            relations: relations_echelon,
            spanning,
            gen_count: g,
            inner,
            free_slots,
            torsion_slots,
            free_change: change_inv.transpose(),
        }
    }

    /// `ℤ^basis / ⟨relations⟩`.
    pub fn cokernel(basis: Vec<String>, relations: &[Vec<BigInt>]) -> FgAbelianGroup {
        let n = basis.len();
        let units: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::subquotient(basis, relations, &units)
    }

    /// The sublattice of `ℤ^basis` spanned by `gens`.
    pub fn lattice(basis: Vec<String>, gens: &[Vec<BigInt>]) -> FgAbelianGroup {
        Self::subquotient(basis, &[], gens)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Order of generator `i`: `None` for free generators.
    pub fn generator_order(&self, i: usize) -> Option<&BigInt> {
        i.checked_sub(self.rank).map(|t| &self.torsion[t])
    }

    pub fn relations(&self) -> &Echelon {
        &self.relations
    }

    /// Product of the torsion invariant factors.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Canonical isomorphism type, e.g. `Z^2 (+) Z/3`, or `0`.
    pub fn canonical(&self) -> String {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" (+) ")
        }
    }

    pub fn isomorphic(&self, other: &FgAbelianGroup) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }

    /// Renders an ambient vector as `+c·d(label)` terms, highest basis index first.
    pub fn render_vector(&self, v: &[BigInt]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c:+}·d({})", self.basis[i]))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" ")
        }
    }

    /// Coordinates of the class of `v` with respect to `generators()`: integers
    /// for free generators, residues for torsion ones. `None` if the class of
    /// `v` is not in the subgroup.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.basis.len(), "vector has wrong dimension");
        let z = self.spanning.solve(v)?;
        let a = &z[..self.gen_count];
        let c = self.inner.u.mul_vec(a);
        let free: Vec<BigInt> = self.free_slots.iter().map(|&s| c[s].clone()).collect();
        let mut out = self.free_change.mul_vec(&free);
        for (&s, d) in self.torsion_slots.iter().zip(&self.torsion) {
            out.push(c[s].mod_floor(d));
        }
        Some(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// True if `v` is zero in the quotient (lies in the relation lattice).
    pub fn is_relation(&self, v: &[BigInt]) -> bool {
        self.relations.contains(v)
    }

    /// Same subgroup of the same quotient.
    pub fn same_subgroup(&self, other: &FgAbelianGroup) -> bool {
        self.basis == other.basis
            && self.relations == other.relations
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Reduces a coordinate vector: torsion entries modulo their orders.
    fn normalise(&self, coords: &mut [BigInt]) {
        for (c, d) in coords[self.rank..].iter_mut().zip(&self.torsion) {
            *c = c.mod_floor(d);
        }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Maps an ambient vector between bases by label. `None` if a label carrying a
/// nonzero coefficient is missing from the target basis.
pub fn transport(v: &[BigInt], from: &[String], to: &[String]) -> Option<Vec<BigInt>> {
    let mut out = vec![BigInt::zero(); to.len()];
    for (c, label) in v.iter().zip(from) {
        if c.is_zero() {
            continue;
        }
        let j = to
            .binary_search(label)
            .ok()
            .or_else(|| to.iter().position(|l| l == label))?;
        out[j] += c;
    }
    Some(out)
}

/// A homomorphism in generator coordinates: column `i` holds the target
/// coordinates of the image of source generator `i`.
#[derive(Debug, Clone)]
pub struct GroupHom {
    pub source: FgAbelianGroup,
    pub target: FgAbelianGroup,
    pub matrix: IntMatrix,
    pub injective: bool,
    pub surjective: bool,
}

impl GroupHom {
    /// The map induced by sending each basis label of the source ambient to the
    /// same label in the target ambient. Fails unless this is well defined on
    /// the source group.
    pub fn induced_by_labels(
        source: &FgAbelianGroup,
        target: &FgAbelianGroup,
    ) -> Result<GroupHom, KError> {
        let carry = |v: &[BigInt]| {
            transport(v, source.basis(), target.basis()).ok_or_else(|| {
                KError::HomNotWellDefined(format!(
                    "`{}` has no counterpart in the target basis",
                    source.render_vector(v)
                ))
            })
        };
        for r in source.relations().rows() {
            if !target.is_relation(&carry(r)?) {
                return Err(KError::HomNotWellDefined(format!(
                    "relation {} does not hold in the target",
                    source.render_vector(r)
                )));
            }
        }
        let width = target.rank() + target.torsion().len();
        let mut columns = Vec::with_capacity(source.generators().len());
        for (i, g) in source.generators().iter().enumerate() {
            let mut c = target.coordinates(&carry(g)?).ok_or_else(|| {
                KError::HomNotWellDefined(format!(
                    "image of generator {} lies outside the target subgroup",
                    source.render_vector(g)
                ))
            })?;
            if let Some(d) = source.generator_order(i) {
                let mut multiple: Vec<BigInt> = c.iter().map(|x| x * d).collect();
                target.normalise(&mut multiple);
                if multiple.iter().any(|x| !x.is_zero()) {
                    return Err(KError::HomNotWellDefined(format!(
                        "generator {} has order {d} but its image does not",
                        source.render_vector(g)
                    )));
                }
            }
            target.normalise(&mut c);
            columns.push(c);
        }
        let matrix = IntMatrix::from_columns(width, &columns);
        Ok(Self::from_matrix(source.clone(), target.clone(), matrix))
    }

    pub fn from_matrix(
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> GroupHom {
        let (injective, surjective) = hom_properties(&matrix, source.torsion(), target.torsion());
        GroupHom {
            source,
            target,
            matrix,
            injective,
            surjective,
        }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.surjective
    }

    /// The image of the map as a subgroup of the target.
    pub fn image(&self) -> FgAbelianGroup {
        let gens: Vec<Vec<BigInt>> = self
            .source
            .generators()
            .iter()
            .map(|g| {
                transport(g, self.source.basis(), self.target.basis())
                    .expect("checked at construction")
            })
            .collect();
        FgAbelianGroup::subquotient(
            self.target.basis().to_vec(),
            self.target.relations().rows(),
            &gens,
        )
    }
}

/// Injectivity and surjectivity of the map `ℤ^r ⊕ ⊕ℤ/dᵢ → ℤ^s ⊕ ⊕ℤ/eⱼ` given
/// by `matrix` on generator coordinates (free coordinates first).
fn hom_properties(
    matrix: &IntMatrix,
    src_torsion: &[BigInt],
    tgt_torsion: &[BigInt],
) -> (bool, bool) {
    let rows = matrix.rows();
    let src_free = matrix.cols() - src_torsion.len();
    let tgt_free = rows - tgt_torsion.len();
    let torsion_cols: Vec<Vec<BigInt>> = tgt_torsion
        .iter()
        .enumerate()
        .map(|(j, e)| {
            let mut c = vec![BigInt::zero(); rows];
            c[tgt_free + j] = e.clone();
            c
        })
        .collect();
    let full = matrix.hcat(&IntMatrix::from_columns(rows, &torsion_cols));
    let s = smith(&full);
    let surjective = s.rank == rows && s.invariant_factors().iter().take(rows).all(One::is_one);
    let injective = (s.rank..full.cols()).all(|j| {
        (0..matrix.cols()).all(|i| {
            let a = &s.vt[(i, j)];
            if i < src_free {
                a.is_zero()
            } else {
                (a % &src_torsion[i - src_free]).is_zero()
            }
        })
    });
    (injective, surjective)
}
