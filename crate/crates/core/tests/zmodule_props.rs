mod common;

use common::relative_graph;
use graphk::graph::RelativeGraph;
use graphk::zmodule::{
    embed, one_minus_alpha_inv, shift, solve_telescoping, telescope, total, IMembership,
    LevelledModule, LevelledVector,
};
use graphk_oracles::{find_i_witness, one_minus_alpha_beta, Sparse};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn terms(max_vertex: usize) -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    proptest::collection::vec((0..max_vertex, -4i64..=4, -5i64..=5), 0..8)
}

fn build(terms: &[(usize, i64, i64)], vertices: &[usize]) -> LevelledVector {
    let mut f = LevelledVector::zero();
    if vertices.is_empty() {
        return f;
    }
    for &(v, n, c) in terms {
        f.add_term(vertices[v % vertices.len()], n, BigInt::from(c));
    }
    f
}

fn sparse(f: &LevelledVector) -> Sparse {
    f.iter()
        .map(|(v, n, c)| ((v, n), c.to_i64().unwrap()))
        .collect()
}

fn edge_list(f: &RelativeGraph) -> Vec<(usize, usize)> {
    f.graph()
        .edges()
        .iter()
        .map(|e| (e.origin, e.terminus))
        .collect()
}

proptest! {
    #[test]
    fn telescope_identity(f in relative_graph(5, 8), t in terms(5)) {
        let all: Vec<usize> = (0..f.graph().vertex_count()).collect();
        let v = build(&t, &all);
        prop_assert_eq!(&v - &embed(&total(&v)), one_minus_alpha_inv(&telescope(&v)));
    }

    #[test]
    fn solve_telescoping_inverts(f in relative_graph(4, 6), t in terms(4)) {
        let all: Vec<usize> = (0..f.graph().vertex_count()).collect();
        let g = build(&t, &all);
        let r = one_minus_alpha_inv(&g);
        prop_assert_eq!(solve_telescoping(&r).unwrap(), g);
    }

    #[test]
    fn generator_map_matches_oracle(f in relative_graph(4, 8), t in terms(4)) {
        let h = build(&t, &f.relative_vertices());
        let m = LevelledModule::new(&f);
        let lib = m.one_minus_alpha_beta(&h).unwrap();
        prop_assert_eq!(sparse(&lib), one_minus_alpha_beta(&edge_list(&f), &sparse(&h)));
    }

    #[test]
    fn shift_preserves_total_and_w(f in relative_graph(4, 8), t in terms(4), j in -3i64..=3) {
        let w = build(&t, &f.relative_vertices());
        let m = LevelledModule::new(&f);
        prop_assert_eq!(total(&shift(&w, j)), total(&w));
        prop_assert!(m.in_w(&shift(&w, j)));
        prop_assert_eq!(shift(&m.beta(&w).unwrap(), 1), m.beta(&shift(&w, 1)).unwrap());
        prop_assert_eq!(m.beta0(&total(&w)).unwrap(), total(&m.beta(&w).unwrap()));
    }

    #[test]
    fn members_come_with_witnesses(f in relative_graph(4, 8), t in terms(4)) {
        let h = build(&t, &f.relative_vertices());
        let m = LevelledModule::new(&f);
        let v = m.one_minus_alpha_beta(&h).unwrap();
        match m.is_in_i(&v) {
            IMembership::Member { witness } => prop_assert_eq!(witness, h),
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

/// Every "no" verdict is checked against an exhaustive search for a witness
/// with coefficients in [-3, 3] on a small box of levels.
#[test]
fn non_membership_survives_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(20261015);
    let mut checked = 0;
    for _ in 0..400 {
        let g = graphk::checks::random_graph(&mut rng, 3, 5, 0.2);
        let f = graphk::checks::random_relative(&mut rng, g);
        let relative = f.relative_vertices();
        if relative.len() > 2 {
            continue;
        }
        let all: Vec<usize> = (0..f.graph().vertex_count()).collect();
        let mut v = LevelledVector::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let x = all[rng.gen_range(0..all.len())];
            v.add_term(x, rng.gen_range(0..=1), BigInt::from(rng.gen_range(-3..=3)));
        }
        let Some((lo, hi)) = v.level_range() else {
            continue;
        };
        let m = LevelledModule::new(&f);
        let verdict = m.is_in_i(&v);
        assert!(!matches!(verdict, IMembership::Unknown { .. }));
        if verdict.is_member() {
            continue;
        }
        let levels = if relative.len() * ((hi - lo + 2) as usize) <= 4 {
            lo - 1..=hi
        } else {
            lo..=hi
        };
        let found = find_i_witness(&edge_list(&f), &relative, levels, 3, &sparse(&v));
        assert!(
            found.is_none(),
            "{verdict:?} but oracle found {found:?} for {}",
            v.display(f.graph())
        );
        checked += 1;
    }
    assert!(checked >= 100, "only {checked} non-members checked");
}
