use std::sync::Arc;

use invalg::group::{
    all_subgroups, left_transversal, FiniteGroup, GROUP_ORDER_CAP, PERMUTATION_CAP,
};
use invalg::linalg::{self, CMat};
use invalg::rep::{self, Representation, INDUCTION_CAP};
use invalg::{catalog, character, lift};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;

fn linear_catalog_reps() -> Vec<(String, Representation)> {
    catalog::KEYS
        .iter()
        .flat_map(|k| {
            let e = catalog::entry(k).unwrap();
            e.reps
                .into_iter()
                .filter(|(_, r)| r.is_linear())
                .map(move |(n, r)| (format!("{k}:{n}"), r))
        })
        .collect()
}

#[test]
fn subgroup_classes_are_unique_representatives() {
    for key in catalog::KEYS {
        let g = catalog::entry(key).unwrap().group;
        let subs = all_subgroups(&g, GROUP_ORDER_CAP).unwrap();
        for h in &subs {
            for x in 0..g.order() {
                let c = h.conjugate(x);
                let hits = subs
                    .iter()
                    .filter(|k| {
                        k.order() == c.order()
                            && (0..g.order()).any(|y| k.conjugate(y).members() == c.members())
                    })
                    .count();
                assert_eq!(hits, 1, "{key}");
            }
        }
    }
}

#[test]
fn class_count_matches_irreducible_characters() {
    for key in catalog::KEYS {
        let g = catalog::entry(key).unwrap().group;
        let table = g.character_table();
        assert_eq!(table.len(), g.conjugacy_classes().len(), "{key}");
        let squares: usize = table.degrees().iter().map(|d| d * d).sum();
        assert_eq!(squares, g.order(), "{key}");
    }
}

#[test]
fn transversals_cover_once() {
    for key in catalog::KEYS {
        let g = catalog::entry(key).unwrap().group;
        for h in all_subgroups(&g, GROUP_ORDER_CAP).unwrap() {
            let t = left_transversal(&g, &h);
            assert_eq!(t.reps.len() * h.order(), g.order());
            let mut seen = vec![0usize; g.order()];
            for &r in &t.reps {
                for &x in h.members() {
                    seen[g.mul(r, x)] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1), "{key}");
        }
    }
}

#[test]
fn adjoint_character_is_squared_modulus() {
    for (name, v) in linear_catalog_reps() {
        if v.dim() > 6 {
            continue;
        }
        let chi = v.character().unwrap();
        let adj = v.adjoint().character().unwrap();
        let expected =
            character::ClassFunction::new(chi.values.iter().map(|z| z * z.conj()).collect());
        assert!(adj.approx_eq(&expected, TOL), "{name}");
    }
}

#[test]
fn isotypic_projectors_are_orthogonal_and_equivariant() {
    for (name, v) in linear_catalog_reps() {
        let comps = v.isotypic_decomposition(TOL).unwrap();
        let d = v.dim();
        let mut sum = CMat::zeros(d, d);
        for (i, a) in comps.iter().enumerate() {
            sum += &a.projector;
            for (j, b) in comps.iter().enumerate() {
                let expected = if i == j {
                    a.projector.clone()
                } else {
                    CMat::zeros(d, d)
                };
                assert!(
                    linalg::frob(&(&a.projector * &b.projector - expected)) <= TOL,
                    "{name}"
                );
            }
            for m in v.matrices() {
                assert!(
                    linalg::frob(&(m * &a.projector - &a.projector * m)) <= TOL,
                    "{name}"
                );
            }
        }
        assert!(linalg::frob(&(sum - linalg::identity(d))) <= TOL, "{name}");
    }
}

#[test]
fn induction_pairs_have_consistent_dimensions() {
    for key in ["S3", "Q8", "D4", "A4", "S4", "SL23", "S3xS3"] {
        let e = catalog::entry(key).unwrap();
        let (_, v) = e.reps.iter().find(|(n, _)| n != "triv").unwrap();
        for pair in invalg::classify::induction_pairs(v, TOL).unwrap() {
            let h = &pair.subgroup;
            assert!(rep::is_induced_from(v, h, &pair.w, TOL).unwrap(), "{key}");
            assert_eq!(v.dim(), h.index() * pair.w.dim(), "{key}");
            let res_chi = rep::restricted_character(h, &v.character().unwrap());
            let m = character::inner_product(&h.as_group(), &res_chi, &pair.w.character().unwrap());
            assert!((m.re - 1.0).abs() < 1e-8 && m.im.abs() < 1e-8, "{key}");
        }
    }
}

#[test]
fn frobenius_reciprocity() {
    for key in ["S3", "Q8", "D4", "A4", "S4", "SL23"] {
        let e = catalog::entry(key).unwrap();
        let reps: Vec<&Representation> = e
            .reps
            .iter()
            .map(|(_, r)| r)
            .filter(|r| r.is_linear() && r.dim() <= 4)
            .collect();
        for h in all_subgroups(&e.group, GROUP_ORDER_CAP).unwrap() {
            for u in &reps {
                let w = u.restrict(&h);
                let ind = rep::induce(&h, &w, INDUCTION_CAP).unwrap();
                for v in &reps {
                    let lhs = rep::equivariant_hom_space(&ind, v, TOL).unwrap().len();
                    let rhs = rep::equivariant_hom_space(&w, &v.restrict(&h), TOL)
                        .unwrap()
                        .len();
                    assert_eq!(lhs, rhs, "{key}, |H| = {}", h.order());
                }
            }
        }
    }
}

fn random_unitary(d: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = CMat::from_fn(d, d, |_, _| linalg::random_complex(&mut rng));
    linalg::orthonormalize(&m, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lift_survives_unitary_change_of_basis(seed in any::<u64>(), which in 0usize..4) {
        let (key, name) = [("S3", "std"), ("Q8", "std"), ("A4", "std"), ("V4", "pauli")][which];
        let e = catalog::entry(key).unwrap();
        let v = e.rep(name).unwrap();
        let u = random_unitary(v.dim(), seed);
        let conj = v.conjugate_by(&u).unwrap();
        let action = conj.adjoint();
        let lifted = lift::skolem_noether_lift(e.group.clone(), action.matrices(), 1e-10).unwrap();
        prop_assert!(lift::lift_residual(action.matrices(), &lifted) < 1e-8);
        prop_assert!(lifted.cocycle().unwrap().validate(&e.group, 1e-8).is_ok());
        for g in 0..e.group.order() {
            prop_assert!(lift::scalar_ratio(lifted.matrix(g), conj.matrix(g), 1e-8).is_some());
        }
    }

    #[test]
    fn permutation_groups_satisfy_group_axioms(
        gens in prop::collection::vec(Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(), 1..3)
    ) {
        let g = Arc::new(FiniteGroup::from_permutations(&gens, PERMUTATION_CAP).unwrap());
        let n = g.order();
        prop_assert!(120 % n == 0);
        for a in 0..n {
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in 0..n {
                for c in 0..n {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        let classes: usize = g.conjugacy_classes().iter().map(Vec::len).sum();
        prop_assert_eq!(classes, n);
    }
}

#[test]
fn regular_representation_contains_every_irrep_by_degree() {
    for key in ["S3", "Q8", "A4"] {
        let g = catalog::entry(key).unwrap().group;
        let reg = Representation::regular(g.clone());
        let comps = reg.isotypic_decomposition(TOL).unwrap();
        assert_eq!(comps.len(), g.character_table().len());
        for c in comps {
            assert_eq!(c.multiplicity, c.irrep_dim, "{key}");
        }
    }
}
