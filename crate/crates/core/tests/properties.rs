use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use gamma_torsion::gamma::{gamma, gamma_map_check, gamma_matrix, GammaIndex};
use gamma_torsion::group_ring::{expand_matrix, norm_element, GroupRingElement};
use gamma_torsion::groups::{catalog, catalog_names, FiniteGroup, Word};
use gamma_torsion::linalg::{
    cokernel_invariants, kernel_basis, rank, smith_normal_form, IntMatrix, SparseMatrix,
};
use gamma_torsion::modules::{
    random_lattice_module, random_unimodular, stabilize, tate_h0, tate_h0_via_norm, trivial_module,
};
use gamma_torsion::pipeline::{smith_certificate, ComputationReport, SideReport};

fn small_catalog() -> Vec<Arc<FiniteGroup>> {
    catalog_names()
        .iter()
        .map(|n| Arc::new(catalog(n).unwrap()))
        .filter(|g| g.order() <= 8)
        .collect()
}

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn element(group: &Arc<FiniteGroup>, coeffs: &[i64]) -> GroupRingElement {
    let v: Vec<i64> = (0..group.order())
        .map(|i| coeffs[i % coeffs.len()])
        .collect();
    GroupRingElement::from_coeffs(group, v).unwrap()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_certificate_holds(a in matrix(12, 5)) {
        prop_assert_eq!(smith_certificate(&a), None);
    }

    #[test]
    fn cokernel_invariant_under_unimodular(a in matrix(12, 5), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (p, _) = random_unimodular(a.rows(), s1);
        let (q, _) = random_unimodular(a.cols(), s2);
        prop_assert_eq!(cokernel_invariants(&a), cokernel_invariants(&p.mul(&a).mul(&q)));
    }

    #[test]
    fn kernel_basis_is_saturated(a in matrix(8, 4)) {
        let k = kernel_basis(&a);
        prop_assert_eq!(rank(&a) + k.cols(), a.cols());
        prop_assert!(a.mul(&k).is_zero());
        if k.cols() > 0 {
            prop_assert!(smith_normal_form(&k).invariant_factors.is_empty());
        }
    }

    #[test]
    fn ring_axioms(gi in 0usize..13, x in prop::collection::vec(-3i64..=3, 1..9),
                   y in prop::collection::vec(-3i64..=3, 1..9), z in prop::collection::vec(-3i64..=3, 1..9)) {
        let groups = small_catalog();
        let g = &groups[gi % groups.len()];
        let (x, y, z) = (element(g, &x), element(g, &y), element(g, &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&y + &z) * &x, &(&y * &x) + &(&z * &x));
        prop_assert_eq!((&x * &y).involute(), &y.involute() * &x.involute());
        let n = norm_element(g);
        prop_assert_eq!(&n * &x, n.scale(x.augmentation()));
        for h in g.elements() {
            let one_minus = &GroupRingElement::one(g) - &GroupRingElement::from_element(g, h, 1);
            prop_assert!((&one_minus * &n).is_zero());
        }
        let ex = expand_matrix(&[vec![x.clone()]]).unwrap();
        let ey = expand_matrix(&[vec![y.clone()]]).unwrap();
        prop_assert_eq!(expand_matrix(&[vec![&x * &y]]).unwrap(), ex.mul(&ey));
    }

    #[test]
    fn quadratic_map_relations(x in prop::collection::vec(-20i64..=20, 4),
                               y in prop::collection::vec(-20i64..=20, 4),
                               z in prop::collection::vec(-20i64..=20, 4)) {
        let g = Arc::new(catalog("C2").unwrap());
        let a = trivial_module(&g, 4);
        prop_assert!(gamma_map_check(&a, &big(&x), &big(&y), &big(&z)));
    }

    #[test]
    fn gamma_matrix_is_symmetric_square(a in (1usize..6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..=4, n), n)),
                                        b_seed in any::<u64>()) {
        let n = a.len();
        let m = SparseMatrix::from_dense(&IntMatrix::from_rows(&a));
        let idx = GammaIndex::new(n);
        let e = idx.symmetric_embedding();
        prop_assert_eq!(m.kronecker(&m).mul(&e), e.mul(&gamma_matrix(&m)));
        let (p, _) = random_unimodular(n, b_seed);
        let p = SparseMatrix::from_dense(&p);
        prop_assert_eq!(gamma_matrix(&m.mul(&p)), gamma_matrix(&m).mul(&gamma_matrix(&p)));
    }

    #[test]
    fn norm_oracle_matches_coinvariants(seed in any::<u64>(), gi in 0usize..13) {
        let groups = small_catalog();
        let g = &groups[gi % groups.len()];
        let m = random_lattice_module(g, 6, seed).unwrap();
        let h = tate_h0(&m);
        prop_assert_eq!(&h, &tate_h0_via_norm(&m).unwrap());
        let order = BigInt::from(g.order());
        prop_assert!(h.torsion.iter().all(|d| (&order % d) == BigInt::from(0)));
        prop_assert_eq!(&h, &tate_h0(&m.random_base_change(seed ^ 0x5eed).unwrap()));
    }

    #[test]
    fn gamma_h0_is_stable(seed in any::<u64>(), gi in 1usize..8, k in 1usize..3) {
        let groups = small_catalog();
        let g = &groups[gi % groups.len()];
        let m = random_lattice_module(g, 4, seed).unwrap();
        let gm = gamma(&m).unwrap();
        let gs = gamma(&stabilize(&m, k).unwrap()).unwrap();
        prop_assert_eq!(gm.zrank(), m.zrank() * (m.zrank() + 1) / 2);
        prop_assert_eq!(tate_h0(gm.module()), tate_h0(gs.module()));
    }

    #[test]
    fn words_cancel(gi in 0usize..13, letters in prop::collection::vec((0usize..3, prop::bool::ANY), 0..12)) {
        let groups = small_catalog();
        let g = &groups[gi % groups.len()];
        let k = g.generators().len();
        prop_assume!(k > 0);
        let w = Word { letters: letters.iter().map(|&(i, s)| (i % k, if s { 1 } else { -1 })).collect() };
        prop_assert_eq!(g.evaluate_word(&w.concat(&w.inverse())), g.identity());
    }

    #[test]
    fn report_json_round_trip(zr in 0usize..500, h0 in prop::collection::vec(1u64..64, 0..5),
                              t in prop::collection::vec(0.0f64..1e6, 0..4)) {
        let side = SideReport { zrank: zr, gamma_zrank: zr * (zr + 1) / 2, h0, coinvariants_free_rank: zr };
        let timings: BTreeMap<String, f64> = t.iter().enumerate().map(|(i, x)| (format!("stage{i}"), *x)).collect();
        let r = ComputationReport {
            group: "G".into(),
            order: 8,
            ker: Some(side.clone()),
            coker: None,
            sum: Some(side),
            timings_ms: timings,
            checks: BTreeMap::from([("complex".to_string(), true)]),
        };
        prop_assert_eq!(ComputationReport::from_json(&r.to_json().unwrap()).unwrap(), r);
    }
}
