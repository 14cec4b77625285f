use std::sync::Arc;

use gamma_torsion::gamma::gamma;
use gamma_torsion::group_ring::{partial_norm, GroupRingElement};
use gamma_torsion::groups::{
    catalog, catalog_names, direct_product, make_abelian, parse_group_spec, FiniteGroup,
};
use gamma_torsion::modules::{cyclic_quotient, m2, stabilize, tate_h0, tate_h0_checked};
use gamma_torsion::pipeline::{fox_identity_defect, gamma_h0, prop_6_h0, SideKind};
use gamma_torsion::resolution::presentation_complex;

fn all_groups() -> Vec<Arc<FiniteGroup>> {
    catalog_names()
        .iter()
        .map(|n| Arc::new(catalog(n).unwrap()))
        .collect()
}

#[test]
fn catalog_groups_are_groups() {
    for g in all_groups() {
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)), "{}", g.name());
                }
            }
        }
        for w in g.relators() {
            assert_eq!(g.evaluate_word(w), g.identity());
        }
        assert_eq!(g.closure(&g.generator_elements()).len(), n);
    }
}

#[test]
fn abelian_and_product_orders() {
    let g = make_abelian(&[4, 3, 2]).unwrap();
    assert_eq!(g.order(), 24);
    assert!(g.is_abelian());
    let d = catalog("D8").unwrap();
    let p = direct_product(&d, &make_abelian(&[3]).unwrap());
    assert_eq!(p.order(), 24);
    for w in p.relators() {
        assert_eq!(p.evaluate_word(w), p.identity());
    }
    assert_eq!(parse_group_spec("Q8xC2").unwrap().order(), 16);
}

#[test]
fn complexes_for_every_catalog_group() {
    for g in all_groups() {
        let c = presentation_complex(&g).unwrap();
        for w in g.relators() {
            assert!(fox_identity_defect(&g, w).unwrap().is_zero());
        }
        let (k, ck) = (c.ker_d2().unwrap(), c.coker_d2_dual().unwrap());
        let n = g.order();
        assert_eq!(
            k.zrank() + c.generator_count() * n,
            c.relator_count() * n + n - 1,
            "{}",
            g.name()
        );
        assert_eq!(ck.zrank(), k.zrank(), "{}", g.name());
    }
}

#[test]
fn cyclic_sanity() {
    for n in [2, 3, 4, 5, 6, 7, 8, 9, 12] {
        let g = Arc::new(make_abelian(&[n]).unwrap());
        let c = presentation_complex(&g).unwrap();
        assert!(gamma_h0(&c.ker_d2().unwrap()).unwrap().is_trivial());
        assert!(gamma_h0(&c.coker_d2_dual().unwrap()).unwrap().is_trivial());
    }
}

#[test]
fn routes_agree_for_two_generator_groups() {
    for (n, m) in [(2, 2), (2, 3), (3, 2), (2, 4), (4, 4), (3, 3), (2, 6)] {
        for kind in [SideKind::Ker, SideKind::Coker] {
            let (x, y) = prop_6_h0(n, m, kind).unwrap();
            assert_eq!(x, y, "C{n}xC{m} {kind:?}");
        }
    }
}

#[test]
fn m2_extension_ranks() {
    for (n, m) in [(2, 2), (3, 2), (4, 4), (3, 3)] {
        let g = Arc::new(make_abelian(&[n as i64, m as i64]).unwrap());
        let (a, b) = (g.generators()[0].element, g.generators()[1].element);
        let one = GroupRingElement::one(&g);
        let left = cyclic_quotient(&g, &one - &GroupRingElement::from_element(&g, a, 1)).unwrap();
        let right = gamma_torsion::modules::FpModule::new(
            &g,
            1,
            vec![
                vec![partial_norm(&g, a, n).unwrap()],
                vec![&GroupRingElement::from_element(&g, b, 1) - &one],
            ],
        )
        .unwrap()
        .to_lattice()
        .unwrap();
        assert_eq!(
            m2(&g).unwrap().to_lattice().unwrap().zrank(),
            left.zrank() + right.zrank()
        );
    }
}

#[test]
fn stabilizing_twice() {
    for name in ["C4xC2", "D8", "Q8"] {
        let g = Arc::new(catalog(name).unwrap());
        let k = presentation_complex(&g).unwrap().ker_d2().unwrap();
        let base = tate_h0(gamma(&k).unwrap().module());
        for s in [1, 2] {
            let st = gamma(&stabilize(&k, s).unwrap()).unwrap();
            assert_eq!(
                tate_h0_checked(st.module()).unwrap().h0,
                base,
                "{name} + {s}"
            );
        }
    }
}
