//! The presentation complex `C₂ → C₁ → C₀` and the lattices `ker d₂`,
//! `coker d²` read off from it.
//!
//! Maps between free modules are right multiplications on row vectors, so
//! a composite `C₂ → C₁ → C₀` is the matrix product `d₂·d₁`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group_ring::{
    dual_matrix, expand_row_map, fox_derivative, matrix_product, partial_norm, GroupRingElement,
    GroupRingMatrix,
};
use crate::groups::{two_generator_abelian, FiniteGroup};
use crate::linalg::{echelon_basis, kernel_basis_rows, rank, row_cokernel_invariants, IntMatrix};
use crate::modules::{free_module, FpModule, LatticeModule};

fn is_zero_matrix(m: &GroupRingMatrix) -> bool {
    m.iter()
        .all(|row| row.iter().all(GroupRingElement::is_zero))
}

#[derive(Clone, Debug)]
pub struct PartialResolution {
    group: Arc<FiniteGroup>,
    d1: GroupRingMatrix,
    d2: GroupRingMatrix,
    e1: IntMatrix,
    e2: IntMatrix,
}

/// Builds `d₁` (entries `x − 1`) and `d₂` (Fox derivatives) for the
/// group's presentation and checks that the complex is exact at `C₁`.
pub fn presentation_complex(group: &Arc<FiniteGroup>) -> Result<PartialResolution> {
    let gens = group.generators().len();
    let one = GroupRingElement::one(group);
    let d1: GroupRingMatrix = group
        .generators()
        .iter()
        .map(|g| vec![&GroupRingElement::from_element(group, g.element, 1) - &one])
        .collect();
    let d2 = group
        .relators()
        .iter()
        .map(|w| {
            (0..gens)
                .map(|k| fox_derivative(w, k, group))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<GroupRingMatrix>>()?;
    let e1 = expand_row_map(&d1, group, 1)?;
    let e2 = expand_row_map(&d2, group, gens)?;
    let r = PartialResolution {
        group: group.clone(),
        d1,
        d2,
        e1,
        e2,
    };
    r.check()?;
    Ok(r)
}

impl PartialResolution {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn d1(&self) -> &GroupRingMatrix {
        &self.d1
    }

    pub fn d2(&self) -> &GroupRingMatrix {
        &self.d2
    }

    pub fn expanded_d1(&self) -> &IntMatrix {
        &self.e1
    }

    pub fn expanded_d2(&self) -> &IntMatrix {
        &self.e2
    }

    pub fn generator_count(&self) -> usize {
        self.group.generators().len()
    }

    pub fn relator_count(&self) -> usize {
        self.d2.len()
    }

    /// The dual `d² = d̄₂ᵀ : C¹ → C²`.
    pub fn d2_dual(&self) -> GroupRingMatrix {
        dual_matrix(&self.d2, self.generator_count())
    }

    /// `d₂·d₁ = 0`, `ε∘d₁ = 0`, the dual composite, and exactness at `C₁`.
    pub fn check(&self) -> Result<()> {
        let g = &self.group;
        let gens = self.generator_count();
        if !is_zero_matrix(&matrix_product(g, &self.d2, &self.d1, 1)?) {
            return Err(Error::Consistency("d₂ followed by d₁ is not zero".into()));
        }
        if self.d1.iter().any(|row| row[0].augmentation() != 0) {
            return Err(Error::Consistency("augmentation of d₁ is not zero".into()));
        }
        let d1_dual = dual_matrix(&self.d1, 1);
        if !is_zero_matrix(&matrix_product(
            g,
            &d1_dual,
            &self.d2_dual(),
            self.relator_count(),
        )?) {
            return Err(Error::Consistency("d¹ followed by d² is not zero".into()));
        }
        let n = g.order();
        let ker_rank = gens * n - rank(&self.e1);
        let im_rank = rank(&self.e2);
        let saturated = row_cokernel_invariants(&self.e2).is_torsion_free();
        if ker_rank != im_rank || !saturated {
            return Err(Error::PresentationDeficiency(format!(
                "relators of {} do not generate the relation module (rank {im_rank} of {ker_rank}{})",
                g.name(),
                if saturated { "" } else { ", image not saturated" }
            )));
        }
        Ok(())
    }

    /// `ker d₂ ⊆ (ℤπ)^{#relators}` with the induced action.
    pub fn ker_d2(&self) -> Result<LatticeModule> {
        let basis = kernel_basis_rows(&self.e2.transpose());
        let ambient = free_module(&self.group, self.relator_count());
        Ok(ambient.sublattice(&basis)?.with_label("ker d2"))
    }

    /// `coker d² = (ℤπ)^{#relators} / row span of d²`.
    pub fn coker_d2_dual_presentation(&self) -> Result<FpModule> {
        FpModule::new(&self.group, self.relator_count(), self.d2_dual())
    }

    pub fn coker_d2_dual(&self) -> Result<LatticeModule> {
        let m = self
            .coker_d2_dual_presentation()?
            .to_lattice()
            .map_err(|e| match e {
                Error::NotALattice(t) => Error::Consistency(format!(
                    "coker d² has ℤ-torsion {t:?}; the dual map is malformed"
                )),
                other => other,
            })?;
        Ok(m.with_label("coker d2"))
    }
}

/// The explicit four-term resolution of `ℤ` over `C_n × C_m`.
#[derive(Clone, Debug)]
pub struct AbelianResolution {
    pub group: Arc<FiniteGroup>,
    pub d1: GroupRingMatrix,
    pub d2: GroupRingMatrix,
    pub d3: GroupRingMatrix,
    pub d4: GroupRingMatrix,
}

pub fn abelian_two_generator_resolution(n: usize, m: usize) -> Result<AbelianResolution> {
    let group = Arc::new(two_generator_abelian(n, m)?);
    let g = &group;
    let (a, b) = (g.generators()[0].element, g.generators()[1].element);
    let z = GroupRingElement::zero(g);
    let one = GroupRingElement::one(g);
    let ea = GroupRingElement::from_element(g, a, 1);
    let eb = GroupRingElement::from_element(g, b, 1);
    let na = partial_norm(g, a, n)?;
    let nb = partial_norm(g, b, m)?;
    let b1 = &eb - &one;
    let (one_a, one_b) = (&one - &ea, &one - &eb);
    let d1 = vec![vec![one_a.clone()], vec![one_b.clone()]];
    let d2 = vec![
        vec![na.clone(), z.clone()],
        vec![b1.clone(), one_a.clone()],
        vec![z.clone(), nb.clone()],
    ];
    let d3 = vec![
        vec![one_a.clone(), z.clone(), z.clone()],
        vec![one_b.clone(), na.clone(), z.clone()],
        vec![z.clone(), -&nb, one_a.clone()],
        vec![z.clone(), z.clone(), one_b],
    ];
    let d4 = vec![
        vec![na.clone(), z.clone(), z.clone(), z.clone()],
        vec![b1.clone(), one_a.clone(), z.clone(), z.clone()],
        vec![z.clone(), nb.clone(), na, z.clone()],
        vec![z.clone(), z.clone(), b1, one_a],
        vec![z.clone(), z.clone(), z, nb],
    ];
    Ok(AbelianResolution {
        group,
        d1,
        d2,
        d3,
        d4,
    })
}

impl AbelianResolution {
    /// All consecutive composites vanish.
    pub fn check_complex(&self) -> Result<()> {
        let g = &self.group;
        let pairs: [(&GroupRingMatrix, &GroupRingMatrix, usize, &str); 3] = [
            (&self.d2, &self.d1, 1, "d₂d₁"),
            (&self.d3, &self.d2, 2, "d₃d₂"),
            (&self.d4, &self.d3, 3, "d₄d₃"),
        ];
        for (x, y, cols, name) in pairs {
            if !is_zero_matrix(&matrix_product(g, x, y, cols)?) {
                return Err(Error::Consistency(format!("{name} is not zero")));
            }
        }
        if self.d1.iter().any(|row| row[0].augmentation() != 0) {
            return Err(Error::Consistency("augmentation of d₁ is not zero".into()));
        }
        Ok(())
    }

    /// Checks `im d₃ = ker d₂` as lattices in `C₂`.
    pub fn check_exact_at_c2(&self) -> Result<()> {
        let e2 = expand_row_map(&self.d2, &self.group, 2)?;
        let e3 = expand_row_map(&self.d3, &self.group, 3)?;
        if kernel_basis_rows(&e2.transpose()) != echelon_basis(&e3) {
            return Err(Error::Consistency("image of d₃ differs from ker d₂".into()));
        }
        Ok(())
    }

    /// `ker d₂ ≅ coker d₄ = (ℤπ)⁴ / rows of d₄`.
    pub fn ker_d2_presentation(&self) -> Result<FpModule> {
        FpModule::new(&self.group, 4, self.d4.clone())
    }

    pub fn ker_d2_via_d4(&self) -> Result<LatticeModule> {
        Ok(self
            .ker_d2_presentation()?
            .to_lattice()?
            .with_label("coker d4"))
    }

    /// `ker d₂` directly from the displayed `d₂`.
    pub fn ker_d2(&self) -> Result<LatticeModule> {
        let e2 = expand_row_map(&self.d2, &self.group, 2)?;
        let basis = kernel_basis_rows(&e2.transpose());
        Ok(free_module(&self.group, 3)
            .sublattice(&basis)?
            .with_label("ker d2"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, make_abelian};
    use crate::modules::{coinvariants, m1, m2, tate_h0};

    #[test]
    fn cyclic_complex() {
        let g = Arc::new(make_abelian(&[5]).unwrap());
        let r = presentation_complex(&g).unwrap();
        assert_eq!(r.d2()[0][0], crate::group_ring::norm_element(&g));
        let a = GroupRingElement::from_element(&g, g.generators()[0].element, 1);
        assert_eq!(r.d1()[0][0], &a - &GroupRingElement::one(&g));
        assert_eq!(r.ker_d2().unwrap().zrank(), 4);
        assert_eq!(r.coker_d2_dual().unwrap().zrank(), 4);
    }

    #[test]
    fn klein_four_ranks() {
        let g = Arc::new(make_abelian(&[2, 2]).unwrap());
        let r = presentation_complex(&g).unwrap();
        assert_eq!(r.ker_d2().unwrap().zrank(), 7);
        assert_eq!(r.coker_d2_dual().unwrap().zrank(), 7);
    }

    #[test]
    fn trivial_group() {
        let g = Arc::new(FiniteGroup::trivial());
        let r = presentation_complex(&g).unwrap();
        assert_eq!(r.ker_d2().unwrap().zrank(), 0);
        assert_eq!(r.coker_d2_dual().unwrap().zrank(), 0);
    }

    #[test]
    fn dihedral_complex() {
        let g = Arc::new(catalog("D8").unwrap());
        let r = presentation_complex(&g).unwrap();
        assert_eq!((r.relator_count(), r.generator_count()), (3, 2));
        assert_eq!(r.ker_d2().unwrap().zrank(), 15);
    }

    #[test]
    fn missing_relator_is_rejected() {
        let g = make_abelian(&[2, 2]).unwrap();
        let mut file = g.to_group_file();
        file.relators.pop();
        // without the commutator the relators no longer present C2×C2
        let g = Arc::new(file.into_group().unwrap());
        assert!(matches!(
            presentation_complex(&g),
            Err(Error::PresentationDeficiency(_))
        ));
    }

    #[test]
    fn explicit_resolution() {
        for (n, m) in [(2, 2), (4, 2), (3, 3), (1, 3), (2, 1)] {
            let res = abelian_two_generator_resolution(n, m).unwrap();
            res.check_complex().unwrap();
            res.check_exact_at_c2().unwrap();
            let k = res.ker_d2().unwrap();
            let k4 = res.ker_d2_via_d4().unwrap();
            assert_eq!(k.zrank(), 2 * n * m - 1);
            assert_eq!(k4.zrank(), k.zrank());
            assert_eq!(coinvariants(&k).invariants, coinvariants(&k4).invariants);
            if n > 1 && m > 1 {
                let r1 = m1(&res.group).unwrap().to_lattice().unwrap().zrank();
                let r2 = m2(&res.group).unwrap().to_lattice().unwrap().zrank();
                assert_eq!(r1 + r2, k.zrank());
            }
        }
    }

    #[test]
    fn fox_and_explicit_routes_agree() {
        let res = abelian_two_generator_resolution(2, 2).unwrap();
        let fox = presentation_complex(&res.group).unwrap();
        assert_eq!(
            tate_h0(&fox.ker_d2().unwrap()),
            tate_h0(&res.ker_d2().unwrap())
        );
    }
}
