//! ℤπ-modules as finite presentations and as lattices with explicit action.

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group_ring::{norm_element, partial_norm, same_group, GroupRingElement};
use crate::groups::{direct_product, FiniteGroup};
use crate::linalg::{
    hermite_normal_form, kernel_basis_rows, reduce_presentation, row_cokernel_invariants,
    smith_normal_form, AbelianInvariants, IntMatrix, LatticeSolver, ReducedPresentation,
    SparseMatrix, SparseVec,
};

/// Where a lattice basis came from: a label, and optionally the ambient
/// coordinates of each basis vector (one row per basis vector).
#[derive(Clone, Debug, Default)]
pub struct Provenance {
    pub label: String,
    pub lifts: Option<IntMatrix>,
}

/// A ℤ-free ℤπ-module: one invertible integer matrix per generator, acting
/// on column coordinate vectors, with `ρ(gh) = ρ(g)ρ(h)`.
#[derive(Clone, Debug)]
pub struct LatticeModule {
    group: Arc<FiniteGroup>,
    zrank: usize,
    action: Vec<SparseMatrix>,
    inverse: Vec<SparseMatrix>,
    provenance: Provenance,
}

impl LatticeModule {
    /// Builds and validates a module from generator actions.
    pub fn new(group: &Arc<FiniteGroup>, zrank: usize, action: Vec<SparseMatrix>) -> Result<Self> {
        let inverse = action
            .iter()
            .zip(group.generators())
            .map(|(m, g)| m.pow(group.element_order(g.element) - 1))
            .collect();
        Self::with_inverses(group, zrank, action, inverse)
    }

    pub fn from_dense(
        group: &Arc<FiniteGroup>,
        zrank: usize,
        action: &[IntMatrix],
    ) -> Result<Self> {
        Self::new(
            group,
            zrank,
            action.iter().map(SparseMatrix::from_dense).collect(),
        )
    }

    /// Builds a module from generator actions and their claimed inverses;
    /// both are checked.
    pub fn with_inverses(
        group: &Arc<FiniteGroup>,
        zrank: usize,
        action: Vec<SparseMatrix>,
        inverse: Vec<SparseMatrix>,
    ) -> Result<Self> {
        let k = group.generators().len();
        if action.len() != k || inverse.len() != k {
            return Err(Error::InvalidArgument(format!(
                "expected {k} action matrices"
            )));
        }
        let m = LatticeModule {
            group: group.clone(),
            zrank,
            action,
            inverse,
            provenance: Provenance::default(),
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks shapes, invertibility over ℤ, relators and commutation.
    pub fn validate(&self) -> Result<()> {
        let n = self.zrank;
        for (m, inv) in self.action.iter().zip(&self.inverse) {
            if m.rows() != n || m.cols() != n || inv.rows() != n || inv.cols() != n {
                return Err(Error::InvalidArgument(
                    "action matrices must be square of equal size".into(),
                ));
            }
            if !m.mul(inv).is_identity() {
                return Err(Error::Consistency(
                    "action matrix is not invertible over ℤ".into(),
                ));
            }
        }
        for (k, w) in self.group.relators().iter().enumerate() {
            if !self.word_action(&w.letters).is_identity() {
                return Err(Error::Consistency(format!(
                    "relator {k} does not act trivially"
                )));
            }
        }
        let gens = self.group.generator_elements();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let commute = self.group.mul(gens[i], gens[j]) == self.group.mul(gens[j], gens[i]);
                let covered = self.group.relators().iter().any(|w| {
                    w.letters.len() == 4
                        && [(i, j), (j, i)].iter().any(|&(x, y)| {
                            let mut l: Vec<(usize, i8)> = w.letters.clone();
                            l.sort();
                            let mut c = vec![(x, 1), (y, 1), (x, -1), (y, -1)];
                            c.sort();
                            l == c
                        })
                });
                if commute
                    && !covered
                    && self.action[i].mul(&self.action[j]) != self.action[j].mul(&self.action[i])
                {
                    return Err(Error::Consistency(format!(
                        "generators {i} and {j} commute but their actions do not"
                    )));
                }
            }
        }
        Ok(())
    }

    fn word_action(&self, letters: &[(usize, i8)]) -> SparseMatrix {
        letters
            .iter()
            .fold(SparseMatrix::identity(self.zrank), |acc, &(g, e)| {
                acc.mul(if e > 0 {
                    &self.action[g]
                } else {
                    &self.inverse[g]
                })
            })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn zrank(&self) -> usize {
        self.zrank
    }

    pub fn action(&self) -> &[SparseMatrix] {
        &self.action
    }

    pub fn inverse_action(&self) -> &[SparseMatrix] {
        &self.inverse
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn label(&self) -> &str {
        &self.provenance.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.provenance.label = label.into();
        self
    }

    pub fn with_lifts(mut self, lifts: IntMatrix) -> Self {
        self.provenance.lifts = Some(lifts);
        self
    }

    /// `ρ(h)` for every element `h`, by index.
    pub fn element_actions(&self) -> Vec<SparseMatrix> {
        let n = self.group.order();
        let mut out: Vec<Option<SparseMatrix>> = vec![None; n];
        out[self.group.identity()] = Some(SparseMatrix::identity(self.zrank));
        let mut queue = VecDeque::from([self.group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (k, g) in self.group.generators().iter().enumerate() {
                let y = self.group.mul(g.element, x);
                if out[y].is_none() {
                    out[y] = Some(self.action[k].mul(out[x].as_ref().expect("visited")));
                    queue.push_back(y);
                }
            }
        }
        out.into_iter()
            .map(|m| m.expect("generators generate"))
            .collect()
    }

    /// The orbit `{ρ(h)v}` indexed by element.
    pub fn orbit(&self, v: &SparseVec) -> Vec<SparseVec> {
        let n = self.group.order();
        let mut out: Vec<Option<SparseVec>> = vec![None; n];
        out[self.group.identity()] = Some(v.clone());
        let mut queue = VecDeque::from([self.group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (k, g) in self.group.generators().iter().enumerate() {
                let y = self.group.mul(g.element, x);
                if out[y].is_none() {
                    out[y] = Some(self.action[k].mul_vec(out[x].as_ref().expect("visited")));
                    queue.push_back(y);
                }
            }
        }
        out.into_iter()
            .map(|m| m.expect("generators generate"))
            .collect()
    }

    /// `N·v = Σ_h ρ(h)v`
    pub fn norm_of(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![BigInt::zero(); self.zrank];
        for w in self.orbit(v) {
            for (i, x) in w {
                acc[i] += x;
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    /// The invariant sublattice with the given basis rows (ambient
    /// coordinates), with the action re-expressed in that basis.
    pub fn sublattice(&self, basis: &IntMatrix) -> Result<LatticeModule> {
        if basis.cols() != self.zrank {
            return Err(Error::InvalidArgument(
                "basis vectors have the wrong length".into(),
            ));
        }
        let solver = LatticeSolver::new(basis);
        let columns: Vec<SparseVec> = (0..basis.rows())
            .map(|i| dense_to_sparse(basis.row(i)))
            .collect();
        let express = |m: &SparseMatrix| -> Result<SparseMatrix> {
            let mut cols = Vec::with_capacity(columns.len());
            for b in &columns {
                let image = sparse_to_dense(&m.mul_vec(b), self.zrank);
                let x = solver.solve(&image).ok_or_else(|| {
                    Error::Consistency("sublattice is not stable under the action".into())
                })?;
                cols.push(dense_to_sparse(&x));
            }
            Ok(SparseMatrix::from_columns(columns.len(), cols))
        };
        let action = self
            .action
            .iter()
            .map(&express)
            .collect::<Result<Vec<_>>>()?;
        let inverse = self
            .inverse
            .iter()
            .map(&express)
            .collect::<Result<Vec<_>>>()?;
        Ok(
            LatticeModule::with_inverses(&self.group, basis.rows(), action, inverse)?
                .with_lifts(basis.clone()),
        )
    }

    /// Quotient by the submodule generated by `relations` (ambient
    /// coordinates). Fails with [`Error::NotALattice`] when the quotient has
    /// ℤ-torsion.
    pub fn quotient(&self, relations: &[SparseVec]) -> Result<LatticeModule> {
        let n = self.zrank;
        let mut rows = Vec::new();
        for r in relations {
            for t in self.orbit(r) {
                if !t.is_empty() {
                    rows.push(sparse_to_dense(&t, n));
                }
            }
        }
        let span = IntMatrix::from_big_rows(rows, n);
        let projection = QuotientMap::new(&span)?;
        let project = |m: &SparseMatrix| -> SparseMatrix {
            let cols = projection
                .lifts
                .iter()
                .map(|l| projection.project(&m.mul_vec(l)))
                .collect();
            SparseMatrix::from_columns(projection.rank(), cols)
        };
        let action = self.action.iter().map(&project).collect();
        let inverse = self.inverse.iter().map(&project).collect();
        let mut lifts = IntMatrix::zeros(projection.rank(), n);
        for (k, l) in projection.lifts.iter().enumerate() {
            for (c, x) in l {
                lifts[(k, *c)] = x.clone();
            }
        }
        Ok(
            LatticeModule::with_inverses(&self.group, projection.rank(), action, inverse)?
                .with_lifts(lifts),
        )
    }

    /// The same module in a new basis: columns of `p` are the new basis
    /// vectors, and `p_inv` must be the exact inverse of `p`.
    pub fn change_basis(&self, p: &IntMatrix, p_inv: &IntMatrix) -> Result<LatticeModule> {
        if !p.mul(p_inv).sub(&IntMatrix::identity(self.zrank)).is_zero() {
            return Err(Error::InvalidArgument(
                "base change matrices are not inverse".into(),
            ));
        }
        let sp = SparseMatrix::from_dense(p);
        let spi = SparseMatrix::from_dense(p_inv);
        let conj = |m: &SparseMatrix| spi.mul(&m.mul(&sp));
        let action = self.action.iter().map(conj).collect();
        let inverse = self.inverse.iter().map(conj).collect();
        Ok(
            LatticeModule::with_inverses(&self.group, self.zrank, action, inverse)?
                .with_label(self.label().to_string()),
        )
    }

    /// Random unimodular base change, reproducible from `seed`.
    pub fn random_base_change(&self, seed: u64) -> Result<LatticeModule> {
        let (p, p_inv) = random_unimodular(self.zrank, seed);
        self.change_basis(&p, &p_inv)
    }
}

/// Random unimodular matrix together with its inverse.
pub fn random_unimodular(n: usize, seed: u64) -> (IntMatrix, IntMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = IntMatrix::identity(n);
    let mut p_inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            p.negate_col(0);
            p_inv.negate_row(0);
        }
        return (p, p_inv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..4) {
            0 => {
                p.swap_cols(i, j);
                p_inv.swap_rows(i, j);
            }
            1 => {
                p.negate_col(i);
                p_inv.negate_row(i);
            }
            _ => {
                // P ← P(I + c·E_ij), P⁻¹ ← (I − c·E_ij)P⁻¹
                let c = BigInt::from(rng.gen_range(-2i64..=2));
                p.add_col_multiple(j, i, &c);
                p_inv.add_row_multiple(i, j, &-c);
            }
        }
    }
    (p, p_inv)
}

/// Projection `ℤ^n → ℤ^n / R` onto a chosen basis of a torsion-free quotient.
struct QuotientMap {
    /// ambient vectors whose images form the quotient basis
    lifts: Vec<SparseVec>,
    /// image of each ambient basis vector
    images: Vec<SparseVec>,
}

impl QuotientMap {
    fn new(span: &IntMatrix) -> Result<Self> {
        let n = span.cols();
        let hnf = hermite_normal_form(span, false);
        let unit_pivots = hnf
            .pivots
            .iter()
            .enumerate()
            .all(|(i, &p)| hnf.h[(i, p)].is_one());
        if unit_pivots {
            // rows are reduced above each pivot, so a pivot coordinate is
            // minus the free part of its row
            let free: Vec<usize> = (0..n).filter(|c| !hnf.pivots.contains(c)).collect();
            let mut index = vec![usize::MAX; n];
            for (k, &c) in free.iter().enumerate() {
                index[c] = k;
            }
            let mut images: Vec<SparseVec> = (0..n)
                .map(|c| {
                    if index[c] != usize::MAX {
                        vec![(index[c], BigInt::one())]
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            for (i, &p) in hnf.pivots.iter().enumerate() {
                images[p] = (p + 1..n)
                    .filter(|&c| index[c] != usize::MAX && !hnf.h[(i, c)].is_zero())
                    .map(|c| (index[c], -&hnf.h[(i, c)]))
                    .collect();
            }
            let lifts = free.iter().map(|&c| vec![(c, BigInt::one())]).collect();
            return Ok(QuotientMap { lifts, images });
        }
        let snf = smith_normal_form(span);
        if !snf.invariant_factors.is_empty() {
            return Err(Error::NotALattice(snf.invariant_factors));
        }
        // the row span of span·V is spanned by the first `rank` unit
        // vectors, so x ↦ (xV)[rank..] and basis vector k lifts to row
        // rank+k of V⁻¹
        let v = snf.v.expect("transform requested");
        let r = snf.rank;
        let images = (0..n)
            .map(|c| {
                (r..n)
                    .filter(|&j| !v[(c, j)].is_zero())
                    .map(|j| (j - r, v[(c, j)].clone()))
                    .collect()
            })
            .collect();
        let solver = LatticeSolver::new(&v);
        let mut lifts = Vec::with_capacity(n - r);
        for k in r..n {
            let mut target = vec![BigInt::zero(); n];
            target[k] = BigInt::one();
            let x = solver.solve(&target).expect("V is unimodular");
            lifts.push(dense_to_sparse(&x));
        }
        Ok(QuotientMap { lifts, images })
    }

    fn rank(&self) -> usize {
        self.lifts.len()
    }

    fn project(&self, v: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, BigInt)> = Vec::new();
        for (c, x) in v {
            for (k, y) in &self.images[*c] {
                acc.push((*k, x * y));
            }
        }
        acc.sort_by_key(|(k, _)| *k);
        let mut out: SparseVec = Vec::with_capacity(acc.len());
        for (k, x) in acc {
            match out.last_mut() {
                Some((j, y)) if *j == k => *y += x,
                _ => out.push((k, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        out
    }
}

pub(crate) fn dense_to_sparse(v: &[BigInt]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn sparse_to_dense(v: &SparseVec, n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// A finitely presented module `(ℤπ)^rank / ⟨relations⟩` (left submodule).
#[derive(Clone, Debug)]
pub struct FpModule {
    group: Arc<FiniteGroup>,
    rank: usize,
    relations: Vec<Vec<GroupRingElement>>,
}

impl FpModule {
    pub fn new(
        group: &Arc<FiniteGroup>,
        rank: usize,
        relations: Vec<Vec<GroupRingElement>>,
    ) -> Result<Self> {
        for r in &relations {
            if r.len() != rank {
                return Err(Error::InvalidArgument(format!(
                    "relation of length {} in rank {rank}",
                    r.len()
                )));
            }
            if r.iter().any(|x| !same_group(x.group(), group)) {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(FpModule {
            group: group.clone(),
            rank,
            relations,
        })
    }

    pub fn free(group: &Arc<FiniteGroup>, rank: usize) -> Self {
        FpModule {
            group: group.clone(),
            rank,
            relations: Vec::new(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vec<GroupRingElement>] {
        &self.relations
    }

    /// Relations as vectors in `ℤ^{rank·|π|}`, coordinate `(i, g) ↦ i·|π| + g`.
    pub fn relation_vectors(&self) -> Vec<SparseVec> {
        let n = self.group.order();
        self.relations
            .iter()
            .map(|r| {
                let mut v = SparseVec::new();
                for (i, x) in r.iter().enumerate() {
                    for (g, &c) in x.coeffs().iter().enumerate() {
                        if c != 0 {
                            v.push((i * n + g, BigInt::from(c)));
                        }
                    }
                }
                v
            })
            .collect()
    }

    pub fn to_lattice(&self) -> Result<LatticeModule> {
        lattice_from_presentation(self)
    }
}

/// The lattice underlying a presentation whose ℤ-cokernel is torsion free.
pub fn lattice_from_presentation(p: &FpModule) -> Result<LatticeModule> {
    free_module(&p.group, p.rank).quotient(&p.relation_vectors())
}

/// `(ℤπ)^k` with the left regular action on each summand.
pub fn free_module(group: &Arc<FiniteGroup>, k: usize) -> LatticeModule {
    let n = group.order();
    let perm = |g: usize| -> SparseMatrix {
        let p: Vec<usize> = (0..k * n)
            .map(|c| (c / n) * n + group.mul(g, c % n))
            .collect();
        SparseMatrix::permutation(&p)
    };
    let action = group.generator_elements().into_iter().map(perm).collect();
    let inverse = group
        .generator_elements()
        .into_iter()
        .map(|g| perm(group.inv(g)))
        .collect();
    LatticeModule::with_inverses(group, k * n, action, inverse)
        .expect("regular representation is a module")
        .with_label(if k == 1 {
            "Zπ".to_string()
        } else {
            format!("(Zπ)^{k}")
        })
        .with_lifts(IntMatrix::identity(k * n))
}

/// `ℤ^r` with trivial action.
pub fn trivial_module(group: &Arc<FiniteGroup>, r: usize) -> LatticeModule {
    let k = group.generators().len();
    LatticeModule::with_inverses(
        group,
        r,
        vec![SparseMatrix::identity(r); k],
        vec![SparseMatrix::identity(r); k],
    )
    .expect("trivial action is a module")
    .with_label("Z")
}

/// Rank-one module on which `g` acts by `χ(g) = ±1`, trivial on `kernel`
/// (a subgroup of index at most two).
pub fn sign_module(group: &Arc<FiniteGroup>, kernel: &[usize]) -> Result<LatticeModule> {
    if kernel.len() * 2 != group.order() && kernel.len() != group.order() {
        return Err(Error::InvalidArgument(
            "sign characters need a subgroup of index two".into(),
        ));
    }
    let action: Vec<SparseMatrix> = group
        .generator_elements()
        .into_iter()
        .map(|g| {
            let s = if kernel.contains(&g) { 1 } else { -1 };
            SparseMatrix::from_columns(1, vec![vec![(0, BigInt::from(s))]])
        })
        .collect();
    Ok(LatticeModule::with_inverses(group, 1, action.clone(), action)?.with_label("Z-"))
}

/// The permutation module `ℤ[π/H]` on left cosets of `subgroup`.
pub fn coset_module(group: &Arc<FiniteGroup>, subgroup: &[usize]) -> Result<LatticeModule> {
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for g in group.elements() {
        if coset_of[g] == usize::MAX {
            for &h in subgroup {
                coset_of[group.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
    }
    if reps.len() * subgroup.len() != group.order() {
        return Err(Error::InvalidArgument("not a subgroup".into()));
    }
    let perm = |x: usize| -> SparseMatrix {
        SparseMatrix::permutation(
            &reps
                .iter()
                .map(|&r| coset_of[group.mul(x, r)])
                .collect::<Vec<_>>(),
        )
    };
    let action = group.generator_elements().into_iter().map(perm).collect();
    let inverse = group
        .generator_elements()
        .into_iter()
        .map(|g| perm(group.inv(g)))
        .collect();
    Ok(LatticeModule::with_inverses(group, reps.len(), action, inverse)?.with_label("Z[π/H]"))
}

/// `ker(ε: ℤπ → ℤ)` with basis `{g − 1 : g ≠ 1}`.
pub fn augmentation_ideal(group: &Arc<FiniteGroup>) -> LatticeModule {
    let n = group.order();
    let e = group.identity();
    let rows: Vec<Vec<BigInt>> = group
        .elements()
        .filter(|&g| g != e)
        .map(|g| {
            let mut v = vec![BigInt::zero(); n];
            v[g] = BigInt::one();
            v[e] = -BigInt::one();
            v
        })
        .collect();
    let basis = IntMatrix::from_big_rows(rows, n);
    free_module(group, 1)
        .sublattice(&basis)
        .expect("augmentation ideal is a submodule")
        .with_label("I")
}

/// `ℤπ/N` with basis the images of `g ≠ 1`.
pub fn quotient_by_norm(group: &Arc<FiniteGroup>) -> LatticeModule {
    let m = FpModule::new(group, 1, vec![vec![norm_element(group)]]).expect("well formed");
    lattice_from_presentation(&m)
        .expect("ℤπ/N is torsion free")
        .with_label("Zπ/N")
}

/// `ℤπ/⟨N_H⟩` for the norm element of a subgroup `H`.
pub fn quotient_by_subgroup_norm(group: &Arc<FiniteGroup>, subgroup: &[usize]) -> FpModule {
    let nh =
        GroupRingElement::from_terms(group, &subgroup.iter().map(|&h| (h, 1)).collect::<Vec<_>>());
    FpModule::new(group, 1, vec![vec![nh]]).expect("well formed")
}

/// Elements `(1, h)` of `G × H` as built by [`direct_product`].
pub fn second_factor(g: &FiniteGroup, h: &FiniteGroup) -> Vec<usize> {
    h.elements().map(|x| g.identity() * h.order() + x).collect()
}

pub fn direct_sum(a: &LatticeModule, b: &LatticeModule) -> Result<LatticeModule> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let action = a
        .action
        .iter()
        .zip(&b.action)
        .map(|(x, y)| x.block_diag(y))
        .collect();
    let inverse = a
        .inverse
        .iter()
        .zip(&b.inverse)
        .map(|(x, y)| x.block_diag(y))
        .collect();
    let label = format!("{} + {}", a.label(), b.label());
    Ok(
        LatticeModule::with_inverses(&a.group, a.zrank + b.zrank, action, inverse)?
            .with_label(label),
    )
}

/// `A ⊗_ℤ B` with the diagonal action; basis `(i, j) ↦ i·rank(B) + j`.
pub fn tensor(a: &LatticeModule, b: &LatticeModule) -> Result<LatticeModule> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let action = a
        .action
        .iter()
        .zip(&b.action)
        .map(|(x, y)| x.kronecker(y))
        .collect();
    let inverse = a
        .inverse
        .iter()
        .zip(&b.inverse)
        .map(|(x, y)| x.kronecker(y))
        .collect();
    let label = format!("{} (x) {}", a.label(), b.label());
    Ok(
        LatticeModule::with_inverses(&a.group, a.zrank * b.zrank, action, inverse)?
            .with_label(label),
    )
}

/// `A ⊕ (ℤπ)^k`
pub fn stabilize(a: &LatticeModule, k: usize) -> Result<LatticeModule> {
    if k == 0 {
        return Ok(a.clone());
    }
    direct_sum(a, &free_module(&a.group, k))
}

/// `A_π = A / span{(g − 1)a}` and the presentation it was read from.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub invariants: AbelianInvariants,
    pub presentation: ReducedPresentation,
}

fn coinvariant_relations(a: &LatticeModule) -> Vec<SparseVec> {
    let mut rels = Vec::with_capacity(a.action.len() * a.zrank);
    for m in &a.action {
        for j in 0..a.zrank {
            let mut col = m.column(j).clone();
            match col.binary_search_by_key(&j, |(i, _)| *i) {
                Ok(pos) => {
                    col[pos].1 -= 1;
                    if col[pos].1.is_zero() {
                        col.remove(pos);
                    }
                }
                Err(pos) => col.insert(pos, (j, -BigInt::one())),
            }
            if !col.is_empty() {
                rels.push(col);
            }
        }
    }
    rels
}

pub fn coinvariants(a: &LatticeModule) -> Coinvariants {
    let presentation = reduce_presentation(a.zrank, &coinvariant_relations(a));
    let invariants = presentation_invariants(&presentation);
    Coinvariants {
        invariants,
        presentation,
    }
}

/// Invariants of a reduced presentation; generators untouched by any
/// relation are counted as free without entering the Smith form.
fn presentation_invariants(p: &ReducedPresentation) -> AbelianInvariants {
    let m = &p.relations;
    let used: Vec<usize> = (0..m.cols())
        .filter(|&c| (0..m.rows()).any(|r| !m[(r, c)].is_zero()))
        .collect();
    let core = row_cokernel_invariants(&m.select_columns(&used));
    AbelianInvariants {
        free_rank: core.free_rank + (m.cols() - used.len()),
        torsion: core.torsion,
    }
}

/// `Ĥ₀(π; A)` as the torsion subgroup of the coinvariants.
pub fn tate_h0(a: &LatticeModule) -> AbelianInvariants {
    coinvariants(a).invariants.torsion_part()
}

/// Above this rank the norm route reuses the reduced coinvariant
/// presentation instead of the raw one.
const RAW_NORM_ROUTE_LIMIT: usize = 192;

/// `Ĥ₀(π; A) = ker(N: A_π → A)` computed from the norm map.
pub fn tate_h0_via_norm(a: &LatticeModule) -> Result<AbelianInvariants> {
    if a.zrank <= RAW_NORM_ROUTE_LIMIT {
        let raw = ReducedPresentation::unreduced(a.zrank, &coinvariant_relations(a));
        norm_kernel(a, &raw, None)
    } else {
        let c = coinvariants(a);
        norm_kernel(a, &c.presentation, Some(c.invariants.free_rank))
    }
}

/// Both oracles for `Ĥ₀`, with agreement enforced.
#[derive(Clone, Debug)]
pub struct TateH0 {
    pub coinvariants: AbelianInvariants,
    pub h0: AbelianInvariants,
}

pub fn tate_h0_checked(a: &LatticeModule) -> Result<TateH0> {
    let c = coinvariants(a);
    let via_norm = if a.zrank <= RAW_NORM_ROUTE_LIMIT {
        let raw = ReducedPresentation::unreduced(a.zrank, &coinvariant_relations(a));
        norm_kernel(a, &raw, None)?
    } else {
        norm_kernel(a, &c.presentation, Some(c.invariants.free_rank))?
    };
    let h0 = c.invariants.torsion_part();
    if h0 != via_norm {
        return Err(Error::Consistency(format!(
            "Ĥ₀ of {} disagrees: coinvariant torsion {h0}, norm kernel {via_norm}",
            a.label()
        )));
    }
    Ok(TateH0 {
        coinvariants: c.invariants,
        h0,
    })
}

/// `ker(N̄)/Rel` where the presentation `ℤ^S/Rel` of `A_π` maps to `A` by
/// `e_s ↦ N·e_s`.
fn norm_kernel(
    a: &LatticeModule,
    p: &ReducedPresentation,
    free_rank: Option<usize>,
) -> Result<AbelianInvariants> {
    let s = p.generators.len();
    let norm_cols: Vec<SparseVec> = p
        .generators
        .iter()
        .map(|&g| a.norm_of(&vec![(g, BigInt::one())]))
        .collect();
    let ns = SparseMatrix::from_columns(a.zrank, norm_cols);
    let rows = match free_rank {
        Some(target) if a.zrank * s > 250_000 => select_independent_rows(&ns, target)?,
        _ => ns.to_dense(),
    };
    let kernel = kernel_basis_rows(&rows);
    for i in 0..kernel.rows() {
        if !ns.mul_dense_vec(kernel.row(i)).iter().all(Zero::is_zero) {
            return Err(Error::Consistency(
                "norm kernel from selected rows is not exact".into(),
            ));
        }
    }
    if kernel.rows() == 0 {
        if !p.relations.is_zero() {
            return Err(Error::Consistency("norm map kills no relation".into()));
        }
        return Ok(AbelianInvariants::trivial());
    }
    let solver = LatticeSolver::new(&kernel);
    let mut coords = Vec::new();
    for r in 0..p.relations.rows() {
        let row = p.relations.row(r);
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        let x = solver.solve(row).ok_or_else(|| {
            Error::Consistency("a coinvariant relation is not in the norm kernel".into())
        })?;
        coords.push(x);
    }
    let m = IntMatrix::from_big_rows(coords, kernel.rows());
    let inv = row_cokernel_invariants(&m);
    if inv.free_rank != 0 {
        return Err(Error::Consistency(
            "norm kernel modulo relations is not finite".into(),
        ));
    }
    Ok(inv)
}

/// Rows of `m` independent modulo a large prime, reaching rank `target`.
fn select_independent_rows(m: &SparseMatrix, target: usize) -> Result<IntMatrix> {
    const PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];
    let t = m.transpose();
    let cols = m.cols();
    for p in PRIMES {
        let reduce =
            |x: &BigInt| -> u64 { x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced") };
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut chosen = Vec::new();
        for (r, row) in t.columns().iter().enumerate() {
            if chosen.len() == target {
                break;
            }
            if row.is_empty() {
                continue;
            }
            let mut v = vec![0u64; cols];
            for (c, x) in row {
                v[*c] = reduce(x);
            }
            for (pc, b) in &basis {
                let f = v[*pc];
                if f != 0 {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = (*vi + p - (f * bi) % p) % p;
                    }
                }
            }
            if let Some(pc) = v.iter().position(|&x| x != 0) {
                let inv = mod_inverse(v[pc], p);
                for x in v.iter_mut() {
                    *x = (*x * inv) % p;
                }
                basis.push((pc, v));
                chosen.push(r);
            }
        }
        if chosen.len() == target {
            let rows = chosen
                .iter()
                .map(|&r| sparse_to_dense(t.column(r), cols))
                .collect();
            return Ok(IntMatrix::from_big_rows(rows, cols));
        }
    }
    Err(Error::Consistency(
        "could not find enough independent norm rows".into(),
    ))
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut result, mut base, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Restriction to the subgroup on `elements`; each subgroup generator acts
/// through a word in the ambient generators.
pub fn restrict(a: &LatticeModule, elements: &[usize]) -> Result<LatticeModule> {
    let (h, embed) = a.group.subgroup(elements)?;
    let words = a.group.element_words();
    let mut action = Vec::new();
    let mut inverse = Vec::new();
    for g in h.generators() {
        let w = &words[embed[g.element]];
        action.push(a.word_action(&w.letters));
        inverse.push(a.word_action(&w.inverse().letters));
    }
    Ok(
        LatticeModule::with_inverses(&Arc::new(h), a.zrank, action, inverse)?
            .with_label(format!("res {}", a.label())),
    )
}

/// `A[G]` over `G × H` for a module `A` over `H`; basis `(g, i) ↦ g·rank(A) + i`.
pub fn induce(a: &LatticeModule, g: &FiniteGroup) -> Result<LatticeModule> {
    let h = &a.group;
    let pi = Arc::new(direct_product(g, h));
    let r = a.zrank;
    let shift = |x: usize| -> SparseMatrix {
        let perm: Vec<usize> = (0..g.order() * r)
            .map(|c| g.mul(x, c / r) * r + c % r)
            .collect();
        SparseMatrix::permutation(&perm)
    };
    let blocks = |m: &SparseMatrix| -> SparseMatrix {
        (1..g.order()).fold(m.clone(), |acc, _| acc.block_diag(m))
    };
    let mut action = Vec::new();
    let mut inverse = Vec::new();
    for x in g.generator_elements() {
        action.push(shift(x));
        inverse.push(shift(g.inv(x)));
    }
    for (m, mi) in a.action.iter().zip(&a.inverse) {
        action.push(blocks(m));
        inverse.push(blocks(mi));
    }
    Ok(
        LatticeModule::with_inverses(&pi, g.order() * r, action, inverse)?
            .with_label(format!("{}[G]", a.label())),
    )
}

/// `(A ⊗ A)[G] / Flip_g` with `Flip_g = ⟨(a⊗b) − (b⊗a)g⟩`, over `G × H`.
pub fn flip_quotient(
    a: &LatticeModule,
    g: &FiniteGroup,
    involution: usize,
) -> Result<LatticeModule> {
    if involution == g.identity() || g.mul(involution, involution) != g.identity() {
        return Err(Error::InvalidArgument(
            "flip quotients need an element of order two".into(),
        ));
    }
    let aa = tensor(a, a)?;
    let induced = induce(&aa, g)?;
    let r = a.zrank;
    let rr = r * r;
    let mut rels = Vec::new();
    for x in g.elements() {
        let xg = g.mul(x, involution);
        for i in 0..r {
            for j in 0..r {
                let lhs = x * rr + i * r + j;
                let rhs = xg * rr + j * r + i;
                let mut v: SparseVec = vec![(lhs, BigInt::one()), (rhs, -BigInt::one())];
                v.sort_by_key(|(c, _)| *c);
                if lhs < rhs {
                    rels.push(v);
                }
            }
        }
    }
    Ok(induced
        .quotient(&rels)?
        .with_label(format!("({0} (x) {0})[G]/Flip", a.label())))
}

fn two_generators(group: &Arc<FiniteGroup>) -> Result<(usize, usize, usize, usize)> {
    if group.generators().len() != 2 {
        return Err(Error::InvalidArgument(
            "expected exactly two generators a, b".into(),
        ));
    }
    let a = group.generators()[0].element;
    let b = group.generators()[1].element;
    Ok((a, group.element_order(a), b, group.element_order(b)))
}

/// `M₁ = (ℤπ)²/⟨(N_a, 0), (0, N_b)⟩`
pub fn m1(group: &Arc<FiniteGroup>) -> Result<FpModule> {
    let (a, n, b, m) = two_generators(group)?;
    let z = GroupRingElement::zero(group);
    let na = partial_norm(group, a, n)?;
    let nb = partial_norm(group, b, m)?;
    FpModule::new(group, 2, vec![vec![na, z.clone()], vec![z, nb]])
}

/// `M₂ = (ℤπ)²/⟨(1 − a, 0), (N_b, N_a), (0, b − 1)⟩`
pub fn m2(group: &Arc<FiniteGroup>) -> Result<FpModule> {
    let (a, n, b, m) = two_generators(group)?;
    let one = GroupRingElement::one(group);
    let z = GroupRingElement::zero(group);
    let ea = GroupRingElement::from_element(group, a, 1);
    let eb = GroupRingElement::from_element(group, b, 1);
    let na = partial_norm(group, a, n)?;
    let nb = partial_norm(group, b, m)?;
    FpModule::new(
        group,
        2,
        vec![
            vec![&one - &ea, z.clone()],
            vec![nb, na],
            vec![z, &eb - &one],
        ],
    )
}

/// `M = (ℤπ)³/⟨(N_a, 1 − b, 0), (0, 1 − a, N_b)⟩`
pub fn coker_presentation(group: &Arc<FiniteGroup>) -> Result<FpModule> {
    let (a, n, b, m) = two_generators(group)?;
    let one = GroupRingElement::one(group);
    let z = GroupRingElement::zero(group);
    let ea = GroupRingElement::from_element(group, a, 1);
    let eb = GroupRingElement::from_element(group, b, 1);
    let na = partial_norm(group, a, n)?;
    let nb = partial_norm(group, b, m)?;
    FpModule::new(
        group,
        3,
        vec![vec![na, &one - &eb, z.clone()], vec![z, &one - &ea, nb]],
    )
}

/// `ℤπ/⟨λ⟩` for a single group ring element.
pub fn cyclic_quotient(
    group: &Arc<FiniteGroup>,
    lambda: GroupRingElement,
) -> Result<LatticeModule> {
    lattice_from_presentation(&FpModule::new(group, 1, vec![vec![lambda]])?)
}

/// Seeded random lattice module of rank at most `max_rank`: a direct sum
/// of permutation, sign, augmentation and norm-quotient blocks, possibly
/// tensored, then put in a random basis.
pub fn random_lattice_module(
    group: &Arc<FiniteGroup>,
    max_rank: usize,
    seed: u64,
) -> Result<LatticeModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subgroups = group.subgroups();
    let index_two: Vec<&Vec<usize>> = subgroups
        .iter()
        .filter(|s| s.len() * 2 == group.order())
        .collect();
    let block = |rng: &mut ChaCha8Rng, room: usize| -> Result<Option<LatticeModule>> {
        for _ in 0..20 {
            let h = &subgroups[rng.gen_range(0..subgroups.len())];
            let index = group.order() / h.len();
            let m = match rng.gen_range(0..5) {
                0 => trivial_module(group, 1),
                1 if !index_two.is_empty() => {
                    sign_module(group, index_two[rng.gen_range(0..index_two.len())])?
                }
                2 if index <= room => coset_module(group, h)?,
                3 if index >= 2 && index - 1 <= room => {
                    let perm = coset_module(group, h)?;
                    let ones: SparseVec = (0..index).map(|c| (c, BigInt::one())).collect();
                    perm.quotient(&[ones])?
                }
                4 if index >= 2 && index - 1 <= room => {
                    let perm = coset_module(group, h)?;
                    let basis: Vec<Vec<BigInt>> = (1..index)
                        .map(|c| {
                            let mut v = vec![BigInt::zero(); index];
                            v[c] = BigInt::one();
                            v[0] = -BigInt::one();
                            v
                        })
                        .collect();
                    perm.sublattice(&IntMatrix::from_big_rows(basis, index))?
                }
                _ => continue,
            };
            if m.zrank <= room {
                return Ok(Some(m));
            }
        }
        Ok(None)
    };
    let mut module: Option<LatticeModule> = None;
    let target = rng.gen_range(1..=max_rank);
    while module.as_ref().map_or(0, |m| m.zrank) < target {
        let room = max_rank - module.as_ref().map_or(0, |m| m.zrank);
        let Some(mut b) = block(&mut rng, room)? else {
            break;
        };
        if b.zrank * 2 <= room && rng.gen_bool(0.3) {
            if let Some(c) = block(&mut rng, room / b.zrank.max(1))? {
                if b.zrank * c.zrank <= room {
                    b = tensor(&b, &c)?;
                }
            }
        }
        module = Some(match module {
            None => b,
            Some(m) => direct_sum(&m, &b)?,
        });
    }
    let m = module.unwrap_or_else(|| trivial_module(group, 1));
    Ok(m.random_base_change(rng.gen())?
        .with_label(format!("random module #{seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, make_abelian};

    fn group(name: &str) -> Arc<FiniteGroup> {
        Arc::new(catalog(name).unwrap())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sign_c2() -> LatticeModule {
        let g = group("C2");
        sign_module(&g, &[g.identity()]).unwrap()
    }

    #[test]
    fn free_module_is_permutation() {
        let g = group("C4");
        let f = lattice_from_presentation(&FpModule::free(&g, 1)).unwrap();
        assert_eq!(f.zrank(), 4);
        let a = &f.action()[0];
        assert!(a.columns().iter().all(|c| c.len() == 1 && c[0].1.is_one()));
    }

    #[test]
    fn norm_quotient_of_c2_is_sign() {
        let g = group("C2");
        let q = quotient_by_norm(&g);
        assert_eq!(q.zrank(), 1);
        assert_eq!(q.action()[0].to_dense(), IntMatrix::from_rows(&[[-1]]));
        let i = augmentation_ideal(&g);
        assert_eq!(i.action()[0].to_dense(), IntMatrix::from_rows(&[[-1]]));
    }

    #[test]
    fn coker_presentation_rank() {
        let g = group("C2xC2");
        assert_eq!(
            coker_presentation(&g)
                .unwrap()
                .to_lattice()
                .unwrap()
                .zrank(),
            7
        );
        assert_eq!(m1(&g).unwrap().to_lattice().unwrap().zrank(), 4);
    }

    #[test]
    fn subgroup_norm_quotient_rank() {
        let c2 = make_abelian(&[2]).unwrap();
        let g = Arc::new(direct_product(&c2, &c2));
        let h = second_factor(&c2, &c2);
        assert_eq!(
            quotient_by_subgroup_norm(&g, &h)
                .to_lattice()
                .unwrap()
                .zrank(),
            2
        );
    }

    #[test]
    fn torsion_presentations_are_rejected() {
        let g = group("C2");
        let two = GroupRingElement::one(&g).scale(2);
        assert!(matches!(
            cyclic_quotient(&g, two),
            Err(Error::NotALattice(_))
        ));
    }

    #[test]
    fn coinvariant_examples() {
        for name in ["C1", "C3", "D8", "Q8"] {
            let g = group(name);
            let c = coinvariants(&free_module(&g, 1));
            assert_eq!(c.invariants, AbelianInvariants::free(1), "{name}");
        }
        let c = coinvariants(&sign_c2());
        assert_eq!(
            c.invariants,
            AbelianInvariants {
                free_rank: 0,
                torsion: big(&[2])
            }
        );
    }

    #[test]
    fn tate_examples() {
        let g = group("Q8");
        assert!(tate_h0_checked(&free_module(&g, 1))
            .unwrap()
            .h0
            .is_trivial());
        assert!(tate_h0_checked(&trivial_module(&g, 1))
            .unwrap()
            .h0
            .is_trivial());
        let s = tate_h0_checked(&sign_c2()).unwrap();
        assert_eq!(s.h0.torsion, big(&[2]));
        assert_eq!(tate_h0_via_norm(&sign_c2()).unwrap().torsion, big(&[2]));
    }

    #[test]
    fn tensor_and_sum() {
        let s = sign_c2();
        let t = tensor(&s, &s).unwrap();
        assert!(t.action()[0].is_identity());
        let z = LatticeModule::with_inverses(
            s.group(),
            0,
            vec![SparseMatrix::zeros(0, 0)],
            vec![SparseMatrix::zeros(0, 0)],
        )
        .unwrap();
        assert_eq!(direct_sum(&s, &z).unwrap().action()[0], s.action()[0]);
        let g = group("C2xC2");
        let a = quotient_by_norm(&g);
        let ft = tensor(&free_module(&g, 1), &a).unwrap();
        assert!(tate_h0_checked(&ft).unwrap().h0.is_trivial());
    }

    #[test]
    fn stabilize_and_base_change() {
        let g = group("D8");
        let a = quotient_by_norm(&g);
        assert_eq!(stabilize(&a, 0).unwrap().zrank(), a.zrank());
        assert_eq!(stabilize(&a, 2).unwrap().zrank(), a.zrank() + 16);
        let b = a.random_base_change(7).unwrap();
        assert_eq!(tate_h0(&a), tate_h0(&b));
        let (p, pi) = random_unimodular(6, 3);
        assert!(p.mul(&pi).sub(&IntMatrix::identity(6)).is_zero());
    }

    #[test]
    fn induction() {
        let c1 = Arc::new(FiniteGroup::trivial());
        let g = catalog("C3").unwrap();
        let z = trivial_module(&c1, 1);
        let ind = induce(&z, &g).unwrap();
        assert_eq!(ind.zrank(), 3);
        assert_eq!(coinvariants(&ind).invariants, AbelianInvariants::free(1));
    }

    #[test]
    fn flip_quotient_rank() {
        let c2 = catalog("C2").unwrap();
        let h = group("C2");
        let a = quotient_by_norm(&h);
        let t = c2.generators()[0].element;
        let f = flip_quotient(&a, &c2, t).unwrap();
        assert_eq!(f.zrank(), 1);
        assert!(flip_quotient(&a, &c2, c2.identity()).is_err());
    }

    #[test]
    fn restriction_to_sylow() {
        let g = Arc::new(crate::groups::parse_group_spec("C6").unwrap());
        let m = free_module(&g, 1);
        let s = crate::groups::sylow_subgroup(&g, 2).unwrap();
        let r = restrict(&m, &s).unwrap();
        assert_eq!(r.group().order(), 2);
        assert_eq!(coinvariants(&r).invariants, AbelianInvariants::free(3));
    }

    #[test]
    fn random_modules_validate() {
        for seed in 0..10 {
            let g = group(["C2", "C4", "C2xC2", "D8", "Q8"][seed as usize % 5]);
            let m = random_lattice_module(&g, 6, seed).unwrap();
            assert!(m.zrank() >= 1 && m.zrank() <= 6);
            tate_h0_checked(&m).unwrap();
        }
    }
}
