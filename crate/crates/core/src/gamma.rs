//! Whitehead's Γ on lattices, as the symmetric tensors inside `A ⊗ A`.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::modules::{tensor, LatticeModule};

/// A canonical basis vector of `Γ(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GammaBasis {
    /// `v(bᵢ) = bᵢ ⊗ bᵢ`
    V(usize),
    /// `eᵢⱼ = bᵢ ⊗ bⱼ + bⱼ ⊗ bᵢ` with `i < j`
    E(usize, usize),
}

/// Index bookkeeping for the basis `v(b₀), …, v(b_{r−1}), e₀₁, e₀₂, …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaIndex {
    r: usize,
}

impl GammaIndex {
    pub fn new(r: usize) -> Self {
        GammaIndex { r }
    }

    pub fn input_rank(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.r * (self.r + 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.r == 0
    }

    pub fn v(&self, i: usize) -> usize {
        debug_assert!(i < self.r);
        i
    }

    pub fn e(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.r);
        self.r + i * self.r - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Index of the symmetric basis vector on `{i, j}`, in either order.
    pub fn pair(&self, i: usize, j: usize) -> usize {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => self.v(i),
            std::cmp::Ordering::Less => self.e(i, j),
            std::cmp::Ordering::Greater => self.e(j, i),
        }
    }

    pub fn label(&self, k: usize) -> GammaBasis {
        assert!(k < self.len());
        if k < self.r {
            return GammaBasis::V(k);
        }
        let mut rest = k - self.r;
        let mut i = 0;
        while rest >= self.r - i - 1 {
            rest -= self.r - i - 1;
            i += 1;
        }
        GammaBasis::E(i, i + 1 + rest)
    }

    pub fn labels(&self) -> Vec<GammaBasis> {
        let mut out: Vec<GammaBasis> = (0..self.r).map(GammaBasis::V).collect();
        for i in 0..self.r {
            for j in i + 1..self.r {
                out.push(GammaBasis::E(i, j));
            }
        }
        out
    }

    /// Coordinates of `v(x) = x ⊗ x`.
    pub fn quadratic(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.r);
        let mut out = vec![BigInt::zero(); self.len()];
        for i in 0..self.r {
            out[self.v(i)] = &x[i] * &x[i];
            for j in i + 1..self.r {
                out[self.e(i, j)] = &x[i] * &x[j];
            }
        }
        out
    }

    /// The inclusion `Γ(A) → A ⊗ A` as an `r² × r(r+1)/2` matrix; tensor
    /// coordinates `(i, j) ↦ i·r + j`.
    pub fn symmetric_embedding(&self) -> SparseMatrix {
        let r = self.r;
        let cols = self
            .labels()
            .into_iter()
            .map(|b| match b {
                GammaBasis::V(i) => vec![(i * r + i, BigInt::from(1))],
                GammaBasis::E(i, j) => {
                    vec![(i * r + j, BigInt::from(1)), (j * r + i, BigInt::from(1))]
                }
            })
            .collect();
        SparseMatrix::from_columns(r * r, cols)
    }
}

/// `Γ(A)` together with its basis bookkeeping.
#[derive(Clone, Debug)]
pub struct GammaModule {
    module: LatticeModule,
    index: GammaIndex,
}

impl GammaModule {
    pub fn module(&self) -> &LatticeModule {
        &self.module
    }

    pub fn into_module(self) -> LatticeModule {
        self.module
    }

    pub fn index(&self) -> GammaIndex {
        self.index
    }

    pub fn input_rank(&self) -> usize {
        self.index.r
    }

    pub fn zrank(&self) -> usize {
        self.module.zrank()
    }
}

fn combine(mut terms: Vec<(usize, BigInt)>) -> SparseVec {
    terms.sort_unstable_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(terms.len());
    for (i, x) in terms {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// The matrix of `Γ(m)` in the canonical basis.
pub fn gamma_matrix(m: &SparseMatrix) -> SparseMatrix {
    assert_eq!(m.rows(), m.cols());
    let idx = GammaIndex::new(m.rows());
    let labels = idx.labels();
    let cols: Vec<SparseVec> = labels
        .par_iter()
        .map(|b| {
            let mut terms = Vec::new();
            match *b {
                GammaBasis::V(i) => {
                    let x = m.column(i);
                    for (p, (k, xk)) in x.iter().enumerate() {
                        terms.push((idx.v(*k), xk * xk));
                        for (l, xl) in &x[p + 1..] {
                            terms.push((idx.pair(*k, *l), xk * xl));
                        }
                    }
                }
                GammaBasis::E(i, j) => {
                    let (x, y) = (m.column(i), m.column(j));
                    for (k, xk) in x {
                        for (l, yl) in y {
                            let t = xk * yl;
                            if k == l {
                                terms.push((idx.v(*k), t * 2));
                            } else {
                                terms.push((idx.pair(*k, *l), t));
                            }
                        }
                    }
                }
            }
            combine(terms)
        })
        .collect();
    SparseMatrix::from_columns(idx.len(), cols)
}

/// Below this rank every Γ matrix is checked against the Kronecker square.
const EMBEDDING_CHECK_LIMIT: usize = 24;

fn check_against_kronecker(m: &SparseMatrix, g: &SparseMatrix, idx: GammaIndex) -> Result<()> {
    let e = idx.symmetric_embedding();
    if m.kronecker(m).mul(&e) != e.mul(g) {
        return Err(Error::Consistency(
            "Γ matrix disagrees with the symmetric square".into(),
        ));
    }
    Ok(())
}

pub fn gamma(a: &LatticeModule) -> Result<GammaModule> {
    let idx = GammaIndex::new(a.zrank());
    let action: Vec<SparseMatrix> = a.action().iter().map(gamma_matrix).collect();
    let inverse: Vec<SparseMatrix> = a.inverse_action().iter().map(gamma_matrix).collect();
    if a.zrank() <= EMBEDDING_CHECK_LIMIT {
        for (m, g) in a.action().iter().zip(&action) {
            check_against_kronecker(m, g, idx)?;
        }
    }
    let module = LatticeModule::with_inverses(a.group(), idx.len(), action, inverse)?
        .with_label(format!("Γ({})", a.label()));
    Ok(GammaModule { module, index: idx })
}

/// Checks `v(−a) = v(a)` and the cubic relation
/// `v(a+b+c) − v(b+c) − v(c+a) − v(a+b) + v(a) + v(b) + v(c) = 0` for
/// `v(x) = x ⊗ x`, and that each `v(x)` lies in the symmetric sublattice
/// with the expected integral coordinates.
pub fn gamma_map_check(a: &LatticeModule, x: &[BigInt], y: &[BigInt], z: &[BigInt]) -> bool {
    let r = a.zrank();
    if x.len() != r || y.len() != r || z.len() != r {
        return false;
    }
    let idx = GammaIndex::new(r);
    let e = idx.symmetric_embedding();
    let square = |v: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); r * r];
        for i in 0..r {
            for j in 0..r {
                out[i * r + j] = &v[i] * &v[j];
            }
        }
        out
    };
    let v = |w: &[BigInt]| -> Option<Vec<BigInt>> {
        let coords = idx.quadratic(w);
        (e.mul_dense_vec(&coords) == square(w)).then_some(coords)
    };
    let add = |p: &[BigInt], q: &[BigInt]| -> Vec<BigInt> {
        p.iter().zip(q).map(|(s, t)| s + t).collect()
    };
    let neg: Vec<BigInt> = x.iter().map(|t| -t).collect();
    let terms = [
        (add(&add(x, y), z), 1i64),
        (add(y, z), -1),
        (add(z, x), -1),
        (add(x, y), -1),
        (x.to_vec(), 1),
        (y.to_vec(), 1),
        (z.to_vec(), 1),
    ];
    let mut total = vec![BigInt::zero(); idx.len()];
    for (w, s) in &terms {
        let Some(c) = v(w) else { return false };
        for (t, ci) in total.iter_mut().zip(c) {
            *t += ci * s;
        }
    }
    match (v(x), v(&neg)) {
        (Some(p), Some(q)) => p == q && total.iter().all(Zero::is_zero),
        _ => false,
    }
}

/// `Γ(A ⊕ B) ≅ Γ(A) ⊕ Γ(B) ⊕ A ⊗ B` realized by a permutation of bases.
#[derive(Clone, Debug)]
pub struct SumDecomposition {
    pub source: GammaModule,
    pub target: LatticeModule,
    /// Column `c` is the image of source basis vector `c`.
    pub iso: SparseMatrix,
}

pub fn gamma_of_sum_decomposition(
    a: &LatticeModule,
    b: &LatticeModule,
) -> Result<SumDecomposition> {
    let source = gamma(&crate::modules::direct_sum(a, b)?)?;
    let ga = gamma(a)?;
    let gb = gamma(b)?;
    let ab = tensor(a, b)?;
    let target =
        crate::modules::direct_sum(&crate::modules::direct_sum(ga.module(), gb.module())?, &ab)?;
    let (r, s) = (a.zrank(), b.zrank());
    let (ia, ib) = (ga.index(), gb.index());
    let (oa, ob) = (ia.len(), ia.len() + ib.len());
    let perm: Vec<usize> = source
        .index()
        .labels()
        .into_iter()
        .map(|l| match l {
            GammaBasis::V(i) if i < r => ia.v(i),
            GammaBasis::V(i) => oa + ib.v(i - r),
            GammaBasis::E(i, j) if j < r => ia.e(i, j),
            GammaBasis::E(i, j) if i >= r => oa + ib.e(i - r, j - r),
            GammaBasis::E(i, j) => ob + i * s + (j - r),
        })
        .collect();
    let iso = SparseMatrix::permutation(&perm);
    for (p, q) in source.module().action().iter().zip(target.action()) {
        if iso.mul(p) != q.mul(&iso) {
            return Err(Error::Consistency(
                "Γ(A ⊕ B) splitting is not equivariant".into(),
            ));
        }
    }
    Ok(SumDecomposition {
        source,
        target,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, make_abelian};
    use crate::modules::{quotient_by_norm, sign_module, tate_h0, trivial_module};
    use std::sync::Arc;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn index_round_trip() {
        for r in 0..7 {
            let idx = GammaIndex::new(r);
            let labels = idx.labels();
            assert_eq!(labels.len(), r * (r + 1) / 2);
            for (k, l) in labels.iter().enumerate() {
                assert_eq!(idx.label(k), *l);
                let back = match *l {
                    GammaBasis::V(i) => idx.v(i),
                    GammaBasis::E(i, j) => idx.e(i, j),
                };
                assert_eq!(back, k);
            }
        }
    }

    #[test]
    fn gamma_of_zero_and_trivial() {
        let g = Arc::new(make_abelian(&[2]).unwrap());
        assert_eq!(gamma(&trivial_module(&g, 0)).unwrap().zrank(), 0);
        let t = gamma(&trivial_module(&g, 2)).unwrap();
        assert_eq!(t.zrank(), 3);
        assert!(t.module().action()[0].is_identity());
    }

    #[test]
    fn gamma_of_sign_is_trivial() {
        let g = Arc::new(make_abelian(&[2]).unwrap());
        let s = sign_module(&g, &[0]).unwrap();
        let gs = gamma(&s).unwrap();
        assert_eq!(gs.zrank(), 1);
        assert!(gs.module().action()[0].is_identity());
    }

    #[test]
    fn quadratic_relations_hold() {
        let g = Arc::new(make_abelian(&[2]).unwrap());
        let a = trivial_module(&g, 4);
        assert!(gamma_map_check(
            &a,
            &big(&[1, -2, 0, 3]),
            &big(&[0, 0, 0, 0]),
            &big(&[5, 1, -1, 2])
        ));
        let z = big(&[0, 0, 0, 0]);
        assert!(gamma_map_check(&a, &z, &z, &z));
    }

    #[test]
    fn sum_splitting() {
        let g = Arc::new(make_abelian(&[2]).unwrap());
        let n = quotient_by_norm(&g);
        let d = gamma_of_sum_decomposition(&n, &n).unwrap();
        assert_eq!(tate_h0(d.source.module()), tate_h0(&d.target));
        let z = trivial_module(&g, 0);
        let d = gamma_of_sum_decomposition(&n, &z).unwrap();
        assert!(d.iso.is_identity());
    }

    #[test]
    fn gamma_commutes_with_kronecker_on_d8() {
        let g = Arc::new(catalog("D8").unwrap());
        let m = crate::modules::free_module(&g, 1);
        let gm = gamma(&m).unwrap();
        assert_eq!(gm.zrank(), 36);
        for (x, y) in m.action().iter().zip(gm.module().action()) {
            let e = gm.index().symmetric_embedding();
            assert_eq!(x.kronecker(x).mul(&e), e.mul(y));
        }
    }
}
