//! Sparse integer matrices and presentation reduction for large cokernels.
//!
//! Group actions on lattices with echelon bases are sparse, and so are the
//! relation matrices of coinvariant quotients built from them. Those relation
//! matrices get far too large for dense elimination (tens of thousands of
//! rows for Γ of an order-16 module), so the cokernel is first shrunk by
//! eliminating generators with unit pivots. Every step is a unimodular change
//! of presentation, so the cokernel is unchanged; whatever survives goes to
//! the dense Smith form.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::invariants::AbelianInvariants;
use super::lattice::row_cokernel_invariants;
use super::matrix::IntMatrix;

/// Sorted `(index, value)` pairs with no explicit zeros.
pub type SparseVec = Vec<(usize, BigInt)>;

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            columns: (0..n).map(|i| vec![(i, BigInt::one())]).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(columns
            .iter()
            .all(|c| c.iter().all(|(i, v)| *i < rows && !v.is_zero())));
        SparseMatrix { rows, columns }
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (i, m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows(),
            columns,
        }
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        SparseMatrix {
            rows: n,
            columns: perm.iter().map(|&p| vec![(p, BigInt::one())]).collect(),
        }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.columns.len());
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match self.columns[j].binary_search_by_key(&i, |(k, _)| *k) {
            Ok(pos) => self.columns[j][pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.columns.len()
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1.is_one())
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.rows);
        for (j, x) in v {
            for (i, a) in &self.columns[*j] {
                acc.add(*i, a * x);
            }
        }
        acc.drain()
    }

    pub fn mul_dense_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols());
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in &self.columns[j] {
                out[*i] += a * x;
            }
        }
        out
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(
            self.cols(),
            rhs.rows,
            "dimension mismatch in sparse product"
        );
        let mut acc = Accumulator::new(self.rows);
        let columns = rhs
            .columns
            .iter()
            .map(|c| {
                for (k, b) in c {
                    for (i, a) in &self.columns[*k] {
                        acc.add(*i, a * b);
                    }
                }
                acc.drain()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            columns,
        }
    }

    pub fn pow(&self, k: usize) -> SparseMatrix {
        let mut out = SparseMatrix::identity(self.rows);
        for _ in 0..k {
            out = self.mul(&out);
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                columns[*i].push((j, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.columns.len(),
            columns,
        }
    }

    pub fn block_diag(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().map(|c| {
            c.iter()
                .map(|(i, v)| (i + self.rows, v.clone()))
                .collect::<SparseVec>()
        }));
        SparseMatrix {
            rows: self.rows + other.rows,
            columns,
        }
    }

    /// Kronecker product; basis vector `(i, j)` of the result has index
    /// `i * other.cols() + j`.
    pub fn kronecker(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut columns = Vec::with_capacity(self.cols() * other.cols());
        for a in &self.columns {
            for b in &other.columns {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (k, y) in b {
                        col.push((i * other.rows + k, x * y));
                    }
                }
                columns.push(col);
            }
        }
        SparseMatrix {
            rows: self.rows * other.rows,
            columns,
        }
    }
}

/// Dense scratch accumulator producing sorted sparse vectors.
pub(crate) struct Accumulator {
    values: Vec<BigInt>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl Accumulator {
    pub(crate) fn new(n: usize) -> Self {
        Accumulator {
            values: vec![BigInt::zero(); n],
            touched: Vec::new(),
            mark: vec![false; n],
        }
    }

    pub(crate) fn add(&mut self, i: usize, v: BigInt) {
        if !self.mark[i] {
            self.mark[i] = true;
            self.touched.push(i);
        }
        self.values[i] += v;
    }

    pub(crate) fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.mark[i] = false;
            let v = std::mem::take(&mut self.values[i]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

/// Presentation `ℤ^generators / ⟨relations⟩` left after unit-pivot elimination.
///
/// Surviving generator `generators[k]` is the image of the original basis
/// vector with that index; `relations` has one column per survivor.
#[derive(Clone, Debug)]
pub struct ReducedPresentation {
    pub original_generators: usize,
    pub generators: Vec<usize>,
    pub relations: IntMatrix,
}

impl ReducedPresentation {
    /// The unreduced presentation, used when independence from the
    /// elimination pass matters more than speed.
    pub fn unreduced(n: usize, relations: &[SparseVec]) -> Self {
        let mut m = IntMatrix::zeros(relations.len(), n);
        for (r, row) in relations.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = v.clone();
            }
        }
        ReducedPresentation {
            original_generators: n,
            generators: (0..n).collect(),
            relations: m,
        }
    }

    pub fn invariants(&self) -> AbelianInvariants {
        row_cokernel_invariants(&self.relations)
    }
}

trait Coef: Clone + Debug + PartialEq {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - f*b`, or `None` on overflow.
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self>;
    fn neg_mul(f: &Self, b: &Self) -> Option<Self>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
}

impl Coef for i64 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn neg_mul(f: &Self, b: &Self) -> Option<Self> {
        f.checked_mul(*b)?.checked_neg()
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
}

impl Coef for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        Some(a - f * b)
    }
    fn neg_mul(f: &Self, b: &Self) -> Option<Self> {
        Some(-(f * b))
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
}

struct Overflow;

/// Eliminates generators of `ℤ^n / ⟨relations⟩` using unit pivots, picking
/// the sparsest rows first and, within a row, the unit column touching the
/// fewest other rows.
pub fn reduce_presentation(n: usize, relations: &[SparseVec]) -> ReducedPresentation {
    if let Ok(p) = eliminate::<i64>(n, relations) {
        return p;
    }
    log::debug!("machine-word elimination overflowed; redoing with big integers");
    match eliminate::<BigInt>(n, relations) {
        Ok(p) => p,
        Err(Overflow) => unreachable!("big integers do not overflow"),
    }
}

fn eliminate<T: Coef>(n: usize, relations: &[SparseVec]) -> Result<ReducedPresentation, Overflow> {
    let mut rows: Vec<Vec<(u32, T)>> = Vec::with_capacity(relations.len());
    for rel in relations {
        let mut row = Vec::with_capacity(rel.len());
        for (c, v) in rel {
            if !v.is_zero() {
                row.push((*c as u32, T::from_big(v).ok_or(Overflow)?));
            }
        }
        row.sort_by_key(|(c, _)| *c);
        debug_assert!(
            row.windows(2).all(|w| w[0].0 < w[1].0),
            "repeated column in relation"
        );
        rows.push(row);
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut col_count = vec![0usize; n];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(r as u32);
            col_count[*c as usize] += 1;
        }
    }
    let mut alive_col = vec![true; n];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, r)| Reverse((r.len(), i as u32)))
        .collect();
    let mut scratch: Vec<(u32, T)> = Vec::new();

    while let Some(Reverse((len, r))) = heap.pop() {
        let r = r as usize;
        if rows[r].len() != len || len == 0 {
            continue;
        }
        let Some((pc, pv)) = rows[r]
            .iter()
            .filter(|(_, v)| v.is_unit())
            .min_by_key(|(c, _)| (col_count[*c as usize], *c))
            .cloned()
        else {
            continue;
        };
        let pc = pc as usize;
        let pivot_row = std::mem::take(&mut rows[r]);
        let mut seen = HashSet::new();
        let targets = std::mem::take(&mut col_rows[pc]);
        for &j in &targets {
            let j = j as usize;
            if j == r || !seen.insert(j) {
                continue;
            }
            let Ok(pos) = rows[j].binary_search_by_key(&(pc as u32), |(c, _)| *c) else {
                continue;
            };
            // f = a_jc / u, and u = ±1 so dividing is multiplying
            let f = T::mul(&rows[j][pos].1, &pv).ok_or(Overflow)?;
            scratch.clear();
            let (a, b) = (&rows[j], &pivot_row);
            let (mut ia, mut ib) = (0, 0);
            while ia < a.len() || ib < b.len() {
                let ca = a.get(ia).map_or(u32::MAX, |x| x.0);
                let cb = b.get(ib).map_or(u32::MAX, |x| x.0);
                if ca < cb {
                    scratch.push(a[ia].clone());
                    ia += 1;
                } else if cb < ca {
                    let v = T::neg_mul(&f, &b[ib].1).ok_or(Overflow)?;
                    col_count[cb as usize] += 1;
                    col_rows[cb as usize].push(j as u32);
                    scratch.push((cb, v));
                    ib += 1;
                } else {
                    let v = T::sub_mul(&a[ia].1, &f, &b[ib].1).ok_or(Overflow)?;
                    if v.is_nil() {
                        col_count[ca as usize] -= 1;
                    } else {
                        scratch.push((ca, v));
                    }
                    ia += 1;
                    ib += 1;
                }
            }
            std::mem::swap(&mut rows[j], &mut scratch);
            if !rows[j].is_empty() {
                heap.push(Reverse((rows[j].len(), j as u32)));
            }
        }
        for (c, _) in &pivot_row {
            col_count[*c as usize] -= 1;
        }
        debug_assert_eq!(col_count[pc], 0);
        alive_col[pc] = false;
    }

    let generators: Vec<usize> = (0..n).filter(|&c| alive_col[c]).collect();
    let mut index = vec![usize::MAX; n];
    for (k, &g) in generators.iter().enumerate() {
        index[g] = k;
    }
    let mut seen_rows = HashSet::new();
    let mut dense_rows = Vec::new();
    for row in rows.into_iter().filter(|r| !r.is_empty()) {
        // rows are canonical up to sign; drop duplicates before the dense pass
        let key: Vec<(u32, BigInt)> = {
            let sign_neg = row[0].1.to_big().is_negative();
            row.iter()
                .map(|(c, v)| (*c, if sign_neg { -v.to_big() } else { v.to_big() }))
                .collect()
        };
        if !seen_rows.insert(key) {
            continue;
        }
        let mut dense = vec![BigInt::zero(); generators.len()];
        for (c, v) in &row {
            let k = index[*c as usize];
            debug_assert_ne!(k, usize::MAX, "eliminated column still referenced");
            dense[k] = v.to_big();
        }
        dense_rows.push(dense);
    }
    let relations = IntMatrix::from_big_rows(dense_rows, generators.len());
    Ok(ReducedPresentation {
        original_generators: n,
        generators,
        relations,
    })
}
