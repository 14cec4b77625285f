//! The integral group ring ℤπ and matrices over it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Word};
use crate::linalg::IntMatrix;

/// `Σ c_g g` with one coefficient per element index.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<i64>,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.cayley() == b.cayley()
}

impl GroupRingElement {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        GroupRingElement {
            group: group.clone(),
            coeffs: vec![0; group.order()],
        }
    }

    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        Self::from_element(group, group.identity(), 1)
    }

    /// `k·g`
    pub fn from_element(group: &Arc<FiniteGroup>, g: usize, k: i64) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[g] = k;
        x
    }

    pub fn from_coeffs(group: &Arc<FiniteGroup>, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(GroupRingElement {
            group: group.clone(),
            coeffs,
        })
    }

    /// `Σ k·g` over `(g, k)` pairs.
    pub fn from_terms(group: &Arc<FiniteGroup>, terms: &[(usize, i64)]) -> Self {
        let mut x = Self::zero(group);
        for &(g, k) in terms {
            x.coeffs[g] += k;
        }
        x
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> i64 {
        self.coeffs[g]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Coefficient sum ε(x).
    pub fn augmentation(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(GroupRingElement {
            group: self.group.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1))
    }

    /// Convolution product through the Cayley table.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = vec![0i64; self.coeffs.len()];
        for (g, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (h, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[self.group.mul(g, h)] += a * b;
                }
            }
        }
        Ok(GroupRingElement {
            group: self.group.clone(),
            coeffs: out,
        })
    }

    /// `Σ c_g g ↦ Σ c_g g⁻¹`
    pub fn involute(&self) -> Self {
        let mut out = vec![0i64; self.coeffs.len()];
        for (g, &c) in self.coeffs.iter().enumerate() {
            out[self.group.inv(g)] += c;
        }
        GroupRingElement {
            group: self.group.clone(),
            coeffs: out,
        }
    }

    /// Matrix of `y ↦ x·y` on the element basis (columns are images).
    pub fn left_matrix(&self) -> IntMatrix {
        let n = self.coeffs.len();
        let mut m = IntMatrix::zeros(n, n);
        for (g, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                for y in 0..n {
                    m[(self.group.mul(g, y), y)] += c;
                }
            }
        }
        m
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(g, &c)| {
                if g == self.group.identity() {
                    format!("{c}")
                } else {
                    format!("{c}·g{g}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: Self) -> GroupRingElement {
        self.try_add(rhs)
            .expect("group ring elements over different groups")
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: Self) -> GroupRingElement {
        self.try_sub(rhs)
            .expect("group ring elements over different groups")
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: Self) -> GroupRingElement {
        self.multiply(rhs)
            .expect("group ring elements over different groups")
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(-1)
    }
}

/// `N = Σ_{g∈π} g`
pub fn norm_element(group: &Arc<FiniteGroup>) -> GroupRingElement {
    GroupRingElement {
        group: group.clone(),
        coeffs: vec![1; group.order()],
    }
}

/// `N_g = Σ_{i<k} gⁱ`, requiring `g^k = 1`.
pub fn partial_norm(group: &Arc<FiniteGroup>, g: usize, k: usize) -> Result<GroupRingElement> {
    if k == 0 || group.pow(g, k as i64) != group.identity() {
        return Err(Error::InvalidArgument(format!(
            "g{g} does not satisfy g^{k} = 1"
        )));
    }
    let mut x = GroupRingElement::zero(group);
    let mut p = group.identity();
    for _ in 0..k {
        x.coeffs[p] += 1;
        p = group.mul(p, g);
    }
    Ok(x)
}

/// `x_g = Σ_{i=1}^{n-1} (n-i) gⁱ` and `y_g = Σ_{i=0}^{n-1} i gⁱ` for `g` of order `n`.
pub fn weighted_elements(
    group: &Arc<FiniteGroup>,
    g: usize,
    n: usize,
) -> Result<(GroupRingElement, GroupRingElement)> {
    if group.element_order(g) != n {
        return Err(Error::InvalidArgument(format!(
            "g{g} does not have order {n}"
        )));
    }
    let mut x = GroupRingElement::zero(group);
    let mut y = GroupRingElement::zero(group);
    for i in 0..n {
        let p = group.pow(g, i as i64);
        x.coeffs[p] += if i == 0 { 0 } else { (n - i) as i64 };
        y.coeffs[p] += i as i64;
    }
    Ok((x, y))
}

/// Fox derivative `∂w/∂x_gen`, evaluated in ℤπ.
pub fn fox_derivative(w: &Word, gen: usize, group: &Arc<FiniteGroup>) -> Result<GroupRingElement> {
    let k = group.generators().len();
    if let Some(&(bad, _)) = w
        .letters
        .iter()
        .find(|&&(g, e)| g >= k || (e != 1 && e != -1))
    {
        return Err(Error::InvalidArgument(format!(
            "word letter {bad} is not a generator position"
        )));
    }
    if gen >= k {
        return Err(Error::InvalidArgument(format!(
            "generator position {gen} out of range"
        )));
    }
    // ∂(uv) = ∂u + u·∂v, with prefix u tracked as a group element
    let mut out = GroupRingElement::zero(group);
    let mut prefix = group.identity();
    for &(g, e) in &w.letters {
        let x = group.generators()[g].element;
        if g == gen {
            if e > 0 {
                out.coeffs[prefix] += 1;
            } else {
                out.coeffs[group.mul(prefix, group.inv(x))] -= 1;
            }
        }
        prefix = group.mul(prefix, if e > 0 { x } else { group.inv(x) });
    }
    Ok(out)
}

/// A matrix over ℤπ, stored by rows.
pub type GroupRingMatrix = Vec<Vec<GroupRingElement>>;

fn matrix_group(m: &[Vec<GroupRingElement>]) -> Result<Option<(Arc<FiniteGroup>, usize)>> {
    let Some(first) = m.iter().flatten().next() else {
        return Ok(None);
    };
    let cols = m[0].len();
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument("ragged group ring matrix".into()));
    }
    if m.iter()
        .flatten()
        .any(|x| !same_group(&x.group, &first.group))
    {
        return Err(Error::GroupMismatch);
    }
    Ok(Some((first.group.clone(), cols)))
}

/// Left regular expansion: entry `m_ij` becomes the block of left
/// multiplication by `m_ij`, so `expand(MN) = expand(M)·expand(N)`.
pub fn expand_matrix(m: &[Vec<GroupRingElement>]) -> Result<IntMatrix> {
    let Some((group, cols)) = matrix_group(m)? else {
        return Ok(IntMatrix::zeros(0, 0));
    };
    let n = group.order();
    let mut out = IntMatrix::zeros(m.len() * n, cols * n);
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            for (g, &c) in x.coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for y in 0..n {
                    out[(i * n + group.mul(g, y), j * n + y)] += c;
                }
            }
        }
    }
    Ok(out)
}

/// Integer matrix of the right-multiplication map `x ↦ x·D` on row vectors
/// of `(ℤπ)^r`, coordinates `(i, k) ↦ i·|π| + k`. Row `(i, k)` is the image
/// of `k` in slot `i`, so entry `((i,k), (j,l))` is the coefficient of
/// `k⁻¹l` in `D_ij`.
pub fn expand_row_map(
    d: &[Vec<GroupRingElement>],
    group: &Arc<FiniteGroup>,
    cols: usize,
) -> Result<IntMatrix> {
    if let Some((g, c)) = matrix_group(d)? {
        if !same_group(&g, group) {
            return Err(Error::GroupMismatch);
        }
        if c != cols {
            return Err(Error::InvalidArgument("column count mismatch".into()));
        }
    }
    let n = group.order();
    let mut out = IntMatrix::zeros(d.len() * n, cols * n);
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            for (h, &c) in x.coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                // k·h = l
                for k in 0..n {
                    out[(i * n + k, j * n + group.mul(k, h))] += c;
                }
            }
        }
    }
    Ok(out)
}

/// Product of group ring matrices; `cols` is the column count of `b`.
pub fn matrix_product(
    group: &Arc<FiniteGroup>,
    a: &[Vec<GroupRingElement>],
    b: &[Vec<GroupRingElement>],
    cols: usize,
) -> Result<GroupRingMatrix> {
    if a.iter().any(|r| r.len() != b.len()) || b.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument("inner dimensions differ".into()));
    }
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        let mut out_row = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut acc = GroupRingElement::zero(group);
            for (x, brow) in row.iter().zip(b) {
                acc = acc.try_add(&x.multiply(&brow[j])?)?;
            }
            out_row.push(acc);
        }
        out.push(out_row);
    }
    Ok(out)
}

/// Involute-transpose `D ↦ D̄ᵀ`.
pub fn dual_matrix(d: &[Vec<GroupRingElement>], cols: usize) -> GroupRingMatrix {
    (0..cols)
        .map(|j| d.iter().map(|row| row[j].involute()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, make_abelian};

    fn c(n: i64) -> Arc<FiniteGroup> {
        Arc::new(make_abelian(&[n]).unwrap())
    }

    fn to_big(v: &[i64]) -> Vec<num_bigint::BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn c2_products() {
        let g = c(2);
        let t = g.generators()[0].element;
        let one = GroupRingElement::one(&g);
        let tt = GroupRingElement::from_element(&g, t, 1);
        assert!((&(&one + &tt) * &(&one - &tt)).is_zero());
        assert_eq!(&one * &tt, tt);
        assert_eq!(norm_element(&g), &one + &tt);
    }

    #[test]
    fn norm_absorbs() {
        let g = c(4);
        let a = g.generators()[0].element;
        let na = partial_norm(&g, a, 4).unwrap();
        assert_eq!(&na * &GroupRingElement::from_element(&g, a, 1), na);
        assert_eq!(na, norm_element(&g));
        assert_eq!(
            partial_norm(&g, g.identity(), 1).unwrap(),
            GroupRingElement::one(&g)
        );
        assert!(partial_norm(&g, a, 3).is_err());
    }

    #[test]
    fn partial_norm_in_product() {
        let g = Arc::new(make_abelian(&[4, 2]).unwrap());
        let a = g.generators()[0].element;
        let na = partial_norm(&g, a, 4).unwrap();
        let expect: Vec<usize> = (0..4).map(|i| g.pow(a, i)).collect();
        for x in g.elements() {
            assert_eq!(na.coeff(x), i64::from(expect.contains(&x)));
        }
    }

    #[test]
    fn weighted_identities() {
        for n in [2i64, 3, 4, 5, 8] {
            let g = c(n);
            let a = g.generators()[0].element;
            let (x, y) = weighted_elements(&g, a, n as usize).unwrap();
            let na = partial_norm(&g, a, n as usize).unwrap();
            let one = GroupRingElement::one(&g);
            let lhs = &one.scale(n) - &na;
            let ainv = GroupRingElement::from_element(&g, g.inv(a), 1);
            let aa = GroupRingElement::from_element(&g, a, 1);
            assert_eq!(lhs, &x * &(&ainv - &one));
            assert_eq!(lhs, -&(&y * &(&one - &aa)));
        }
        let g = c(4);
        let a = g.generators()[0].element;
        let (x, _) = weighted_elements(&g, a, 4).unwrap();
        assert_eq!(
            x,
            GroupRingElement::from_terms(&g, &[(a, 3), (g.pow(a, 2), 2), (g.pow(a, 3), 1)])
        );
        assert!(weighted_elements(&g, a, 2).is_err());
    }

    #[test]
    fn involution() {
        let g = c(4);
        let a = g.generators()[0].element;
        let x = GroupRingElement::from_element(&g, a, 1);
        assert_eq!(
            x.involute(),
            GroupRingElement::from_element(&g, g.pow(a, 3), 1)
        );
        assert_eq!(norm_element(&g).involute(), norm_element(&g));
        assert_eq!(
            GroupRingElement::one(&g).involute(),
            GroupRingElement::one(&g)
        );
    }

    #[test]
    fn expansions() {
        let g = c(2);
        let t = g.generators()[0].element;
        let one = GroupRingElement::one(&g);
        let tt = GroupRingElement::from_element(&g, t, 1);
        assert_eq!(
            expand_matrix(&[vec![one.clone()]]).unwrap(),
            IntMatrix::identity(2)
        );
        assert_eq!(
            expand_matrix(&[vec![tt.clone()]]).unwrap(),
            IntMatrix::from_rows(&[[0, 1], [1, 0]])
        );
        assert_eq!(
            expand_matrix(&[vec![&one - &tt]]).unwrap(),
            IntMatrix::from_rows(&[[1, -1], [-1, 1]])
        );
    }

    #[test]
    fn fox_examples() {
        let g = c(5);
        let w = Word::power(0, 5);
        assert_eq!(fox_derivative(&w, 0, &g).unwrap(), norm_element(&g));
        let g = Arc::new(make_abelian(&[3, 2]).unwrap());
        let (a, b) = (g.generators()[0].element, g.generators()[1].element);
        let d = fox_derivative(&Word::commutator(0, 1), 0, &g).unwrap();
        assert_eq!(
            d,
            GroupRingElement::from_terms(&g, &[(g.identity(), 1), (b, -1)])
        );
        let d = fox_derivative(&Word::commutator(0, 1), 1, &g).unwrap();
        assert_eq!(
            d,
            GroupRingElement::from_terms(&g, &[(a, 1), (g.identity(), -1)])
        );
        assert!(fox_derivative(&Word::power(1, 2), 0, &g).unwrap().is_zero());
    }

    #[test]
    fn fox_fundamental_identity() {
        for name in ["D8", "Q8", "C4xC2", "Q8xC2"] {
            let g = Arc::new(catalog(name).unwrap());
            let one = GroupRingElement::one(&g);
            for w in g.relators() {
                let mut acc = GroupRingElement::zero(&g);
                for (k, x) in g.generators().iter().enumerate() {
                    let dx = fox_derivative(w, k, &g).unwrap();
                    acc =
                        &acc + &(&dx * &(&GroupRingElement::from_element(&g, x.element, 1) - &one));
                }
                assert!(acc.is_zero(), "{name}");
            }
        }
    }

    #[test]
    fn row_map_matches_right_multiplication() {
        let g = Arc::new(catalog("D8").unwrap());
        let d = GroupRingElement::from_terms(&g, &[(1, 2), (3, -1), (5, 1)]);
        let x = GroupRingElement::from_terms(&g, &[(0, 1), (2, 4), (6, -3)]);
        let e = expand_row_map(&[vec![d.clone()]], &g, 1).unwrap();
        let xv = to_big(x.coeffs());
        let image = e.transpose().mul_vec(&xv);
        assert_eq!(image, to_big((&x * &d).coeffs()));
    }
}
