//! Hermite and Smith normal forms over the integers.
//!
//! Both forms are computed by unimodular elimination with exact `BigInt`
//! arithmetic. The Hermite form is row-style (`H = U·A`); the Smith form is
//! derived from it by running full-pivot elimination on the nonzero rows.
//! Transforms are only accumulated when requested.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form `H = U·A`.
///
/// The first `rank` rows of `H` are nonzero with strictly increasing pivot
/// columns, positive pivots, and entries above each pivot reduced into
/// `[0, pivot)`. The remaining rows are zero.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub transform: Option<IntMatrix>,
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub d: IntMatrix,
    pub rank: usize,
    /// Nonzero, non-unit diagonal entries of `d`.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    /// All nonzero diagonal entries, units included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn sub_row_from(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt, from_col: usize) {
    if q.is_zero() {
        return;
    }
    let cols = m.cols();
    for j in from_col..cols {
        let s = &m[(src, j)];
        if !s.is_zero() {
            let v = s * q;
            m[(dst, j)] -= v;
        }
    }
}

pub fn hermite_normal_form(a: &IntMatrix, with_transform: bool) -> HermiteForm {
    let (m, n) = a.shape();
    let mut h = a.clone();
    let mut u = with_transform.then(|| IntMatrix::identity(m));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let mut found = false;
        loop {
            // minimal |entry| in column c, ties to the lowest row
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..m {
                let v = &h[(i, c)];
                if !v.is_zero() {
                    let av = v.abs();
                    if best.as_ref().is_none_or(|(_, b)| av < *b) {
                        best = Some((i, av));
                    }
                }
            }
            let Some((p, _)) = best else { break };
            found = true;
            h.swap_rows(p, r);
            if let Some(u) = u.as_mut() {
                u.swap_rows(p, r);
            }
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                sub_row_from(&mut h, i, r, &q, c);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, r, &-&q);
                }
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_mut() {
                u.negate_row(r);
            }
        }
        for i in 0..r {
            if h[(i, c)].is_zero() {
                continue;
            }
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                sub_row_from(&mut h, i, r, &q, c);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, r, &-&q);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm {
        h,
        transform: u,
        pivots,
    }
}

/// Smith normal form with both transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    smith_normal_form_with(a, true)
}

pub fn smith_normal_form_with(a: &IntMatrix, with_transforms: bool) -> SmithDecomposition {
    let (m, n) = a.shape();
    let hnf = hermite_normal_form(a, with_transforms);
    let r = hnf.rank();
    let rows: Vec<usize> = (0..r).collect();
    let mut s = hnf.h.select_rows(&rows);
    let mut left = with_transforms.then(|| IntMatrix::identity(r));
    let mut right = with_transforms.then(|| IntMatrix::identity(n));

    for t in 0..r {
        loop {
            // minimal nonzero |entry| in the trailing block, ties lowest row then column
            let mut best: Option<(usize, usize, BigInt)> = None;
            for i in t..r {
                for j in t..n {
                    let v = &s[(i, j)];
                    if !v.is_zero() {
                        let av = v.abs();
                        if best.as_ref().is_none_or(|(_, _, b)| av < *b) {
                            best = Some((i, j, av));
                        }
                    }
                }
            }
            let (pi, pj, _) = best.expect("trailing block of a full-row-rank matrix is nonzero");
            s.swap_rows(pi, t);
            s.swap_cols(pj, t);
            if let Some(l) = left.as_mut() {
                l.swap_rows(pi, t);
            }
            if let Some(v) = right.as_mut() {
                v.swap_cols(pj, t);
            }
            let mut clean = true;
            for i in t + 1..r {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                sub_row_from(&mut s, i, t, &q, t);
                if let Some(l) = left.as_mut() {
                    l.add_row_multiple(i, t, &-&q);
                }
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                let nq = -&q;
                s.add_col_multiple(j, t, &nq);
                if let Some(v) = right.as_mut() {
                    v.add_col_multiple(j, t, &nq);
                }
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold a offending row into the pivot row and retry
            let piv = s[(t, t)].clone();
            let offender =
                (t + 1..r).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&piv)));
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    if let Some(l) = left.as_mut() {
                        l.add_row_multiple(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            if let Some(l) = left.as_mut() {
                l.negate_row(t);
            }
        }
    }

    let mut d = IntMatrix::zeros(m, n);
    let mut invariant_factors = Vec::new();
    for t in 0..r {
        d[(t, t)] = s[(t, t)].clone();
        if !s[(t, t)].is_one() {
            invariant_factors.push(s[(t, t)].clone());
        }
    }
    let u = match (left, hnf.transform) {
        (Some(l), Some(u1)) => {
            let mut full = IntMatrix::identity(m);
            for i in 0..r {
                for j in 0..r {
                    full[(i, j)] = l[(i, j)].clone();
                }
            }
            Some(full.mul(&u1))
        }
        _ => None,
    };
    SmithDecomposition {
        u,
        v: right,
        d,
        rank: r,
        invariant_factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_certificate(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();
        assert_eq!(u.mul(a).mul(v), s.d);
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn empty_matrix() {
        let s = check_certificate(&IntMatrix::zeros(0, 0));
        assert_eq!(s.rank, 0);
        assert!(s.invariant_factors.is_empty());
    }

    #[test]
    fn identity_has_no_factors() {
        let s = check_certificate(&IntMatrix::identity(2));
        assert_eq!(s.rank, 2);
        assert!(s.invariant_factors.is_empty());
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are (2, 4).
        let s = check_certificate(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.rank, 2);
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) must become diag(1, 6)
        let s = check_certificate(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(6)]);
    }

    #[test]
    fn hermite_shape() {
        let a = IntMatrix::from_rows(&[[3, 6, 1], [2, 4, 5], [5, 10, 6]]);
        let h = hermite_normal_form(&a, true);
        assert_eq!(h.rank(), 2);
        assert_eq!(h.transform.as_ref().unwrap().mul(&a), h.h);
        assert!(h.h.row(2).iter().all(Zero::is_zero));
        assert_eq!(h.pivots, vec![0, 2]);
    }
}
