use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::invariants::AbelianInvariants;
use super::matrix::IntMatrix;
use super::normal_form::{hermite_normal_form, smith_normal_form_with, HermiteForm};

/// Columns form a saturated ℤ-basis of `{x : A·x = 0}`, in Hermite echelon
/// form (as rows) so the basis is canonical for the lattice.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    kernel_basis_rows(a).transpose()
}

/// Like [`kernel_basis`] but returns the basis vectors as rows.
pub fn kernel_basis_rows(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let hnf = hermite_normal_form(&a.transpose(), true);
    let r = hnf.rank();
    let u = hnf.transform.expect("transform requested");
    let rows: Vec<usize> = (r..n).collect();
    let raw = u.select_rows(&rows);
    echelon_basis(&raw)
}

/// The nonzero rows of the Hermite form: a canonical basis of the row lattice.
pub fn echelon_basis(rows: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(rows, false);
    let keep: Vec<usize> = (0..hnf.rank()).collect();
    hnf.h.select_rows(&keep)
}

pub fn rank(a: &IntMatrix) -> usize {
    if a.rows() <= a.cols() {
        hermite_normal_form(a, false).rank()
    } else {
        hermite_normal_form(&a.transpose(), false).rank()
    }
}

/// Structure of `ℤ^rows / column-span(A)`.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianInvariants {
    // SNF factors are transpose invariant; relations as rows lets the
    // Hermite pass discard redundant relations early.
    let snf = smith_normal_form_with(&a.transpose(), false);
    AbelianInvariants {
        free_rank: a.rows() - snf.rank,
        torsion: snf.invariant_factors,
    }
}

/// Structure of `ℤ^cols / row-span(R)`.
pub fn row_cokernel_invariants(relations: &IntMatrix) -> AbelianInvariants {
    let snf = smith_normal_form_with(relations, false);
    AbelianInvariants {
        free_rank: relations.cols() - snf.rank,
        torsion: snf.invariant_factors,
    }
}

/// Solves `B·x = v` for integral `x`, where the columns of `B` are a
/// lattice basis. Returns `None` when `v` is not in the column span.
pub fn solve_in_lattice(b: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    LatticeSolver::new(&b.transpose()).solve(v)
}

/// Reusable coordinates solver for a lattice given by basis rows.
#[derive(Clone, Debug)]
pub struct LatticeSolver {
    hnf: HermiteForm,
    basis_len: usize,
    dim: usize,
}

impl LatticeSolver {
    /// `basis` holds one basis vector per row; rows must be independent.
    pub fn new(basis: &IntMatrix) -> Self {
        let hnf = hermite_normal_form(basis, true);
        assert_eq!(
            hnf.rank(),
            basis.rows(),
            "lattice basis rows must be linearly independent"
        );
        LatticeSolver {
            hnf,
            basis_len: basis.rows(),
            dim: basis.cols(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis_len
    }

    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim);
        let h = &self.hnf.h;
        let mut residual = v.to_vec();
        let mut y = vec![BigInt::zero(); self.basis_len];
        for (i, &p) in self.hnf.pivots.iter().enumerate() {
            if residual[p].is_zero() {
                continue;
            }
            let (q, r) = residual[p].div_rem(&h[(i, p)]);
            if !r.is_zero() {
                return None;
            }
            for j in p..self.dim {
                let e = &h[(i, j)];
                if !e.is_zero() {
                    residual[j] -= &q * e;
                }
            }
            y[i] = q;
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let t = self.hnf.transform.as_ref().expect("transform requested");
        // v = yH = (yT)·basis
        let mut x = vec![BigInt::zero(); self.basis_len];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, xj) in x.iter_mut().enumerate() {
                let e = &t[(i, j)];
                if !e.is_zero() {
                    *xj += yi * e;
                }
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::big_vec;

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k.column(0), big_vec(&[1, -1]));
        let k = kernel_basis(&IntMatrix::from_rows(&[[2, 4]]));
        assert_eq!(k.column(0), big_vec(&[2, -1]));
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_invariants(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(
            c,
            AbelianInvariants {
                free_rank: 0,
                torsion: big_vec(&[6])
            }
        );
        let c = cokernel_invariants(&IntMatrix::zeros(2, 0));
        assert_eq!(c, AbelianInvariants::free(2));
        let c = cokernel_invariants(&IntMatrix::from_rows(&[[2, 0], [0, 1], [0, 0]]));
        assert_eq!(
            c,
            AbelianInvariants {
                free_rank: 1,
                torsion: big_vec(&[2])
            }
        );
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(
            solve_in_lattice(&id, &big_vec(&[4, -1, 7])),
            Some(big_vec(&[4, -1, 7]))
        );
        let b = IntMatrix::from_rows(&[[2], [-1]]);
        assert_eq!(
            solve_in_lattice(&b, &big_vec(&[4, -2])),
            Some(big_vec(&[2]))
        );
        assert_eq!(solve_in_lattice(&b, &big_vec(&[1, 0])), None);
    }

    #[test]
    fn solve_with_non_echelon_basis() {
        let b = IntMatrix::from_rows(&[[1, 1], [2, 3], [0, 5]]);
        let x = big_vec(&[3, -2]);
        let v = b.mul_vec(&x);
        assert_eq!(solve_in_lattice(&b, &v), Some(x));
    }
}
