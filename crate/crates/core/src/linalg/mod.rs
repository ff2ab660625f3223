//! Exact linear algebra over cyclotomic fields: RREF, kernels, canonical
//! subspaces, eigenspaces.
//!
//! Matrices act on column vectors. Subspaces are stored by the reduced
//! row-echelon form of a basis, which makes equality a direct comparison.

mod matrix;
mod modp;
mod subspace;

pub use matrix::Matrix;
pub use modp::{fp_eigenspace, fp_kernel, fp_matrix, fp_rref, FpSubspace};
pub use subspace::Subspace;

use crate::cyclo::Cyclotomic;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("no power up to {0} equals the identity")]
    OrderCapExceeded(u64),
}

/// Row-reduce in place; returns pivot columns.
pub(crate) fn rref_rows(rows: &mut [Vec<Cyclotomic>], cols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        if !rows[r][c].is_one() {
            let inv = rows[r][c].checked_inv().expect("pivot is nonzero");
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().unwrap();
        for other in before.iter_mut().chain(after.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let factor = other[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    let t = &factor * &pivot_row[j];
                    other[j] = &other[j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Unique reduced row-echelon form; zero rows are kept at the bottom.
pub fn rref(m: &Matrix) -> Matrix {
    let mut rows = m.row_vecs();
    rref_rows(&mut rows, m.cols());
    if rows.is_empty() {
        return m.clone();
    }
    Matrix::from_rows(rows)
}

pub fn rank(m: &Matrix) -> usize {
    let mut rows = m.row_vecs();
    rref_rows(&mut rows, m.cols()).len()
}

/// Right kernel `{v : m v = 0}` in canonical form.
pub fn kernel(m: &Matrix) -> Subspace {
    let cols = m.cols();
    let mut rows = m.row_vecs();
    let pivots = rref_rows(&mut rows, cols);
    let mut basis = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Cyclotomic::zero(); cols];
        v[f] = Cyclotomic::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -&rows[i][f];
        }
        basis.push(v);
    }
    Subspace::span(cols, basis)
}

/// `V(g, ζ) = {v : g v = ζ v}`.
pub fn eigenspace(g: &Matrix, zeta: &Cyclotomic) -> Subspace {
    assert!(g.is_square(), "eigenspace of a non-square matrix");
    kernel(&g.minus_scalar(zeta))
}

/// `Fix(g)`.
pub fn fixed_space(g: &Matrix) -> Subspace {
    eigenspace(g, &Cyclotomic::one())
}

/// Least `m ≥ 1` with `g^m = I`.
pub fn matrix_order(g: &Matrix, cap: u64) -> Result<u64, LinalgError> {
    if !g.is_square() {
        return Err(LinalgError::NotSquare);
    }
    let mut p = g.clone();
    for m in 1..=cap {
        if p.is_identity() {
            return Ok(m);
        }
        p = p.checked_mul(g)?;
    }
    Err(LinalgError::OrderCapExceeded(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclotomic as C;

    fn z(k: i64, n: u32) -> C {
        C::root_of_unity(k, n)
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(3);
        assert_eq!(rref(&id), id);
        let m = Matrix::from_i64_rows(&[vec![2, 2], vec![1, 1]]);
        assert_eq!(rref(&m), Matrix::from_i64_rows(&[vec![1, 1], vec![0, 0]]));
    }

    #[test]
    fn eigenspace_examples() {
        let id = Matrix::identity(3);
        assert_eq!(eigenspace(&id, &C::one()).dim(), 3);
        assert_eq!(eigenspace(&id, &z(1, 3)).dim(), 0);
        // 3-cycle e1 -> e2 -> e3 -> e1
        let g = Matrix::from_i64_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let w = z(1, 3);
        let e = eigenspace(&g, &w);
        assert_eq!(e.dim(), 1);
        let v = e.basis_vectors().remove(0);
        let gv = g.mul_vec(&v);
        let wv: Vec<C> = v.iter().map(|x| x * &w).collect();
        assert_eq!(gv, wv);
    }

    #[test]
    fn order_examples() {
        assert_eq!(matrix_order(&Matrix::identity(2), 10), Ok(1));
        let d = Matrix::diagonal(&[z(1, 6), C::one()]);
        assert_eq!(matrix_order(&d, 100), Ok(6));
        let scale2 = Matrix::scalar(2, &C::from_i64(2));
        assert_eq!(matrix_order(&scale2, 50), Err(LinalgError::OrderCapExceeded(50)));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![
            vec![z(1, 3), C::one()],
            vec![C::from_i64(2), z(2, 3)],
        ]);
        let inv = m.inverse().unwrap();
        assert!(m.checked_mul(&inv).unwrap().is_identity());
        let sing = Matrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(sing.inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn char_poly_of_rotation() {
        // order-4 rotation: t^2 + 1
        let m = Matrix::from_i64_rows(&[vec![0, -1], vec![1, 0]]);
        let cp = m.char_poly();
        assert_eq!(cp, vec![C::one(), C::zero(), C::one()]);
    }
}
