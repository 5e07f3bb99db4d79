//! Exact rational linear algebra: solving, rank, kernels, and
//! integer kernel bases for lattice computations.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::vector::QVec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense rational matrix, row major.
#[derive(Clone, Debug)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[QVec]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].dim() };
        let mut m = QMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.coords().iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    /// Row echelon reduction in place; returns pivot column per pivot row.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                let v = &self[(row, j)] * &inv;
                self[(row, j)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let v = &self[(r, j)] - &(&factor * &self[(row, j)]);
                        self[(r, j)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon().len()
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A x = b` for square `A`. Errors when `A` is singular.
pub fn solve_square(a: &QMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    debug_assert_eq!(a.rows, a.cols);
    debug_assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = QMatrix::zero(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)].clone();
        }
        m[(i, n)] = b[i].clone();
    }
    let pivots = m.echelon();
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return Err(Error::SingularSystem);
    }
    Ok((0..n).map(|i| m[(i, n)].clone()).collect())
}

/// General (possibly rectangular / rank-deficient) solve of `A x = b`.
/// Returns one solution, or `None` when inconsistent.
pub fn solve_any(a: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = QMatrix::zero(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = a[(i, j)].clone();
        }
        m[(i, cols)] = b[i].clone();
    }
    let pivots = m.echelon();
    if pivots.iter().any(|&c| c == cols) {
        return None; // a pivot in the augmented column
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = m[(row, cols)].clone();
    }
    Some(x)
}

/// Basis of the rational kernel of `A` (viewed as row vectors applied to x).
pub fn kernel_basis(a: &QMatrix) -> Vec<QVec> {
    let cols = a.cols;
    let mut m = a.clone();
    let pivots = m.echelon();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[(row, free)].clone();
        }
        basis.push(QVec::new(v));
    }
    basis
}

/// Determinant by fraction-free elimination on a rational copy.
pub fn determinant(a: &QMatrix) -> Rational {
    debug_assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap_rows(col, p);
            det = -det;
        }
        det *= m[(col, col)].clone();
        let inv = m[(col, col)].recip();
        for r in col + 1..n {
            if m[(r, col)].is_zero() {
                continue;
            }
            let factor = &m[(r, col)] * &inv;
            for j in col..n {
                let v = &m[(r, j)] - &(&factor * &m[(col, j)]);
                m[(r, j)] = v;
            }
        }
    }
    det
}

/// A basis of the integer lattice `{ x in Z^n : <a, x> = 0 }` for a
/// primitive integer vector `a`. The basis spans the full rank n-1 kernel
/// lattice, so facet volumes measured in it are lattice-normalized.
pub fn integer_kernel_basis(a: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    // Column HNF-style sweep: maintain transformation columns while
    // reducing `a` to (g, 0, ..., 0).
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut c = vec![BigInt::zero(); n];
            c[i] = BigInt::one();
            c
        })
        .collect();
    let mut vals: Vec<BigInt> = a.to_vec();
    loop {
        let mut nonzero: Vec<usize> = (0..n).filter(|&i| !vals[i].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        nonzero.sort_by_key(|&i| vals[i].abs());
        let (imin, inext) = (nonzero[0], nonzero[1]);
        let q = &vals[inext] / &vals[imin];
        let qv = q.clone();
        vals[inext] = &vals[inext] - &(&qv * &vals[imin]);
        let sub: Vec<BigInt> = cols[imin].iter().map(|x| x * &qv).collect();
        for (x, s) in cols[inext].iter_mut().zip(sub) {
            *x -= s;
        }
    }
    let pivot = (0..n).find(|&i| !vals[i].is_zero());
    let mut basis = Vec::new();
    for i in 0..n {
        if Some(i) != pivot {
            basis.push(cols[i].clone());
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m2(entries: [[i64; 2]; 2]) -> QMatrix {
        let mut m = QMatrix::zero(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = rat_int(entries[i][j]);
            }
        }
        m
    }

    #[test]
    fn solve_simple_system() {
        let a = m2([[2, 1], [1, -1]]);
        let x = solve_square(&a, &[rat_int(5), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
    }

    #[test]
    fn singular_detected() {
        let a = m2([[1, 2], [2, 4]]);
        assert!(solve_square(&a, &[rat_int(1), rat_int(2)]).is_err());
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn solve_any_handles_inconsistency() {
        let a = m2([[1, 2], [2, 4]]);
        assert!(solve_any(&a, &[rat_int(1), rat_int(3)]).is_none());
        let x = solve_any(&a, &[rat_int(1), rat_int(2)]).unwrap();
        assert_eq!(&x[0] + &(&rat(2, 1) * &x[1]), rat_int(1));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        assert_eq!(determinant(&m2([[1, 2], [3, 4]])), rat_int(-2));
        assert_eq!(determinant(&m2([[1, 2], [2, 4]])), rat_int(0));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let a = QMatrix::from_rows(&[QVec::from_ints(&[1, 1, 1])]);
        let basis = kernel_basis(&a);
        assert_eq!(basis.len(), 2);
        for v in basis {
            assert!(v.dot(&QVec::from_ints(&[1, 1, 1])).is_zero());
        }
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // Kernel of (2, 3): spanned by (3, -2); index-1 check via determinant
        // of the completed matrix.
        let basis = integer_kernel_basis(&[BigInt::from(2), BigInt::from(3)]);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert!((BigInt::from(2) * &v[0] + BigInt::from(3) * &v[1]).is_zero());
        let g = num_integer::gcd(v[0].clone(), v[1].clone());
        assert_eq!(g.abs(), BigInt::one());

        let basis = integer_kernel_basis(&[BigInt::from(-1), BigInt::from(-1), BigInt::from(2)]);
        assert_eq!(basis.len(), 2);
    }
}
