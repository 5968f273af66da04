//! Dense matrices and LU-based solves, sized for the small spectral systems
//! this crate produces (dimension n + 1 with n <= 12). Condition numbers come
//! from an explicit inverse; at these sizes clarity beats estimator tricks.

use std::fmt;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>, // row-major
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        assert!(r > 0, "empty matrix");
        let c = rows[0].len();
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows in matrix literal"
        );
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.5e} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.set(i, j, out.get(i, j) + a * rhs.get(k, j));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// Elimination hit a pivot column with no usable entry.
    Singular { column: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::Singular { column } => {
                write!(
                    f,
                    "matrix is singular to working precision (column {column})"
                )
            }
        }
    }
}

impl std::error::Error for LinalgError {}

/// LU factorization with partial pivoting, PA = LU packed in one matrix.
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
}

pub fn lu_factor(a: &Matrix) -> Result<LuFactors, LinalgError> {
    assert_eq!(a.rows, a.cols, "LU of a non-square matrix");
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                lu.get(r, col)
                    .abs()
                    .partial_cmp(&lu.get(s, col).abs())
                    .expect("NaN pivot")
            })
            .unwrap();
        if lu.get(pivot_row, col) == 0.0 {
            return Err(LinalgError::Singular { column: col });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = lu.get(col, j);
                lu.set(col, j, lu.get(pivot_row, j));
                lu.set(pivot_row, j, tmp);
            }
            perm.swap(col, pivot_row);
        }
        let pivot = lu.get(col, col);
        for row in col + 1..n {
            let factor = lu.get(row, col) / pivot;
            lu.set(row, col, factor);
            for j in col + 1..n {
                lu.set(row, j, lu.get(row, j) - factor * lu.get(col, j));
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

impl LuFactors {
    // triangular substitutions read clearer with explicit indices
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        assert_eq!(rhs.len(), n, "solve dimension mismatch");
        // forward substitution on the permuted right-hand side, unit diagonal
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = rhs[self.perm[i]];
            for j in 0..i {
                v -= self.lu.get(i, j) * y[j];
            }
            y[i] = v;
        }
        // back substitution
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            for j in i + 1..n {
                v -= self.lu.get(i, j) * x[j];
            }
            x[i] = v / self.lu.get(i, i);
        }
        x
    }

    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> Matrix {
        let n = self.lu.rows;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e);
            e[j] = 0.0;
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        inv
    }
}

/// 1-norm condition number, infinite when the matrix does not factor.
pub fn cond_1(a: &Matrix) -> f64 {
    match lu_factor(a) {
        Ok(f) => a.one_norm() * f.inverse().one_norm(),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn solve_known_system() {
        // [[2,1],[1,3]] x = [5,10] has x = [1,3]
        let a = Matrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = lu_factor(&a).unwrap().solve(&[5.0, 10.0]);
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let x = lu_factor(&a).unwrap().solve(&[7.0, -2.0]);
        assert_eq!(x, vec![-2.0, 7.0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(
            lu_factor(&a),
            Err(LinalgError::Singular { column: 1 })
        ));
    }

    #[test]
    fn identity_condition_is_one() {
        assert!((cond_1(&Matrix::identity(6)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn near_singular_condition_blows_up() {
        let mut a = Matrix::identity(3);
        a.set(2, 2, 1e-15);
        assert!(cond_1(&a) > 1e14);
    }

    #[test]
    fn inverse_of_known_matrix() {
        let a = Matrix::from_rows(vec![vec![4.0, 7.0], vec![2.0, 6.0]]);
        let inv = lu_factor(&a).unwrap().inverse();
        let prod = &a * &inv;
        assert!((&prod - &Matrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn transpose_is_involutive() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn one_norm_is_max_column_sum() {
        let a = Matrix::from_rows(vec![vec![1.0, -7.0], vec![-2.0, 3.0]]);
        assert_eq!(a.one_norm(), 10.0);
    }

    #[test]
    fn matvec_against_identity() {
        let x = vec![3.0, -1.0, 2.0];
        assert_eq!(Matrix::identity(3).matvec(&x), x);
    }

    fn arb_dominant_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        // diagonally dominant by construction, hence comfortably invertible
        proptest::collection::vec(-1.0f64..1.0, n * n).prop_map(move |vals| {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, vals[i * n + j]);
                }
                m.set(i, i, vals[i * n + i].signum() * (n as f64 + 1.0));
            }
            m
        })
    }

    proptest! {
        #[test]
        fn solve_then_multiply_recovers_rhs(
            m in arb_dominant_matrix(5),
            b in proptest::collection::vec(-10.0f64..10.0, 5),
        ) {
            let x = lu_factor(&m).unwrap().solve(&b);
            let back = m.matvec(&x);
            for (bi, ri) in b.iter().zip(&back) {
                prop_assert!((bi - ri).abs() < 1e-10);
            }
        }

        #[test]
        fn transpose_matmul_identity(m in arb_dominant_matrix(4)) {
            // (A B)^T = B^T A^T on a concrete partner
            let b = Matrix::from_rows(vec![
                vec![1.0, 2.0, 0.0, 1.0],
                vec![0.0, 1.0, 3.0, 0.0],
                vec![2.0, 0.0, 1.0, 1.0],
                vec![1.0, 1.0, 0.0, 2.0],
            ]);
            let left = (&m * &b).transpose();
            let right = &b.transpose() * &m.transpose();
            prop_assert!((&left - &right).max_abs() < 1e-12);
        }
    }
}
