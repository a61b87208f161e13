//! Eulerian polynomials and numbers, hypersimplex volumes, and the graded
//! period matrices `A_n`, `P_n`, `Q_n`.
//!
//! `T` stands for `2 pi i`; graded entries are polynomials in `T`.

use std::fmt;
use std::ops::Mul;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{factorial, format_rational, int, Rational, UniPoly};

/// `E_r` from `E_{r+1} = x(1-x) E_r' + (1 + r x) E_r`, `E_0 = 1`.
pub fn eulerian_poly(r: u32) -> UniPoly {
    let x_one_minus_x = UniPoly::from_ints(&[0, 1, -1]);
    let mut e = UniPoly::one();
    for s in 0..r {
        let lin = UniPoly::from_ints(&[1, s as i64]);
        e = &(&x_one_minus_x * &e.derivative()) + &(&lin * &e);
    }
    e
}

/// Rows `0..=n` of the triangle `<m, k>` built by
/// `<m,k> = (m-k)<m-1,k-1> + (k+1)<m-1,k>`.
pub fn eulerian_triangle(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let at = |k: i64| -> BigInt {
            if k < 0 || k as usize >= prev.len() {
                BigInt::zero()
            } else {
                prev[k as usize].clone()
            }
        };
        let row: Vec<BigInt> = (0..m as i64)
            .map(|k| at(k - 1) * (m as i64 - k) + at(k) * (k + 1))
            .collect();
        rows.push(row);
    }
    rows
}

/// Eulerian number `<n, k>`; zero outside `0 <= k < n`.
pub fn eulerian_number(n: usize, k: i64) -> BigInt {
    if n == 0 {
        return if k == 0 { BigInt::one() } else { BigInt::zero() };
    }
    if k < 0 || k as usize >= n {
        return BigInt::zero();
    }
    eulerian_triangle(n)[n][k as usize].clone()
}

/// Volume of the slice `k <= t_1 + ... + t_n <= k + 1` of the unit cube.
pub fn hypersimplex_volume(n: usize, k: usize) -> Result<Rational> {
    if n == 0 || k >= n {
        return Err(Error::OutOfRange(format!("hypersimplex needs 0 <= k < n, got n = {n}, k = {k}")));
    }
    Ok(Rational::new(eulerian_number(n, k as i64), factorial(n as u64)))
}

pub const DESCENT_ENUMERATION_MAX: usize = 9;

/// Fraction of permutations of `1..=n` with exactly `k` descents.
pub fn descent_volume_oracle(n: usize, k: usize) -> Result<Rational> {
    if n > DESCENT_ENUMERATION_MAX {
        return Err(Error::EnumerationBound { n, max: DESCENT_ENUMERATION_MAX });
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let count = (0..n)
        .permutations(n)
        .filter(|p| p.windows(2).filter(|w| w[0] > w[1]).count() == k)
        .count();
    Ok(Rational::new(BigInt::from(count), factorial(n as u64)))
}

/// Dense matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `diag(self, s)`.
    pub fn extend_diagonal(&self, s: Rational) -> Self {
        let mut m = Self::zeros(self.rows + 1, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m.set(self.rows, self.cols, s);
        m
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).recip();
            for j in 0..n {
                let v = a.get(col, j) * &p;
                a.set(col, j, v);
                let v = inv.get(col, j) * &p;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                let f = a.get(r, col) / &p;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(format_rational).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Polynomials in `T`.
pub type TPoly = UniPoly;

/// Square matrix over `Q[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    n: usize,
    data: Vec<TPoly>,
}

impl GradedMatrix {
    pub fn zeros(n: usize) -> Self {
        GradedMatrix { n, data: vec![TPoly::zero(); n * n] }
    }

    /// `diag(T, T^2, ..., T^n)`.
    pub fn t_diagonal(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = t_monomial(Rational::one(), i as u32 + 1);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &TPoly {
        &self.data[i * self.n + j]
    }

    fn extend_diagonal(&self, s: TPoly) -> Self {
        let n = self.n + 1;
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.data[i * n + j] = self.get(i, j).clone();
            }
        }
        m.data[n * n - 1] = s;
        m
    }

    /// `A * self` with `A` rational.
    pub fn left_mul(&self, a: &RationalMatrix) -> Self {
        assert_eq!((a.rows(), a.cols()), (self.n, self.n), "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let c = a.get(i, k);
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = &out.data[i * n + j] + &self.get(k, j).scale(c);
                }
            }
        }
        out
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).display_with("T")).collect();
            writeln!(f, "[ {} ]", row.join(", "))?;
        }
        Ok(())
    }
}

fn t_monomial(c: Rational, m: u32) -> TPoly {
    let mut coeffs = vec![Rational::zero(); m as usize];
    coeffs.push(c);
    TPoly::new(coeffs)
}

/// `(n-1) x n` matrix of the boundary map on the hypersimplex basis:
/// column `0` maps to `e_0`, column `k` to `e_k - e_{k-1}`, column `n-1` to `-e_{n-2}`.
pub fn boundary_matrix(n: usize) -> Result<RationalMatrix> {
    if n < 2 {
        return Err(Error::OutOfRange("boundary matrix needs n >= 2".into()));
    }
    let mut m = RationalMatrix::zeros(n - 1, n);
    m.set(0, 0, Rational::one());
    for k in 1..n - 1 {
        m.set(k, k, Rational::one());
        m.set(k - 1, k, -Rational::one());
    }
    m.set(n - 2, n - 1, -Rational::one());
    Ok(m)
}

/// Identity on the first `n-1` columns with `-1` below the diagonal, and the
/// Eulerian numbers `<n, 0..n-1>` in the last column.
pub fn matrix_a(n: usize) -> Result<RationalMatrix> {
    if n < 1 {
        return Err(Error::OutOfRange("matrix A needs n >= 1".into()));
    }
    let row = &eulerian_triangle(n)[n];
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n - 1 {
        m.set(i, i, Rational::one());
        m.set(i + 1, i, -Rational::one());
    }
    for (i, e) in row.iter().enumerate() {
        m.set(i, n - 1, Rational::from_integer(e.clone()));
    }
    Ok(m)
}

/// `Q_1 = (1)`, `Q_n = diag(Q_{n-1}, n!) A_n^{-1}`.
pub fn matrix_q(n: usize) -> Result<RationalMatrix> {
    if n < 1 {
        return Err(Error::OutOfRange("matrix Q needs n >= 1".into()));
    }
    let mut q = RationalMatrix::identity(1);
    for m in 2..=n {
        let a = matrix_a(m)?;
        let inv = a.inverse().ok_or_else(|| {
            Error::InternalInconsistency(format!("A_{m} is singular, but its determinant should be {m}!"))
        })?;
        q = &q.extend_diagonal(Rational::from_integer(factorial(m as u64))) * &inv;
    }
    Ok(q)
}

/// `P_1 = (T)`, `P_n = A_n diag(P_{n-1}, T^n / n!)`.
pub fn matrix_p(n: usize) -> Result<GradedMatrix> {
    if n < 1 {
        return Err(Error::OutOfRange("matrix P needs n >= 1".into()));
    }
    let mut p = GradedMatrix::t_diagonal(1);
    for m in 2..=n {
        let top = t_monomial(Rational::new(BigInt::one(), factorial(m as u64)), m as u32);
        p = p.extend_diagonal(top).left_mul(&matrix_a(m)?);
    }
    Ok(p)
}

/// Checks `Q_n P_n = diag(T, ..., T^n)` exactly.
pub fn verify_sigma_diagonal(n: usize) -> Result<bool> {
    let q = matrix_q(n)?;
    let p = matrix_p(n)?;
    Ok(p.left_mul(&q) == GradedMatrix::t_diagonal(n))
}
