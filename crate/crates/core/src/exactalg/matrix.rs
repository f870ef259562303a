//! Dense exact matrices over a single field, with deterministic elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::{Field, Rationals};

/// A rectangular matrix over one field. Entries are stored row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field.clone(), n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &F::Elem {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut F::Elem {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<F::Elem> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::Shape("field mismatch in matrix product".into()));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = f.zero();
                for l in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(i, l), other.at(l, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, for covector coordinate changes.
    pub fn apply_covector(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.rows {
            return Err(Error::Shape("covector length mismatch".into()));
        }
        let f = &self.field;
        Ok((0..self.cols)
            .map(|j| {
                let mut acc = f.zero();
                for (i, vi) in v.iter().enumerate() {
                    acc = f.add(&acc, &f.mul(vi, self.at(i, j)));
                }
                acc
            })
            .collect())
    }

    /// Exact determinant. Errors on non-square input.
    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        self.field.det_matrix(self)
    }

    /// Exact rank by elimination with full pivoting; among nonzero candidate
    /// pivots the first one in row-major scan order is taken, so the result
    /// and the elimination path are deterministic.
    pub fn rank(&self) -> usize {
        let f = self.field.clone();
        let mut a = self.clone();
        let mut rank = 0;
        let mut row_start = 0;
        let mut active_cols: Vec<usize> = (0..self.cols).collect();
        while row_start < a.rows && !active_cols.is_empty() {
            // full pivot search, ties broken by smallest row then column
            let mut pivot = None;
            'search: for i in row_start..a.rows {
                for (cpos, &j) in active_cols.iter().enumerate() {
                    if !f.is_zero(a.at(i, j)) {
                        pivot = Some((i, cpos));
                        break 'search;
                    }
                }
            }
            let Some((pi, cpos)) = pivot else { break };
            let pj = active_cols[cpos];
            if pi != row_start {
                for j in 0..a.cols {
                    let tmp = a.at(pi, j).clone();
                    *a.at_mut(pi, j) = a.at(row_start, j).clone();
                    *a.at_mut(row_start, j) = tmp;
                }
            }
            let pivot_inv = f
                .inv(a.at(row_start, pj))
                .expect("pivot is nonzero by construction");
            for i in row_start + 1..a.rows {
                if f.is_zero(a.at(i, pj)) {
                    continue;
                }
                let factor = f.mul(a.at(i, pj), &pivot_inv);
                for &j in &active_cols {
                    let delta = f.mul(&factor, a.at(row_start, j));
                    *a.at_mut(i, j) = f.sub(a.at(i, j), &delta);
                }
            }
            active_cols.remove(cpos);
            row_start += 1;
            rank += 1;
        }
        rank
    }

    /// Determinant of the submatrix selected by `rows` and `cols`, both taken
    /// in ascending order with no extra sign. Cramer-style `(-1)^c` signs are
    /// the caller's responsibility.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<F::Elem> {
        if rows.len() != cols.len() {
            return Err(Error::Shape(format!(
                "minor needs |rows| = |cols|, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        let mut rs = rows.to_vec();
        let mut cs = cols.to_vec();
        rs.sort_unstable();
        cs.sort_unstable();
        if rs.windows(2).any(|w| w[0] == w[1]) || cs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Index("repeated index in minor selection".into()));
        }
        if rs.last().is_some_and(|&r| r >= self.rows) || cs.last().is_some_and(|&c| c >= self.cols)
        {
            return Err(Error::Index("minor index out of range".into()));
        }
        let sub_rows: Vec<Vec<F::Elem>> = rs
            .iter()
            .map(|&i| cs.iter().map(|&j| self.at(i, j).clone()).collect())
            .collect();
        Matrix::from_rows(self.field.clone(), sub_rows)?.det()
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let f = self.field.clone();
        let mut a = self.clone();
        let mut inv = Self::identity(f.clone(), n);
        for col in 0..n {
            let Some(pr) = (col..n).find(|&i| !f.is_zero(a.at(i, col))) else {
                return Ok(None);
            };
            if pr != col {
                for j in 0..n {
                    let (x, y) = (a.at(pr, j).clone(), a.at(col, j).clone());
                    *a.at_mut(pr, j) = y;
                    *a.at_mut(col, j) = x;
                    let (x, y) = (inv.at(pr, j).clone(), inv.at(col, j).clone());
                    *inv.at_mut(pr, j) = y;
                    *inv.at_mut(col, j) = x;
                }
            }
            let piv_inv = f.inv(a.at(col, col)).expect("pivot nonzero");
            for j in 0..n {
                *a.at_mut(col, j) = f.mul(a.at(col, j), &piv_inv);
                *inv.at_mut(col, j) = f.mul(inv.at(col, j), &piv_inv);
            }
            for i in 0..n {
                if i == col || f.is_zero(a.at(i, col)) {
                    continue;
                }
                let factor = a.at(i, col).clone();
                for j in 0..n {
                    let da = f.mul(&factor, a.at(col, j));
                    *a.at_mut(i, j) = f.sub(a.at(i, j), &da);
                    let di = f.mul(&factor, inv.at(col, j));
                    *inv.at_mut(i, j) = f.sub(inv.at(i, j), &di);
                }
            }
        }
        Ok(Some(inv))
    }
}

/// Plain Gaussian-elimination determinant; used for prime fields.
pub(super) fn gaussian_det<F: Field>(f: &F, m: &Matrix<F>) -> Result<F::Elem> {
    let n = m.nrows();
    if n == 0 {
        return Ok(f.one());
    }
    let mut a = m.clone();
    let mut det = f.one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&i| !f.is_zero(a.at(i, col))) else {
            return Ok(f.zero());
        };
        if pr != col {
            for j in 0..n {
                let (x, y) = (a.at(pr, j).clone(), a.at(col, j).clone());
                *a.at_mut(pr, j) = y;
                *a.at_mut(col, j) = x;
            }
            det = f.neg(&det);
        }
        let pivot = a.at(col, col).clone();
        det = f.mul(&det, &pivot);
        let piv_inv = f.inv(&pivot).expect("pivot nonzero");
        for i in col + 1..n {
            if f.is_zero(a.at(i, col)) {
                continue;
            }
            let factor = f.mul(a.at(i, col), &piv_inv);
            for j in col..n {
                let delta = f.mul(&factor, a.at(col, j));
                *a.at_mut(i, j) = f.sub(a.at(i, j), &delta);
            }
        }
    }
    Ok(det)
}

/// Fraction-free determinant for rational matrices: rows are scaled to
/// integers, then Bareiss elimination keeps every intermediate value an
/// integer (and of bounded size), and the row scales are divided back out.
pub(super) fn bareiss_det(m: &Matrix<Rationals>) -> Result<BigRational> {
    let n = m.nrows();
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for j in 0..n {
            lcm = lcm.lcm(m.at(i, j).denom());
        }
        a.push(
            (0..n)
                .map(|j| {
                    let e = m.at(i, j);
                    e.numer() * (&lcm / e.denom())
                })
                .collect(),
        );
        scale *= lcm;
    }

    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigRational::zero());
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det_int = &a[n - 1][n - 1] * BigInt::from(sign);
    Ok(BigRational::new(det_int, scale))
}
