//! Dense matrices over any [`Field`], with the elimination routines the
//! representation and envelope code share.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::{Field, NumericScalar, QScalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Field> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[C]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<D: Field>(&self, f: impl FnMut(&C) -> D) -> Matrix<D> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<D: Field, E>(&self, f: impl FnMut(&C) -> Result<D, E>) -> Result<Matrix<D>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn mul(&self, rhs: &Matrix<C>) -> Matrix<C> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].plus(&a.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(C::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.plus(&a.times(b))
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<C>) -> Matrix<C> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn sub(&self, rhs: &Matrix<C>) -> Matrix<C> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.minus(b)).collect() }
    }

    pub fn scale(&self, c: &C) -> Matrix<C> {
        self.map(|a| a.times(c))
    }

    pub fn transpose(&self) -> Matrix<C> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `self * rhs - rhs * self`
    pub fn commutator(&self, rhs: &Matrix<C>) -> Matrix<C> {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn pow(&self, n: u32) -> Matrix<C> {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    /// Largest entry magnitude (0/1 for exact fields).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diag(&self) -> Vec<C> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> C {
        self.diag().iter().fold(C::zero(), |acc, x| acc.plus(x))
    }

    pub fn direct_sum(blocks: &[&Matrix<C>]) -> Matrix<C> {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Submatrix with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<C> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Stacks columns into a matrix.
    pub fn from_columns(cols: &[Vec<C>]) -> Matrix<C> {
        let n = cols.first().map_or(0, |c| c.len());
        Matrix::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Reduced row echelon form in place; returns pivot columns.
    ///
    /// Numeric entries below `tol * max_abs` are treated as zero. Exact fields
    /// pick the cheapest nonzero pivot to limit coefficient growth.
    pub fn rref(&mut self, tol: f64) -> Vec<usize> {
        let threshold = if C::EXACT { 0.0 } else { tol * self.max_abs().max(f64::MIN_POSITIVE) };
        let is_small = |x: &C| if C::EXACT { x.is_zero() } else { x.magnitude() <= threshold };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for i in r..self.rows {
                let x = self.get(i, c);
                if is_small(x) {
                    continue;
                }
                let score = if C::EXACT { -(x.cost() as f64) } else { x.magnitude() };
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((i, score));
                }
            }
            let Some((p, _)) = best else {
                if !C::EXACT {
                    for i in r..self.rows {
                        self.set(i, c, C::zero());
                    }
                }
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inverse().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j).times(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let pv = self.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).minus(&f.times(pv));
                    self.set(i, j, v);
                }
                if !C::EXACT {
                    self.set(i, c, C::zero());
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.clone().rref(tol).len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<C>> {
        let mut m = self.clone();
        let pivots = m.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![C::zero(); self.cols];
                v[fc] = C::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, fc).negate();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix<C>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if self.is_diagonal() {
            let inv: Option<Vec<C>> = self.diag().iter().map(Field::inverse).collect();
            return inv.map(|d| Self::diagonal(&d));
        }
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                C::one()
            } else {
                C::zero()
            }
        });
        let pivots = aug.rref(1e-14);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`)
    /// by the Faddeev-LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<C> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![C::zero(); n + 1];
        coeffs[n] = C::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                let v = next.get(i, i).plus(&coeffs[n - k + 1]);
                next.set(i, i, v);
            }
            m = next;
            let tr = self.mul(&m).trace();
            let ck = tr.negate().divide(&C::from_i64(k as i64)).expect("k nonzero");
            coeffs[n - k] = ck;
        }
        coeffs
    }

    /// Rows of display strings, for serialization.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl Matrix<QScalar> {
    pub fn specialize(&self, qval: NumericScalar) -> crate::error::Result<Matrix<NumericScalar>> {
        self.try_map(|x| x.specialize(qval))
    }
}

impl Matrix<NumericScalar> {
    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm() * x.norm()).sum::<f64>().sqrt()
    }

    pub fn conj_transpose(&self) -> Matrix<NumericScalar> {
        Matrix::from_fn(self.cols, self.rows, |i, j| NumericScalar::from(self.get(j, i).value().conj()))
    }
}

impl<C: Field> fmt::Display for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Row-major string form used in JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson(pub Vec<Vec<String>>);

impl<C: Field> From<&Matrix<C>> for MatrixJson {
    fn from(m: &Matrix<C>) -> Self {
        MatrixJson(m.to_string_rows())
    }
}
