use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { data: DMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        Self { data: DMatrix::identity(n, n) }
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("matrix entries must be finite".into()));
        }
        Ok(Self { data: DMatrix::from_row_slice(rows, cols, &entries) })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { data: DMatrix::from_fn(rows, cols, f) }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m.data[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// `|v><v|` for a column vector `v`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    /// `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| columns[j][i]))
    }

    pub fn from_dmatrix(data: DMatrix<C64>) -> Self {
        Self { data }
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.data.column(j).iter().copied().collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.data.diagonal().iter().copied().collect()
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        self.data.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { data: self.data.transpose() }
    }

    pub fn conjugate(&self) -> Self {
        Self { data: self.data.map(|z| z.conj()) }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn scale(&self, x: f64) -> Self {
        Self { data: self.data.map(|z| z * x) }
    }

    pub fn scale_complex(&self, z: C64) -> Self {
        Self { data: &self.data * z }
    }

    /// `u * self * u^dagger`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self { data: &u.data * &self.data * u.data.adjoint() }
    }

    /// `(self + self^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self { data: (&self.data + self.data.adjoint()) * C64::new(0.5, 0.0) }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (&self.data - self.data.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let prod = &self.data * self.data.adjoint();
        let n = self.rows();
        (0..n).all(|i| (0..n).all(|j| (prod[(i, j)] - if i == j { ONE } else { ZERO }).norm() <= tol))
    }

    /// Kronecker product without any size check.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        Self { data: self.data.kronecker(&other.data) }
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, k: u64) -> Self {
        let mut result = Self::identity(self.rows());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.data[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Hilbert-Schmidt inner product `tr(self^dagger other)`.
    pub fn inner(&self, other: &ComplexMatrix) -> C64 {
        self.data.iter().zip(other.data.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.data[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.data[idx]
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix { data: &self.data $op &rhs.data }
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix { data: self.data $op rhs.data }
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $f(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix { data: self.data $op &rhs.data }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { data: -self.data }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries_row_major();
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            re: entries.iter().map(|z| z.re).collect(),
            im: entries.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.re.len() != raw.im.len() {
            return Err(serde::de::Error::custom("re and im lengths differ"));
        }
        let entries = raw.re.iter().zip(&raw.im).map(|(&r, &i)| C64::new(r, i)).collect();
        ComplexMatrix::from_row_major(raw.rows, raw.cols, entries).map_err(serde::de::Error::custom)
    }
}
