use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::spectral::hermitian_eigen;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity against the active tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let tol = tolerances();
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() == 0 {
            return Err(Error::Dimension("density matrix of dimension 0".into()));
        }
        if !matrix.is_hermitian(tol.hermitian) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let matrix = matrix.hermitian_part();
        let (vals, _) = hermitian_eigen(&matrix);
        let min = vals.last().copied().unwrap_or(0.0);
        if min < tol.min_eigenvalue {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps the output of a trace-preserving, completely positive map. Only
    /// the Hermitian part is kept; no spectral check is made.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix: matrix.hermitian_part() }
    }

    /// Pure state from a (not necessarily normalised) vector.
    pub fn from_ket(ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if ket.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidState("state vector must be non-zero and finite".into()));
        }
        let v: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Ok(Self { matrix: ComplexMatrix::projector(&v) })
    }

    pub fn basis_state(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::Dimension(format!("basis index {i} out of range for d={d}")));
        }
        let mut v = vec![ZERO; d];
        v[i] = C64::new(1.0, 0.0);
        Self::from_ket(&v)
    }

    /// The maximally mixed state `1/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64) }
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probabilities))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues in descending order, with tiny negatives clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let clamp = tolerances().eigen_clamp;
        let (vals, _) = hermitian_eigen(&self.matrix);
        vals.into_iter().map(|x| if x < 0.0 && x >= -clamp { 0.0 } else { x }).collect()
    }

    /// Diagonal entries in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.inner(&self.matrix).re
    }

    /// `U rho U^dagger`.
    pub fn evolve(&self, u: &UnitaryOperator) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "unitary of dimension {} applied to state of dimension {}",
                u.dim(),
                self.dim()
            )));
        }
        Ok(Self::new_unchecked(self.matrix.conjugate_by(u.matrix())))
    }

    /// Product state `self (x) other`, subject to the dimension cap.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Ok(Self { matrix: super::ops::tensor(&self.matrix, &other.matrix)?.hermitian_part() })
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// Square matrix with `U U^dagger = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::Dimension("unitary must be square and non-empty".into()));
        }
        if !matrix.is_unitary(tolerances().unitary) {
            return Err(Error::InvalidState("matrix is not unitary".into()));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that is unitary by construction.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_unitary(1e-8));
        Self { matrix }
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &UnitaryOperator) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("composing unitaries of different dimension".into()));
        }
        Ok(Self { matrix: &self.matrix * &other.matrix })
    }

    /// Integer power; negative powers use the adjoint.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.matrix.adjoint() } else { self.matrix.clone() };
        Self { matrix: base.pow(k.unsigned_abs()) }
    }

    pub fn tensor(&self, other: &UnitaryOperator) -> Result<Self> {
        Ok(Self { matrix: super::ops::tensor(&self.matrix, &other.matrix)? })
    }
}

impl<'de> Deserialize<'de> for UnitaryOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        UnitaryOperator::new(m).map_err(serde::de::Error::custom)
    }
}

/// Dimensions of the tensor factors of a joint space, most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid subsystem dimensions {dims:?}")));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Errors unless `m` is square with the joint dimension.
    pub fn check(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::Dimension(format!(
                "layout {:?} (total {}) does not match a {}x{} operator",
                self.dims,
                self.total(),
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }

    /// Digits of a joint index, one per factor.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Inverse of [`digits`](Self::digits).
    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }
}
