//! Clock and shift operators, Weyl operator bases, mutually unbiased bases
//! and the phase-space operators used by discrete Wigner functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{tensor, ComplexMatrix, UnitaryOperator, C64, ONE, ZERO};
use crate::tolerance::tolerances;

/// Label `(r, s)` of the Weyl operator `U_{r,s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylIndex {
    pub r: usize,
    pub s: usize,
}

fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Precondition(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// `exp(2 pi i n / m)`, with the exponent reduced exactly.
pub fn omega_power(m: usize, n: i64) -> C64 {
    let k = n.rem_euclid(m as i64);
    if k == 0 {
        return ONE;
    }
    C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// `tau^n` with `tau = -exp(i pi / m) = exp(i pi (m + 1) / m)`.
pub fn tau_power(m: usize, n: i64) -> C64 {
    let k = (n.rem_euclid(2 * m as i64) * (m as i64 + 1)).rem_euclid(2 * m as i64);
    if k == 0 {
        return ONE;
    }
    C64::from_polar(1.0, PI * k as f64 / m as f64)
}

/// Cyclic shift `X|i> = |i + 1 mod d>`.
pub fn shift_x(d: usize) -> Result<UnitaryOperator> {
    require_dim(d)?;
    Ok(UnitaryOperator::new_unchecked(shift_clock(d, 1, 0)))
}

/// Clock `Z = sum_j omega^j |j><j|`.
pub fn clock_z(d: usize) -> Result<UnitaryOperator> {
    require_dim(d)?;
    Ok(UnitaryOperator::new_unchecked(shift_clock(d, 0, 1)))
}

/// Phase-free product `X^r Z^s`.
pub fn shift_clock(d: usize, r: i64, s: i64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let row = (j as i64 + r).rem_euclid(d as i64) as usize;
        m[(row, j)] = omega_power(d, s * j as i64);
    }
    m
}

/// `U_{r,s} = tau^{rs} X^r Z^s`. The indices are taken as given, not reduced
/// modulo `m`: for even `m` the phase `tau^{rs}` depends on the
/// representative.
pub fn weyl_operator(m: usize, r: i64, s: i64) -> Result<UnitaryOperator> {
    require_dim(m)?;
    let phase = tau_power(m, r * s);
    Ok(UnitaryOperator::new_unchecked(shift_clock(m, r, s).scale_complex(phase)))
}

/// `m^2` unitaries on `C^m`, orthogonal under `(1/m) tr(A B^dagger)`.
#[derive(Debug, Clone)]
pub struct UnitaryOperatorBasis {
    dim: usize,
    ops: Vec<UnitaryOperator>,
    labels: Vec<WeylIndex>,
}

impl UnitaryOperatorBasis {
    /// Validates a user-supplied basis. Labels are assigned in row-major order.
    pub fn new(ops: Vec<UnitaryOperator>) -> Result<Self> {
        let dim = ops.first().map_or(0, UnitaryOperator::dim);
        if dim == 0 || ops.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "an operator basis on C^{dim} needs {} elements, got {}",
                dim * dim,
                ops.len()
            )));
        }
        if ops.iter().any(|u| u.dim() != dim) {
            return Err(Error::Dimension("basis elements of unequal dimension".into()));
        }
        let tol = tolerances().unitary;
        for (i, a) in ops.iter().enumerate() {
            for (j, b) in ops.iter().enumerate().skip(i) {
                let g = a.matrix().inner(b.matrix()) / dim as f64;
                let want = if i == j { ONE } else { ZERO };
                if (g - want).norm() > tol {
                    return Err(Error::Precondition(format!("basis elements {i} and {j} are not orthonormal")));
                }
            }
        }
        let labels = (0..dim * dim).map(|k| WeylIndex { r: k / dim, s: k % dim }).collect();
        Ok(Self { dim, ops, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[UnitaryOperator] {
        &self.ops
    }

    pub fn labels(&self) -> &[WeylIndex] {
        &self.labels
    }

    /// Expansion coefficients `c_i = (1/m) tr(U_i^dagger A)`.
    pub fn coefficients(&self, a: &ComplexMatrix) -> Result<Vec<C64>> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::Dimension("operator does not match basis dimension".into()));
        }
        Ok(self.ops.iter().map(|u| u.matrix().inner(a) / self.dim as f64).collect())
    }

    /// `sum_i c_i U_i`.
    pub fn resum(&self, coefficients: &[C64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (u, &c) in self.ops.iter().zip(coefficients) {
            out = out + u.matrix().scale_complex(c);
        }
        out
    }
}

fn basis_from_labels(m: usize, phased: bool) -> UnitaryOperatorBasis {
    let mut ops = Vec::with_capacity(m * m);
    let mut labels = Vec::with_capacity(m * m);
    for r in 0..m {
        for s in 0..m {
            let phase = if phased { tau_power(m, (r * s) as i64) } else { ONE };
            ops.push(UnitaryOperator::new_unchecked(shift_clock(m, r as i64, s as i64).scale_complex(phase)));
            labels.push(WeylIndex { r, s });
        }
    }
    UnitaryOperatorBasis { dim: m, ops, labels }
}

/// The Weyl basis `{U_{r,s}}` in row-major `(r, s)` order.
pub fn weyl_basis(m: usize) -> Result<UnitaryOperatorBasis> {
    require_dim(m)?;
    Ok(basis_from_labels(m, true))
}

/// The phase-free basis `{X^r Z^s}` in row-major order. For `m = 2` these
/// are the Paulis `1, Z, X, XZ`, all Clifford.
pub fn clock_shift_basis(m: usize) -> Result<UnitaryOperatorBasis> {
    require_dim(m)?;
    Ok(basis_from_labels(m, false))
}

/// Ordered orthonormal basis, stored as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthonormalBasis {
    columns: ComplexMatrix,
}

impl OrthonormalBasis {
    /// Checks that the columns are orthonormal.
    pub fn new(columns: ComplexMatrix) -> Result<Self> {
        if !columns.is_square() || columns.rows() == 0 {
            return Err(Error::Dimension("a basis needs d vectors of length d".into()));
        }
        let gram = &columns.adjoint() * &columns;
        if (gram - ComplexMatrix::identity(columns.rows())).max_abs() > 1e-10 {
            return Err(Error::Precondition("basis vectors are not orthonormal".into()));
        }
        Ok(Self { columns })
    }

    pub fn from_vectors(vectors: &[Vec<C64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_columns(vectors)?)
    }

    pub fn computational(d: usize) -> Self {
        Self { columns: ComplexMatrix::identity(d) }
    }

    /// `|f_k> = d^{-1/2} sum_j omega^{jk} |j>`.
    pub fn fourier(d: usize) -> Self {
        let norm = 1.0 / (d as f64).sqrt();
        Self { columns: ComplexMatrix::from_fn(d, d, |j, k| omega_power(d, (j * k) as i64) * norm) }
    }

    pub fn dim(&self) -> usize {
        self.columns.rows()
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.columns.column(i)
    }

    /// Matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.columns
    }

    pub fn projector(&self, i: usize) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vector(i))
    }

    pub fn is_computational(&self) -> bool {
        self.columns == ComplexMatrix::identity(self.dim())
    }

    /// Product basis, vectors ordered lexicographically.
    pub fn tensor(&self, other: &OrthonormalBasis) -> Result<Self> {
        Ok(Self { columns: tensor(&self.columns, &other.columns)? })
    }

    /// `<a_i|M|a_j>` for all `i, j`.
    pub fn to_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.columns.adjoint() * m) * &self.columns
    }

    /// Inverse of [`to_basis`](Self::to_basis).
    pub fn from_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        m.conjugate_by(&self.columns)
    }
}

impl<'de> Deserialize<'de> for OrthonormalBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        OrthonormalBasis::new(ComplexMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// The computational basis and its Fourier conjugate.
pub fn mub_pair(d: usize) -> Result<(OrthonormalBasis, OrthonormalBasis)> {
    require_dim(d)?;
    Ok((OrthonormalBasis::computational(d), OrthonormalBasis::fourier(d)))
}

fn require_odd(d: usize) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::Precondition(format!("phase-space operators need odd d >= 3, got {d}")));
    }
    Ok(())
}

/// Displacement `w(p, q) = tau^{pq} X^q Z^p`: `p` labels the clock
/// (momentum) direction and `q` the shift (position) direction, so that
/// `w(p, q) Pi w(p, q)^dagger |q> = |q>` for every `p`.
pub fn weyl_displacement(d: usize, p: usize, q: usize) -> Result<UnitaryOperator> {
    require_odd(d)?;
    if p >= d || q >= d {
        return Err(Error::Precondition(format!("phase-space point ({p}, {q}) outside Z_{d}^2")));
    }
    weyl_operator(d, q as i64, p as i64)
}

/// Parity `Pi|j> = |-j mod d>`.
pub fn parity_operator(d: usize) -> Result<UnitaryOperator> {
    require_odd(d)?;
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        m[((d - j) % d, j)] = ONE;
    }
    Ok(UnitaryOperator::new_unchecked(m))
}

/// Phase-point operator `A(p, q) = w(p, q) Pi w(p, q)^dagger`.
pub fn phase_point_operator(d: usize, p: usize, q: usize) -> Result<ComplexMatrix> {
    let w = weyl_displacement(d, p, q)?;
    Ok(parity_operator(d)?.matrix().conjugate_by(w.matrix()))
}
