use serde::Serialize;

use super::controlled::ControlledUnitary;
use crate::error::{Error, Result};
use crate::qcore::{partial_trace, tensor, ComplexMatrix, DensityMatrix, SubsystemLayout, UnitaryOperator};
use crate::weylops::{clock_z, weyl_basis, OrthonormalBasis};

/// Smallest `m` with `m^2 >= d`.
pub fn ancilla_dim_for(d: usize) -> usize {
    let mut m = (d as f64).sqrt() as usize;
    while m * m < d {
        m += 1;
    }
    while m > 1 && (m - 1) * (m - 1) >= d {
        m -= 1;
    }
    m.max(1)
}

/// A noisy operation on a `d`-dimensional system.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoisyChannel {
    /// `rho -> tr_R[U (rho (x) 1/m) U^dagger]`.
    QuantumDilation { unitary: UnitaryOperator, ancilla_dim: usize },
    /// `rho -> (1/m) sum_j U_j rho U_j^dagger`.
    ClassicalMixture { unitaries: Vec<UnitaryOperator> },
}

impl NoisyChannel {
    pub fn quantum(unitary: UnitaryOperator, ancilla_dim: usize) -> Result<Self> {
        if ancilla_dim == 0 || !unitary.dim().is_multiple_of(ancilla_dim) {
            return Err(Error::Dimension(format!(
                "ancilla dimension {ancilla_dim} does not divide joint dimension {}",
                unitary.dim()
            )));
        }
        Ok(Self::QuantumDilation { unitary, ancilla_dim })
    }

    pub fn classical(unitaries: Vec<UnitaryOperator>) -> Result<Self> {
        let Some(first) = unitaries.first() else {
            return Err(Error::Precondition("a mixture needs at least one unitary".into()));
        };
        if unitaries.iter().any(|u| u.dim() != first.dim()) {
            return Err(Error::Dimension("mixture unitaries of unequal dimension".into()));
        }
        Ok(Self::ClassicalMixture { unitaries })
    }

    pub fn identity(d: usize) -> Self {
        Self::ClassicalMixture { unitaries: vec![UnitaryOperator::identity(d)] }
    }

    pub fn system_dim(&self) -> usize {
        match self {
            Self::QuantumDilation { unitary, ancilla_dim } => unitary.dim() / ancilla_dim,
            Self::ClassicalMixture { unitaries } => unitaries[0].dim(),
        }
    }

    /// Dimension `m` of the source of randomness.
    pub fn randomness_dim(&self) -> usize {
        match self {
            Self::QuantumDilation { ancilla_dim, .. } => *ancilla_dim,
            Self::ClassicalMixture { unitaries } => unitaries.len(),
        }
    }

    fn check_input(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.system_dim() {
            return Err(Error::Dimension(format!(
                "channel acts on dimension {}, state has dimension {}",
                self.system_dim(),
                rho.dim()
            )));
        }
        Ok(())
    }

    /// `U (rho (x) sigma) U^dagger` for a dilation.
    pub fn joint_output(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ComplexMatrix> {
        self.check_input(rho)?;
        let Self::QuantumDilation { unitary, ancilla_dim } = self else {
            return Err(Error::Precondition("a classical mixture has no ancilla".into()));
        };
        if sigma.dim() != *ancilla_dim {
            return Err(Error::Dimension("ancilla state has the wrong dimension".into()));
        }
        Ok(tensor(rho.matrix(), sigma.matrix())?.conjugate_by(unitary.matrix()))
    }

    fn layout(&self) -> SubsystemLayout {
        SubsystemLayout::new(vec![self.system_dim(), self.randomness_dim()]).expect("non-zero dimensions")
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho)?;
        match self {
            Self::QuantumDilation { ancilla_dim, .. } => {
                let joint = self.joint_output(rho, &DensityMatrix::maximally_mixed(*ancilla_dim))?;
                Ok(DensityMatrix::new_unchecked(partial_trace(&joint, &self.layout(), &[0])?))
            }
            Self::ClassicalMixture { unitaries } => {
                let d = rho.dim();
                let mut acc = ComplexMatrix::zeros(d, d);
                for u in unitaries {
                    acc = acc + rho.matrix().conjugate_by(u.matrix());
                }
                Ok(DensityMatrix::new_unchecked(acc.scale(1.0 / unitaries.len() as f64)))
            }
        }
    }

    /// Reduced state of the source of randomness after the channel acts on
    /// `rho` with a maximally mixed ancilla.
    pub fn ancilla_output(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let Self::QuantumDilation { ancilla_dim, .. } = self else {
            return Err(Error::Precondition("a classical mixture has no ancilla".into()));
        };
        let joint = self.joint_output(rho, &DensityMatrix::maximally_mixed(*ancilla_dim))?;
        Ok(DensityMatrix::new_unchecked(partial_trace(&joint, &self.layout(), &[1])?))
    }
}

/// Applies a noisy channel.
pub fn apply(channel: &NoisyChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    channel.apply(rho)
}

/// Removes all coherence in the basis `A`.
pub fn pinch(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<DensityMatrix> {
    if rho.dim() != basis.dim() {
        return Err(Error::Dimension(format!(
            "state of dimension {} pinched in a basis of dimension {}",
            rho.dim(),
            basis.dim()
        )));
    }
    if basis.is_computational() {
        return Ok(DensityMatrix::new_unchecked(ComplexMatrix::from_diagonal(&rho.matrix().diagonal())));
    }
    let diag = ComplexMatrix::from_diagonal(&basis.to_basis(rho.matrix()).diagonal());
    Ok(DensityMatrix::new_unchecked(basis.from_basis(&diag)))
}

/// `sum_i |a_i><a_i| (x) U_i` with the first `d` Weyl operators on `C^m`,
/// `m` the smallest integer with `m^2 >= d`.
pub fn dephasing_unitary(d: usize, basis: &OrthonormalBasis) -> Result<ControlledUnitary> {
    if d < 2 {
        return Err(Error::Precondition(format!("dephasing needs d >= 2, got {d}")));
    }
    if basis.dim() != d {
        return Err(Error::Dimension("basis dimension differs from d".into()));
    }
    let m = ancilla_dim_for(d);
    let ops = if m >= 2 { weyl_basis(m)?.ops()[..d].to_vec() } else { vec![UnitaryOperator::identity(1)] };
    ControlledUnitary::new(basis.clone(), ops)
}

/// The optimal quantum dephasing channel as a dilation with ancilla
/// dimension `ceil(sqrt(d))`.
pub fn build_dephasing_unitary(d: usize, basis: &OrthonormalBasis) -> Result<NoisyChannel> {
    let v = dephasing_unitary(d, basis)?;
    NoisyChannel::quantum(v.to_unitary()?, v.ancilla_dim())
}

/// The optimal classical dephasing channel: the uniform mixture of
/// `Z^1, ..., Z^d`.
pub fn classical_dephasing_channel(d: usize) -> Result<NoisyChannel> {
    let z = clock_z(d)?;
    NoisyChannel::classical((1..=d as i64).map(|j| z.pow(j)).collect())
}
