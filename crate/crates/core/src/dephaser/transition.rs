use serde::{Deserialize, Serialize};

use super::channel::{build_dephasing_unitary, classical_dephasing_channel, NoisyChannel};
use crate::error::{Error, Result};
use crate::qcore::{hermitian_eigen, majorizes, schur_horn_unitary, DensityMatrix, UnitaryOperator};
use crate::weylops::OrthonormalBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Quantum,
    Classical,
}

/// `rho -> post . dephase . pre (rho)`.
#[derive(Debug, Clone)]
pub struct TransitionChannel {
    pub pre: UnitaryOperator,
    pub dephasing: NoisyChannel,
    pub post: UnitaryOperator,
}

impl TransitionChannel {
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let rotated = rho.evolve(&self.pre)?;
        self.dephasing.apply(&rotated)?.evolve(&self.post)
    }

    pub fn ancilla_dim(&self) -> usize {
        self.dephasing.randomness_dim()
    }
}

/// A noisy operation taking `rho` to `rho_prime`, which exists iff `rho`
/// majorizes `rho_prime`.
///
/// `pre` rotates `rho` into its eigenbasis and then by a Schur-Horn unitary
/// so that its diagonal becomes the spectrum of `rho_prime`; dephasing in
/// the computational basis leaves exactly that diagonal, and `post` rotates
/// it onto the eigenbasis of `rho_prime`.
pub fn transition_channel(rho: &DensityMatrix, rho_prime: &DensityMatrix, mode: Mode) -> Result<TransitionChannel> {
    if !majorizes(rho, rho_prime)? {
        return Err(Error::Precondition("the initial state does not majorize the target".into()));
    }
    let d = rho.dim();
    let (lambda, w) = hermitian_eigen(rho.matrix());
    let (mu, w_prime) = hermitian_eigen(rho_prime.matrix());
    let clean = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|x| x.max(0.0)).collect() };
    let v = schur_horn_unitary(&clean(lambda), &clean(mu))?;
    let pre = UnitaryOperator::new_unchecked(v.matrix() * &w.adjoint());
    let post = UnitaryOperator::new_unchecked(w_prime);
    let dephasing = match mode {
        Mode::Quantum => build_dephasing_unitary(d, &OrthonormalBasis::computational(d))?,
        Mode::Classical => classical_dephasing_channel(d)?,
    };
    Ok(TransitionChannel { pre, dephasing, post })
}
