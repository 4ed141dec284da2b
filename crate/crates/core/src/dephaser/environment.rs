use serde::Serialize;

use super::channel::{ancilla_dim_for, dephasing_unitary};
use crate::error::{Error, Result};
use crate::qcore::{check_cap, partial_trace, tensor, ComplexMatrix, DensityMatrix, SubsystemLayout, UnitaryOperator, C64, ZERO};
use crate::weylops::{shift_x, weyl_basis, OrthonormalBasis};

/// `(1/sqrt(m)) sum_k |k>|k>`.
pub fn maximally_entangled_ket(m: usize) -> Vec<C64> {
    let mut v = vec![ZERO; m * m];
    let amp = C64::new(1.0 / (m as f64).sqrt(), 0.0);
    for k in 0..m {
        v[k * m + k] = amp;
    }
    v
}

/// `U_{S E1} (x) 1_{E2}` on `S (x) E1 (x) E2`, with `E1` and `E2` of
/// dimension `ceil(sqrt(d))`.
pub fn decoherence_unitary(d: usize, basis: &OrthonormalBasis) -> Result<UnitaryOperator> {
    let v = dephasing_unitary(d, basis)?;
    let m = v.ancilla_dim();
    check_cap(d * m * m)?;
    v.to_unitary()?.tensor(&UnitaryOperator::identity(m))
}

#[derive(Debug, Clone, Serialize)]
pub struct DecoherenceOutcome {
    /// System state with the whole environment traced out.
    pub system: DensityMatrix,
    /// Reduced state of the half of the environment that interacted.
    pub environment_e1: DensityMatrix,
}

/// Lets the pure state `psi` interact with a purified environment in the
/// maximally entangled state `|phi>_{E1 E2}`.
pub fn decohere(psi: &[C64], basis: &OrthonormalBasis) -> Result<DecoherenceOutcome> {
    let d = psi.len();
    let u = decoherence_unitary(d, basis)?;
    let m = ancilla_dim_for(d);
    let input = tensor(DensityMatrix::from_ket(psi)?.matrix(), &ComplexMatrix::projector(&maximally_entangled_ket(m)))?;
    let out = input.conjugate_by(u.matrix());
    let layout = SubsystemLayout::new(vec![d, m, m])?;
    Ok(DecoherenceOutcome {
        system: DensityMatrix::new_unchecked(partial_trace(&out, &layout, &[0])?),
        environment_e1: DensityMatrix::new_unchecked(partial_trace(&out, &layout, &[1])?),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasurementOutcome {
    /// Reduced state of system and pointer.
    pub system_pointer: DensityMatrix,
    /// Born probabilities `|<i|psi>|^2`.
    pub probabilities: Vec<f64>,
}

/// Projective measurement of `psi` in the computational basis by a pointer
/// `P` and a randomness register `R1 R2` prepared in `|phi>`:
/// `W = sum_i |i><i| (x) X^i_P (x) (U_i)_{R1} (x) 1_{R2}`.
pub fn measurement_process(psi: &[C64], d: usize) -> Result<MeasurementOutcome> {
    if psi.len() != d {
        return Err(Error::Dimension(format!("state vector has length {}, expected {d}", psi.len())));
    }
    if d < 2 {
        return Err(Error::Precondition("measurement needs d >= 2".into()));
    }
    let m = ancilla_dim_for(d);
    let total = d * d * m * m;
    check_cap(total)?;
    let rho = DensityMatrix::from_ket(psi)?;
    let x = shift_x(d)?;
    let ops = weyl_basis(m)?;
    let mut w = ComplexMatrix::zeros(total, total);
    for i in 0..d {
        let proj = OrthonormalBasis::computational(d).projector(i);
        let block = tensor(&tensor(&proj, x.pow(i as i64).matrix())?, &tensor(ops.ops()[i].matrix(), &ComplexMatrix::identity(m))?)?;
        w = w + block;
    }
    let pointer = DensityMatrix::basis_state(d, 0)?;
    let register = ComplexMatrix::projector(&maximally_entangled_ket(m));
    let input = tensor(&tensor(rho.matrix(), pointer.matrix())?, &register)?;
    let out = input.conjugate_by(&w);
    let layout = SubsystemLayout::new(vec![d, d, m, m])?;
    let sp = partial_trace(&out, &layout, &[0, 1])?;
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    Ok(MeasurementOutcome {
        system_pointer: DensityMatrix::new_unchecked(sp),
        probabilities: psi.iter().map(|z| z.norm_sqr() / norm).collect(),
    })
}
