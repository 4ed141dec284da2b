use serde::Serialize;

use super::channel::{ancilla_dim_for, pinch};
use super::controlled::ControlledUnitary;
use crate::error::{Error, Result};
use crate::qcore::{
    apply_on_factors, check_cap, operator_entropy, partial_trace, tensor_all, trace_norm, ComplexMatrix,
    DensityMatrix, SubsystemLayout,
};
use crate::weylops::{weyl_basis, OrthonormalBasis};

/// Mutual information in bits between two systems of a chain.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairInformation {
    pub i: usize,
    pub j: usize,
    pub bits: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub ancilla_dim: usize,
    /// `||rho_i' - pi(rho_i)||_1` for each system.
    pub marginal_residuals: Vec<f64>,
    /// `||rho_R' - 1/m||_1`.
    pub catalyst_residual: f64,
    pub mutual_information: Vec<PairInformation>,
}

/// Dephases `N` uncorrelated systems one after another with a single
/// `ceil(sqrt(d))`-dimensional source of randomness, `d` the largest system
/// dimension. Returns the joint state of the systems with the source traced
/// out.
pub fn catalytic_chain(states: &[DensityMatrix], bases: &[OrthonormalBasis]) -> Result<(DensityMatrix, ChainReport)> {
    if states.is_empty() {
        return Err(Error::Precondition("chain needs at least one system".into()));
    }
    if bases.len() != states.len() {
        return Err(Error::Dimension(format!("{} states but {} bases", states.len(), bases.len())));
    }
    let d = states.iter().map(DensityMatrix::dim).max().unwrap_or(1).max(2);
    let m = ancilla_dim_for(d);
    let n = states.len();
    let mut dims: Vec<usize> = states.iter().map(DensityMatrix::dim).collect();
    dims.push(m);
    let total = dims.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x)).unwrap_or(usize::MAX);
    check_cap(total)?;
    let layout = SubsystemLayout::new(dims)?;

    let catalyst = DensityMatrix::maximally_mixed(m);
    let mut factors: Vec<&ComplexMatrix> = states.iter().map(DensityMatrix::matrix).collect();
    factors.push(catalyst.matrix());
    let mut joint = tensor_all(&factors)?;

    let weyl = weyl_basis(m)?;
    for (k, (rho, basis)) in states.iter().zip(bases).enumerate() {
        if basis.dim() != rho.dim() {
            return Err(Error::Dimension(format!("basis {k} does not match its system")));
        }
        let v = ControlledUnitary::new(basis.clone(), weyl.ops()[..rho.dim()].to_vec())?;
        joint = apply_on_factors(&joint, &layout, &[k, n], v.to_unitary()?.matrix())?;
    }

    let marginals: Vec<ComplexMatrix> =
        (0..n).map(|k| partial_trace(&joint, &layout, &[k])).collect::<Result<_>>()?;
    let marginal_residuals = marginals
        .iter()
        .zip(states.iter().zip(bases))
        .map(|(out, (rho, b))| Ok(trace_norm(&(out - pinch(rho, b)?.matrix()))))
        .collect::<Result<Vec<f64>>>()?;
    let catalyst_out = partial_trace(&joint, &layout, &[n])?;
    let catalyst_residual = trace_norm(&(catalyst_out - catalyst.matrix()));

    let single: Vec<f64> = marginals.iter().map(operator_entropy).collect();
    let mut mutual_information = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let pair = operator_entropy(&partial_trace(&joint, &layout, &[i, j])?);
            mutual_information.push(PairInformation { i, j, bits: single[i] + single[j] - pair });
        }
    }

    let systems: Vec<usize> = (0..n).collect();
    let joint_systems = DensityMatrix::new_unchecked(partial_trace(&joint, &layout, &systems)?);
    Ok((joint_systems, ChainReport { ancilla_dim: m, marginal_residuals, catalyst_residual, mutual_information }))
}
