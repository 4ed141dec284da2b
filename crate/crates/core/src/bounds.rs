//! Approximate dephasing and lower bounds on the dimension of the source of
//! randomness.

use std::f64::consts::E;

use rayon::prelude::*;
use serde::Serialize;

use crate::dephaser::{pinch, NoisyChannel};
use crate::error::{Error, Result};
use crate::qcore::random::{haar_pure_state, trial_rng};
use crate::qcore::{numerical_rank, partial_trace, trace_norm, von_neumann_entropy, C64, DensityMatrix, SubsystemLayout};
use crate::weylops::OrthonormalBasis;

/// Number of Haar-random probes added to the maximally coherent state.
pub const RANDOM_PROBES: usize = 20;

/// Largest `epsilon` for which the quantum bound is established.
pub fn quantum_epsilon_limit() -> f64 {
    1.0 / (6.0 * E)
}

fn coherent_ket(basis: &OrthonormalBasis) -> Vec<C64> {
    let d = basis.dim();
    let s = 1.0 / (d as f64).sqrt();
    let mut ket = vec![C64::new(0.0, 0.0); d];
    for i in 0..d {
        for (k, x) in basis.vector(i).into_iter().enumerate() {
            ket[k] += x * s;
        }
    }
    ket
}

/// `|A><A|` with `|A> = d^{-1/2} sum_i |i>`.
pub fn maximally_coherent_state(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::Precondition(format!("dimension must be at least 2, got {d}")));
    }
    DensityMatrix::from_ket(&vec![C64::new(1.0 / (d as f64).sqrt(), 0.0); d])
}

/// The maximally coherent state in `basis` followed by
/// [`RANDOM_PROBES`] Haar-random pure states from `seed`.
pub fn standard_probes(basis: &OrthonormalBasis, seed: u64) -> Result<Vec<DensityMatrix>> {
    let d = basis.dim();
    let mut probes = vec![DensityMatrix::from_ket(&coherent_ket(basis))?];
    probes.extend((0..RANDOM_PROBES).map(|t| haar_pure_state(d, &mut trial_rng(seed, t as u64))));
    Ok(probes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Classical,
    Quantum,
}

impl Kind {
    pub fn of(channel: &NoisyChannel) -> Self {
        match channel {
            NoisyChannel::QuantumDilation { .. } => Kind::Quantum,
            NoisyChannel::ClassicalMixture { .. } => Kind::Classical,
        }
    }
}

/// Worst-case dephasing error of a channel and the dimension bound it
/// implies. `bound` is `None` when the measured error lies outside the
/// range where the bound is established.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonDephasingReport {
    pub d: usize,
    pub m: usize,
    pub kind: Kind,
    pub epsilon_measured: f64,
    pub bound: Option<f64>,
    pub satisfied: bool,
}

/// `max_rho ||E(rho) - pi_A(rho)||_1` over `probes`, which must contain the
/// maximally coherent state of `basis`.
pub fn measure_epsilon(
    channel: &NoisyChannel,
    basis: &OrthonormalBasis,
    probes: &[DensityMatrix],
) -> Result<EpsilonDephasingReport> {
    let d = channel.system_dim();
    if basis.dim() != d {
        return Err(Error::Dimension(format!("basis dimension {} for a channel on dimension {d}", basis.dim())));
    }
    let a = DensityMatrix::from_ket(&coherent_ket(basis))?;
    if !probes.iter().any(|p| p.dim() == d && (p.matrix() - a.matrix()).max_abs() < 1e-12) {
        return Err(Error::Precondition("probes must include the maximally coherent state".into()));
    }
    let distances = probes
        .par_iter()
        .map(|rho| Ok(trace_norm(&(channel.apply(rho)?.matrix() - pinch(rho, basis)?.matrix()))))
        .collect::<Result<Vec<f64>>>()?;
    let epsilon_measured = distances.into_iter().fold(0.0, f64::max);
    let m = channel.randomness_dim();
    let kind = Kind::of(channel);
    let bound = match kind {
        Kind::Classical => classical_lower_bound(d, epsilon_measured.min(2.0)).ok(),
        Kind::Quantum => quantum_lower_bound(d, epsilon_measured).ok(),
    };
    let satisfied = bound.is_none_or(|b| m as f64 >= b - 1e-9);
    Ok(EpsilonDephasingReport { d, m, kind, epsilon_measured, bound, satisfied })
}

/// `max{2, d (1 - epsilon/2)}`.
pub fn classical_lower_bound(d: usize, epsilon: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&epsilon) {
        return Err(Error::Precondition(format!("epsilon must lie in [0, 2], got {epsilon}")));
    }
    Ok(f64::max(2.0, d as f64 * (1.0 - epsilon / 2.0)))
}

/// `max{2, d^{(1-epsilon)/2} epsilon^{epsilon/2}}` for
/// `0 <= epsilon <= 1/(6e)`, with `epsilon^{epsilon/2} = 1` at zero.
pub fn quantum_lower_bound(d: usize, epsilon: f64) -> Result<f64> {
    if !(0.0..=quantum_epsilon_limit()).contains(&epsilon) {
        return Err(Error::Precondition(format!(
            "the quantum bound holds for 0 <= epsilon <= 1/(6e), got {epsilon}"
        )));
    }
    let tail = if epsilon == 0.0 { 1.0 } else { epsilon.powf(epsilon / 2.0) };
    Ok(f64::max(2.0, (d as f64).powf((1.0 - epsilon) / 2.0) * tail))
}

/// Smallest integer dimension meeting a real-valued bound.
pub fn minimal_dimension(bound: f64) -> usize {
    (bound - 1e-9).ceil().max(1.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    pub m: usize,
    pub rank: usize,
    pub holds: bool,
}

/// Rank of `E(|A><A|)` for a mixture of `m` unitaries, which cannot exceed
/// `m`.
pub fn rank_witness(channel: &NoisyChannel) -> Result<RankWitness> {
    if Kind::of(channel) != Kind::Classical {
        return Err(Error::Precondition("the rank witness applies to classical mixtures".into()));
    }
    let out = channel.apply(&maximally_coherent_state(channel.system_dim())?)?;
    let rank = numerical_rank(out.matrix());
    let m = channel.randomness_dim();
    Ok(RankWitness { m, rank, holds: rank <= m })
}

/// Entropies along `log m = S(A) + S(1/m) = S(joint) >= |S(out) - S(R')|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyBudget {
    pub d: usize,
    pub m: usize,
    pub log_m: f64,
    pub joint_entropy: f64,
    pub system_entropy: f64,
    pub ancilla_entropy: f64,
    pub triangle_holds: bool,
    /// `|S(out) - S(R')| = log m` within `1e-9`.
    pub saturated: bool,
}

/// Evaluates the entropy chain for a dilation acting on the maximally
/// coherent state.
pub fn entropy_budget_check(channel: &NoisyChannel) -> Result<EntropyBudget> {
    let NoisyChannel::QuantumDilation { ancilla_dim, .. } = channel else {
        return Err(Error::Precondition("the entropy budget needs a dilation".into()));
    };
    let (d, m) = (channel.system_dim(), *ancilla_dim);
    let a = if d == 1 { DensityMatrix::maximally_mixed(1) } else { maximally_coherent_state(d)? };
    let joint = DensityMatrix::new_unchecked(channel.joint_output(&a, &DensityMatrix::maximally_mixed(m))?);
    let layout = SubsystemLayout::new(vec![d, m])?;
    let system = DensityMatrix::new_unchecked(partial_trace(joint.matrix(), &layout, &[0])?);
    let ancilla = DensityMatrix::new_unchecked(partial_trace(joint.matrix(), &layout, &[1])?);
    let log_m = (m as f64).log2();
    let joint_entropy = von_neumann_entropy(&joint);
    let (system_entropy, ancilla_entropy) = (von_neumann_entropy(&system), von_neumann_entropy(&ancilla));
    let gap = (system_entropy - ancilla_entropy).abs();
    Ok(EntropyBudget {
        d,
        m,
        log_m,
        joint_entropy,
        system_entropy,
        ancilla_entropy,
        triangle_holds: joint_entropy >= gap - 1e-9,
        saturated: (gap - log_m).abs() <= 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dephaser::{build_dephasing_unitary, classical_dephasing_channel};
    use crate::qcore::UnitaryOperator;
    use crate::weylops::clock_z;

    #[test]
    fn maximally_coherent_examples() {
        let plus = maximally_coherent_state(2).unwrap();
        assert!(plus.matrix().entries_row_major().iter().all(|x| (x.re - 0.5).abs() < 1e-15 && x.im == 0.0));
        let a = maximally_coherent_state(7).unwrap();
        assert!((a.purity() - 1.0).abs() < 1e-12);
        assert!(a.populations().iter().all(|p| (p - 1.0 / 7.0).abs() < 1e-14));
        let out = pinch(&a, &OrthonormalBasis::computational(7)).unwrap();
        assert!((out.matrix() - DensityMatrix::maximally_mixed(7).matrix()).max_abs() < 1e-14);
        assert!(maximally_coherent_state(1).is_err());
    }

    #[test]
    fn exact_constructions_have_zero_epsilon() {
        for d in [2, 5, 9] {
            let basis = OrthonormalBasis::computational(d);
            let probes = standard_probes(&basis, 3).unwrap();
            assert_eq!(probes.len(), 21);
            for ch in [build_dephasing_unitary(d, &basis).unwrap(), classical_dephasing_channel(d).unwrap()] {
                let r = measure_epsilon(&ch, &basis, &probes).unwrap();
                assert!(r.epsilon_measured <= 1e-10, "{r:?}");
                assert!(r.satisfied);
            }
        }
        let fourier = OrthonormalBasis::fourier(4);
        let ch = build_dephasing_unitary(4, &fourier).unwrap();
        let r = measure_epsilon(&ch, &fourier, &standard_probes(&fourier, 1).unwrap()).unwrap();
        assert!(r.epsilon_measured <= 1e-10);
    }

    #[test]
    fn identity_channel_epsilon() {
        let d = 4;
        let basis = OrthonormalBasis::computational(d);
        let a = maximally_coherent_state(d).unwrap();
        let r = measure_epsilon(&NoisyChannel::identity(d), &basis, std::slice::from_ref(&a)).unwrap();
        let expected = trace_norm(&(a.matrix() - DensityMatrix::maximally_mixed(d).matrix()));
        assert!((r.epsilon_measured - expected).abs() < 1e-12);
        assert!((expected - 1.5).abs() < 1e-12);
        assert!(measure_epsilon(&NoisyChannel::identity(d), &basis, &[DensityMatrix::maximally_mixed(d)]).is_err());
    }

    #[test]
    fn truncated_mixture_obeys_rank_argument() {
        let d = 6;
        let z = clock_z(d).unwrap();
        let ch = NoisyChannel::classical((1..d as i64).map(|j| z.pow(j)).collect()).unwrap();
        let w = rank_witness(&ch).unwrap();
        assert_eq!((w.m, w.rank), (5, 5));
        assert!(w.holds);
        let basis = OrthonormalBasis::computational(d);
        let r = measure_epsilon(&ch, &basis, &standard_probes(&basis, 2).unwrap()).unwrap();
        assert!(r.epsilon_measured >= 2.0 * (1.0 - w.rank as f64 / d as f64) - 1e-12);
        assert!(r.satisfied);
    }

    #[test]
    fn classical_bound_examples() {
        assert_eq!(classical_lower_bound(7, 0.0).unwrap(), 7.0);
        assert_eq!(classical_lower_bound(7, 2.0).unwrap(), 2.0);
        assert!((classical_lower_bound(4, 0.5).unwrap() - 3.0).abs() < 1e-15);
        assert!(classical_lower_bound(4, 2.5).is_err());
    }

    #[test]
    fn quantum_bound_examples() {
        assert!((quantum_lower_bound(49, 0.0).unwrap() - 7.0).abs() < 1e-12);
        for d in 2..=4 {
            assert_eq!(quantum_lower_bound(d, 0.0).unwrap(), 2.0);
            assert_eq!(quantum_lower_bound(d, 0.05).unwrap(), 2.0);
        }
        let v = quantum_lower_bound(16, 0.05).unwrap();
        let log_domain = (0.475 * 16f64.ln() + 0.025 * 0.05f64.ln()).exp();
        assert!((v - log_domain).abs() < 1e-12);
        assert!((v - 3.46283).abs() < 1e-4);
        assert!(quantum_lower_bound(16, 0.1).is_err());
        assert!(quantum_lower_bound(16, -0.01).is_err());
        for d in 2..=64 {
            let m = crate::dephaser::ancilla_dim_for(d) as f64;
            assert!(m >= quantum_lower_bound(d, 0.0).unwrap() - 1e-12);
        }
    }

    #[test]
    fn optima_meet_bounds_at_zero() {
        for d in 2..=16 {
            assert_eq!(minimal_dimension(classical_lower_bound(d, 0.0).unwrap()), d);
            assert_eq!(minimal_dimension(quantum_lower_bound(d, 0.0).unwrap()), crate::dephaser::ancilla_dim_for(d));
        }
    }

    #[test]
    fn entropy_budget_examples() {
        let b = entropy_budget_check(&build_dephasing_unitary(4, &OrthonormalBasis::computational(4)).unwrap()).unwrap();
        assert!((b.joint_entropy - 1.0).abs() < 1e-9);
        assert!((b.system_entropy - 2.0).abs() < 1e-9);
        assert!((b.ancilla_entropy - 1.0).abs() < 1e-9);
        assert!(b.triangle_holds && b.saturated);
        let b = entropy_budget_check(&build_dephasing_unitary(9, &OrthonormalBasis::computational(9)).unwrap()).unwrap();
        assert!((b.system_entropy - b.ancilla_entropy).abs() <= 3f64.log2() + 1e-9);
        let trivial = NoisyChannel::quantum(UnitaryOperator::identity(1), 1).unwrap();
        let b = entropy_budget_check(&trivial).unwrap();
        assert_eq!((b.log_m, b.joint_entropy), (0.0, 0.0));
        assert!(b.triangle_holds);
        assert!(entropy_budget_check(&classical_dephasing_channel(3).unwrap()).is_err());
    }

    #[test]
    fn report_json_fields() {
        let basis = OrthonormalBasis::computational(3);
        let ch = classical_dephasing_channel(3).unwrap();
        let r = measure_epsilon(&ch, &basis, &standard_probes(&basis, 0).unwrap()).unwrap();
        let v = serde_json::to_value(r).unwrap();
        assert_eq!(v["kind"], "classical");
        for f in ["d", "m", "epsilon_measured", "bound", "satisfied"] {
            assert!(v.get(f).is_some());
        }
    }
}
