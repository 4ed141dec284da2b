use std::fmt::Write as _;

use serde::Serialize;

use super::channel::{ancilla_dim_for, dephasing_unitary, pinch};
use super::controlled::ControlledUnitary;
use crate::error::{Error, Result};
use crate::qcore::{trace_norm, von_neumann_entropy, DensityMatrix};
use crate::weylops::OrthonormalBasis;

/// The universal dephasing machine: the optimal dephasing unitary fed with
/// an arbitrary (not necessarily maximally mixed) ancilla.
#[derive(Debug, Clone)]
pub struct DephasingMachine {
    unitary: ControlledUnitary,
    basis: OrthonormalBasis,
}

/// One iteration of [`DephasingMachine::iterate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MachineRow {
    pub n: usize,
    /// `||D_{sigma_n} ... D_{sigma_1}(rho) - pi(rho)||_1`.
    pub dist_system: f64,
    /// `||D~_rho^n(sigma_1) - 1/m||_1`.
    pub dist_ancilla: f64,
    /// Entropy in bits of the system after `n` steps.
    pub entropy: f64,
    /// `prod_i ||sigma_i - 1/m||_1`.
    pub bound: f64,
    /// `||rho - 1/d||_1^n`.
    pub ancilla_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MachineReport {
    pub initial_dist_system: f64,
    pub initial_dist_ancilla: f64,
    pub initial_entropy: f64,
    pub rows: Vec<MachineRow>,
}

impl MachineReport {
    pub const CSV_HEADER: &'static str = "n,dist_system,dist_ancilla,entropy,bound";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.n, r.dist_system, r.dist_ancilla, r.entropy, r.bound);
        }
        out
    }

    /// Whether every row respects both product bounds within `slack`.
    pub fn bounds_hold(&self, slack: f64) -> bool {
        self.rows
            .iter()
            .all(|r| r.dist_system <= r.bound + slack && r.dist_ancilla <= r.ancilla_bound + slack)
    }

    /// Whether entropy never decreases by more than `slack`.
    pub fn entropy_monotone(&self, slack: f64) -> bool {
        let mut prev = self.initial_entropy;
        self.rows.iter().all(|r| {
            let ok = r.entropy >= prev - slack;
            prev = r.entropy;
            ok
        })
    }
}

impl DephasingMachine {
    pub fn new(d: usize, basis: &OrthonormalBasis) -> Result<Self> {
        Ok(Self { unitary: dephasing_unitary(d, basis)?, basis: basis.clone() })
    }

    pub fn system_dim(&self) -> usize {
        self.unitary.system_dim()
    }

    pub fn ancilla_dim(&self) -> usize {
        self.unitary.ancilla_dim()
    }

    fn check(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.system_dim() || sigma.dim() != self.ancilla_dim() {
            return Err(Error::Dimension(format!(
                "machine acts on ({}, {}), got ({}, {})",
                self.system_dim(),
                self.ancilla_dim(),
                rho.dim(),
                sigma.dim()
            )));
        }
        Ok(())
    }

    /// `D_sigma(rho) = tr_R[U (rho (x) sigma) U^dagger]`.
    pub fn dephase(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DensityMatrix> {
        self.check(rho, sigma)?;
        Ok(DensityMatrix::new_unchecked(self.unitary.system_channel(rho.matrix(), sigma.matrix())?))
    }

    /// `D~_rho(sigma) = tr_S[U (rho (x) sigma) U^dagger]`.
    pub fn mix(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DensityMatrix> {
        self.check(rho, sigma)?;
        Ok(DensityMatrix::new_unchecked(self.unitary.ancilla_channel(rho.matrix(), sigma.matrix())?))
    }

    pub fn step(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
        Ok((self.dephase(rho, sigma)?, self.mix(rho, sigma)?))
    }

    /// Two tracks side by side: the system dephased by the ancillas of
    /// `sigma_stream` in turn, and the first ancilla mixed by fresh copies of
    /// `rho`, each compared with its fixed point and its product bound.
    pub fn iterate(&self, rho: &DensityMatrix, sigma_stream: &[DensityMatrix]) -> Result<MachineReport> {
        let Some(first) = sigma_stream.first() else {
            return Ok(MachineReport {
                initial_dist_system: 0.0,
                initial_dist_ancilla: 0.0,
                initial_entropy: von_neumann_entropy(rho),
                rows: Vec::new(),
            });
        };
        self.check(rho, first)?;
        let m = self.ancilla_dim();
        let uniform_m = DensityMatrix::maximally_mixed(m);
        let pinched = pinch(rho, &self.basis)?;
        let rho_spread = trace_norm(&(rho.matrix() - DensityMatrix::maximally_mixed(rho.dim()).matrix()));

        let mut system = rho.clone();
        let mut ancilla = first.clone();
        let mut bound = 1.0;
        let mut ancilla_bound = 1.0;
        let mut rows = Vec::with_capacity(sigma_stream.len());
        for (k, sigma) in sigma_stream.iter().enumerate() {
            system = self.dephase(&system, sigma)?;
            ancilla = self.mix(rho, &ancilla)?;
            bound *= trace_norm(&(sigma.matrix() - uniform_m.matrix()));
            ancilla_bound *= rho_spread;
            rows.push(MachineRow {
                n: k + 1,
                dist_system: trace_norm(&(system.matrix() - pinched.matrix())),
                dist_ancilla: trace_norm(&(ancilla.matrix() - uniform_m.matrix())),
                entropy: von_neumann_entropy(&system),
                bound,
                ancilla_bound,
            });
        }
        Ok(MachineReport {
            initial_dist_system: trace_norm(&(rho.matrix() - pinched.matrix())),
            initial_dist_ancilla: trace_norm(&(first.matrix() - uniform_m.matrix())),
            initial_entropy: von_neumann_entropy(rho),
            rows,
        })
    }

    /// Purifies a noisy ancilla by mixing it with fresh copies of `rho` until
    /// it is within `threshold` of maximally mixed (at most `max_rounds`),
    /// then dephases a fresh copy of `rho` with it.
    pub fn distill_noise(
        &self,
        rho: &DensityMatrix,
        sigma: &DensityMatrix,
        threshold: f64,
        max_rounds: usize,
    ) -> Result<DistillationReport> {
        self.check(rho, sigma)?;
        let uniform_m = DensityMatrix::maximally_mixed(self.ancilla_dim());
        let rho_spread = trace_norm(&(rho.matrix() - DensityMatrix::maximally_mixed(rho.dim()).matrix()));
        let predicted_rounds = if rho_spread < 1.0 && threshold > 0.0 {
            let start = trace_norm(&(sigma.matrix() - uniform_m.matrix())).min(1.0);
            Some(if start < threshold { 0 } else { ((threshold.ln()) / rho_spread.ln()).ceil().max(0.0) as usize })
        } else {
            None
        };
        let mut ancilla = sigma.clone();
        let mut rounds = 0;
        let mut dist = trace_norm(&(ancilla.matrix() - uniform_m.matrix()));
        while dist >= threshold && rounds < max_rounds {
            ancilla = self.mix(rho, &ancilla)?;
            dist = trace_norm(&(ancilla.matrix() - uniform_m.matrix()));
            rounds += 1;
        }
        let out = self.dephase(rho, &ancilla)?;
        let residual = trace_norm(&(out.matrix() - pinch(rho, &self.basis)?.matrix()));
        Ok(DistillationReport { rounds, predicted_rounds, ancilla_distance: dist, dephasing_residual: residual })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistillationReport {
    pub rounds: usize,
    /// `ceil(ln threshold / ln ||rho - 1/d||_1)` when that norm is below one.
    pub predicted_rounds: Option<usize>,
    pub ancilla_distance: f64,
    pub dephasing_residual: f64,
}

fn machine_for(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DephasingMachine> {
    let d = rho.dim();
    if sigma.dim() != ancilla_dim_for(d) {
        return Err(Error::Dimension(format!(
            "ancilla must have dimension {} for d = {d}, got {}",
            ancilla_dim_for(d),
            sigma.dim()
        )));
    }
    DephasingMachine::new(d, &OrthonormalBasis::computational(d))
}

/// `(D_sigma(rho), D~_rho(sigma))` for the computational basis.
pub fn machine_step(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
    machine_for(rho, sigma)?.step(rho, sigma)
}

/// [`DephasingMachine::iterate`] for the computational basis.
pub fn machine_iterate(rho: &DensityMatrix, sigma_stream: &[DensityMatrix]) -> Result<MachineReport> {
    match sigma_stream.first() {
        Some(s) => machine_for(rho, s)?.iterate(rho, sigma_stream),
        None => DephasingMachine::new(rho.dim(), &OrthonormalBasis::computational(rho.dim()))?.iterate(rho, &[]),
    }
}
