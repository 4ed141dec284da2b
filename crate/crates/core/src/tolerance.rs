//! Numerical tolerances shared by every module.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// All numerical thresholds in one record.
///
/// A process-wide value may be installed once with [`install`]; otherwise the
/// defaults apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Maximum entry of `|A - A^dagger|` for a Hermitian matrix.
    pub hermitian: f64,
    /// Maximum deviation of a density matrix trace from one.
    pub trace: f64,
    /// Most negative eigenvalue accepted in a density matrix.
    pub min_eigenvalue: f64,
    /// Maximum entry of `|U U^dagger - 1|` for a unitary.
    pub unitary: f64,
    /// Eigenvalues in `[-eigen_clamp, 0)` are set to zero.
    pub eigen_clamp: f64,
    /// Eigenvalues below this contribute nothing to entropies.
    pub entropy_cutoff: f64,
    /// Slack in majorization partial sums.
    pub majorization: f64,
    /// Relative singular value threshold for numerical rank.
    pub rank_threshold: f64,
    /// Largest joint Hilbert space dimension that may be allocated.
    pub dimension_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            trace: 1e-12,
            min_eigenvalue: -1e-10,
            unitary: 1e-10,
            eigen_clamp: 1e-10,
            entropy_cutoff: 1e-14,
            majorization: 1e-10,
            rank_threshold: 1e-9,
            dimension_cap: 4096,
        }
    }
}

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

/// Installs the process-wide tolerances. Returns the rejected value if they
/// were already installed or already read.
pub fn install(tol: Tolerances) -> Result<(), Tolerances> {
    GLOBAL.set(tol)
}

/// The active tolerances.
pub fn tolerances() -> &'static Tolerances {
    GLOBAL.get_or_init(Tolerances::default)
}
