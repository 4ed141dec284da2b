use super::matrix::{ComplexMatrix, C64};
use super::state::{DensityMatrix, UnitaryOperator};
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Whether probability vector `a` majorizes `b` (equal totals, dominating
/// descending partial sums), within the majorization tolerance.
pub fn majorizes_vectors(a: &[f64], b: &[f64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let tol = tolerances().majorization;
    let (a, b) = (sorted_desc(a), sorted_desc(b));
    let (mut sa, mut sb) = (0.0, 0.0);
    for (x, y) in a.iter().zip(&b) {
        sa += x;
        sb += y;
        if sa < sb - tol {
            return false;
        }
    }
    (sa - sb).abs() <= tol
}

/// `rho` majorizes `rho_prime`: `rho_prime` is reachable from `rho` by noisy
/// operations.
pub fn majorizes(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<bool> {
    if rho.dim() != rho_prime.dim() {
        return Err(Error::Dimension(format!(
            "cannot compare spectra of dimensions {} and {}",
            rho.dim(),
            rho_prime.dim()
        )));
    }
    Ok(majorizes_vectors(&rho.eigenvalues(), &rho_prime.eigenvalues()))
}

fn descending_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    idx
}

/// A unitary `V` with `diag(V diag(spectrum) V^dagger) = target_diagonal`.
///
/// Built from a sequence of real plane rotations: at each step the largest
/// outstanding target value is placed on one index by rotating two
/// neighbouring active eigenvalues that bracket it, after which that index is
/// frozen.
pub fn schur_horn_unitary(spectrum: &[f64], target_diagonal: &[f64]) -> Result<UnitaryOperator> {
    let n = spectrum.len();
    if n == 0 || target_diagonal.len() != n {
        return Err(Error::Dimension(format!(
            "spectrum has length {n}, target has length {}",
            target_diagonal.len()
        )));
    }
    if !majorizes_vectors(spectrum, target_diagonal) {
        return Err(Error::Precondition("target diagonal is not majorized by the spectrum".into()));
    }
    let spec_order = descending_order(spectrum);
    let target_order = descending_order(target_diagonal);

    // Rotation frame: rows are indexed by descending spectrum position.
    let mut w = vec![vec![0.0f64; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut value: Vec<f64> = spec_order.iter().map(|&k| spectrum[k]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut fixed_at = vec![0usize; n];

    for (t, &tk) in target_order.iter().enumerate() {
        let goal = target_diagonal[tk];
        if active.len() == 1 {
            fixed_at[t] = active[0];
            break;
        }
        let pos = (0..active.len() - 1)
            .find(|&k| value[active[k]] >= goal && goal >= value[active[k + 1]])
            .unwrap_or(if goal > value[active[0]] { 0 } else { active.len() - 2 });
        let (p, q) = (active[pos], active[pos + 1]);
        let (a, b) = (value[p], value[q]);
        let c2 = if a - b > 1e-15 { ((goal - b) / (a - b)).clamp(0.0, 1.0) } else { 1.0 };
        let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
        for col in 0..n {
            let (x, y) = (w[p][col], w[q][col]);
            w[p][col] = c * x - s * y;
            w[q][col] = s * x + c * y;
        }
        value[q] = a + b - goal;
        value[p] = goal;
        fixed_at[t] = p;
        active.remove(pos);
    }

    // V = Pi * W * S: S sorts the spectrum, Pi places each fixed row at its
    // target position.
    let mut v = ComplexMatrix::zeros(n, n);
    for (t, &tk) in target_order.iter().enumerate() {
        let row = fixed_at[t];
        for (col, &orig) in spec_order.iter().enumerate() {
            v[(tk, orig)] = C64::new(w[row][col], 0.0);
        }
    }
    UnitaryOperator::new(v)
}
