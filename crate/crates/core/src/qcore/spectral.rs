use std::f64::consts::PI;

use super::matrix::{ComplexMatrix, C64};
use super::state::{DensityMatrix, UnitaryOperator};
use crate::tolerance::tolerances;

/// Eigenvalues (descending) and matching eigenvector columns of the
/// Hermitian part of `m`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let h = m.hermitian_part().into_dmatrix();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.rows();
    let vecs = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.as_dmatrix().clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let scale = a.max_abs().max(1.0);
    if a.is_hermitian(1e-13 * scale) {
        hermitian_eigen(a).0.iter().map(|x| x.abs()).sum()
    } else {
        singular_values(a).iter().sum()
    }
}

/// Frobenius norm.
pub fn two_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// Number of singular values above `rank_threshold` times the largest.
pub fn numerical_rank(a: &ComplexMatrix) -> usize {
    let s = singular_values(a);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    let cut = tolerances().rank_threshold * top;
    s.iter().filter(|&&x| x > cut).count()
}

/// Shannon entropy in bits of a probability vector, ignoring entries below
/// the entropy cutoff.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    let cut = tolerances().entropy_cutoff;
    -p.iter().filter(|&&x| x > cut).map(|&x| x * x.log2()).sum::<f64>()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// Entropy of a positive semidefinite matrix that has not been wrapped as a
/// state (for example a large joint operator).
pub fn operator_entropy(m: &ComplexMatrix) -> f64 {
    let clamp = tolerances().eigen_clamp;
    let vals: Vec<f64> = hermitian_eigen(m).0.into_iter().map(|x| if x < 0.0 && x >= -clamp { 0.0 } else { x }).collect();
    shannon_entropy(&vals)
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let roots: Vec<C64> = vals.iter().map(|&x| C64::new(x.max(0.0).sqrt(), 0.0)).collect();
    let sqrt_rho = ComplexMatrix::from_diagonal(&roots).conjugate_by(&vecs);
    let inner = sigma.matrix().conjugate_by(&sqrt_rho);
    let s: f64 = hermitian_eigen(&inner).0.iter().map(|&x| x.max(0.0).sqrt()).sum();
    s * s
}

/// Spectral decomposition `U = Q diag(exp(-i lambda)) Q^dagger` with
/// `lambda` in `(-pi, pi]`.
#[derive(Clone, Debug)]
pub struct UnitarySpectrum {
    pub energies: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitarySpectrum {
    pub fn of(u: &UnitaryOperator) -> Self {
        let m = u.matrix().as_dmatrix().clone();
        let n = m.nrows();
        let schur = m
            .clone()
            .try_schur(1e-15, 10_000)
            .unwrap_or_else(|| m.schur());
        let (q, t) = schur.unpack();
        let energies = (0..n)
            .map(|i| {
                let mut lambda = -t[(i, i)].arg();
                if lambda <= -PI {
                    lambda += 2.0 * PI;
                }
                lambda
            })
            .collect();
        Self { energies, vectors: ComplexMatrix::from_dmatrix(q) }
    }

    /// `H = Q diag(lambda) Q^dagger`.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.energies.iter().map(|&x| C64::new(x, 0.0)).collect();
        ComplexMatrix::from_diagonal(&d).conjugate_by(&self.vectors)
    }

    /// `exp(-i H t)`.
    pub fn evolution(&self, t: f64) -> ComplexMatrix {
        let d: Vec<C64> = self.energies.iter().map(|&x| C64::from_polar(1.0, -x * t)).collect();
        ComplexMatrix::from_diagonal(&d).conjugate_by(&self.vectors)
    }
}

/// `H = i log U` on the principal branch, so that `exp(-iH) = U`.
pub fn hamiltonian_from_unitary(u: &UnitaryOperator) -> ComplexMatrix {
    UnitarySpectrum::of(u).hamiltonian()
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn hermitian_evolution(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let d: Vec<C64> = vals.iter().map(|&x| C64::from_polar(1.0, -x * t)).collect();
    ComplexMatrix::from_diagonal(&d).conjugate_by(&vecs)
}
