//! Random states, unitaries and majorizing pairs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::majorization::majorizes_vectors;
use super::matrix::{ComplexMatrix, C64};
use super::state::{DensityMatrix, UnitaryOperator};

/// Independent stream `trial` of the generator seeded by `master`. Streams
/// do not depend on the order in which they are requested.
pub fn trial_rng(master: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-random unit vector.
pub fn haar_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn haar_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    DensityMatrix::new_unchecked(ComplexMatrix::projector(&haar_ket(d, rng)))
}

/// Full-rank mixed state `G G^dagger / tr(G G^dagger)` with Ginibre `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new_unchecked(p.scale(1.0 / tr))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryOperator {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.into_dmatrix().qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOperator::new_unchecked(ComplexMatrix::from_dmatrix(q))
}

/// Uniform sample from the probability simplex.
pub fn random_probabilities<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let x: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = x.iter().sum();
    x.into_iter().map(|v| v / s).collect()
}

/// Mixed state with prescribed spectrum in a Haar-random eigenbasis.
pub fn state_with_spectrum<R: Rng + ?Sized>(spectrum: &[f64], rng: &mut R) -> DensityMatrix {
    let u = haar_unitary(spectrum.len(), rng);
    DensityMatrix::new_unchecked(ComplexMatrix::from_real_diagonal(spectrum).conjugate_by(u.matrix()))
}

/// Random `(rho, rho_prime)` with `rho` majorizing `rho_prime`. The target
/// spectrum is the image of the source spectrum under a random doubly
/// stochastic matrix (a convex mixture of permutations).
pub fn random_majorizing_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (DensityMatrix, DensityMatrix) {
    let lambda = random_probabilities(d, rng);
    let weights = random_probabilities(d, rng);
    let mut mixed = vec![0.0; d];
    for w in weights {
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(rng);
        for (slot, &p) in mixed.iter_mut().zip(&perm) {
            *slot += w * lambda[p];
        }
    }
    debug_assert!(majorizes_vectors(&lambda, &mixed));
    (state_with_spectrum(&lambda, rng), state_with_spectrum(&mixed, rng))
}
