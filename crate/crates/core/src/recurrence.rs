//! Recurrence unitaries: the dephasing unitary for `d = m^2`, `m` odd, whose
//! `k`-th power dephases for every `k` not divisible by `m` and returns the
//! system to its initial state at `k = m`. Also its continuous-time
//! interpolation through `H = i log V`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::dephaser::{pinch, ControlledUnitary};
use crate::error::{Error, Result};
use crate::qcore::{
    check_cap, partial_trace, tensor, tensor_all, trace_norm, ComplexMatrix, DensityMatrix, SubsystemLayout,
    UnitaryOperator, UnitarySpectrum, C64,
};
use crate::weylops::{tau_power, weyl_basis, weyl_operator, OrthonormalBasis};

fn prime_factors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        while m.is_multiple_of(p) {
            out.push(p);
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Ancilla dimension `m` (odd), system dimension `m^2`, and the prime
/// factors of `m` (with multiplicity, ascending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceSpec {
    m: usize,
    factors: Vec<usize>,
}

impl RecurrenceSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "recurrence needs odd m >= 3, got {m}; for even m see even_recurrence_diagnostic"
            )));
        }
        Ok(Self { m, factors: prime_factors(m) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.m * self.m
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1
    }

    /// Mixed-radix digits of `x < m`, first factor most significant.
    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &p) in out.iter_mut().zip(&self.factors).rev() {
            *slot = x % p;
            x /= p;
        }
        out
    }

    /// Ancilla operator controlled by the system label `|r, s>`.
    fn block(&self, r: usize, s: usize) -> Result<UnitaryOperator> {
        let (rd, sd) = (self.digits(r), self.digits(s));
        let parts: Vec<UnitaryOperator> = self
            .factors
            .iter()
            .zip(rd.iter().zip(&sd))
            .map(|(&p, (&a, &b))| weyl_operator(p, a as i64, b as i64))
            .collect::<Result<_>>()?;
        let mats: Vec<&ComplexMatrix> = parts.iter().map(UnitaryOperator::matrix).collect();
        Ok(UnitaryOperator::new_unchecked(tensor_all(&mats)?))
    }
}

/// `V = sum_{r,s} |r,s><r,s| (x) B_{r,s}` with `B_{r,s} = U_{r,s}` for prime
/// `m` and the tensor product of the factor Weyl operators otherwise. The
/// system label `|r, s>` is the computational state `r m + s`.
pub fn recurrence_unitary(spec: &RecurrenceSpec) -> Result<ControlledUnitary> {
    let m = spec.m();
    let mut blocks = Vec::with_capacity(m * m);
    for r in 0..m {
        for s in 0..m {
            blocks.push(spec.block(r, s)?);
        }
    }
    ControlledUnitary::new(OrthonormalBasis::computational(m * m), blocks)
}

/// `tr_R[V^k (rho (x) 1/m) V^{-k}]`.
pub fn stroboscopic_map(v: &ControlledUnitary, rho: &DensityMatrix, k: i64) -> Result<DensityMatrix> {
    let m = v.ancilla_dim();
    let out = v.pow(k).system_channel(rho.matrix(), DensityMatrix::maximally_mixed(m).matrix())?;
    Ok(DensityMatrix::new_unchecked(out))
}

/// The identity when `m` divides `k`, the pinch otherwise.
pub fn predicted_map(k: i64, m: usize, rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<DensityMatrix> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    if k.rem_euclid(m as i64) == 0 {
        Ok(rho.clone())
    } else {
        pinch(rho, basis)
    }
}

/// `tr_R[e^{-iHt} (rho (x) 1/m) e^{iHt}]` with `H = i log V`, computed from
/// the dense joint unitary. The ancilla dimension is `dim V / dim rho`.
pub fn continuous_evolution(v: &UnitaryOperator, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let d = rho.dim();
    if !v.dim().is_multiple_of(d) {
        return Err(Error::Dimension(format!("dimension {} is not a multiple of {d}", v.dim())));
    }
    let m = v.dim() / d;
    let evo = UnitarySpectrum::of(v).evolution(t);
    let joint = tensor(rho.matrix(), DensityMatrix::maximally_mixed(m).matrix())?.conjugate_by(&evo);
    let layout = SubsystemLayout::new(vec![d, m])?;
    Ok(DensityMatrix::new_unchecked(partial_trace(&joint, &layout, &[0])?))
}

/// Continuous-time evolution under a block-diagonal `V`, using one
/// eigendecomposition per block: `e^{-iHt}` is block diagonal with blocks
/// `B_i^t`, and the reduced state is `rho_ij (1/m) tr(B_i^t B_j^{-t})`.
pub struct RecurrenceEvolution {
    basis: OrthonormalBasis,
    spectra: Vec<UnitarySpectrum>,
    m: usize,
}

impl RecurrenceEvolution {
    pub fn new(v: &ControlledUnitary) -> Self {
        let spectra = v
            .blocks()
            .par_iter()
            .map(|b| UnitarySpectrum::of(&UnitaryOperator::new_unchecked(b.clone())))
            .collect();
        Self { basis: v.basis().clone(), spectra, m: v.ancilla_dim() }
    }

    /// Matrix of `(1/m) tr(B_i^t B_j^{-t})`.
    pub fn coherence_factors(&self, t: f64) -> ComplexMatrix {
        let powers: Vec<ComplexMatrix> = self.spectra.iter().map(|s| s.evolution(t)).collect();
        let n = powers.len();
        let inv_m = 1.0 / self.m as f64;
        let mut c = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let z = powers[j].inner(&powers[i]) * inv_m;
                c[(i, j)] = z;
                c[(j, i)] = z.conj();
            }
        }
        c
    }

    pub fn state_at(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        if rho.dim() != self.basis.dim() {
            return Err(Error::Dimension("state does not match the recurrence system".into()));
        }
        let c = self.coherence_factors(t);
        let local = self.basis.to_basis(rho.matrix());
        let n = rho.dim();
        let out = ComplexMatrix::from_fn(n, n, |i, j| local[(i, j)] * c[(i, j)]);
        Ok(DensityMatrix::new_unchecked(self.basis.from_basis(&out)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub t: f64,
    pub distance: f64,
}

/// `||rho(t) - pi(rho)||_1` over one period `t in [0, m]` for the maximally
/// coherent initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSweep {
    pub m: usize,
    pub points: Vec<SweepPoint>,
    /// Distance at `t = m / 2`.
    pub midpoint: f64,
}

impl TimeSweep {
    pub const CSV_HEADER: &'static str = "m,t_over_m,distance";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", self.m, p.t / self.m as f64, p.distance);
        }
        out
    }

    /// Points at the integer times `1, ..., m - 1`.
    pub fn interior_integer_points(&self) -> impl Iterator<Item = &SweepPoint> {
        let m = self.m as f64;
        self.points.iter().filter(move |p| p.t > 0.5 && p.t < m - 0.5 && (p.t - p.t.round()).abs() < 1e-12)
    }
}

/// Sweeps `samples_per_period + 1` evenly spaced times over `[0, m]`, plus
/// every integer time, for each `m`.
pub fn fig3_sweep(m_values: &[usize], samples_per_period: usize) -> Result<Vec<TimeSweep>> {
    if samples_per_period == 0 {
        return Err(Error::Precondition("at least one sample per period is needed".into()));
    }
    m_values
        .iter()
        .map(|&m| {
            let spec = RecurrenceSpec::new(m)?;
            check_cap(spec.d() * m)?;
            let v = recurrence_unitary(&spec)?;
            let evo = RecurrenceEvolution::new(&v);
            let d = spec.d();
            let rho = DensityMatrix::from_ket(&vec![C64::new(1.0, 0.0); d])?;
            let target = pinch(&rho, &OrthonormalBasis::computational(d))?;
            let mut times: Vec<f64> = (0..=samples_per_period).map(|j| m as f64 * j as f64 / samples_per_period as f64).collect();
            times.extend((0..=m).map(|k| k as f64));
            times.sort_by(f64::total_cmp);
            times.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            let distance = |t: f64| -> Result<f64> { Ok(trace_norm(&(evo.state_at(&rho, t)?.matrix() - target.matrix()))) };
            let points = times
                .par_iter()
                .map(|&t| Ok(SweepPoint { t, distance: distance(t)? }))
                .collect::<Result<Vec<_>>>()?;
            Ok(TimeSweep { m, points, midpoint: distance(m as f64 / 2.0)? })
        })
        .collect()
}

/// Least-squares `c` in `midpoint(m) ~ c / m`.
pub fn fit_inverse_m(sweeps: &[TimeSweep]) -> f64 {
    let num: f64 = sweeps.iter().map(|s| s.midpoint / s.m as f64).sum();
    let den: f64 = sweeps.iter().map(|s| 1.0 / (s.m * s.m) as f64).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `(1/m) tau^{k^2 (us - rv)} tr(U_{r-u, s-v}^k)`.
pub fn theta_kernel(m: usize, k: i64, r: i64, u: i64, s: i64, v: i64) -> Result<C64> {
    let base = weyl_operator(m, r - u, s - v)?;
    let tr = base.pow(k).matrix().trace();
    Ok(tau_power(m, k * k * (u * s - r * v)) * tr / m as f64)
}

/// Behaviour of the Weyl recurrence construction at `k = m` for even `m`.
#[derive(Debug, Clone, Serialize)]
pub struct EvenRecurrence {
    pub m: usize,
    /// Entries `(i, j)` whose coherence is multiplied by `-1`.
    pub sign_flips: Vec<(usize, usize)>,
    /// Whether every coherence factor at `k = m` is `+1` or `-1`.
    pub identity_up_to_signs: bool,
    /// Powers `0 < k < m` at which the map is not the pinch.
    pub non_dephasing_powers: Vec<usize>,
}

/// Reports the map `tr_R[V^m (. (x) 1/m) V^{-m}]` for even `m`.
pub fn even_recurrence_diagnostic(m: usize) -> Result<EvenRecurrence> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::Precondition(format!("diagnostic is for even m >= 2, got {m}")));
    }
    check_cap(m * m * m)?;
    let basis = weyl_basis(m)?;
    let v = ControlledUnitary::new(OrthonormalBasis::computational(m * m), basis.ops().to_vec())?;
    let c = v.pow(m as i64).coherence_factors(&DensityMatrix::maximally_mixed(m).into_matrix());
    let n = m * m;
    let mut sign_flips = Vec::new();
    let mut identity_up_to_signs = true;
    for i in 0..n {
        for j in 0..n {
            let z = c[(i, j)];
            if (z - C64::new(-1.0, 0.0)).norm() < 1e-9 {
                sign_flips.push((i, j));
            } else if (z - C64::new(1.0, 0.0)).norm() >= 1e-9 {
                identity_up_to_signs = false;
            }
        }
    }
    let non_dephasing_powers = (1..m)
        .filter(|&k| {
            let c = v.pow(k as i64).coherence_factors(&DensityMatrix::maximally_mixed(m).into_matrix());
            (0..n).any(|i| (0..n).any(|j| i != j && c[(i, j)].norm() > 1e-9))
        })
        .collect();
    Ok(EvenRecurrence { m, sign_flips, identity_up_to_signs, non_dephasing_powers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random::{random_density_matrix, trial_rng};

    fn comp(d: usize) -> OrthonormalBasis {
        OrthonormalBasis::computational(d)
    }

    fn dist(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
        trace_norm(&(a.matrix() - b.matrix()))
    }

    fn coherent(d: usize) -> DensityMatrix {
        DensityMatrix::from_ket(&vec![C64::new(1.0, 0.0); d]).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(RecurrenceSpec::new(4), Err(Error::Precondition(_))));
        assert!(RecurrenceSpec::new(1).is_err());
        let s = RecurrenceSpec::new(45).unwrap();
        assert_eq!(s.factors(), &[3, 3, 5]);
        assert_eq!(s.d(), 2025);
        assert!(RecurrenceSpec::new(7).unwrap().is_prime());
    }

    #[test]
    fn qutrit_recurrence() {
        let spec = RecurrenceSpec::new(3).unwrap();
        let v = recurrence_unitary(&spec).unwrap();
        let rho = random_density_matrix(9, &mut trial_rng(20, 0));
        let pinched = pinch(&rho, &comp(9)).unwrap();
        for k in [1, 2] {
            assert!(dist(&stroboscopic_map(&v, &rho, k).unwrap(), &pinched) < 1e-9);
        }
        assert!(dist(&stroboscopic_map(&v, &rho, 3).unwrap(), &rho) < 1e-9);
    }

    #[test]
    fn prime_five_returns_at_five() {
        let v = recurrence_unitary(&RecurrenceSpec::new(5).unwrap()).unwrap();
        let rho = random_density_matrix(25, &mut trial_rng(21, 0));
        assert!(dist(&stroboscopic_map(&v, &rho, 5).unwrap(), &rho) < 1e-9);
        assert!(dist(&stroboscopic_map(&v, &rho, -2).unwrap(), &pinch(&rho, &comp(25)).unwrap()) < 1e-9);
    }

    #[test]
    fn composite_nine_pinches_only_for_k_coprime_to_three() {
        // Tensor products of order-3 Weyl operators satisfy B^3 = 1, so the
        // construction for m = 9 recurs already at k = 3.
        let v = recurrence_unitary(&RecurrenceSpec::new(9).unwrap()).unwrap();
        let rho = random_density_matrix(81, &mut trial_rng(22, 0));
        let pinched = pinch(&rho, &comp(81)).unwrap();
        for k in [1, 2, 4, 5, 7, 8] {
            assert!(dist(&stroboscopic_map(&v, &rho, k).unwrap(), &pinched) < 1e-9, "k = {k}");
        }
        for k in [3, 6, 9] {
            assert!(dist(&stroboscopic_map(&v, &rho, k).unwrap(), &rho) < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn composite_fifteen_partially_dephases_at_three() {
        let v = recurrence_unitary(&RecurrenceSpec::new(15).unwrap()).unwrap();
        let rho = coherent(225);
        let pinched = pinch(&rho, &comp(225)).unwrap();
        for k in [1, 2, 4, 7, 8] {
            assert!(dist(&stroboscopic_map(&v, &rho, k).unwrap(), &pinched) < 1e-9, "k = {k}");
        }
        assert!(dist(&stroboscopic_map(&v, &rho, 15).unwrap(), &rho) < 1e-9);
        let at3 = stroboscopic_map(&v, &rho, 3).unwrap();
        assert!(dist(&at3, &pinched) > 0.1);
        assert!(dist(&at3, &rho) > 0.1);
    }

    #[test]
    fn predicted_map_cases() {
        let rho = random_density_matrix(9, &mut trial_rng(23, 0));
        let pinched = pinch(&rho, &comp(9)).unwrap();
        assert_eq!(predicted_map(0, 3, &rho, &comp(9)).unwrap(), rho);
        assert_eq!(predicted_map(1, 3, &rho, &comp(9)).unwrap(), pinched);
        assert_eq!(predicted_map(6, 3, &rho, &comp(9)).unwrap(), rho);
        assert_eq!(predicted_map(-4, 3, &rho, &comp(9)).unwrap(), pinched);
    }

    #[test]
    fn continuous_evolution_hits_discrete_points() {
        let spec = RecurrenceSpec::new(3).unwrap();
        let v = recurrence_unitary(&spec).unwrap();
        let dense = v.to_unitary().unwrap();
        let rho = random_density_matrix(9, &mut trial_rng(24, 0));
        let pinched = pinch(&rho, &comp(9)).unwrap();
        assert!(dist(&continuous_evolution(&dense, &rho, 0.0).unwrap(), &rho) < 1e-9);
        assert!(dist(&continuous_evolution(&dense, &rho, 1.0).unwrap(), &pinched) < 1e-8);
        assert!(dist(&continuous_evolution(&dense, &rho, 3.0).unwrap(), &rho) < 1e-8);

        let evo = RecurrenceEvolution::new(&v);
        for t in [0.0, 0.37, 1.0, 1.5, 2.2, 3.0] {
            let fast = evo.state_at(&rho, t).unwrap();
            let slow = continuous_evolution(&dense, &rho, t).unwrap();
            assert!(dist(&fast, &slow) < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn sweep_is_exact_at_integer_times() {
        let sweeps = fig3_sweep(&[3, 5], 8).unwrap();
        for s in &sweeps {
            assert_eq!(s.interior_integer_points().count(), s.m - 1);
            assert!(s.interior_integer_points().all(|p| p.distance < 1e-8));
            let full = 2.0 * (1.0 - 1.0 / (s.m * s.m) as f64);
            assert!((s.points[0].distance - full).abs() < 1e-8);
            assert!((s.points.last().unwrap().distance - full).abs() < 1e-8);
            assert!(s.midpoint > 0.0);
        }
        let csv = sweeps[0].to_csv();
        assert!(csv.starts_with("m,t_over_m,distance\n3,0,"));
        assert!(fit_inverse_m(&sweeps) > 0.0);
    }

    #[test]
    fn theta_kernel_is_a_recurrence_indicator() {
        for m in [3usize, 5] {
            let mi = m as i64;
            for k in 0..=2 * mi {
                for r in 0..mi {
                    for u in 0..mi {
                        for s in 0..mi {
                            for v in 0..mi {
                                let got = theta_kernel(m, k, r, u, s, v).unwrap();
                                let want = if k % mi == 0 || (r == u && s == v) { 1.0 } else { 0.0 };
                                assert!((got - C64::new(want, 0.0)).norm() < 1e-10, "m={m} k={k} {r}{u}{s}{v}: {got}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn even_m_recurs_but_does_not_dephase_at_every_power() {
        let two = even_recurrence_diagnostic(2).unwrap();
        assert!(two.identity_up_to_signs);
        assert!(two.non_dephasing_powers.is_empty());
        let four = even_recurrence_diagnostic(4).unwrap();
        assert!(four.identity_up_to_signs);
        assert_eq!(four.non_dephasing_powers, vec![2]);
        let six = even_recurrence_diagnostic(6).unwrap();
        assert_eq!(six.non_dephasing_powers, vec![2, 3, 4]);
        assert!(even_recurrence_diagnostic(3).is_err());
    }
}
