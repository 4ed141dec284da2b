//! Approximate dephasing from the Margulis expander walk, acting on discrete
//! Wigner functions one phase-space line at a time.
//!
//! For `d = e^2` with `e` odd, each line `{(p, q) : p in Z_d}` of the
//! phase space is read as an `e x e` lattice through `p = a e + b`, and the
//! same random affine map of the lattice is applied to every line. The walk
//! drives each line to its mean, which is the Wigner function of the
//! pinched state.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{hermitian_eigen, ComplexMatrix, DensityMatrix, C64};
use crate::weylops::omega_power;

/// Contraction factor of the Margulis walk.
pub fn margulis_contraction() -> f64 {
    5.0 * std::f64::consts::SQRT_2 / 8.0
}

/// `v -> L v + c` on `Z_e^2`, with `det L = 1 mod e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    e: usize,
    linear: [[i64; 2]; 2],
    offset: [i64; 2],
}

impl AffineMap {
    pub fn new(e: usize, linear: [[i64; 2]; 2], offset: [i64; 2]) -> Result<Self> {
        if e < 2 {
            return Err(Error::Precondition(format!("lattice size must be at least 2, got {e}")));
        }
        let m = e as i64;
        let det = (linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0]).rem_euclid(m);
        if det != 1 % m {
            return Err(Error::Precondition(format!("linear part has determinant {det} mod {e}, expected 1")));
        }
        let r = |x: i64| x.rem_euclid(m);
        Ok(Self {
            e,
            linear: [[r(linear[0][0]), r(linear[0][1])], [r(linear[1][0]), r(linear[1][1])]],
            offset: [r(offset[0]), r(offset[1])],
        })
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn linear(&self) -> [[i64; 2]; 2] {
        self.linear
    }

    pub fn offset(&self) -> [i64; 2] {
        self.offset
    }

    pub fn apply(&self, v: [usize; 2]) -> [usize; 2] {
        let m = self.e as i64;
        let (x, y) = (v[0] as i64, v[1] as i64);
        let l = &self.linear;
        [
            (l[0][0] * x + l[0][1] * y + self.offset[0]).rem_euclid(m) as usize,
            (l[1][0] * x + l[1][1] * y + self.offset[1]).rem_euclid(m) as usize,
        ]
    }

    /// `v -> L^{-1} (v - c)`.
    pub fn inverse(&self) -> Self {
        let l = &self.linear;
        let inv = [[l[1][1], -l[0][1]], [-l[1][0], l[0][0]]];
        let c = self.offset;
        let offset = [-(inv[0][0] * c[0] + inv[0][1] * c[1]), -(inv[1][0] * c[0] + inv[1][1] * c[1])];
        Self::new(self.e, inv, offset).expect("inverse has unit determinant")
    }

    /// Image of every lattice point, indexed `a e + b`.
    pub fn permutation(&self) -> Vec<usize> {
        let e = self.e;
        (0..e * e)
            .map(|i| {
                let [a, b] = self.apply([i / e, i % e]);
                a * e + b
            })
            .collect()
    }
}

/// `v -> T1 v, T2 v, T1 v + e1, T2 v + e2` and the four inverses, with
/// `T1 = (1 2; 0 1)`, `T2 = (1 0; 2 1)`.
pub fn margulis_maps(e: usize) -> Result<Vec<AffineMap>> {
    let t1 = [[1, 2], [0, 1]];
    let t2 = [[1, 0], [2, 1]];
    let forward = [
        AffineMap::new(e, t1, [0, 0])?,
        AffineMap::new(e, t2, [0, 0])?,
        AffineMap::new(e, t1, [1, 0])?,
        AffineMap::new(e, t2, [0, 1])?,
    ];
    let mut maps = forward.to_vec();
    maps.extend(forward.iter().map(AffineMap::inverse));
    Ok(maps)
}

/// Pull-back tables `g_j` of the eight maps.
fn pullbacks(e: usize) -> Result<Vec<Vec<usize>>> {
    Ok(margulis_maps(e)?.iter().map(AffineMap::permutation).collect())
}

/// One walk step on an arbitrary real function of the lattice.
fn walk(values: &[f64], tables: &[Vec<usize>]) -> Vec<f64> {
    (0..values.len())
        .map(|v| tables.iter().map(|g| values[g[v]]).sum::<f64>() / tables.len() as f64)
        .collect()
}

/// `S(P)(v) = (1/8) sum_j P(g_j(v))`.
pub fn classical_step(p: &[f64], e: usize) -> Result<Vec<f64>> {
    if p.len() != e * e {
        return Err(Error::Dimension(format!("distribution has {} entries, expected {}", p.len(), e * e)));
    }
    if p.iter().any(|&x| x < 0.0 || !x.is_finite()) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition("input must be a probability distribution".into()));
    }
    Ok(walk(p, &pullbacks(e)?))
}

/// `||P - u||_2` with `u` uniform.
pub fn distance_to_uniform(p: &[f64]) -> f64 {
    let u = 1.0 / p.len() as f64;
    p.iter().map(|x| (x - u).powi(2)).sum::<f64>().sqrt()
}

/// Discrete Wigner function `W(p, q) = tr(A(p, q) M) / d`, stored at index
/// `p d + q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerFunction {
    d: usize,
    values: Vec<f64>,
}

impl WignerFunction {
    pub fn new(d: usize, values: Vec<f64>) -> Result<Self> {
        require_odd(d)?;
        if values.len() != d * d {
            return Err(Error::Dimension(format!("{} values for a {d} x {d} phase space", values.len())));
        }
        Ok(Self { d, values })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.values[p * self.d + q]
    }

    /// The line of fixed `q`, ordered by `p`.
    pub fn column(&self, q: usize) -> Vec<f64> {
        (0..self.d).map(|p| self.get(p, q)).collect()
    }

    fn from_columns(d: usize, columns: &[Vec<f64>]) -> Self {
        let mut values = vec![0.0; d * d];
        for (q, col) in columns.iter().enumerate() {
            for (p, &x) in col.iter().enumerate() {
                values[p * d + q] = x;
            }
        }
        Self { d, values }
    }

    /// Column weights `x_q = sum_p W(p, q)`.
    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.d).map(|q| self.column(q).iter().sum()).collect()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Wigner function of the pinched operator: each column replaced by its
    /// mean.
    pub fn pinched(&self) -> Self {
        let columns: Vec<Vec<f64>> = self
            .column_sums()
            .into_iter()
            .map(|x| vec![x / self.d as f64; self.d])
            .collect();
        Self::from_columns(self.d, &columns)
    }

    /// `||W - V||_2` over phase space.
    pub fn distance(&self, other: &WignerFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

fn require_odd(d: usize) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::Precondition(format!("the Wigner construction needs odd d >= 3, got {d}")));
    }
    Ok(())
}

/// Wigner function of a Hermitian operator, using
/// `A(p, q)|k> = omega^{2p(q-k)} |2q - k>`.
pub fn wigner_of_operator(m: &ComplexMatrix) -> Result<WignerFunction> {
    let d = m.rows();
    require_odd(d)?;
    if !m.is_square() || !m.is_hermitian(1e-9) {
        return Err(Error::Precondition("Wigner functions are real only for Hermitian operators".into()));
    }
    let di = d as i64;
    let mut values = vec![0.0; d * d];
    for p in 0..di {
        for q in 0..di {
            let sum: C64 = (0..di)
                .map(|k| omega_power(d, 2 * p * (q - k)) * m[(k as usize, (2 * q - k).rem_euclid(di) as usize)])
                .sum();
            values[(p * di + q) as usize] = sum.re / d as f64;
        }
    }
    Ok(WignerFunction { d, values })
}

pub fn wigner_from_state(rho: &DensityMatrix) -> Result<WignerFunction> {
    wigner_of_operator(rho.matrix())
}

/// Inverse transform `M = sum_{p,q} W(p, q) A(p, q)`.
pub fn state_from_wigner(w: &WignerFunction) -> Result<ComplexMatrix> {
    let d = w.d;
    let di = d as i64;
    let half = (di + 1) / 2;
    Ok(ComplexMatrix::from_fn(d, d, |j, k| {
        let q = ((j + k) as i64 * half).rem_euclid(di);
        (0..di).map(|p| omega_power(d, 2 * p * (q - k as i64)) * w.get(p as usize, q as usize)).sum()
    }))
}

/// Lattice size `e`, `d = e^2`, and number of channel applications `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpanderSpec {
    e: usize,
    d: usize,
    k: usize,
}

impl ExpanderSpec {
    pub fn new(e: usize, k: usize) -> Result<Self> {
        if e < 3 || e.is_multiple_of(2) {
            return Err(Error::Precondition(format!("lattice size must be odd and >= 3, got {e}")));
        }
        Ok(Self { e, d: e * e, k })
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

fn lattice_size(d: usize) -> Result<usize> {
    let e = (d as f64).sqrt().round() as usize;
    if e * e != d || e < 3 || e.is_multiple_of(2) {
        return Err(Error::Precondition(format!("d = {d} is not the square of an odd e >= 3")));
    }
    Ok(e)
}

/// One application of the channel in the Wigner domain: every column is
/// walked as an `e x e` lattice with `p = a e + b`.
pub fn expander_channel_step(w: &WignerFunction) -> Result<WignerFunction> {
    let e = lattice_size(w.d)?;
    let tables = pullbacks(e)?;
    let columns: Vec<Vec<f64>> = (0..w.d).into_par_iter().map(|q| walk(&w.column(q), &tables)).collect();
    Ok(WignerFunction::from_columns(w.d, &columns))
}

/// `k` applications of the channel to a state, converting only at the ends.
pub fn expander_channel(rho: &DensityMatrix, k: usize) -> Result<ComplexMatrix> {
    let mut w = wigner_from_state(rho)?;
    for _ in 0..k {
        w = expander_channel_step(&w)?;
    }
    state_from_wigner(&w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub k: usize,
    /// `||T^k(rho) - pi(rho)||_2` from the density matrices.
    pub measured_2norm: f64,
    pub bound: f64,
    /// Smallest eigenvalue of `T^k(rho)`; positivity is monitored only.
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub e: usize,
    pub d: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "k,measured_2norm,bound";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            out.push_str(&format!("{},{:e},{:e}\n", r.k, r.measured_2norm, r.bound));
        }
        out
    }

    pub fn bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.measured_2norm <= r.bound)
    }

    /// Per-step decay from a least-squares fit of `ln(measured)` against `k`
    /// over points above `1e-12`. `None` with fewer than two such points.
    pub fn decay_rate(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.measured_2norm > 1e-12)
            .map(|r| (r.k as f64, r.measured_2norm.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some((sxy / sxx).exp())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.rows.iter().map(|r| r.min_eigenvalue).fold(f64::INFINITY, f64::min)
    }
}

/// `sqrt(2 d^3) (5 sqrt 2 / 8)^k`.
pub fn convergence_bound(d: usize, k: usize) -> f64 {
    (2.0 * (d as f64).powi(3)).sqrt() * margulis_contraction().powi(k as i32)
}

/// Compares `||T^k(rho) - pi(rho)||_2` with the convergence bound for
/// `k = 0..=spec.k()`.
pub fn theorem3_verify(spec: &ExpanderSpec, rho: &DensityMatrix) -> Result<ConvergenceReport> {
    if rho.dim() != spec.d {
        return Err(Error::Dimension(format!("state has dimension {}, expected {}", rho.dim(), spec.d)));
    }
    let pinched = ComplexMatrix::from_real_diagonal(&rho.populations());
    let mut w = wigner_from_state(rho)?;
    let mut rows = Vec::with_capacity(spec.k + 1);
    for k in 0..=spec.k {
        if k > 0 {
            w = expander_channel_step(&w)?;
        }
        let m = state_from_wigner(&w)?;
        let (eig, _) = hermitian_eigen(&m.hermitian_part());
        rows.push(ConvergenceRow {
            k,
            measured_2norm: (&m - &pinched).frobenius_norm(),
            bound: convergence_bound(spec.d, k),
            min_eigenvalue: eig.last().copied().unwrap_or(0.0),
        });
    }
    Ok(ConvergenceReport { e: spec.e, d: spec.d, rows })
}
