use super::matrix::{ComplexMatrix, C64, ZERO};
use super::state::SubsystemLayout;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Errors if a joint dimension would exceed the configured cap.
pub fn check_cap(requested: usize) -> Result<()> {
    let cap = tolerances().dimension_cap;
    if requested > cap {
        return Err(Error::Resource { requested, cap });
    }
    Ok(())
}

/// Kronecker product `a (x) b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows().saturating_mul(b.rows());
    let cols = a.cols().saturating_mul(b.cols());
    check_cap(rows.max(cols))?;
    Ok(a.kron(b))
}

/// Kronecker product of a list, left to right.
pub fn tensor_all(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let Some((first, rest)) = factors.split_first() else {
        return Ok(ComplexMatrix::identity(1));
    };
    rest.iter().try_fold((*first).clone(), |acc, m| tensor(&acc, m))
}

/// Joint indices grouped by the digits outside `selected`.
///
/// `groups[r][s]` is the joint index whose selected digits (in the order given
/// by `selected`) encode `s` and whose remaining digits encode `r`.
fn index_groups(layout: &SubsystemLayout, selected: &[usize]) -> Vec<Vec<usize>> {
    let dims = layout.dims();
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !selected.contains(k)).collect();
    let sel_dim: usize = selected.iter().map(|&k| dims[k]).product();
    let rest_dim: usize = rest.iter().map(|&k| dims[k]).product();
    let mut groups = vec![vec![0; sel_dim]; rest_dim];
    for i in 0..layout.total() {
        let digits = layout.digits(i);
        let s = selected.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
        let r = rest.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
        groups[r][s] = i;
    }
    groups
}

fn check_factor_set(layout: &SubsystemLayout, factors: &[usize], what: &str) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::Precondition(format!("{what}: empty factor set")));
    }
    for (n, &k) in factors.iter().enumerate() {
        if k >= layout.len() {
            return Err(Error::Dimension(format!("{what}: factor {k} out of range")));
        }
        if factors[..n].contains(&k) {
            return Err(Error::Precondition(format!("{what}: factor {k} repeated")));
        }
    }
    Ok(())
}

/// Reduced operator on the factors in `keep`, listed in ascending order.
pub fn partial_trace(op: &ComplexMatrix, layout: &SubsystemLayout, keep: &[usize]) -> Result<ComplexMatrix> {
    layout.check(op)?;
    check_factor_set(layout, keep, "partial trace")?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let groups = index_groups(layout, &keep);
    let k = groups[0].len();
    let mut out = ComplexMatrix::zeros(k, k);
    for g in &groups {
        for (a, &ia) in g.iter().enumerate() {
            for (b, &ib) in g.iter().enumerate() {
                out[(a, b)] += op[(ia, ib)];
            }
        }
    }
    Ok(out)
}

/// `(u (x) 1) op (u (x) 1)^dagger` where `u` acts on the listed factors (in
/// the order given) and the identity on the rest. Costs O(D^2 F) instead of
/// the O(D^3) of a dense product.
pub fn apply_on_factors(
    op: &ComplexMatrix,
    layout: &SubsystemLayout,
    factors: &[usize],
    u: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    layout.check(op)?;
    check_factor_set(layout, factors, "local operator")?;
    let groups = index_groups(layout, factors);
    let f = groups[0].len();
    if u.rows() != f || u.cols() != f {
        return Err(Error::Dimension(format!(
            "local operator is {}x{}, factors have dimension {f}",
            u.rows(),
            u.cols()
        )));
    }
    let n = op.rows();
    let mut left = ComplexMatrix::zeros(n, n);
    let mut buf = vec![ZERO; f];
    for g in &groups {
        for c in 0..n {
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = (0..f).map(|b| u[(a, b)] * op[(g[b], c)]).sum();
            }
            for (a, &ia) in g.iter().enumerate() {
                left[(ia, c)] = buf[a];
            }
        }
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for g in &groups {
        for r in 0..n {
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = (0..f).map(|b| left[(r, g[b])] * u[(a, b)].conj()).sum::<C64>();
            }
            for (a, &ia) in g.iter().enumerate() {
                out[(r, ia)] = buf[a];
            }
        }
    }
    Ok(out)
}

/// Dense `u (x) 1` on the joint space, with `u` placed on the listed factors.
pub fn embed_operator(u: &ComplexMatrix, layout: &SubsystemLayout, factors: &[usize]) -> Result<ComplexMatrix> {
    check_factor_set(layout, factors, "embedding")?;
    check_cap(layout.total())?;
    let groups = index_groups(layout, factors);
    let f = groups[0].len();
    if u.rows() != f || u.cols() != f {
        return Err(Error::Dimension("embedded operator does not match factor dimension".into()));
    }
    let n = layout.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for g in &groups {
        for (a, &ia) in g.iter().enumerate() {
            for (b, &ib) in g.iter().enumerate() {
                out[(ia, ib)] = u[(a, b)];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::ONE;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    fn sample(n: usize, seed: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| C64::new((seed * (i * 7 + j * 3 + 1) as f64).sin(), (seed * (i + 5 * j) as f64).cos()))
    }

    #[test]
    fn identity_tensor() {
        let t = tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap();
        assert_eq!(t, ComplexMatrix::identity(6));
    }

    #[test]
    fn x_on_first_qubit_flips_it() {
        let op = tensor(&pauli_x(), &ComplexMatrix::identity(2)).unwrap();
        let out = op.apply(&[ONE, ZERO, ZERO, ZERO]);
        assert_eq!(out, vec![ZERO, ZERO, ONE, ZERO]);
    }

    #[test]
    fn cap_enforced() {
        let big = ComplexMatrix::identity(65);
        assert!(matches!(tensor(&big, &big), Err(Error::Resource { requested: 4225, cap: 4096 })));
    }

    #[test]
    fn trace_of_tensor_multiplies() {
        let a = sample(3, 0.3);
        let b = sample(3, 0.7);
        let t = tensor(&a, &b).unwrap();
        assert!((t.trace() - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn tensor_is_associative() {
        let (a, b, c) = (sample(2, 0.1), sample(3, 0.2), sample(2, 0.3));
        let l = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let r = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        assert!((l - r).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_by_index_sums() {
        let op = sample(6, 0.41);
        let layout = SubsystemLayout::new(vec![2, 3]).unwrap();
        let a = partial_trace(&op, &layout, &[0]).unwrap();
        let b = partial_trace(&op, &layout, &[1]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want: C64 = (0..3).map(|k| op[(3 * i + k, 3 * j + k)]).sum();
                assert!((a[(i, j)] - want).norm() < 1e-14);
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let want: C64 = (0..2).map(|k| op[(3 * k + i, 3 * k + j)]).sum();
                assert!((b[(i, j)] - want).norm() < 1e-14);
            }
        }
        assert!((a.trace() - op.trace()).norm() < 1e-12);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexMatrix::projector(&[C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]);
        let layout = SubsystemLayout::new(vec![2, 2]).unwrap();
        for keep in [0, 1] {
            let m = partial_trace(&phi, &layout, &[keep]).unwrap();
            assert!((m - ComplexMatrix::identity(2).scale(0.5)).max_abs() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_errors() {
        let layout = SubsystemLayout::new(vec![2, 3]).unwrap();
        assert!(matches!(partial_trace(&sample(5, 0.1), &layout, &[0]), Err(Error::Dimension(_))));
        assert!(partial_trace(&sample(6, 0.1), &layout, &[]).is_err());
        assert!(partial_trace(&sample(6, 0.1), &layout, &[2]).is_err());
    }

    #[test]
    fn local_application_matches_dense_embedding() {
        let layout = SubsystemLayout::new(vec![2, 3, 2]).unwrap();
        let op = sample(12, 0.37);
        let u = sample(4, 0.11);
        for factors in [[0usize, 2], [2, 0]] {
            let fast = apply_on_factors(&op, &layout, &factors, &u).unwrap();
            let big = embed_operator(&u, &layout, &factors).unwrap();
            let dense = &(&big * &op) * &big.adjoint();
            assert!((fast - dense).max_abs() < 1e-12);
        }
        let single = embed_operator(&pauli_x(), &layout, &[0]).unwrap();
        let want = tensor(&pauli_x(), &ComplexMatrix::identity(6)).unwrap();
        assert_eq!(single, want);
    }
}
