use crate::error::{Error, Result};
use crate::qcore::{check_cap, ComplexMatrix, SubsystemLayout, UnitaryOperator, C64};
use crate::weylops::OrthonormalBasis;

/// Block-diagonal unitary `V = sum_i |a_i><a_i| (x) U_i` on system (x) ancilla.
///
/// Channels induced by `V` are evaluated block by block, which avoids ever
/// forming the `dm x dm` matrix.
#[derive(Debug, Clone)]
pub struct ControlledUnitary {
    basis: OrthonormalBasis,
    blocks: Vec<ComplexMatrix>,
}

impl ControlledUnitary {
    pub fn new(basis: OrthonormalBasis, blocks: Vec<UnitaryOperator>) -> Result<Self> {
        if blocks.len() != basis.dim() {
            return Err(Error::Dimension(format!(
                "{} blocks for a basis of dimension {}",
                blocks.len(),
                basis.dim()
            )));
        }
        let m = blocks[0].dim();
        if blocks.iter().any(|b| b.dim() != m) {
            return Err(Error::Dimension("controlled blocks of unequal dimension".into()));
        }
        Ok(Self { basis, blocks: blocks.into_iter().map(UnitaryOperator::into_matrix).collect() })
    }

    pub fn system_dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn ancilla_dim(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn layout(&self) -> SubsystemLayout {
        SubsystemLayout::new(vec![self.system_dim(), self.ancilla_dim()]).expect("non-zero dimensions")
    }

    /// The dense unitary on the joint space.
    pub fn to_unitary(&self) -> Result<UnitaryOperator> {
        let (d, m) = (self.system_dim(), self.ancilla_dim());
        check_cap(d * m)?;
        let mut out = ComplexMatrix::zeros(d * m, d * m);
        for (i, u) in self.blocks.iter().enumerate() {
            out = out + self.basis.projector(i).kron(u);
        }
        Ok(UnitaryOperator::new_unchecked(out))
    }

    /// `V^k`, negative `k` giving powers of the adjoint.
    pub fn pow(&self, k: i64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|u| if k < 0 { u.adjoint() } else { u.clone() }.pow(k.unsigned_abs()))
            .collect();
        Self { basis: self.basis.clone(), blocks }
    }

    fn check_inputs(&self, rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<()> {
        if rho.rows() != self.system_dim() || !rho.is_square() {
            return Err(Error::Dimension(format!(
                "system operator is {}x{}, expected dimension {}",
                rho.rows(),
                rho.cols(),
                self.system_dim()
            )));
        }
        if sigma.rows() != self.ancilla_dim() || !sigma.is_square() {
            return Err(Error::Dimension(format!(
                "ancilla operator is {}x{}, expected dimension {}",
                sigma.rows(),
                sigma.cols(),
                self.ancilla_dim()
            )));
        }
        Ok(())
    }

    /// `tr_R[V (rho (x) sigma) V^dagger]`. In the control basis the entry
    /// `(i, j)` is multiplied by `tr(U_i sigma U_j^dagger)`.
    pub fn system_channel(&self, rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_inputs(rho, sigma)?;
        let coeffs = self.coherence_factors(sigma);
        let local = self.basis.to_basis(rho);
        let d = self.system_dim();
        let out = ComplexMatrix::from_fn(d, d, |i, j| local[(i, j)] * coeffs[(i, j)]);
        Ok(self.basis.from_basis(&out))
    }

    /// Matrix of `tr(U_i sigma U_j^dagger)`.
    pub fn coherence_factors(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        let left: Vec<ComplexMatrix> = self.blocks.iter().map(|u| u * sigma).collect();
        let d = self.system_dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.blocks[j].inner(&left[i]))
    }

    /// `tr_S[V (rho (x) sigma) V^dagger] = sum_i <a_i|rho|a_i> U_i sigma U_i^dagger`.
    pub fn ancilla_channel(&self, rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_inputs(rho, sigma)?;
        let local = self.basis.to_basis(rho);
        let m = self.ancilla_dim();
        let mut out = ComplexMatrix::zeros(m, m);
        for (i, u) in self.blocks.iter().enumerate() {
            let w: C64 = local[(i, i)];
            if w.norm() > 0.0 {
                out = out + sigma.conjugate_by(u).scale_complex(w);
            }
        }
        Ok(out)
    }
}
