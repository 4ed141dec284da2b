//! Dense complex linear algebra and quantum primitives.

mod majorization;
mod matrix;
mod ops;
pub mod random;
mod spectral;
mod state;

pub use majorization::{majorizes, majorizes_vectors, schur_horn_unitary};
pub use matrix::{ComplexMatrix, C64, ONE, ZERO};
pub use ops::{apply_on_factors, check_cap, embed_operator, partial_trace, tensor, tensor_all};
pub use spectral::{
    fidelity, hamiltonian_from_unitary, hermitian_eigen, hermitian_evolution, numerical_rank, operator_entropy,
    shannon_entropy, singular_values, trace_norm, two_norm, von_neumann_entropy, UnitarySpectrum,
};
pub use state::{DensityMatrix, SubsystemLayout, UnitaryOperator};

/// Trace-norm distance between two operators of equal shape.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    trace_norm(&(a - b))
}
