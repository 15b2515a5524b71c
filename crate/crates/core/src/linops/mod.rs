//! Dense complex linear algebra over labeled multipartite systems.

mod eigen;
mod matrix;
mod shape;
mod state;

pub use eigen::{
    canonical_eigenvectors, hermitian_eigen, hermitian_eigenvalues, hermitian_eigenvalues_jacobi, hermitize,
    HermitianEigen,
};
pub use matrix::ComplexMatrix;
pub use shape::{permutation_index_map, SubsystemShape};
pub use state::{
    partial_trace, partial_transpose, permute_matrix, purify, purify_with_label, tensor_product, PureStateVector,
    QuantumState,
};

/// Pauli matrices and other fixed single-qubit operators.
pub mod pauli {
    use super::ComplexMatrix;
    use crate::scalar::{c, Real};

    pub fn i2<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::identity(2)
    }

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    /// |k⟩⟨k| on a qubit.
    pub fn proj<T: Real>(k: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(k, k)] = c(1.0, 0.0);
        m
    }

    /// |k⟩ as a 2x1 column.
    pub fn ket<T: Real>(k: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(2, 1);
        m[(k, 0)] = c(1.0, 0.0);
        m
    }
}
