//! Small-dimension linear algebra and random sources.

mod eigen;
mod matrix;
mod rng;

pub use eigen::{eigh_hermitian, singular_values, HermitianEigen, RealSym3, MAX_EIGH_DIM, MAX_SWEEPS, OFF_DIAG_TOL};
pub use matrix::{kron, partial_trace, paulis, qubit_count, ComplexMatrix, HERMITIAN_TOL, TRACE_TOL};
pub use rng::{haar_random_pure, SeededRng, MAX_QUBITS};

pub(crate) use matrix::{validate_subset, SplitIndex};
