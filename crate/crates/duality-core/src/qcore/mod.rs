//! Complex linear algebra and quantum-state types.
//!
//! All values are immutable after construction. Validation tolerances are
//! [`VALIDATION_TOL`] for construction checks and [`DRIFT_TOL`] for
//! post-operation drift.

mod density;
mod eigen;
mod matrix;
mod state;

pub use density::{DensityMatrix, Subsystem};
pub use eigen::hermitian_eigenvalues;
pub use matrix::{ComplexMatrix, Unitary};
pub use state::StateVector;

pub type C64 = num_complex::Complex64;

/// Tolerance for unitarity, hermiticity, trace and normalization checks.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance for numerical drift after an operation.
pub const DRIFT_TOL: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Values that combine by Kronecker product, first operand slow.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

/// Kronecker product of two states or two operators (control-major ordering).
pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// `u · s`; the result keeps the normalization status of `s`.
pub fn apply(u: &Unitary, s: &StateVector) -> crate::Result<StateVector> {
    u.apply(s)
}

/// `⟨φ|ρ|φ⟩`.
pub fn state_fidelity(rho: &DensityMatrix, phi: &StateVector) -> crate::Result<f64> {
    rho.fidelity(phi)
}

/// Reduced density matrix of a bipartite state `ρ` on `a ⊗ b`.
pub fn partial_trace(
    rho: &DensityMatrix,
    subsystem_dims: (usize, usize),
    keep: Subsystem,
) -> crate::Result<DensityMatrix> {
    rho.partial_trace(subsystem_dims, keep)
}
