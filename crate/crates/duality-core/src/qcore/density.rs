use alloc::format;
use alloc::vec::Vec;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::{hermitian_eigenvalues, ComplexMatrix, StateVector, C64, VALIDATION_TOL, ZERO};
use crate::{Error, Result};

/// Which factor of a bipartite space to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// The slow (control) factor.
    First,
    /// The fast (target) factor.
    Second,
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity (smallest eigenvalue
    /// `≥ -1e-9`).
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let rho = Self::checked_without_spectrum(m)?;
        let min = rho.eigenvalues()[0];
        if min < -VALIDATION_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    fn checked_without_spectrum(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        let herm = m.hermiticity_deviation();
        if herm > VALIDATION_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a normalized state (unnormalized inputs are rescaled).
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        Self::from_ensemble(&[(1.0, psi.clone())])
    }

    /// `Σ w_i |ψ_i⟩⟨ψ_i| / Σ w_i ‖ψ_i‖²`.
    ///
    /// Positive by construction, so only hermiticity and trace are checked.
    pub fn from_ensemble(ensemble: &[(f64, StateVector)]) -> Result<Self> {
        let first = ensemble
            .first()
            .ok_or_else(|| Error::InvalidDensity("empty ensemble".into()))?;
        let n = first.1.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        let mut total = 0.0;
        for (w, psi) in ensemble {
            if psi.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: psi.dim(),
                });
            }
            if !(*w >= 0.0) {
                return Err(Error::InvalidDensity(format!("negative weight {w}")));
            }
            if *w == 0.0 {
                continue;
            }
            let a = psi.amplitudes();
            for r in 0..n {
                if a[r] == ZERO {
                    continue;
                }
                for c in 0..n {
                    let v = m[(r, c)] + a[r] * a[c].conj() * *w;
                    m.set(r, c, v);
                }
            }
            total += w * psi.norm().powi(2);
        }
        if total <= 0.0 {
            return Err(Error::InvalidDensity("zero total weight".into()));
        }
        Self::checked_without_spectrum(m.scale(C64::new(1.0 / total, 0.0)))
    }

    /// Mixture `Σ w_i ρ_i` with weights summing to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidDensity("empty mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in parts {
            if *w < 0.0 {
                return Err(Error::InvalidDensity(format!("negative weight {w}")));
            }
            acc = acc.add(&rho.0.scale(C64::new(*w, 0.0)))?;
        }
        Self::checked_without_spectrum(acc)
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Self::checked_without_spectrum(
            ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)),
        )
    }

    /// Two-qubit Werner state `v·|Φ⁺⟩⟨Φ⁺| + (1-v)·I/4` with Bell weight `v`.
    pub fn werner(visibility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::InvalidParameter(format!(
                "Werner visibility {visibility} outside [0,1]"
            )));
        }
        let bell = Self::from_pure(&bell_phi_plus())?;
        let mixed = Self::maximally_mixed(4)?;
        Self::mixture(&[(visibility, &bell), (1.0 - visibility, &mixed)])
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn entry(&self, r: usize, c: usize) -> C64 {
        self.0[(r, c)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨φ|ρ|φ⟩`.
    pub fn fidelity(&self, phi: &StateVector) -> Result<f64> {
        if phi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: phi.dim(),
            });
        }
        let rho_phi = self.0.mul_vec(phi.amplitudes())?;
        let v: C64 = phi
            .amplitudes()
            .iter()
            .zip(&rho_phi)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(v.re)
    }

    /// `Tr[ρ O]` for an arbitrary operator.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        Ok(self.0.matmul(op)?.trace())
    }

    /// Reduced state on one factor of `dims.0 ⊗ dims.1` (first factor slow).
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<Self> {
        let (a, b) = dims;
        if a * b != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a * b,
            });
        }
        let rho = &self.0;
        let reduced = match keep {
            Subsystem::First => ComplexMatrix::from_fn(a, a, |i, j| {
                (0..b).map(|k| rho[(i * b + k, j * b + k)]).sum()
            }),
            Subsystem::Second => ComplexMatrix::from_fn(b, b, |i, j| {
                (0..a).map(|k| rho[(k * b + i, k * b + j)]).sum()
            }),
        };
        Self::checked_without_spectrum(reduced)
    }
}

/// `(|00⟩ + |11⟩)/√2`.
pub(crate) fn bell_phi_plus() -> StateVector {
    let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    StateVector::new(alloc::vec![h, ZERO, ZERO, h]).expect("normalized")
}
