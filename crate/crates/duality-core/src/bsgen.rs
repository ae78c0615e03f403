//! Balanced `d`-mode beamsplitters and the path phase array.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::qcore::{ComplexMatrix, Unitary, C64};
use crate::{Error, Result};

/// Generalized Hadamard: `h_ij = (-1)^popcount(i & j) / √d`.
pub fn hadamard(d: usize) -> Result<Unitary> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(d));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let m = ComplexMatrix::from_fn(d, d, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(sign * amp, 0.0)
    });
    Unitary::new(m)
}

/// Discrete Fourier matrix `e^{2πi·jk/d} / √d`.
pub fn fourier(d: usize) -> Result<Unitary> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let m = ComplexMatrix::from_fn(d, d, |j, k| {
        // Reduce jk mod d first so large products keep full phase precision.
        let phase = TAU * ((j * k) % d) as f64 / d as f64;
        C64::from_polar(amp, phase)
    });
    Unitary::new(m)
}

/// `diag(e^{iθ_0}, …, e^{iθ_{d-1}})`.
pub fn phase_operator(p: &PhaseArray) -> Unitary {
    let diag: Vec<C64> = p.phases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    Unitary::new(ComplexMatrix::diagonal(&diag)).expect("unit-modulus diagonal")
}

/// `θ_k = k(θ - π)` for `k = 0..d`.
pub fn linear_ramp(d: usize, theta: f64) -> Result<PhaseArray> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    PhaseArray::new((0..d).map(|k| k as f64 * (theta - PI)).collect())
}

/// Maps any real angle to `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let w = x - TAU * ((x - PI) / TAU).ceil();
    // ceil can land one period low when x - π is an exact negative multiple.
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BeamsplitterKind {
    Hadamard,
    Fourier,
    Custom(Unitary),
}

/// A balanced (or user-supplied) `d`-mode beamsplitter.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BeamsplitterSpec {
    kind: BeamsplitterKind,
    dim: usize,
}

impl BeamsplitterSpec {
    pub fn new(kind: BeamsplitterKind, dim: usize) -> Result<Self> {
        match &kind {
            BeamsplitterKind::Hadamard if dim < 2 || !dim.is_power_of_two() => {
                return Err(Error::NotPowerOfTwo(dim))
            }
            BeamsplitterKind::Fourier if dim < 2 => return Err(Error::InvalidDimension(dim)),
            BeamsplitterKind::Custom(u) if u.dim() != dim => {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.dim(),
                })
            }
            _ => {}
        }
        Ok(Self { kind, dim })
    }

    /// Hadamard for powers of two, Fourier otherwise.
    pub fn balanced(dim: usize) -> Result<Self> {
        if dim.is_power_of_two() && dim >= 2 {
            Self::new(BeamsplitterKind::Hadamard, dim)
        } else {
            Self::new(BeamsplitterKind::Fourier, dim)
        }
    }

    pub fn kind(&self) -> &BeamsplitterKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unitary(&self) -> Unitary {
        match &self.kind {
            BeamsplitterKind::Hadamard => hadamard(self.dim).expect("validated"),
            BeamsplitterKind::Fourier => fourier(self.dim).expect("validated"),
            BeamsplitterKind::Custom(u) => u.clone(),
        }
    }
}

/// Per-path phases. Values are stored as given; [`PhaseArray::canonical`]
/// wraps them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseArray {
    phases: Vec<f64>,
}

impl PhaseArray {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { phases })
    }

    pub fn zeros(d: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0; d])
    }

    pub fn d(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn canonical(&self) -> Vec<f64> {
        self.phases.iter().map(|&p| wrap_phase(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn hadamard_entries_by_hand() {
        let h2 = hadamard(2).unwrap();
        assert!((h2.matrix()[(1, 1)].re + FRAC_1_SQRT_2).abs() < 1e-15);
        // 3 & 3 = 0b11 has two set bits, so the sign is +.
        assert!((hadamard(4).unwrap().matrix()[(3, 3)].re - 0.5).abs() < 1e-15);
        assert!((hadamard(4).unwrap().matrix()[(1, 3)].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn hadamard_rejects_non_power_of_two() {
        assert_eq!(hadamard(6), Err(Error::NotPowerOfTwo(6)));
        assert!(BeamsplitterSpec::new(BeamsplitterKind::Hadamard, 3).is_err());
    }

    #[test]
    fn fourier_entry_by_hand() {
        let f3 = fourier(3).unwrap();
        let want = C64::from_polar(1.0 / 3f64.sqrt(), 4.0 * PI / 3.0);
        assert!((f3.matrix()[(1, 2)] - want).norm() < 1e-15);
        let h2 = hadamard(2).unwrap();
        let f2 = fourier(2).unwrap();
        assert!(f2.matrix().distance(h2.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn balanced_choice_by_dimension() {
        assert_eq!(BeamsplitterSpec::balanced(8).unwrap().kind(), &BeamsplitterKind::Hadamard);
        assert_eq!(BeamsplitterSpec::balanced(6).unwrap().kind(), &BeamsplitterKind::Fourier);
    }

    #[test]
    fn ramp_examples() {
        assert!(linear_ramp(4, PI).unwrap().phases().iter().all(|&p| p == 0.0));
        assert_eq!(linear_ramp(2, 0.0).unwrap().phases(), &[0.0, -PI]);
        let r = linear_ramp(8, 1.5 * PI).unwrap();
        assert!((r.phases()[7] - 3.5 * PI).abs() < 1e-12);
        assert!((r.canonical()[7] + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn wrapping_boundaries() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!(wrap_phase(-3.0 * PI) > 0.0);
        assert_eq!(wrap_phase(0.25), 0.25);
    }

    #[test]
    fn phase_operator_examples() {
        let p = PhaseArray::new(alloc::vec![0.0, PI]).unwrap();
        let u = phase_operator(&p);
        assert!((u.matrix()[(1, 1)] + 1.0).norm() < 1e-15);
        let id = phase_operator(&PhaseArray::zeros(5).unwrap());
        assert_eq!(id.matrix(), &ComplexMatrix::identity(5));
    }
}
