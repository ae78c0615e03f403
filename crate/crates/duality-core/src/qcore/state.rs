use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::{Tensor, C64, ONE, VALIDATION_TOL, ZERO};
use crate::{Error, Result};

/// Complex amplitudes over an ordered set of modes.
///
/// A state is either normalized (checked at construction) or explicitly
/// marked as an unnormalized intermediate, e.g. after lossy optics.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    labels: Option<Vec<String>>,
    normalized: bool,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_amplitudes(&amplitudes)?;
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            amplitudes,
            labels: None,
            normalized: true,
        })
    }

    /// An intermediate state whose norm is not constrained.
    pub fn unnormalized(amplitudes: Vec<C64>) -> Result<Self> {
        check_amplitudes(&amplitudes)?;
        Ok(Self {
            amplitudes,
            labels: None,
            normalized: false,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized_from(amplitudes: Vec<C64>) -> Result<Self> {
        Self::unnormalized(amplitudes)?.normalize()
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidParameter(alloc::format!(
                "basis index {k} outside dimension {dim}"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        Self::new(amps)
    }

    /// Equal superposition `Σ_k |k⟩ / √d`.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self::new(vec![a; dim])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<C64>) -> Self {
        Self {
            amplitudes,
            labels: self.labels.clone(),
            normalized: self.normalized,
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        self.normalized = true;
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Linear combination `a·self + b·other`, left unnormalized.
    pub fn superpose(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::unnormalized(
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(la), Some(lb)) => Some(
                la.iter()
                    .flat_map(|x| lb.iter().map(move |y| alloc::format!("{x}⊗{y}")))
                    .collect(),
            ),
            _ => None,
        };
        Self {
            amplitudes: amps,
            labels,
            normalized: self.normalized && other.normalized,
        }
    }
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn check_amplitudes(amps: &[C64]) -> Result<()> {
    if amps.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}
