use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::FringeProbe;
use crate::delayed_choice::{Herald, InterferometerConfig};
use crate::qcore::{DensityMatrix, StateVector, C64, I, ZERO};
use crate::{Error, Result};

/// Which readout of the interferometer a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Family {
    /// Coherent wave-particle superposition.
    Quantum,
    /// Classical wave-particle mixture.
    Classical,
}

impl Family {
    pub fn herald(self) -> Herald {
        match self {
            Family::Quantum => Herald::Control1,
            Family::Classical => Herald::TraceOut,
        }
    }
}

/// `Σ_{i≠j} |ρ_ij|`, divided by `d - 1` when `normalized`.
pub fn l1_coherence(rho: &DensityMatrix, normalized: bool) -> f64 {
    let d = rho.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += rho.entry(i, j).norm();
            }
        }
    }
    match (normalized, d) {
        (false, _) => sum,
        (true, 1) => 0.0,
        (true, _) => sum / (d - 1) as f64,
    }
}

/// `√(1 - ((1/(d-1)) Σ_{i≠j} √(ρ_ii ρ_jj))²)`.
pub fn distinguishability(rho: &DensityMatrix) -> Result<f64> {
    distinguishability_from_diagonal(&rho.diagonal())
}

/// [`distinguishability`] from the diagonal alone.
pub fn distinguishability_from_diagonal(diag: &[f64]) -> Result<f64> {
    let d = diag.len();
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let roots: Vec<f64> = diag.iter().map(|p| p.max(0.0).sqrt()).collect();
    let total: f64 = roots.iter().sum();
    let squares: f64 = diag.iter().map(|p| p.max(0.0)).sum();
    // Σ_{i≠j} √(ρ_ii ρ_jj) = (Σ√ρ_ii)² - Σρ_ii.
    let overlap = (total * total - squares) / (d - 1) as f64;
    let radicand = 1.0 - overlap * overlap;
    if radicand < -1e-12 {
        return Err(Error::InvalidDensity(format!("distinguishability radicand {radicand:e}")));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// `(1/d) Σ ρ_ii`.
pub fn incoherent_term(diag: &[f64]) -> Result<f64> {
    if diag.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    if diag.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::InvalidParameter(format!("diagonal entries must be nonnegative: {diag:?}")));
    }
    Ok(diag.iter().sum::<f64>() / diag.len() as f64)
}

/// `ρ_ii` read off the probe with one path open at a time, normalized.
pub fn operational_diagonal<P: FringeProbe + ?Sized>(probe: &P) -> Result<Vec<f64>> {
    let q = (0..probe.dim())
        .map(|i| probe.single_path_probability(i))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = q.iter().sum();
    if !(total > 0.0) {
        return Err(Error::AllPathsBlocked);
    }
    Ok(q.into_iter().map(|x| x / total).collect())
}

/// The state of target photon and measurement for detection port `port`.
///
/// With `h` the second beamsplitter, `c = cos(α/2)`, `s = sin(α/2)` and
/// `p` the source noise weight:
/// * quantum: `∝ (1-p)|v⟩⟨v| + (p/2)(|e_m⟩⟨e_m| + |h_m⟩⟨h_m|)` with
///   `v_k = c·δ_mk - i e^{iδ} s·h_mk`;
/// * classical: `(1-p)(c²|e_m⟩⟨e_m| + s²|h_m⟩⟨h_m|) + (p/2)(|e_m⟩⟨e_m| + |h_m⟩⟨h_m|)`.
///
/// Phases and blocking in `cfg` do not enter.
pub fn measurement_density(
    cfg: &InterferometerConfig,
    family: Family,
    port: usize,
) -> Result<DensityMatrix> {
    let d = cfg.d();
    if port >= d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: port,
        });
    }
    let h = cfg.bs2().unitary();
    let row: Vec<C64> = h.matrix().row(port).to_vec();
    let mut e = vec![ZERO; d];
    e[port] = C64::new(1.0, 0.0);
    let (c, s) = cfg.control().half_angles();
    let p = cfg.source_noise();
    let noise = [
        (0.5 * p, StateVector::unnormalized(e.clone())?),
        (0.5 * p, StateVector::unnormalized(row.clone())?),
    ];
    let mut members: Vec<(f64, StateVector)> = match family {
        Family::Quantum => {
            let steer = -I * C64::from_polar(s, cfg.control().delta);
            let v = e.iter().zip(&row).map(|(ek, hk)| ek * c + steer * hk).collect();
            vec![(1.0 - p, StateVector::unnormalized(v)?)]
        }
        Family::Classical => vec![
            ((1.0 - p) * c * c, StateVector::unnormalized(e)?),
            ((1.0 - p) * s * s, StateVector::unnormalized(row)?),
        ],
    };
    members.extend(noise);
    members.retain(|(w, _)| *w > 0.0);
    DensityMatrix::from_ensemble(&members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ComplexMatrix;
    use core::f64::consts::PI;

    #[test]
    fn maximally_coherent_state() {
        for d in [2, 5, 8] {
            let rho = DensityMatrix::from_pure(&StateVector::uniform(d).unwrap()).unwrap();
            assert!((l1_coherence(&rho, true) - 1.0).abs() < 1e-12);
            assert!((l1_coherence(&rho, false) - (d - 1) as f64).abs() < 1e-12);
            assert!(distinguishability(&rho).unwrap() < 1e-6);
        }
    }

    #[test]
    fn diagonal_state_has_no_coherence() {
        let rho = DensityMatrix::new(ComplexMatrix::diagonal(&[
            C64::new(1.0, 0.0),
            ZERO,
            ZERO,
        ]))
        .unwrap();
        assert_eq!(l1_coherence(&rho, true), 0.0);
        assert!((distinguishability(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_d2_quarter_by_hand() {
        // ρ_00 = 3/4, ρ_11 = 1/4, |ρ_01| = 1/4.
        let cfg = InterferometerConfig::ramp(2, PI / 2.0, 0.0, PI).unwrap();
        let rho = measurement_density(&cfg, Family::Classical, 0).unwrap();
        assert!((rho.diagonal()[0] - 0.75).abs() < 1e-12);
        assert!((l1_coherence(&rho, true) - 0.5).abs() < 1e-12);
        assert!((distinguishability(&rho).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quantum_diagonal_by_hand() {
        // ρ_00 = (sin²(α/2)/d + cos²(α/2) + sinδ sinα/√d) / N_d at d = 2,
        // α = 3π/2, δ = 0: 1/4 + 1/2 + 0.
        let cfg = InterferometerConfig::ramp(2, 1.5 * PI, 0.0, PI).unwrap();
        let rho = measurement_density(&cfg, Family::Quantum, 0).unwrap();
        assert!((rho.diagonal()[0] - 0.75).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incoherent_term_of_trace_one() {
        assert!((incoherent_term(&[0.1, 0.2, 0.3, 0.4]).unwrap() - 0.25).abs() < 1e-15);
        assert!(incoherent_term(&[0.5, -0.1]).is_err());
    }
}
