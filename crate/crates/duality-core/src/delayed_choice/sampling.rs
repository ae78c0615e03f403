//! Poisson photon counting.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::PortDistribution;
use crate::{Error, Result};

/// Counts per port from one seeded acquisition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountsRecord {
    pub counts: Vec<u64>,
    pub mean_total: f64,
    pub seed: u64,
}

impl CountsRecord {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts divided by their total; `None` when nothing was detected.
    pub fn frequencies(&self) -> Option<Vec<f64>> {
        let total = self.total();
        (total > 0).then(|| self.counts.iter().map(|&c| c as f64 / total as f64).collect())
    }
}

/// Draws a Poisson variate; a zero mean yields zero.
pub fn poisson<R: rand::Rng + ?Sized>(rng: &mut R, mean: f64) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as u64)
}

/// Independent Poisson draw per port with mean `mean_total · p_i`.
pub fn sample_counts(dist: &PortDistribution, mean_total: f64, seed: u64) -> Result<CountsRecord> {
    sample_counts_with_dark(dist, mean_total, seed, 0.0)
}

/// As [`sample_counts`] with an extra mean of `dark_rate` counts per port.
pub fn sample_counts_with_dark(
    dist: &PortDistribution,
    mean_total: f64,
    seed: u64,
    dark_rate: f64,
) -> Result<CountsRecord> {
    if !(mean_total > 0.0) || !mean_total.is_finite() {
        return Err(Error::InvalidParameter(format!("mean_total {mean_total} must be positive")));
    }
    if !(dark_rate >= 0.0) || !dark_rate.is_finite() {
        return Err(Error::InvalidParameter(format!("dark rate {dark_rate} must be nonnegative")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = dist
        .probabilities()
        .iter()
        .map(|p| poisson(&mut rng, mean_total * p + dark_rate))
        .collect::<Result<Vec<_>>>()?;
    Ok(CountsRecord {
        counts,
        mean_total,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delayed_choice::Readout;

    #[test]
    fn point_mass_stays_put() {
        let dist = PortDistribution::new(Readout::UpperOnly, alloc::vec![1.0, 0.0, 0.0]).unwrap();
        let rec = sample_counts(&dist, 1000.0, 3).unwrap();
        assert!(rec.counts[0] > 0);
        assert_eq!(&rec.counts[1..], &[0, 0]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let dist = PortDistribution::uniform(Readout::UpperOnly, 4).unwrap();
        assert_eq!(sample_counts(&dist, 1e4, 9).unwrap(), sample_counts(&dist, 1e4, 9).unwrap());
        assert_ne!(sample_counts(&dist, 1e4, 9).unwrap(), sample_counts(&dist, 1e4, 10).unwrap());
    }

    #[test]
    fn frequencies_converge() {
        let dist = PortDistribution::new(Readout::UpperOnly, alloc::vec![0.1, 0.6, 0.3]).unwrap();
        let f = sample_counts(&dist, 1e7, 1).unwrap().frequencies().unwrap();
        for (a, b) in f.iter().zip(dist.probabilities()) {
            assert!((a - b).abs() < 1e-3);
        }
    }

    #[test]
    fn dark_counts_fill_empty_ports() {
        let dist = PortDistribution::new(Readout::UpperOnly, alloc::vec![1.0, 0.0]).unwrap();
        let rec = sample_counts_with_dark(&dist, 100.0, 0, 50.0).unwrap();
        assert!(rec.counts[1] > 0);
    }

    #[test]
    fn rejects_bad_means() {
        let dist = PortDistribution::uniform(Readout::UpperOnly, 2).unwrap();
        assert!(sample_counts(&dist, 0.0, 0).is_err());
        assert!(sample_counts_with_dark(&dist, 1.0, 0, -1.0).is_err());
    }
}
