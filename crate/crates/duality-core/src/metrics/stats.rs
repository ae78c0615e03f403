use alloc::format;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::delayed_choice::PortDistribution;
use crate::{Error, Result};

/// `-log₂ max_i p_i`, in bits.
pub fn min_entropy(dist: &PortDistribution) -> f64 {
    let pmax = dist.probabilities().iter().copied().fold(0.0, f64::max);
    -pmax.log2()
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("{p:?}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("sum {sum}")));
    }
    Ok(())
}

/// Bhattacharyya coefficient `Σ √(p_i q_i)`.
pub fn classical_fidelity(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    check_distribution(p)?;
    check_distribution(q)?;
    Ok(p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum())
}

/// `1 - ρ(X, Y)` with `ρ` the Pearson correlation.
pub fn pearson_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidDimension(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(1.0 - sxy / (sxx.sqrt() * syy.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delayed_choice::Readout;

    #[test]
    fn min_entropy_examples() {
        for d in [2usize, 4, 8] {
            let u = PortDistribution::uniform(Readout::UpperOnly, d).unwrap();
            assert_eq!(min_entropy(&u), (d as f64).log2());
        }
        let det = PortDistribution::new(Readout::UpperOnly, alloc::vec![0.0, 1.0]).unwrap();
        assert_eq!(min_entropy(&det), 0.0);
    }

    #[test]
    fn fidelity_examples() {
        let p = [0.2, 0.3, 0.5];
        assert!((classical_fidelity(&p, &p).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(classical_fidelity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!(classical_fidelity(&p, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 4.0, 7.0];
        let y: alloc::vec::Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let z: alloc::vec::Vec<f64> = x.iter().map(|v| -v).collect();
        assert!(pearson_distance(&x, &y).unwrap().abs() < 1e-15);
        assert!((pearson_distance(&x, &z).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(pearson_distance(&x, &[1.0; 4]), Err(Error::ZeroVariance));
    }
}
