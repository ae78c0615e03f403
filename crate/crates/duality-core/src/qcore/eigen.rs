use alloc::vec;
use alloc::vec::Vec;

// Shadowed by inherent methods whenever std is in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use super::ComplexMatrix;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled, and diagonalized by
/// cyclic Jacobi rotations. Only the Hermitian part of the input is used.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    assert!(h.is_square(), "eigenvalues need a square matrix");
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = (h[(r, c)] + h[(c, r)].conj()) * 0.5;
            a[r * m + c] = z.re;
            a[(r + n) * m + (c + n)] = z.re;
            a[r * m + (c + n)] = -z.im;
            a[(r + n) * m + c] = z.im;
        }
    }
    jacobi_eigenvalues(&mut a, m);
    let mut ev: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev.into_iter().step_by(2).collect()
}

fn jacobi_eigenvalues(a: &mut [f64], n: usize) {
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::C64;

    #[test]
    fn pauli_y_spectrum() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let ev = hermitian_eigenvalues(&y);
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_determinant_match_for_random_hermitian() {
        // Fixed 3x3 Hermitian matrix; compare trace and sum of squares.
        let e = |re, im| C64::new(re, im);
        let h = ComplexMatrix::new(
            3,
            3,
            vec![
                e(1.0, 0.0),
                e(0.3, 0.2),
                e(-0.1, 0.5),
                e(0.3, -0.2),
                e(-0.4, 0.0),
                e(0.7, 0.1),
                e(-0.1, -0.5),
                e(0.7, -0.1),
                e(2.0, 0.0),
            ],
        )
        .unwrap();
        let ev = hermitian_eigenvalues(&h);
        let tr: f64 = ev.iter().sum();
        assert!((tr - h.trace().re).abs() < 1e-12);
        let sq: f64 = ev.iter().map(|x| x * x).sum();
        let fro = h.frobenius_norm();
        assert!((sq - fro * fro).abs() < 1e-11);
    }
}
