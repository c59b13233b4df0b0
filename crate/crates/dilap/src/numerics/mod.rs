//! Dense linear algebra kept deliberately small: a flat row-major matrix,
//! an eigensolver, pivoted-QR rank/kernel, and an exact-rational path for
//! matrices with rational entries.

mod eig;
mod mat;
mod rank;

pub mod exact;

pub use eig::{eigenvalues, sort_eigenvalues};
pub use mat::Mat;
pub use rank::{default_tolerance, kernel_and_rank, orthonormalize, rank, KernelRank};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative tolerance for deciding that an eigenvalue is zero.
pub fn zero_tolerance(m: &Mat) -> f64 {
    (1e3 * default_tolerance(m)).max(1e-8)
}

/// Absolute zero threshold: relative tolerance times max(1, Frobenius norm).
pub fn zero_threshold(m: &Mat, tolerance: Option<f64>) -> f64 {
    tolerance.unwrap_or_else(|| zero_tolerance(m)) * m.frobenius_norm().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplicityMode {
    Algebraic,
    Geometric,
}

/// Multiplicity of the eigenvalue zero. Algebraic counts eigenvalues with
/// modulus below the threshold; geometric is the numerical nullity at the
/// same threshold.
pub fn zero_multiplicity(
    m: &Mat,
    mode: MultiplicityMode,
    tolerance: Option<f64>,
) -> Result<usize> {
    let threshold = zero_threshold(m, tolerance);
    match mode {
        MultiplicityMode::Algebraic => {
            Ok(eigenvalues(m)?.iter().filter(|z| z.norm() < threshold).count())
        }
        MultiplicityMode::Geometric => Ok(kernel_and_rank(m, Some(threshold)).nullity),
    }
}

/// Spectrum plus zero-eigenvalue bookkeeping for one matrix.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub eigenvalues: Vec<Complex64>,
    pub zero_multiplicity_algebraic: usize,
    pub zero_multiplicity_geometric: usize,
    /// Orthonormal kernel basis in orthonormal-basis coordinates.
    pub kernel: Vec<Vec<f64>>,
    /// Absolute threshold used for both multiplicities.
    pub threshold: f64,
    pub tolerance_sensitive: bool,
}

pub fn spectral_report(m: &Mat, tolerance: Option<f64>) -> Result<SpectralReport> {
    let threshold = zero_threshold(m, tolerance);
    let eigenvalues = eigenvalues(m)?;
    let zero_multiplicity_algebraic =
        eigenvalues.iter().filter(|z| z.norm() < threshold).count();
    let kr = kernel_and_rank(m, Some(threshold));
    Ok(SpectralReport {
        eigenvalues,
        zero_multiplicity_algebraic,
        zero_multiplicity_geometric: kr.nullity,
        kernel: kr.kernel,
        threshold,
        tolerance_sensitive: kr.tolerance_sensitive,
    })
}

/// Determinant by LU elimination with partial pivoting.
pub fn determinant(m: &Mat) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut det = 1.0;
    for k in 0..n {
        let mut pivot = k;
        for i in k + 1..n {
            if a[(i, k)].abs() > a[(pivot, k)].abs() {
                pivot = i;
            }
        }
        if a[(pivot, k)] == 0.0 {
            return Ok(0.0);
        }
        if pivot != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
            det = -det;
        }
        det *= a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[(i, j)] -= f * a[(k, j)];
            }
        }
    }
    Ok(det)
}

/// Greedy nearest-neighbor matching between two equally sized multisets of
/// complex numbers; returns the largest matched distance, or infinity when
/// the sizes differ. Pairs are matched globally closest first.
pub fn multiset_match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    let mut used_a = vec![false; n];
    let mut used_b = vec![false; n];
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let mut best = f64::INFINITY;
        let mut pair = (0, 0);
        for i in 0..n {
            if used_a[i] {
                continue;
            }
            for j in 0..n {
                if used_b[j] {
                    continue;
                }
                let d = (a[i] - b[j]).norm();
                if d < best {
                    best = d;
                    pair = (i, j);
                }
            }
        }
        used_a[pair.0] = true;
        used_b[pair.1] = true;
        worst = worst.max(best);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_multiplicity_of_scalar_zero_is_one() {
        let m = Mat::from_rows(&[vec![0.0]]);
        assert_eq!(zero_multiplicity(&m, MultiplicityMode::Algebraic, None).unwrap(), 1);
        assert_eq!(zero_multiplicity(&m, MultiplicityMode::Geometric, None).unwrap(), 1);
    }

    #[test]
    fn multiplicities_of_diagonal() {
        let m = Mat::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let report = spectral_report(&m, None).unwrap();
        assert_eq!(report.zero_multiplicity_algebraic, 2);
        assert_eq!(report.zero_multiplicity_geometric, 2);
        assert_eq!(report.kernel.len(), 2);
    }

    #[test]
    fn geometric_can_fall_below_algebraic() {
        // Jordan block: algebraic multiplicity 2, geometric 1.
        let m = Mat::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(zero_multiplicity(&m, MultiplicityMode::Algebraic, None).unwrap(), 2);
        assert_eq!(zero_multiplicity(&m, MultiplicityMode::Geometric, None).unwrap(), 1);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = Mat::from_rows(&[
            vec![2.0, 0.0, 1.0],
            vec![1.0, 3.0, 2.0],
            vec![1.0, 1.0, 1.0],
        ]);
        // 2*(3-2) - 0 + 1*(1-3) = 0
        assert!((determinant(&m).unwrap() - 0.0).abs() < 1e-12);
        let m = Mat::from_rows(&[vec![3.0, 1.0], vec![4.0, 2.0]]);
        assert!((determinant(&m).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn multiset_distance_detects_mismatch() {
        let a = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let b = vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 1e-12)];
        assert!(multiset_match_distance(&a, &b) <= 1e-12);
        let c = vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)];
        assert!(multiset_match_distance(&a, &c) >= 0.9);
        assert!(multiset_match_distance(&a, &c[..1]).is_infinite());
    }
}
