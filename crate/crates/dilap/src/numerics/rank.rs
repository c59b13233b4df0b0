//! Numerical rank and kernel via column-pivoted Householder QR
//! (Businger-Golub). Trailing column norms are recomputed exactly at each
//! step; the sizes here never justify the downdating trick.

use super::mat::Mat;

#[derive(Debug, Clone)]
pub struct KernelRank {
    pub rank: usize,
    pub nullity: usize,
    /// Orthonormal kernel basis, one coordinate vector per column of the
    /// input's domain.
    pub kernel: Vec<Vec<f64>>,
    /// Absolute threshold applied to the pivoted R diagonal.
    pub tolerance: f64,
    /// True when the rank changes at tolerance/10 or tolerance*10.
    pub tolerance_sensitive: bool,
}

/// Default absolute rank tolerance: max(dimension * eps * Frobenius, 1e-12).
pub fn default_tolerance(m: &Mat) -> f64 {
    let n = m.rows().max(m.cols()).max(1) as f64;
    (n * f64::EPSILON * m.frobenius_norm()).max(1e-12)
}

pub fn kernel_and_rank(m: &Mat, tolerance: Option<f64>) -> KernelRank {
    let tol = tolerance.unwrap_or_else(|| default_tolerance(m));
    let (r, perm, diag) = pivoted_qr(m);
    let rank = count_rank(&diag, tol);
    let tolerance_sensitive =
        count_rank(&diag, tol / 10.0) != rank || count_rank(&diag, tol * 10.0) != rank;
    let kernel = orthonormalize(nullspace(&r, &perm, rank, m.cols()));
    KernelRank { rank, nullity: m.cols() - rank, kernel, tolerance: tol, tolerance_sensitive }
}

pub fn rank(m: &Mat, tolerance: Option<f64>) -> usize {
    let tol = tolerance.unwrap_or_else(|| default_tolerance(m));
    let (_, _, diag) = pivoted_qr(m);
    count_rank(&diag, tol)
}

fn count_rank(diag: &[f64], tol: f64) -> usize {
    diag.iter().take_while(|d| d.abs() > tol).count()
}

/// Returns the upper-trapezoidal factor (in place of the input), the column
/// permutation, and the magnitudes of the R diagonal.
fn pivoted_qr(m: &Mat) -> (Mat, Vec<usize>, Vec<f64>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut perm: Vec<usize> = (0..cols).collect();
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);
    for k in 0..steps {
        let mut best = k;
        let mut best_norm2 = 0.0;
        for j in k..cols {
            let nj: f64 = (k..rows).map(|i| a[(i, j)] * a[(i, j)]).sum();
            if nj > best_norm2 {
                best_norm2 = nj;
                best = j;
            }
        }
        if best_norm2 == 0.0 {
            break;
        }
        if best != k {
            for i in 0..rows {
                let tmp = a[(i, k)];
                a[(i, k)] = a[(i, best)];
                a[(i, best)] = tmp;
            }
            perm.swap(k, best);
        }
        let xnorm = best_norm2.sqrt();
        let mut v: Vec<f64> = (k..rows).map(|i| a[(i, k)]).collect();
        let s = if v[0] >= 0.0 { xnorm } else { -xnorm };
        v[0] += s;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for j in k + 1..cols {
                let w: f64 = v.iter().enumerate().map(|(i, &vi)| vi * a[(k + i, j)]).sum();
                let t = 2.0 * w / vnorm2;
                for (i, &vi) in v.iter().enumerate() {
                    a[(k + i, j)] -= t * vi;
                }
            }
        }
        a[(k, k)] = -s;
        for i in k + 1..rows {
            a[(i, k)] = 0.0;
        }
        diag.push(xnorm);
    }
    (a, perm, diag)
}

/// One kernel vector per free column: back-substitute the pivot block
/// against the free column, then undo the permutation.
fn nullspace(r: &Mat, perm: &[usize], rank: usize, cols: usize) -> Vec<Vec<f64>> {
    let mut basis = Vec::with_capacity(cols - rank);
    for free in rank..cols {
        let mut z = vec![0.0; rank];
        for i in (0..rank).rev() {
            let mut s = -r[(i, free)];
            for j in i + 1..rank {
                s -= r[(i, j)] * z[j];
            }
            z[i] = s / r[(i, i)];
        }
        let mut x = vec![0.0; cols];
        for (i, &zi) in z.iter().enumerate() {
            x[perm[i]] = zi;
        }
        x[perm[free]] = 1.0;
        basis.push(x);
    }
    basis
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
pub fn orthonormalize(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for _ in 0..2 {
            for u in &out {
                let d = dot(&v, u);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= d * ui;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 0.0 {
            for vi in &mut v {
                *vi /= norm;
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_rank_and_zero_matrix() {
        let id = Mat::identity(4);
        let kr = kernel_and_rank(&id, None);
        assert_eq!(kr.rank, 4);
        assert!(kr.kernel.is_empty());
        assert!(!kr.tolerance_sensitive);

        let z = Mat::zeros(3, 3);
        let kr = kernel_and_rank(&z, None);
        assert_eq!(kr.rank, 0);
        assert_eq!(kr.nullity, 3);
        assert_eq!(kr.kernel.len(), 3);
    }

    #[test]
    fn rank_one_outer_product() {
        let mut m = Mat::zeros(3, 3);
        let u = [1.0, 2.0, -1.0];
        let v = [3.0, 0.5, 2.0];
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = u[i] * v[j];
            }
        }
        let kr = kernel_and_rank(&m, None);
        assert_eq!(kr.rank, 1);
        assert_eq!(kr.kernel.len(), 2);
        for k in &kr.kernel {
            let residual = m.matvec(k).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(residual <= 10.0 * kr.tolerance);
        }
        // Orthonormality of the returned basis.
        assert!((dot(&kr.kernel[0], &kr.kernel[0]) - 1.0).abs() < 1e-12);
        assert!(dot(&kr.kernel[0], &kr.kernel[1]).abs() < 1e-12);
    }

    #[test]
    fn wide_and_tall_shapes() {
        let wide = Mat::from_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]);
        let kr = kernel_and_rank(&wide, None);
        assert_eq!(kr.rank, 2);
        assert_eq!(kr.kernel.len(), 1);
        let k = &kr.kernel[0];
        assert!(wide.matvec(k).iter().all(|x| x.abs() < 1e-12));

        let tall = wide.transpose();
        let kr = kernel_and_rank(&tall, None);
        assert_eq!(kr.rank, 2);
        assert!(kr.kernel.is_empty());
    }
}
