//! Dense nonsymmetric eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, then the classic implicit double-shift QR iteration
//! (eigenvalues only). Complex conjugate pairs come out exactly conjugate
//! because each 2x2 trailing block is resolved in closed form.

use num_complex::Complex64;

use super::mat::Mat;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// QR sweeps allowed per matrix order before giving up.
const SWEEPS_PER_ORDER: usize = 100;

/// Eigenvalues of a square real matrix, sorted by real part, then imaginary.
pub fn eigenvalues(m: &Mat) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(mut eig) = triangular_diagonal(m) {
        sort_eigenvalues(&mut eig);
        return Ok(eig);
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    let mut eig = hqr(&mut a)?;
    sort_eigenvalues(&mut eig);
    Ok(eig)
}

/// If some permutation similarity makes the matrix triangular, its spectrum
/// is the diagonal, exactly. Detecting that is a topological sort of the
/// off-diagonal nonzero pattern, so defective repeated eigenvalues (which QR
/// iteration only locates to a fractional power of machine epsilon) come out
/// with no error at all.
fn triangular_diagonal(a: &Mat) -> Option<Vec<Complex64>> {
    let n = a.rows();
    // Dependency arcs j -> i for each off-diagonal nonzero (i, j): j must
    // precede i for the entry to land below the diagonal.
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)] != 0.0 {
                indegree[i] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut placed = 0;
    while let Some(j) = queue.pop() {
        placed += 1;
        for i in 0..n {
            if i != j && a[(i, j)] != 0.0 {
                indegree[i] -= 1;
                if indegree[i] == 0 {
                    queue.push(i);
                }
            }
        }
    }
    if placed < n {
        return None;
    }
    Some((0..n).map(|i| Complex64::new(a[(i, i)], 0.0)).collect())
}

pub fn sort_eigenvalues(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Diagonal similarity scaling by powers of two; reduces the norm spread
/// without introducing rounding error.
fn balance(a: &mut Mat) {
    let n = a.rows();
    let radix: f64 = 2.0;
    let squared = radix * radix;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut f = 1.0;
                let s = c + r;
                let mut c = c;
                let mut g = r / radix;
                while c < g {
                    f *= radix;
                    c *= squared;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= squared;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Orthogonal reduction to upper Hessenberg form by Householder reflectors.
fn hessenberg(a: &mut Mat) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<f64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let s = if x[0] >= 0.0 { xnorm } else { -xnorm };
        let mut v = x;
        v[0] += s;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // Left: rows k+1..n of columns k..n (earlier columns are already zero there).
        for j in k..n {
            let w: f64 = v.iter().enumerate().map(|(i, &vi)| vi * a[(k + 1 + i, j)]).sum();
            let t = 2.0 * w / vnorm2;
            for (i, &vi) in v.iter().enumerate() {
                a[(k + 1 + i, j)] -= t * vi;
            }
        }
        // Right: columns k+1..n of every row.
        for i in 0..n {
            let w: f64 = v.iter().enumerate().map(|(j, &vj)| a[(i, k + 1 + j)] * vj).sum();
            let t = 2.0 * w / vnorm2;
            for (j, &vj) in v.iter().enumerate() {
                a[(i, k + 1 + j)] -= t * vj;
            }
        }
        // The reflector maps the pivot column to (-s, 0, ..., 0) exactly.
        a[(k + 1, k)] = -s;
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
}

fn sign(magnitude: f64, sign_of: f64) -> f64 {
    if sign_of >= 0.0 { magnitude.abs() } else { -magnitude.abs() }
}

/// One-based access into the Hessenberg workspace, mirroring the classic
/// formulation of the algorithm.
macro_rules! at {
    ($a:ident, $i:expr, $j:expr) => {
        $a[((($i) - 1) as usize, (($j) - 1) as usize)]
    };
}

/// Implicit double-shift QR on an upper Hessenberg matrix; returns the
/// eigenvalues in deflation order. Subdiagonal entries are declared
/// negligible relative to their diagonal neighbors; exceptional shifts kick
/// in after 10 and 20 stalled sweeps on a block, and the total sweep budget
/// is proportional to the order.
fn hqr(a: &mut Mat) -> Result<Vec<Complex64>> {
    let n = a.rows();
    let ni = n as isize;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 1..=ni {
        for j in (i - 1).max(1)..=ni {
            anorm += at!(a, i, j).abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![Complex64::ZERO; n]);
    }

    let budget = SWEEPS_PER_ORDER * n;
    let mut sweeps = 0usize;
    let mut nn = ni;
    let mut t = 0.0;

    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a single negligible subdiagonal element, bottom up.
            let mut l = nn;
            while l >= 2 {
                let mut s = at!(a, l - 1, l - 1).abs() + at!(a, l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if at!(a, l, l - 1).abs() <= EPS * s {
                    at!(a, l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = at!(a, nn, nn);
            if l == nn {
                // One root found.
                wr[(nn - 1) as usize] = x + t;
                wi[(nn - 1) as usize] = 0.0;
                nn -= 1;
                break;
            }

            let mut y = at!(a, nn - 1, nn - 1);
            let mut w = at!(a, nn, nn - 1) * at!(a, nn - 1, nn);
            if l == nn - 1 {
                // Two roots found: resolve the trailing 2x2 block exactly.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[(nn - 2) as usize] = x + z;
                    wr[(nn - 1) as usize] = if z != 0.0 { x - w / z } else { x + z };
                    wi[(nn - 2) as usize] = 0.0;
                    wi[(nn - 1) as usize] = 0.0;
                } else {
                    wr[(nn - 2) as usize] = x + p;
                    wr[(nn - 1) as usize] = x + p;
                    wi[(nn - 2) as usize] = -z;
                    wi[(nn - 1) as usize] = z;
                }
                nn -= 2;
                break;
            }

            // No deflation yet: run one double QR sweep.
            if sweeps >= budget {
                return Err(Error::NonConvergence { order: n });
            }
            sweeps += 1;
            if its == 10 || its == 20 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    at!(a, i, i) -= x;
                }
                let s = at!(a, nn, nn - 1).abs() + at!(a, nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Form the shifted polynomial and look for two consecutive small
            // subdiagonal elements.
            let mut m = nn - 2;
            let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
            while m >= l {
                let z = at!(a, m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / at!(a, m + 1, m) + at!(a, m, m + 1);
                q = at!(a, m + 1, m + 1) - z - rr - ss;
                r = at!(a, m + 2, m + 1);
                let scale = p.abs() + q.abs() + r.abs();
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break;
                }
                let u = at!(a, m, m - 1).abs() * (q.abs() + r.abs());
                let v =
                    p.abs() * (at!(a, m - 1, m - 1).abs() + z.abs() + at!(a, m + 1, m + 1).abs());
                if u <= EPS * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                at!(a, i, i - 2) = 0.0;
                if i != m + 2 {
                    at!(a, i, i - 3) = 0.0;
                }
            }

            // Double QR step on rows l..nn, columns m..nn.
            for k in m..=nn - 1 {
                if k != m {
                    p = at!(a, k, k - 1);
                    q = at!(a, k + 1, k - 1);
                    r = if k != nn - 1 { at!(a, k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        at!(a, k, k - 1) = -at!(a, k, k - 1);
                    }
                } else {
                    at!(a, k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    let mut pp = at!(a, k, j) + q * at!(a, k + 1, j);
                    if k != nn - 1 {
                        pp += r * at!(a, k + 2, j);
                        at!(a, k + 2, j) -= pp * z;
                    }
                    at!(a, k + 1, j) -= pp * y;
                    at!(a, k, j) -= pp * x;
                }
                let mmin = nn.min(k + 3);
                for i in l..=mmin {
                    let mut pp = x * at!(a, i, k) + y * at!(a, i, k + 1);
                    if k != nn - 1 {
                        pp += z * at!(a, i, k + 2);
                        at!(a, i, k + 2) -= pp * r;
                    }
                    at!(a, i, k + 1) -= pp * q;
                    at!(a, i, k) -= pp;
                }
            }
        }
    }

    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_spectrum(m: &Mat, expected: &[Complex64], tol: f64) {
        let got = eigenvalues(m).unwrap();
        let mut want = expected.to_vec();
        sort_eigenvalues(&mut want);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g - w).norm() <= tol,
                "eigenvalue {g} differs from expected {w} (all: {got:?})"
            );
        }
    }

    #[test]
    fn empty_and_scalar() {
        assert!(eigenvalues(&Mat::zeros(0, 0)).unwrap().is_empty());
        let m = Mat::from_rows(&[vec![-3.5]]);
        assert_spectrum(&m, &[Complex64::new(-3.5, 0.0)], 0.0);
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let m = Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let eig = eigenvalues(&m).unwrap();
        assert_eq!(eig[0], eig[1].conj(), "pair must be exactly conjugate");
        assert!((eig[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn triangular_spectrum_is_diagonal() {
        let m = Mat::from_rows(&[
            vec![4.0, 1.0, -2.0, 9.0],
            vec![0.0, -1.0, 7.0, 0.5],
            vec![0.0, 0.0, 2.5, -3.0],
            vec![0.0, 0.0, 0.0, 4.0],
        ]);
        let expected: Vec<Complex64> =
            [4.0, -1.0, 2.5, 4.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert_spectrum(&m, &expected, 1e-12);
    }

    #[test]
    fn shuffled_triangular_defective_spectrum_is_exact() {
        // Permutation-triangular with a triple defective eigenvalue; QR
        // iteration alone would only locate it to about cbrt(epsilon).
        let m = Mat::from_rows(&[
            vec![5.0, 0.0, 3.0],
            vec![0.0, 5.0, 0.0],
            vec![0.0, 2.0, 5.0],
        ]);
        let eig = eigenvalues(&m).unwrap();
        assert_eq!(eig, vec![Complex64::new(5.0, 0.0); 3]);
    }

    #[test]
    fn cyclic_pattern_falls_through_to_qr() {
        assert!(triangular_diagonal(&Mat::from_rows(&[
            vec![1.0, 2.0],
            vec![3.0, 4.0],
        ]))
        .is_none());
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let m = Mat::from_rows(&[
            vec![6.0, -11.0, 6.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]);
        let expected: Vec<Complex64> =
            [1.0, 2.0, 3.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert_spectrum(&m, &expected, 1e-10);
    }

    #[test]
    fn circulant_cycle_spectrum() {
        // Adjacency of a directed 4-cycle: eigenvalues are the 4th roots of unity.
        let m = Mat::from_rows(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ]);
        let expected = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ];
        assert_spectrum(&m, &expected, 1e-12);
    }

    #[test]
    fn similarity_preserves_spectrum() {
        // Conjugate a matrix with known spectrum by a product of Givens
        // rotations; the rotations are orthogonal so the spectrum is fixed.
        let base = Mat::from_rows(&[
            vec![2.0, 5.0, -1.0, 0.0, 3.0],
            vec![0.0, 3.0, 8.0, -2.0, 1.0],
            vec![0.0, 0.0, -1.0, 4.0, 4.0],
            vec![0.0, 0.0, 0.0, 0.5, 7.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0],
        ]);
        let mut m = base.clone();
        let n = m.rows();
        let mut state = 88172645463325252u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..25 {
            let i = (next() * n as f64) as usize % n;
            let mut j = (next() * n as f64) as usize % n;
            if i == j {
                j = (j + 1) % n;
            }
            let theta = next() * std::f64::consts::TAU;
            let (c, s) = (theta.cos(), theta.sin());
            for k in 0..n {
                let (x, y) = (m[(i, k)], m[(j, k)]);
                m[(i, k)] = c * x - s * y;
                m[(j, k)] = s * x + c * y;
            }
            for k in 0..n {
                let (x, y) = (m[(k, i)], m[(k, j)]);
                m[(k, i)] = c * x - s * y;
                m[(k, j)] = s * x + c * y;
            }
        }
        let expected: Vec<Complex64> =
            [2.0, 3.0, -1.0, 0.5, 0.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert_spectrum(&m, &expected, 1e-8);
    }
}
