//! Cyclic Jacobi diagonalization of real symmetric matrices.

use nalgebra::DMatrix;

use super::check_symmetric;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = Q Λ Qᵀ` of a real symmetric matrix.
///
/// Eigenvalues are ascending; column `k` of `eigenvectors` pairs with
/// `eigenvalues[k]` and has its largest-magnitude component positive.
#[derive(Debug, Clone)]
pub struct SymSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymSpectrum {
    /// `Q f(Λ) Qᵀ`
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fk = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        &scaled * self.eigenvectors.transpose()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.map(|x| x)
    }
}

pub fn sym_eigen(m: &DMatrix<f64>) -> Result<SymSpectrum> {
    check_symmetric(m, 1e-12)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(SymSpectrum {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }

    // Row-major working copies.
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut converged = false;
    let mut off = 0.0;
    for _ in 0..MAX_SWEEPS {
        off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        off = off.sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = 100.0 * apq.abs();
                if app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi eigensolver",
            iterations: MAX_SWEEPS,
            residual: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));

    let eigenvalues = order.iter().map(|&k| a[k * n + k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut pivot = 0;
        for i in 0..n {
            if v[i * n + k].abs() > v[pivot * n + k].abs() + 1e-14 {
                pivot = i;
            }
        }
        let sign = if v[pivot * n + k] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, col)] = sign * v[i * n + k];
        }
    }
    Ok(SymSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        (&g + g.transpose()) * 0.5
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let s = sym_eigen(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_by_two_analytic() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let s = sym_eigen(&m).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-15);
        // sign convention: largest component positive
        let v1 = s.eigenvectors.column(1);
        assert!(v1[0] > 0.0 && v1[1] > 0.0);
    }

    #[test]
    fn random_50_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_symmetric(50, &mut rng);
        let s = sym_eigen(&m).unwrap();
        let resid = max_abs(&(s.reconstruct() - &m));
        assert!(resid < 1e-10 * max_abs(&m), "residual {resid}");
        let qtq = s.eigenvectors.transpose() * &s.eigenvectors;
        assert!(max_abs(&(qtq - DMatrix::identity(50, 50))) < 1e-12);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn direct_sum_spectrum_is_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_symmetric(4, &mut rng);
        let b = random_symmetric(3, &mut rng);
        let mut ab = DMatrix::zeros(7, 7);
        ab.view_mut((0, 0), (4, 4)).copy_from(&a);
        ab.view_mut((4, 4), (3, 3)).copy_from(&b);
        let mut union = sym_eigen(&a).unwrap().eigenvalues;
        union.extend(sym_eigen(&b).unwrap().eigenvalues);
        union.sort_by(f64::total_cmp);
        let joint = sym_eigen(&ab).unwrap().eigenvalues;
        for (x, y) in union.iter().zip(&joint) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(sym_eigen(&m), Err(Error::NotSymmetric(a)) if (a - 0.1).abs() < 1e-12));
    }

    #[test]
    fn empty_matrix() {
        let s = sym_eigen(&DMatrix::zeros(0, 0)).unwrap();
        assert!(s.eigenvalues.is_empty());
    }
}
