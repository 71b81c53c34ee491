use nalgebra::DMatrix;

use crate::numerics::{check_symmetric, log_abs_det, sym_eigen};
use crate::{Error, Result};

/// `Ω = ⊕ⁿ [[0, 1], [−1, 0]]` in interleaved order.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        o[(2 * k, 2 * k + 1)] = 1.0;
        o[(2 * k + 1, 2 * k)] = -1.0;
    }
    o
}

/// Rejects out-of-range or repeated mode indices.
pub fn check_modes(modes: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &m in modes {
        if m >= len {
            return Err(Error::IndexOutOfRange { index: m, len });
        }
        if seen[m] {
            return Err(Error::InvalidArgument(format!("mode {m} listed twice")));
        }
        seen[m] = true;
    }
    Ok(())
}

/// Real symmetric `2n×2n` covariance matrix, vacuum = identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "covariance matrix needs even dimension, got {}",
                m.nrows()
            )));
        }
        check_symmetric(&m, 1e-12)?;
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite covariance entry".into()));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        debug_assert!(m.nrows() == m.ncols() && m.nrows() % 2 == 0);
        Self { m }
    }

    pub fn vacuum(n: usize) -> Self {
        Self {
            m: DMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Reduced state of `modes`, in the order given.
    pub fn restrict(&self, modes: &[usize]) -> Result<Self> {
        check_modes(modes, self.n_modes())?;
        let k = modes.len();
        let mut out = DMatrix::zeros(2 * k, 2 * k);
        for (a, &i) in modes.iter().enumerate() {
            for (b, &j) in modes.iter().enumerate() {
                for u in 0..2 {
                    for v in 0..2 {
                        out[(2 * a + u, 2 * b + v)] = self.m[(2 * i + u, 2 * j + v)];
                    }
                }
            }
        }
        Ok(Self { m: out })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (p, q) = (self.m.nrows(), other.m.nrows());
        let mut out = DMatrix::zeros(p + q, p + q);
        out.view_mut((0, 0), (p, p)).copy_from(&self.m);
        out.view_mut((p, p), (q, q)).copy_from(&other.m);
        Self { m: out }
    }

    /// `σ + iΩ ⪰ −tol`, checked through the real `4n×4n` embedding of the
    /// Hermitian matrix.
    pub fn is_physical(&self, tol: f64) -> Result<bool> {
        let d = self.m.nrows();
        let o = omega(self.n_modes());
        let mut h = DMatrix::zeros(2 * d, 2 * d);
        h.view_mut((0, 0), (d, d)).copy_from(&self.m);
        h.view_mut((d, d), (d, d)).copy_from(&self.m);
        h.view_mut((0, d), (d, d)).copy_from(&(-&o));
        h.view_mut((d, 0), (d, d)).copy_from(&o);
        let spec = sym_eigen(&h)?;
        Ok(spec.eigenvalues.first().map_or(true, |&l| l >= -tol))
    }

    /// `|ln det σ| ≤ tol`; for a physical state this means every symplectic
    /// eigenvalue is 1.
    pub fn is_pure(&self, tol: f64) -> bool {
        let (sign, log) = log_abs_det(&self.m);
        sign > 0.0 && log.abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_everything_is_identity() {
        let m = DMatrix::from_fn(4, 4, |i, j| if i == j { 2.0 } else { 0.1 * (i + j) as f64 });
        let cm = CovarianceMatrix::new(m).unwrap();
        assert_eq!(cm.restrict(&[0, 1]).unwrap(), cm);
        let swapped = cm.restrict(&[1, 0]).unwrap();
        assert_eq!(swapped.matrix()[(0, 0)], cm.matrix()[(2, 2)]);
        assert_eq!(swapped.matrix()[(0, 3)], cm.matrix()[(2, 1)]);
    }

    #[test]
    fn vacuum_restricts_to_vacuum() {
        let v = CovarianceMatrix::vacuum(5);
        assert_eq!(v.restrict(&[4, 1, 2]).unwrap(), CovarianceMatrix::vacuum(3));
        assert!(v.is_physical(1e-12).unwrap());
        assert!(v.is_pure(1e-12));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            CovarianceMatrix::new(DMatrix::identity(3, 3)),
            Err(Error::Dimension(_))
        ));
        let v = CovarianceMatrix::vacuum(2);
        assert!(matches!(
            v.restrict(&[2]),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
        assert!(v.restrict(&[1, 1]).is_err());
    }

    #[test]
    fn uncertainty_violation_detected() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 0.5]));
        let cm = CovarianceMatrix::new(m).unwrap();
        assert!(!cm.is_physical(1e-9).unwrap());
        let ok =
            CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 0.25])).unwrap();
        assert!(ok.is_physical(1e-9).unwrap());
    }
}
