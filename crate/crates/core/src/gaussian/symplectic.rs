use nalgebra::DMatrix;

use super::covariance::{check_modes, omega, CovarianceMatrix};
use crate::numerics::max_abs;
use crate::{Error, Result};

const SYMPLECTIC_TOL: f64 = 1e-10;

/// A real symplectic matrix acting on interleaved phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    s: DMatrix<f64>,
}

impl SymplecticTransform {
    /// Checks `‖SΩSᵀ − Ω‖_max ≤ 1e−10·max(1, ‖S‖²)`.
    pub fn new(s: DMatrix<f64>) -> Result<Self> {
        if s.nrows() != s.ncols() || s.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "symplectic matrix must be square of even size, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        let o = omega(s.nrows() / 2);
        let defect = max_abs(&(&s * &o * s.transpose() - &o));
        let scale = max_abs(&s).powi(2).max(1.0);
        if defect > SYMPLECTIC_TOL * scale {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symplectic (defect {defect:e})"
            )));
        }
        Ok(Self { s })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            s: DMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// `diag(z, 1/z)` on each target mode.
    pub fn single_mode_squeeze(n: usize, z: f64, targets: &[usize]) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "squeeze factor must be positive, got {z}"
            )));
        }
        check_modes(targets, n)?;
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for &t in targets {
            s[(2 * t, 2 * t)] = z;
            s[(2 * t + 1, 2 * t + 1)] = 1.0 / z;
        }
        Ok(Self { s })
    }

    /// The same squeeze on every mode.
    pub fn global_squeeze(n: usize, z: f64) -> Result<Self> {
        let all: Vec<usize> = (0..n).collect();
        Self::single_mode_squeeze(n, z, &all)
    }

    /// Phase rotation `[[cos φ, sin φ], [−sin φ, cos φ]]` on each target.
    pub fn single_mode_rotation(n: usize, phi: f64, targets: &[usize]) -> Result<Self> {
        check_modes(targets, n)?;
        let (sin, cos) = phi.sin_cos();
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for &t in targets {
            s[(2 * t, 2 * t)] = cos;
            s[(2 * t, 2 * t + 1)] = sin;
            s[(2 * t + 1, 2 * t)] = -sin;
            s[(2 * t + 1, 2 * t + 1)] = cos;
        }
        Ok(Self { s })
    }

    /// Two-mode squeezer with `cosh r` diagonal and `±sinh r` couplings
    /// (`+` between positions, `−` between momenta).
    pub fn two_mode_squeeze(n: usize, r: f64, i: usize, j: usize) -> Result<Self> {
        check_modes(&[i, j], n)?;
        let (c, sh) = (r.cosh(), r.sinh());
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for (a, b) in [(i, j), (j, i)] {
            s[(2 * a, 2 * a)] = c;
            s[(2 * a + 1, 2 * a + 1)] = c;
            s[(2 * a, 2 * b)] = sh;
            s[(2 * a + 1, 2 * b + 1)] = -sh;
        }
        Ok(Self { s })
    }

    /// Passive mixing of modes `i` and `j` by angle `theta`.
    pub fn beam_splitter(n: usize, theta: f64, i: usize, j: usize) -> Result<Self> {
        check_modes(&[i, j], n)?;
        let (sin, cos) = theta.sin_cos();
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for q in 0..2 {
            s[(2 * i + q, 2 * i + q)] = cos;
            s[(2 * i + q, 2 * j + q)] = sin;
            s[(2 * j + q, 2 * i + q)] = -sin;
            s[(2 * j + q, 2 * j + q)] = cos;
        }
        Ok(Self { s })
    }

    /// `S_a ⊕ S_b`, acting on the modes of `self` first.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (p, q) = (self.s.nrows(), other.s.nrows());
        let mut s = DMatrix::zeros(p + q, p + q);
        s.view_mut((0, 0), (p, p)).copy_from(&self.s);
        s.view_mut((p, p), (q, q)).copy_from(&other.s);
        Self { s }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.s.nrows() != other.s.nrows() {
            return Err(Error::Dimension(format!(
                "cannot compose {}-mode and {}-mode transforms",
                self.n_modes(),
                other.n_modes()
            )));
        }
        Ok(Self {
            s: &self.s * &other.s,
        })
    }

    pub fn apply(&self, cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        apply_symplectic(cm, self)
    }
}

/// `S σ Sᵀ`
pub fn apply_symplectic(
    cm: &CovarianceMatrix,
    s: &SymplecticTransform,
) -> Result<CovarianceMatrix> {
    if cm.n_modes() != s.n_modes() {
        return Err(Error::Dimension(format!(
            "{}-mode transform applied to {}-mode state",
            s.n_modes(),
            cm.n_modes()
        )));
    }
    let out = s.matrix() * cm.matrix() * s.matrix().transpose();
    Ok(CovarianceMatrix::from_matrix_unchecked(
        crate::numerics::symmetrized(&out),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_squeeze_and_zero_rotation_are_identity() {
        assert_eq!(
            SymplecticTransform::single_mode_squeeze(3, 1.0, &[0, 2]).unwrap(),
            SymplecticTransform::identity(3)
        );
        assert_eq!(
            SymplecticTransform::single_mode_rotation(2, 0.0, &[1]).unwrap(),
            SymplecticTransform::identity(2)
        );
    }

    #[test]
    fn squeezed_vacuum() {
        let s = SymplecticTransform::single_mode_squeeze(1, 2.0, &[0]).unwrap();
        let cm = s.apply(&CovarianceMatrix::vacuum(1)).unwrap();
        assert_eq!(cm.matrix()[(0, 0)], 4.0);
        assert_eq!(cm.matrix()[(1, 1)], 0.25);
    }

    #[test]
    fn rotated_vacuum_is_vacuum() {
        let s = SymplecticTransform::single_mode_rotation(1, std::f64::consts::FRAC_PI_2, &[0])
            .unwrap();
        let cm = s.apply(&CovarianceMatrix::vacuum(1)).unwrap();
        assert!(max_abs(&(cm.matrix() - DMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn two_mode_squeezed_vacuum_blocks() {
        let r: f64 = 0.7;
        let s = SymplecticTransform::two_mode_squeeze(2, r, 0, 1).unwrap();
        assert!(SymplecticTransform::new(s.matrix().clone()).is_ok());
        let m = s.apply(&CovarianceMatrix::vacuum(2)).unwrap().into_matrix();
        let (c2, s2) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        assert!((m[(0, 0)] - c2).abs() < 1e-12 && (m[(1, 1)] - c2).abs() < 1e-12);
        assert!((m[(0, 2)] - s2).abs() < 1e-12 && (m[(1, 3)] + s2).abs() < 1e-12);
    }

    #[test]
    fn compositions_stay_symplectic() {
        let a = SymplecticTransform::single_mode_rotation(2, 0.3, &[0]).unwrap();
        let b = SymplecticTransform::single_mode_squeeze(2, 1.7, &[0, 1]).unwrap();
        let c = SymplecticTransform::single_mode_rotation(2, -1.1, &[1]).unwrap();
        let d = SymplecticTransform::beam_splitter(2, 0.4, 0, 1).unwrap();
        let s = a
            .compose(&b)
            .unwrap()
            .compose(&c)
            .unwrap()
            .compose(&d)
            .unwrap();
        assert!(SymplecticTransform::new(s.matrix().clone()).is_ok());
    }

    #[test]
    fn rejects_non_symplectic() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0]));
        assert!(SymplecticTransform::new(m).is_err());
        assert!(SymplecticTransform::single_mode_squeeze(1, 0.0, &[0]).is_err());
        let s = SymplecticTransform::identity(2);
        assert!(s.apply(&CovarianceMatrix::vacuum(3)).is_err());
    }
}
