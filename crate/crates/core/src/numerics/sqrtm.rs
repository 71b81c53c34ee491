//! Principal matrix square root.

use nalgebra::DMatrix;

use super::{asymmetry, log_abs_det, max_abs, sym_eigen};
use crate::{Error, Result};

const DB_TOL: f64 = 1e-12;
const DB_MAX_ITER: usize = 100;

/// Principal square root. Symmetric input goes through the eigendecomposition
/// (and must be positive semidefinite); anything else through
/// [`denman_beavers`].
pub fn principal_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "square root of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = max_abs(m);
    if asymmetry(m) <= 1e-12 * scale {
        let spec = sym_eigen(m)?;
        if let Some(&lowest) = spec.eigenvalues.first() {
            if lowest < -1e-12 * scale {
                return Err(Error::NotPositiveDefinite(
                    "symmetric square root needs a non-negative spectrum",
                ));
            }
        }
        return Ok(spec.map(|x| x.max(0.0).sqrt()));
    }
    denman_beavers(m)
}

/// Scaled Denman–Beavers iteration
/// `Y ← (μY + (μZ)⁻¹)/2`, `Z ← (μZ + (μY)⁻¹)/2` with determinant scaling
/// `μ = |det Y det Z|^(−1/2n)`, starting from `Y = M`, `Z = I`.
///
/// Fails on singular iterates (an eigenvalue at zero) and when the final
/// residual `‖R² − M‖` exceeds `1e-10·‖M‖`.
pub fn denman_beavers(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension(
            "Denman–Beavers needs a square matrix".into(),
        ));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let mut y = m.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    let mut scaling = true;
    let mut change = f64::INFINITY;
    for _ in 0..DB_MAX_ITER {
        let y_inv = y
            .clone()
            .try_inverse()
            .ok_or(Error::Singular("Denman–Beavers"))?;
        let z_inv = z
            .clone()
            .try_inverse()
            .ok_or(Error::Singular("Denman–Beavers"))?;
        let mu = if scaling {
            let (_, ly) = log_abs_det(&y);
            let (_, lz) = log_abs_det(&z);
            (-(ly + lz) / (2.0 * n as f64)).exp()
        } else {
            1.0
        };
        let y_next = (&y * mu + &z_inv / mu) * 0.5;
        let z_next = (&z * mu + &y_inv / mu) * 0.5;
        change = max_abs(&(&y_next - &y)) / max_abs(&y_next).max(f64::MIN_POSITIVE);
        y = y_next;
        z = z_next;
        if change < 1e-2 {
            scaling = false;
        }
        if change < DB_TOL {
            break;
        }
    }
    let residual = max_abs(&(&y * &y - m));
    if !residual.is_finite() || residual > 1e-10 * max_abs(m) {
        return Err(Error::NoConvergence {
            what: "Denman–Beavers square root",
            iterations: DB_MAX_ITER,
            residual: if residual.is_finite() {
                residual
            } else {
                change
            },
        });
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        &g * g.transpose() + DMatrix::identity(n, n) * 0.1
    }

    #[test]
    fn identity_root() {
        let r = principal_sqrt(&DMatrix::identity(4, 4)).unwrap();
        assert!(max_abs(&(r - DMatrix::identity(4, 4))) < 1e-15);
        let r = denman_beavers(&DMatrix::identity(4, 4)).unwrap();
        assert!(max_abs(&(r - DMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn diagonal_root() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 9.0]));
        let r = denman_beavers(&m).unwrap();
        assert!((r[(0, 0)] - 2.0).abs() < 1e-13 && (r[(1, 1)] - 3.0).abs() < 1e-13);
        assert!(r[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn db_matches_eigen_route_on_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_spd(10, &mut rng);
        let db = denman_beavers(&m).unwrap();
        // independent route: Q Λ^{1/2} Qᵀ
        let eig = sym_eigen(&m).unwrap().map(f64::sqrt);
        assert!(max_abs(&(db - eig)) < 1e-9);
    }

    #[test]
    fn nonsymmetric_root_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // similarity transform of an SPD matrix: real positive spectrum, not symmetric
        let d = random_spd(6, &mut rng);
        let t = DMatrix::identity(6, 6) + DMatrix::from_fn(6, 6, |_, _| rng.gen_range(-0.3..0.3));
        let m = &t * d * t.clone().try_inverse().unwrap();
        let r = principal_sqrt(&m).unwrap();
        assert!(max_abs(&(&r * &r - &m)) < 1e-10 * max_abs(&m));
    }

    #[test]
    fn hundred_spd_instances_square_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(1..8);
            let m = random_spd(n, &mut rng);
            let r = denman_beavers(&m).unwrap();
            assert!(max_abs(&(&r * &r - &m)) <= 1e-9 * max_abs(&m));
        }
    }

    #[test]
    fn singular_input_reported() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.5, 1.0]);
        assert!(denman_beavers(&m).is_err());
    }

    #[test]
    fn negative_symmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            principal_sqrt(&m),
            Err(Error::NotPositiveDefinite(_))
        ));
    }
}
