use nalgebra::DMatrix;

use super::covariance::{check_modes, omega, CovarianceMatrix};
use crate::numerics::{sym_eigen, symmetrized};
use crate::{Error, Result};

/// PT symplectic eigenvalues at or above `1 − SEPARABILITY_TOL` count as 1.
pub const SEPARABILITY_TOL: f64 = 1e-9;

/// Symplectic eigenvalues of a positive-definite symmetric matrix,
/// ascending, one per mode.
///
/// Uses the symmetric form `σ^{1/2} Ωᵀ σ Ω σ^{1/2}`, whose eigenvalues are
/// the squared symplectic eigenvalues, each twice.
pub fn symplectic_spectrum_of(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() % 2 != 0 {
        return Err(Error::Dimension(format!(
            "odd phase-space dimension {}",
            m.nrows()
        )));
    }
    let spec = sym_eigen(m)?;
    if spec.eigenvalues.first().is_some_and(|&l| !(l > 0.0)) {
        return Err(Error::NotPositiveDefinite("symplectic spectrum input"));
    }
    let root = spec.map(f64::sqrt);
    let o = omega(m.nrows() / 2);
    let k = symmetrized(&(&root * o.transpose() * m * &o * &root));
    let squares = sym_eigen(&k)?.eigenvalues;
    Ok(squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

pub fn symplectic_spectrum(cm: &CovarianceMatrix) -> Result<Vec<f64>> {
    symplectic_spectrum_of(cm.matrix())
}

/// `PσP` with the momentum signs of `modes` flipped.
pub fn partial_transpose(cm: &CovarianceMatrix, modes: &[usize]) -> Result<DMatrix<f64>> {
    check_modes(modes, cm.n_modes())?;
    let mut m = cm.matrix().clone();
    for &b in modes {
        let p = 2 * b + 1;
        m.row_mut(p).neg_mut();
        m.column_mut(p).neg_mut();
    }
    Ok(m)
}

pub fn pt_symplectic_spectrum(cm: &CovarianceMatrix, modes: &[usize]) -> Result<Vec<f64>> {
    symplectic_spectrum_of(&partial_transpose(cm, modes)?)
}

/// `Σ max(0, −log₂ ν̃)` with values within [`SEPARABILITY_TOL`] of 1 dropped.
pub fn negativity_from_spectrum(pt_spectrum: &[f64]) -> f64 {
    pt_spectrum
        .iter()
        .filter(|&&nu| nu < 1.0 - SEPARABILITY_TOL)
        .map(|nu| -nu.log2())
        .sum()
}

pub fn is_separable(pt_spectrum: &[f64]) -> bool {
    pt_spectrum.iter().all(|&nu| nu >= 1.0 - SEPARABILITY_TOL)
}

fn split_regions(cm: &CovarianceMatrix, a: &[usize], b: &[usize]) -> Result<CovarianceMatrix> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("regions must be non-empty".into()));
    }
    let joined: Vec<usize> = a.iter().chain(b).copied().collect();
    check_modes(&joined, cm.n_modes()).map_err(|e| match e {
        Error::InvalidArgument(_) => Error::InvalidArgument("regions overlap".into()),
        other => other,
    })?;
    cm.restrict(&joined)
}

/// Logarithmic negativity (base 2) between mode sets `a` and `b`.
///
/// Modes of `cm` outside `a ∪ b` are traced out.
pub fn log_negativity(cm: &CovarianceMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    Ok(negativity_from_spectrum(&pt_spectrum_ab(cm, a, b)?))
}

pub(crate) fn pt_spectrum_ab(cm: &CovarianceMatrix, a: &[usize], b: &[usize]) -> Result<Vec<f64>> {
    let joint = split_regions(cm, a, b)?;
    let flipped: Vec<usize> = (a.len()..a.len() + b.len()).collect();
    pt_symplectic_spectrum(&joint, &flipped)
}

/// Von Neumann entropy (bits) of a Gaussian state.
pub fn entanglement_entropy(cm: &CovarianceMatrix) -> Result<f64> {
    let mut s = 0.0;
    for nu in symplectic_spectrum(cm)? {
        if nu < 1.0 - SEPARABILITY_TOL {
            return Err(Error::Unphysical(format!(
                "symplectic eigenvalue {nu} below 1"
            )));
        }
        if nu <= 1.0 + SEPARABILITY_TOL {
            continue;
        }
        let (up, down) = (0.5 * (nu + 1.0), 0.5 * (nu - 1.0));
        s += up * up.log2() - down * down.log2();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::SymplecticTransform;

    #[test]
    fn vacuum_spectrum() {
        let nu = symplectic_spectrum(&CovarianceMatrix::vacuum(4)).unwrap();
        assert_eq!(nu.len(), 4);
        assert!(nu.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn thermal_mode() {
        let cm =
            CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[3.5, 0.0, 0.0, 3.5])).unwrap();
        assert!((symplectic_spectrum(&cm).unwrap()[0] - 3.5).abs() < 1e-13);
    }

    #[test]
    fn squeezing_preserves_spectrum() {
        let cm = CovarianceMatrix::new(DMatrix::from_row_slice(
            4,
            4,
            &[
                2.0, 0.1, 0.3, 0.0, 0.1, 1.5, 0.0, -0.2, 0.3, 0.0, 1.8, 0.0, 0.0, -0.2, 0.0, 2.2,
            ],
        ))
        .unwrap();
        let s = SymplecticTransform::single_mode_squeeze(2, 2.3, &[1]).unwrap();
        let a = symplectic_spectrum(&cm).unwrap();
        let b = symplectic_spectrum(&s.apply(&cm).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn tmsv_negativity_and_entropy() {
        let r: f64 = 1.0;
        let s = SymplecticTransform::two_mode_squeeze(2, r, 0, 1).unwrap();
        let cm = s.apply(&CovarianceMatrix::vacuum(2)).unwrap();
        let n = log_negativity(&cm, &[0], &[1]).unwrap();
        assert!((n - 2.0 * r / std::f64::consts::LN_2).abs() < 1e-10);
        let (c2, s2) = (r.cosh().powi(2), r.sinh().powi(2));
        let want = c2 * c2.log2() - s2 * s2.log2();
        let got = entanglement_entropy(&cm.restrict(&[0]).unwrap()).unwrap();
        assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn transposing_both_sides_changes_nothing() {
        let s = SymplecticTransform::two_mode_squeeze(2, 0.4, 0, 1).unwrap();
        let cm = s.apply(&CovarianceMatrix::vacuum(2)).unwrap();
        let none = pt_symplectic_spectrum(&cm, &[]).unwrap();
        let both = pt_symplectic_spectrum(&cm, &[0, 1]).unwrap();
        for (x, y) in none.iter().zip(&both) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_separable() {
        let a = CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0 / 3.0]))
            .unwrap();
        let cm = a.direct_sum(&CovarianceMatrix::vacuum(1));
        assert_eq!(log_negativity(&cm, &[0], &[1]).unwrap(), 0.0);
    }

    #[test]
    fn overlapping_regions_rejected() {
        let cm = CovarianceMatrix::vacuum(3);
        assert!(log_negativity(&cm, &[0, 1], &[1]).is_err());
        assert!(log_negativity(&cm, &[0], &[3]).is_err());
    }

    #[test]
    fn subunit_eigenvalue_is_unphysical() {
        let cm =
            CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5])).unwrap();
        assert!(matches!(
            entanglement_entropy(&cm),
            Err(Error::Unphysical(_))
        ));
    }

    #[test]
    fn near_unit_values_count_as_separable() {
        assert_eq!(negativity_from_spectrum(&[1.0 - 1e-10, 2.0]), 0.0);
        assert!(is_separable(&[1.0 - 1e-10]));
        assert!(negativity_from_spectrum(&[0.5]) == 1.0);
    }
}
