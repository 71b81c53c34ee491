use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::covariance::{check_modes, CovarianceMatrix};
use crate::numerics::symmetrized;
use crate::{Error, Result};

/// Measured quadrature of an ideal homodyne detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    Phi,
    Pi,
}

impl Quadrature {
    /// Offset of this quadrature within a mode's interleaved pair.
    pub fn offset(self) -> usize {
        match self {
            Quadrature::Phi => 0,
            Quadrature::Pi => 1,
        }
    }
}

/// Conditional state of the unmeasured modes after homodyning `quadrature`
/// on every mode in `measured`.
///
/// `σ'_A = σ_A − σ_{A,E} σ_{E,E}⁻¹ σ_{E,A}` where `E` runs over the measured
/// quadrature rows only. The retained modes keep their original order.
pub fn condition_homodyne(
    cm: &CovarianceMatrix,
    measured: &[usize],
    quadrature: Quadrature,
) -> Result<CovarianceMatrix> {
    let n = cm.n_modes();
    check_modes(measured, n)?;
    let mut is_measured = vec![false; n];
    for &m in measured {
        is_measured[m] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&i| !is_measured[i]).collect();
    let rows_a: Vec<usize> = kept.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
    let rows_e: Vec<usize> = measured
        .iter()
        .map(|&m| 2 * m + quadrature.offset())
        .collect();

    let s = cm.matrix();
    let pick =
        |r: &[usize], c: &[usize]| DMatrix::from_fn(r.len(), c.len(), |i, j| s[(r[i], c[j])]);
    let sigma_a = pick(&rows_a, &rows_a);
    if rows_e.is_empty() {
        return Ok(CovarianceMatrix::from_matrix_unchecked(sigma_a));
    }
    let sigma_ae = pick(&rows_a, &rows_e);
    let sigma_e = pick(&rows_e, &rows_e);
    let chol = sigma_e
        .cholesky()
        .ok_or(Error::Singular("measured-quadrature block"))?;
    let correction = &sigma_ae * chol.solve(&sigma_ae.transpose());
    Ok(CovarianceMatrix::from_matrix_unchecked(symmetrized(
        &(sigma_a - correction),
    )))
}
