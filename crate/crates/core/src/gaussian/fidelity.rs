use nalgebra::DMatrix;
use serde::Serialize;

use super::covariance::{omega, CovarianceMatrix};
use super::symplectic::SymplecticTransform;
use crate::numerics::{inverse, log_abs_det, maximize_1d, principal_sqrt};
use crate::{Error, Result};

/// Search interval for the global squeeze factor.
pub const SQUEEZE_BRACKET: (f64, f64) = (0.5, 20.0);
const SQUEEZE_LN_TOL: f64 = 1e-6;
const PURITY_TOL: f64 = 1e-10;

fn check_pair(a: &CovarianceMatrix, b: &CovarianceMatrix) -> Result<()> {
    if a.n_modes() != b.n_modes() {
        return Err(Error::Dimension(format!(
            "fidelity between {}-mode and {}-mode states",
            a.n_modes(),
            b.n_modes()
        )));
    }
    Ok(())
}

/// Ingredients of the mixed-state formula, in the convention where the
/// vacuum covariance is `I/2`: `G = s₁ + s₂`, `K = Ω/4 + s₂Ωs₁` and
/// `V = Ωᵀ G⁻¹ K`.
struct Parts {
    g: DMatrix<f64>,
    k: DMatrix<f64>,
    v: DMatrix<f64>,
    o: DMatrix<f64>,
}

fn parts(a: &CovarianceMatrix, b: &CovarianceMatrix) -> Result<Parts> {
    let s1 = a.matrix() * 0.5;
    let s2 = b.matrix() * 0.5;
    let o = omega(a.n_modes());
    let g = &s1 + &s2;
    let k = &o * 0.25 + &s2 * &o * &s1;
    let v = o.transpose() * inverse(&g, "fidelity σ₁+σ₂")? * &k;
    Ok(Parts { g, k, v, o })
}

/// `M = I + (VΩ)⁻²/4`
fn m_matrix(p: &Parts) -> Result<DMatrix<f64>> {
    let vo = &p.v * &p.o;
    let vo_inv = inverse(&vo, "fidelity VΩ")?;
    let n = vo.nrows();
    Ok(DMatrix::identity(n, n) + &vo_inv * &vo_inv * 0.25)
}

/// Uhlmann fidelity `F = Tr√(√ρ₁ ρ₂ √ρ₁)` of two zero-mean Gaussian states.
///
/// When either state is pure this is `det((σ₁+σ₂)/2)^{−1/4}`. Otherwise
/// `F⁴ = det(2(√M + I)V) / det(σ₁+σ₂)` is evaluated through the spectrum of
/// `M`, which is real and non-negative for physical input:
/// `det(√M + I) = Π(1 + √μᵢ)`. That stays well defined where `M` is singular.
pub fn fidelity(a: &CovarianceMatrix, b: &CovarianceMatrix) -> Result<f64> {
    check_pair(a, b)?;
    if a.is_pure(PURITY_TOL) || b.is_pure(PURITY_TOL) {
        let (sign, log) = log_abs_det(&((a.matrix() + b.matrix()) * 0.5));
        if sign <= 0.0 {
            return Err(Error::Singular("fidelity σ₁+σ₂"));
        }
        return Ok((-0.25 * log).exp().clamp(0.0, 1.0));
    }
    let p = parts(a, b)?;
    let m = m_matrix(&p)?;
    let log_roots: f64 = m
        .complex_eigenvalues()
        .iter()
        .map(|mu| (1.0 + mu.re.max(0.0).sqrt()).ln())
        .sum();
    let n = p.g.nrows() as f64;
    let (_, log_k) = log_abs_det(&p.k);
    let (sign_g, log_g) = log_abs_det(&p.g);
    if sign_g <= 0.0 {
        return Err(Error::Singular("fidelity σ₁+σ₂"));
    }
    // det(2V) = 2^{2n}·det K / det G, divided once more by det G.
    let log_f4 = log_roots + n * std::f64::consts::LN_2 + log_k - 2.0 * log_g;
    Ok((0.25 * log_f4).exp().clamp(0.0, 1.0))
}

/// The same quantity with `√M` formed explicitly by Denman–Beavers.
/// Fails when `M` is singular (pure or nearly pure input).
pub fn fidelity_via_matrix_sqrt(a: &CovarianceMatrix, b: &CovarianceMatrix) -> Result<f64> {
    check_pair(a, b)?;
    let p = parts(a, b)?;
    let m = m_matrix(&p)?;
    let root = principal_sqrt(&m)?;
    let id = DMatrix::identity(m.nrows(), m.nrows());
    let num = ((root + id) * &p.v * 2.0).determinant();
    let den = p.g.determinant();
    let f4 = num / den;
    if !(f4 >= 0.0) {
        return Err(Error::Unphysical(format!("negative fidelity⁴ {f4:e}")));
    }
    Ok(f4.powf(0.25).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeOptimum {
    pub z: f64,
    pub fidelity: f64,
    pub raw_fidelity: f64,
    pub iterations: usize,
}

/// Maximizes `F(S_z σ_source S_zᵀ, σ_target)` over one squeeze factor `z`
/// applied to every mode of the source, searching `ln z`.
pub fn optimize_global_squeeze(
    source: &CovarianceMatrix,
    target: &CovarianceMatrix,
) -> Result<SqueezeOptimum> {
    check_pair(source, target)?;
    let n = source.n_modes();
    let objective = |ln_z: f64| -> Result<f64> {
        let s = SymplecticTransform::global_squeeze(n, ln_z.exp())?;
        fidelity(&s.apply(source)?, target)
    };
    let raw_fidelity = fidelity(source, target)?;
    let best = maximize_1d(
        objective,
        (SQUEEZE_BRACKET.0.ln(), SQUEEZE_BRACKET.1.ln()),
        SQUEEZE_LN_TOL,
    )?;
    Ok(SqueezeOptimum {
        z: best.argmax.exp(),
        fidelity: best.max,
        raw_fidelity,
        iterations: best.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> CovarianceMatrix {
        CovarianceMatrix::new(DMatrix::from_diagonal(
            &nalgebra::DVector::from_column_slice(v),
        ))
        .unwrap()
    }

    #[test]
    fn squeezed_vacuum_overlap() {
        for z in [1.3, 2.0, 5.0] {
            let sq = diag(&[z * z, 1.0 / (z * z)]);
            let want = (2.0 * z / (z * z + 1.0)).sqrt();
            let got = fidelity(&sq, &CovarianceMatrix::vacuum(1)).unwrap();
            assert!((got - want).abs() < 1e-12, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn thermal_states_closed_form() {
        let (a, b) = (2.0f64, 3.0f64);
        let want = 2.0 / (((a + 1.0) * (b + 1.0)).sqrt() - ((a - 1.0) * (b - 1.0)).sqrt());
        let got = fidelity(&diag(&[a, a]), &diag(&[b, b])).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        let alt = fidelity_via_matrix_sqrt(&diag(&[a, a]), &diag(&[b, b])).unwrap();
        assert!((alt - want).abs() < 1e-10);
    }

    #[test]
    fn self_fidelity_is_one() {
        let t = diag(&[2.0, 2.0, 1.5, 1.5]);
        assert!((fidelity(&t, &t).unwrap() - 1.0).abs() < 1e-12);
        let v = CovarianceMatrix::vacuum(3);
        assert!((fidelity(&v, &v).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mode_count_mismatch() {
        assert!(fidelity(&CovarianceMatrix::vacuum(1), &CovarianceMatrix::vacuum(2)).is_err());
    }

    #[test]
    fn squeeze_recovers_known_factor() {
        let target = diag(&[9.0, 1.0 / 9.0]);
        let best = optimize_global_squeeze(&CovarianceMatrix::vacuum(1), &target).unwrap();
        assert!((best.z - 3.0).abs() < 1e-4);
        assert!((best.fidelity - 1.0).abs() < 1e-9);
        let same = optimize_global_squeeze(&target, &target).unwrap();
        assert!((same.z - 1.0).abs() < 1e-4 && (same.raw_fidelity - 1.0).abs() < 1e-12);
    }
}
