//! Fock-basis matrix elements of zero-mean Gaussian states via hafnians.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::gaussian::{CovarianceMatrix, SymplecticTransform};
use crate::numerics::{compensated_sum, hafnian_repeated};
use crate::{Error, Result};

/// Largest occupation accepted per mode.
pub const OCCUPATION_CAP: usize = 12;
/// Largest qudit dimension for subspace probabilities.
pub const MAX_QUDIT_DIM: usize = 8;

const TAYLOR_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockIndex(Vec<usize>);

impl FockIndex {
    pub fn new(occupations: Vec<usize>) -> Result<Self> {
        if let Some(&o) = occupations.iter().find(|&&o| o > OCCUPATION_CAP) {
            return Err(Error::InvalidArgument(format!(
                "occupation {o} exceeds the cap of {OCCUPATION_CAP}"
            )));
        }
        Ok(Self(occupations))
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Husimi covariance `σ_Q` in the `(a, a†)` basis and the kernel
/// `A = X(I − σ_Q⁻¹)` whose hafnians give density-matrix elements.
#[derive(Debug, Clone)]
pub struct HusimiData {
    pub sigma_q: DMatrix<Complex64>,
    pub a: DMatrix<Complex64>,
    pub det_sigma_q: f64,
}

impl HusimiData {
    pub fn n_modes(&self) -> usize {
        self.a.nrows() / 2
    }
}

pub fn husimi_data(cm: &CovarianceMatrix) -> Result<HusimiData> {
    let n = cm.n_modes();
    let s = cm.matrix();
    // interleaved -> (φ…φ, π…π)
    let perm: Vec<usize> = (0..n)
        .map(|i| 2 * i)
        .chain((0..n).map(|i| 2 * i + 1))
        .collect();
    let xxpp = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        Complex64::new(s[(perm[i], perm[j])], 0.0)
    });

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        u[(k, k)] = Complex64::new(h, 0.0);
        u[(k, n + k)] = Complex64::new(0.0, h);
        u[(n + k, k)] = Complex64::new(h, 0.0);
        u[(n + k, n + k)] = Complex64::new(0.0, -h);
    }
    let id = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    let sigma_q = (&u * xxpp * u.adjoint() + &id) * Complex64::new(0.5, 0.0);
    let lu = sigma_q.clone().lu();
    let det = lu.determinant();
    let inv = lu
        .try_inverse()
        .ok_or(Error::Singular("Husimi covariance"))?;
    if !(det.re > 0.0) {
        return Err(Error::Unphysical(format!("det σ_Q = {det}")));
    }
    let mut x = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        x[(k, n + k)] = Complex64::new(1.0, 0.0);
        x[(n + k, k)] = Complex64::new(1.0, 0.0);
    }
    let a = x * (id - inv);
    Ok(HusimiData {
        sigma_q,
        a,
        det_sigma_q: det.re,
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `⟨m|ρ|n⟩`
pub fn matrix_element(h: &HusimiData, m: &FockIndex, n: &FockIndex) -> Result<f64> {
    let modes = h.n_modes();
    if m.0.len() != modes || n.0.len() != modes {
        return Err(Error::Dimension(format!(
            "Fock indices of length {}/{} for {modes} modes",
            m.0.len(),
            n.0.len()
        )));
    }
    if (m.total() + n.total()) % 2 == 1 {
        return Ok(0.0);
    }
    let reps: Vec<usize> = n.0.iter().chain(&m.0).copied().collect();
    let haf = hafnian_repeated(&h.a, &reps)?;
    let norm: f64 = reps.iter().map(|&r| factorial(r)).product();
    Ok(haf.re / (h.det_sigma_q * norm).sqrt())
}

/// Coefficients `(t₀, t₊, t₋)` with
/// `exp(v₊K₊ + v₋K₋ + v₀K₀) = exp(t₊K₊)·t₀^{K₀}·exp(t₋K₋)`.
pub fn tmsv_disentangle(v0: f64, v_plus: f64, v_minus: f64) -> Result<(f64, f64, f64)> {
    let f2 = 0.25 * v0 * v0 - v_plus * v_minus;
    let (cosh, sinhc) = if f2.abs() < TAYLOR_CUTOFF * TAYLOR_CUTOFF {
        (
            1.0 + f2 / 2.0 + f2 * f2 / 24.0,
            1.0 + f2 / 6.0 + f2 * f2 / 120.0,
        )
    } else if f2 > 0.0 {
        let f = f2.sqrt();
        (f.cosh(), f.sinh() / f)
    } else {
        let g = (-f2).sqrt();
        (g.cos(), g.sin() / g)
    };
    let c = cosh - 0.5 * v0 * sinhc;
    if c.abs() < 1e-14 {
        return Err(Error::Singular("disentangling denominator"));
    }
    Ok((
        1.0 / (c * c),
        v_plus * sinhc / c.abs(),
        v_minus * sinhc / c.abs(),
    ))
}

fn check_two_modes(cm: &CovarianceMatrix) -> Result<()> {
    if cm.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "expected 2 modes, got {}",
            cm.n_modes()
        )));
    }
    Ok(())
}

/// Probability outside the lowest `dim` Fock levels of each of two modes.
pub fn qudit_subspace_deficit(cm: &CovarianceMatrix, dim: usize) -> Result<f64> {
    check_two_modes(cm)?;
    if dim == 0 || dim > MAX_QUDIT_DIM {
        return Err(Error::InvalidArgument(format!(
            "qudit dimension must be in 1..={MAX_QUDIT_DIM}, got {dim}"
        )));
    }
    let h = husimi_data(cm)?;
    let mut diag = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let k = FockIndex::new(vec![i, j])?;
            diag.push(matrix_element(&h, &k, &k)?);
        }
    }
    Ok(1.0 - compensated_sum(diag))
}

/// Density-matrix block over `{|ij⟩ : i, j < levels}`, rows in lexicographic
/// order `|00⟩, |01⟩, …`.
pub fn density_block(cm: &CovarianceMatrix, levels: usize) -> Result<DMatrix<f64>> {
    check_two_modes(cm)?;
    let h = husimi_data(cm)?;
    let basis: Vec<FockIndex> = (0..levels)
        .flat_map(|i| (0..levels).map(move |j| vec![i, j]))
        .map(FockIndex::new)
        .collect::<Result<_>>()?;
    let k = basis.len();
    let mut out = DMatrix::zeros(k, k);
    for (r, m) in basis.iter().enumerate() {
        for (c, n) in basis.iter().enumerate() {
            out[(r, c)] = matrix_element(&h, m, n)?;
        }
    }
    Ok(out)
}

/// `z = (σ_ππ/σ_φφ)^{1/4}` of the first mode: the squeeze that equalizes its
/// quadrature variances.
pub fn normal_form_squeeze(cm: &CovarianceMatrix) -> f64 {
    let m = cm.matrix();
    (m[(1, 1)] / m[(0, 0)]).powf(0.25)
}

/// `O(φ)·Z(z)` applied to both modes of a two-mode state.
pub fn local_transform(cm: &CovarianceMatrix, z: f64, phi: f64) -> Result<CovarianceMatrix> {
    check_two_modes(cm)?;
    let s = SymplecticTransform::single_mode_rotation(2, phi, &[0, 1])?
        .compose(&SymplecticTransform::single_mode_squeeze(2, z, &[0, 1])?)?;
    s.apply(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub z: f64,
    pub phi: f64,
    pub p_out: f64,
}

/// `P_out` over the `(z, φ)` grid, z-major.
pub fn subspace_sweep(
    cm: &CovarianceMatrix,
    zs: &[f64],
    phis: &[f64],
    dim: usize,
) -> Result<Vec<SweepPoint>> {
    let grid: Vec<(f64, f64)> = zs
        .iter()
        .flat_map(|&z| phis.iter().map(move |&p| (z, p)))
        .collect();
    grid.par_iter()
        .map(|&(z, phi)| {
            let p_out = qudit_subspace_deficit(&local_transform(cm, z, phi)?, dim)?;
            Ok(SweepPoint { z, phi, p_out })
        })
        .collect()
}
