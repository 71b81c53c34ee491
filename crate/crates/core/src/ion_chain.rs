//! Linear Paul-trap ion chains: equilibrium, axial normal modes, length
//! scales and the dimensionless covariance matrix of local motional modes.
//!
//! Positions are in units of `ℓ_μm` and frequencies in units of the
//! center-of-mass frequency `ω_z`, so the dimensionless potential is
//! `Ū = Σ z̄ᵢ² + Σ_{i≠j} 1/|z̄ᵢ − z̄ⱼ|`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::gaussian::CovarianceMatrix;
use crate::numerics::{compensated_sum, sym_eigen};
use crate::{Error, Result};

pub const MAX_IONS: usize = 300;

const GRADIENT_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 200;

pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;
pub const HBAR: f64 = 1.054571817e-34;
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
pub const ATOMIC_MASS_UNIT: f64 = 1.66053906660e-27;
pub const YB171_MASS_U: f64 = 170.936_325_8;

/// How the trap confinement is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Confinement {
    /// Quadratic trap coefficient κ₂.
    Curvature(f64),
    /// Center-of-mass angular frequency ω_z in rad/s.
    AngularFrequency(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalScales {
    pub ion_charge: f64,
    pub ion_mass: f64,
    pub trap_strength: f64,
    pub omega_z: f64,
    pub ell_um: f64,
    pub ell_nm: f64,
}

impl PhysicalScales {
    /// `ℓ_nm / ℓ_μm`, the small parameter of the harmonic expansion.
    pub fn ratio(&self) -> f64 {
        self.ell_nm / self.ell_um
    }
}

pub fn compute_scales(charge: f64, mass: f64, confinement: Confinement) -> Result<PhysicalScales> {
    let given = match confinement {
        Confinement::Curvature(k) | Confinement::AngularFrequency(k) => k,
    };
    for (name, v) in [("charge", charge), ("mass", mass), ("confinement", given)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let (kappa, omega) = match confinement {
        Confinement::Curvature(k) => (k, (2.0 * charge * k / mass).sqrt()),
        Confinement::AngularFrequency(w) => (mass * w * w / (2.0 * charge), w),
    };
    let ell_um = (charge / (8.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * kappa)).cbrt();
    let ell_nm = (HBAR / (mass * omega)).sqrt();
    Ok(PhysicalScales {
        ion_charge: charge,
        ion_mass: mass,
        trap_strength: kappa,
        omega_z: omega,
        ell_um,
        ell_nm,
    })
}

/// ¹⁷¹Yb⁺ at the given axial trap frequency in Hz.
pub fn ytterbium_scales(freq_hz: f64) -> Result<PhysicalScales> {
    compute_scales(
        ELEMENTARY_CHARGE,
        YB171_MASS_U * ATOMIC_MASS_UNIT,
        Confinement::AngularFrequency(2.0 * std::f64::consts::PI * freq_hz),
    )
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_IONS {
        return Err(Error::InvalidArgument(format!(
            "ion count must be in 1..={MAX_IONS}, got {n}"
        )));
    }
    Ok(())
}

/// Gradient of `Ū`.
pub fn potential_gradient(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    let mut g: Vec<f64> = z.iter().map(|x| 2.0 * x).collect();
    for i in 0..n {
        let coulomb = compensated_sum((0..n).filter(|&j| j != i).map(|j| {
            let d = z[i] - z[j];
            d.signum() / (d * d)
        }));
        g[i] -= 2.0 * coulomb;
    }
    g
}

pub fn potential(z: &[f64]) -> f64 {
    let mut u: f64 = z.iter().map(|x| x * x).sum();
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            u += 2.0 / (z[i] - z[j]).abs();
        }
    }
    u
}

/// Ascending equilibrium positions of `n` ions by damped Newton iteration.
/// Residual bound scaled by the largest trap-force term `2|z|`, which sets
/// the rounding floor of the gradient.
fn gradient_tolerance(z: &[f64]) -> f64 {
    let scale = z.iter().fold(1.0f64, |a, x| a.max(2.0 * x.abs()));
    GRADIENT_TOL * scale
}

pub fn solve_equilibrium(n: usize) -> Result<Vec<f64>> {
    check_count(n)?;
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let half_width = 0.9 * (n as f64).powf(2.0 / 3.0);
    let mut z: Vec<f64> = (0..n)
        .map(|i| half_width * (2.0 * i as f64 / (n - 1) as f64 - 1.0))
        .collect();

    let mut residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        let g = potential_gradient(&z);
        residual = g.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if residual <= gradient_tolerance(&z) {
            symmetrize(&mut z);
            return Ok(z);
        }
        let jac = build_hessian(&z)? * 2.0;
        let rhs = nalgebra::DVector::from_iterator(n, g.iter().map(|x| -x));
        let step = jac
            .cholesky()
            .ok_or(Error::NotPositiveDefinite("equilibrium Newton Jacobian"))?
            .solve(&rhs);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(a, b)| a + t * b).collect();
            if trial.windows(2).all(|w| w[1] > w[0]) {
                z = trial;
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::NoConvergence {
                    what: "equilibrium Newton line search",
                    iterations: 0,
                    residual,
                });
            }
        }
        symmetrize(&mut z);
    }
    Err(Error::NoConvergence {
        what: "equilibrium Newton iteration",
        iterations: MAX_NEWTON,
        residual,
    })
}

fn symmetrize(z: &mut [f64]) {
    let n = z.len();
    for i in 0..n / 2 {
        let a = 0.5 * (z[n - 1 - i] - z[i]);
        z[i] = -a;
        z[n - 1 - i] = a;
    }
    if n % 2 == 1 {
        z[n / 2] = 0.0;
    }
}

/// `L̄ = ½ ∂²Ū` at the given positions.
pub fn build_hessian(z: &[f64]) -> Result<DMatrix<f64>> {
    let n = z.len();
    if z.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "positions must be strictly ascending".into(),
        ));
    }
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = 1.0;
        for j in 0..n {
            if i != j {
                let c = 2.0 / (z[i] - z[j]).abs().powi(3);
                l[(i, i)] += c;
                l[(i, j)] = -c;
            }
        }
    }
    Ok(l)
}

/// Frequencies (ascending) and the mode matrix whose rows are eigenvectors.
pub fn normal_modes(hessian: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let spec = sym_eigen(hessian)?;
    if spec.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::NotPositiveDefinite("chain Hessian"));
    }
    let freqs = spec.eigenvalues.iter().map(|l| l.sqrt()).collect();
    Ok((freqs, spec.eigenvectors.transpose()))
}

#[derive(Debug, Clone)]
pub struct IonChainModel {
    pub positions: Vec<f64>,
    pub hessian: DMatrix<f64>,
    pub frequencies: Vec<f64>,
    pub modes: DMatrix<f64>,
}

impl IonChainModel {
    pub fn build(n: usize) -> Result<Self> {
        let positions = solve_equilibrium(n)?;
        let hessian = build_hessian(&positions)?;
        let (frequencies, modes) = normal_modes(&hessian)?;
        Ok(Self {
            positions,
            hessian,
            frequencies,
            modes,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Ground-state covariance matrix of the local (per-ion) modes.
    pub fn local_mode_cm(&self) -> CovarianceMatrix {
        let n = self.len();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in i..n {
                let (mut xx, mut pp) = (0.0, 0.0);
                for (a, &w) in self.frequencies.iter().enumerate() {
                    let e = self.modes[(a, i)] * self.modes[(a, j)];
                    xx += e / w;
                    pp += e * w;
                }
                m[(2 * i, 2 * j)] = xx;
                m[(2 * j, 2 * i)] = xx;
                m[(2 * i + 1, 2 * j + 1)] = pp;
                m[(2 * j + 1, 2 * i + 1)] = pp;
            }
        }
        CovarianceMatrix::from_matrix_unchecked(m)
    }
}
