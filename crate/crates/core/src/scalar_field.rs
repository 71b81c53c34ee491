//! Vacuum of the free scalar field on an infinite 1D lattice,
//! `H = ½Σ[πₓ² + (φₓ₊₁ − φₓ)² + m²φₓ²]`, with dispersion
//! `ω_k = √(m² + 4 sin²(k/2))`.
//!
//! Two-point functions are Brillouin-zone integrals, so any finite window is
//! an exact reduced state of the infinite-volume vacuum.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::gaussian::{condition_homodyne, CovarianceMatrix, Quadrature, RegionSpec};
use crate::numerics::{inverse, quad_oscillatory};
use crate::{Error, Result};

pub const DEFAULT_MASS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarFieldSpec {
    pub mass: f64,
    pub window: usize,
}

impl ScalarFieldSpec {
    pub fn new(mass: f64, window: usize) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {mass}"
            )));
        }
        if window == 0 {
            return Err(Error::InvalidArgument(
                "window must hold at least one site".into(),
            ));
        }
        Ok(Self { mass, window })
    }

    pub fn massless(window: usize) -> Result<Self> {
        Self::new(DEFAULT_MASS, window)
    }
}

pub fn dispersion(mass: f64, k: f64) -> f64 {
    let s = (0.5 * k).sin();
    (mass * mass + 4.0 * s * s).sqrt()
}

/// `(⟨φ₀φ_Δ⟩, ⟨π₀π_Δ⟩)` in the vacuum = identity normalization.
pub fn two_point(mass: f64, separation: usize) -> Result<(f64, f64)> {
    let h = separation as i64;
    let phi = quad_oscillatory(|k| 1.0 / dispersion(mass, k), h)?;
    let pi = quad_oscillatory(|k| dispersion(mass, k), h)?;
    Ok((phi, pi))
}

/// Closed form of `⟨π₀π_Δ⟩` at `m = 0`.
pub fn massless_pi_correlator(separation: usize) -> f64 {
    let d = separation as f64;
    -4.0 / (std::f64::consts::PI * (4.0 * d * d - 1.0))
}

type Table = Vec<(f64, f64)>;

fn cache() -> &'static Mutex<HashMap<u64, Table>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Table>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Two-point values for separations `0..len`, memoized per mass.
pub fn two_point_table(mass: f64, len: usize) -> Result<Table> {
    let key = mass.to_bits();
    let have = cache()
        .lock()
        .expect("two-point cache poisoned")
        .get(&key)
        .map_or(0, Vec::len);
    if have < len {
        let fresh: Result<Table> = (have..len)
            .into_par_iter()
            .map(|d| two_point(mass, d))
            .collect();
        let fresh = fresh?;
        let mut guard = cache().lock().expect("two-point cache poisoned");
        let table = guard.entry(key).or_default();
        if table.len() == have {
            table.extend(fresh);
        }
    }
    let guard = cache().lock().expect("two-point cache poisoned");
    Ok(guard[&key][..len].to_vec())
}

fn toeplitz_blocks(mass: f64, sites: &[usize]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let span = sites.iter().max().map_or(0, |m| m + 1);
    let lo = sites.iter().min().copied().unwrap_or(0);
    let table = two_point_table(mass, span - lo)?;
    let k = sites.len();
    let x = DMatrix::from_fn(k, k, |i, j| table[sites[i].abs_diff(sites[j])].0);
    let p = DMatrix::from_fn(k, k, |i, j| table[sites[i].abs_diff(sites[j])].1);
    Ok((x, p))
}

fn interleave(x: &DMatrix<f64>, p: &DMatrix<f64>) -> CovarianceMatrix {
    let k = x.nrows();
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            m[(2 * i, 2 * j)] = x[(i, j)];
            m[(2 * i + 1, 2 * j + 1)] = p[(i, j)];
        }
    }
    CovarianceMatrix::from_matrix_unchecked(m)
}

/// Reduced vacuum state of `spec.window` consecutive sites.
pub fn scalar_vacuum_cm(spec: &ScalarFieldSpec) -> Result<CovarianceMatrix> {
    let sites: Vec<usize> = (0..spec.window).collect();
    sites_cm(spec.mass, &sites)
}

/// Reduced vacuum state of an arbitrary set of lattice sites.
pub fn sites_cm(mass: f64, sites: &[usize]) -> Result<CovarianceMatrix> {
    if sites.is_empty() {
        return Err(Error::InvalidArgument("no sites requested".into()));
    }
    let (x, p) = toeplitz_blocks(mass, sites)?;
    Ok(interleave(&x, &p))
}

/// State of `sites` after homodyning `quadrature` on every other site of the
/// infinite lattice.
///
/// The global state is pure with no φπ correlation, so the conditional state
/// is fixed by the retained block of the unmeasured quadrature: measuring π
/// leaves `(X_AA, X_AA⁻¹)` and measuring φ leaves `(P_AA⁻¹, P_AA)`.
pub fn conditioned_sites_cm(
    mass: f64,
    sites: &[usize],
    quadrature: Quadrature,
) -> Result<CovarianceMatrix> {
    if sites.is_empty() {
        return Err(Error::InvalidArgument("no sites requested".into()));
    }
    let (x, p) = toeplitz_blocks(mass, sites)?;
    Ok(match quadrature {
        Quadrature::Pi => {
            let xi = inverse(&x, "scalar φφ block")?;
            interleave(&x, &crate::numerics::symmetrized(&xi))
        }
        Quadrature::Phi => {
            let pi = inverse(&p, "scalar ππ block")?;
            interleave(&crate::numerics::symmetrized(&pi), &p)
        }
    })
}

/// Finite-buffer conditioning: keep `buffer` sites on each side of the two
/// regions, homodyne every site of that window outside the regions, and
/// return the state of `A ∪ B`.
pub fn condition_with_buffer(
    mass: f64,
    d: usize,
    separation: usize,
    quadrature: Quadrature,
    buffer: usize,
) -> Result<CovarianceMatrix> {
    let total = 2 * buffer + 2 * d + separation;
    let region = RegionSpec::new(total, d, separation)?;
    let window = scalar_vacuum_cm(&ScalarFieldSpec::new(mass, total)?)?;
    condition_homodyne(&window, &region.complement(), quadrature)
}
