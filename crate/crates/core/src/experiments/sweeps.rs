use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::format::{fmt_sig, CsvRow};
use crate::fock::{local_transform, normal_form_squeeze, qudit_subspace_deficit};
use crate::gaussian::{
    condition_homodyne, is_separable, negativity_from_spectrum, optimize_global_squeeze,
    CovarianceMatrix, Quadrature, RegionSpec,
};
use crate::ion_chain::IonChainModel;
use crate::scalar_field::{conditioned_sites_cm, scalar_vacuum_cm, sites_cm, ScalarFieldSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Ion,
    Scalar,
}

/// What happens to the modes outside the two regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Treatment {
    Trace,
    Phi,
    Pi,
}

impl Treatment {
    pub const ALL: [Treatment; 3] = [Treatment::Trace, Treatment::Phi, Treatment::Pi];

    fn quadrature(self) -> Option<Quadrature> {
        match self {
            Treatment::Trace => None,
            Treatment::Phi => Some(Quadrature::Phi),
            Treatment::Pi => Some(Quadrature::Pi),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Ion => "ion",
            System::Scalar => "scalar",
        })
    }
}

impl fmt::Display for Treatment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Treatment::Trace => "trace",
            Treatment::Phi => "phi",
            Treatment::Pi => "pi",
        })
    }
}

/// A negativity together with whether the state is exactly separable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityValue {
    pub value: f64,
    pub separable: bool,
}

fn from_two_region_state(cm: &CovarianceMatrix, d: usize) -> Result<NegativityValue> {
    let b: Vec<usize> = (d..2 * d).collect();
    let spectrum = crate::gaussian::pt_symplectic_spectrum(cm, &b)?;
    let value = negativity_from_spectrum(&spectrum);
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::Unphysical(format!("negativity {value}")));
    }
    Ok(NegativityValue {
        value,
        separable: is_separable(&spectrum),
    })
}

/// Negativity between the two centered regions of an ion chain's local modes.
pub fn ion_negativity(
    cm: &CovarianceMatrix,
    region: &RegionSpec,
    treatment: Treatment,
) -> Result<NegativityValue> {
    if cm.n_modes() != region.total {
        return Err(Error::Dimension(format!(
            "region laid out on {} modes, state has {}",
            region.total,
            cm.n_modes()
        )));
    }
    let state = match treatment.quadrature() {
        None => cm.restrict(&region.modes())?,
        Some(q) => condition_homodyne(cm, &region.complement(), q)?,
    };
    from_two_region_state(&state, region.d)
}

/// Negativity between two regions of the infinite scalar lattice, with the
/// rest of the lattice traced or measured.
pub fn scalar_negativity(
    mass: f64,
    d: usize,
    separation: usize,
    treatment: Treatment,
) -> Result<NegativityValue> {
    let region = RegionSpec::tight(d, separation)?;
    let sites = region.modes();
    let state = match treatment.quadrature() {
        None => sites_cm(mass, &sites)?,
        Some(q) => conditioned_sites_cm(mass, &sites, q)?,
    };
    from_two_region_state(&state, d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityRow {
    pub system: System,
    /// `None` for the infinite scalar lattice.
    pub chain_size: Option<usize>,
    pub region_size: usize,
    pub separation: usize,
    pub treatment: Treatment,
    /// `None` when the regions do not fit in the chain.
    pub log_negativity: Option<f64>,
    pub separable: Option<bool>,
}

impl CsvRow for NegativityRow {
    const HEADER: &'static str =
        "system,chain_size,region_size,separation,treatment,log_negativity";

    fn fields(&self) -> Vec<String> {
        vec![
            self.system.to_string(),
            self.chain_size.map_or("inf".into(), |n| n.to_string()),
            self.region_size.to_string(),
            self.separation.to_string(),
            self.treatment.to_string(),
            self.log_negativity.map_or("infeasible".into(), fmt_sig),
        ]
    }
}

/// One cell of a negativity table. `chain` must hold the ion state when
/// `system` is [`System::Ion`].
pub fn negativity_cell(
    system: System,
    chain: Option<&CovarianceMatrix>,
    mass: f64,
    d: usize,
    separation: usize,
    treatment: Treatment,
) -> Result<NegativityValue> {
    match system {
        System::Ion => {
            let cm = chain.ok_or_else(|| Error::InvalidArgument("ion state missing".into()))?;
            ion_negativity(
                cm,
                &RegionSpec::new(cm.n_modes(), d, separation)?,
                treatment,
            )
        }
        System::Scalar => scalar_negativity(mass, d, separation, treatment),
    }
}

/// Rows for every `(separation, treatment)` pair, separation-major.
/// Geometries that do not fit the chain yield a row without a value.
pub fn negativity_sweep(
    system: System,
    chain_size: usize,
    d: usize,
    separations: &[usize],
    treatments: &[Treatment],
    mass: f64,
) -> Result<Vec<NegativityRow>> {
    let chain = match system {
        System::Ion => Some(IonChainModel::build(chain_size)?.local_mode_cm()),
        System::Scalar => None,
    };
    let jobs: Vec<(usize, Treatment)> = separations
        .iter()
        .flat_map(|&r| treatments.iter().map(move |&t| (r, t)))
        .collect();
    jobs.par_iter()
        .map(|&(separation, treatment)| {
            let fits = system == System::Scalar || 2 * d + separation <= chain_size;
            let value = if fits {
                Some(negativity_cell(
                    system,
                    chain.as_ref(),
                    mass,
                    d,
                    separation,
                    treatment,
                )?)
            } else {
                None
            };
            Ok(NegativityRow {
                system,
                chain_size: (system == System::Ion).then_some(chain_size),
                region_size: d,
                separation,
                treatment,
                log_negativity: value.map(|v| v.value),
                separable: value.map(|v| v.separable),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityRow {
    pub chain_size: usize,
    pub region_size: usize,
    pub squeeze_z: f64,
    pub fidelity_raw: f64,
    pub fidelity_squeezed: f64,
}

impl CsvRow for FidelityRow {
    const HEADER: &'static str = "chain_size,region_size,squeeze_z,fidelity_raw,fidelity_squeezed";

    fn fields(&self) -> Vec<String> {
        vec![
            self.chain_size.to_string(),
            self.region_size.to_string(),
            fmt_sig(self.squeeze_z),
            fmt_sig(self.fidelity_raw),
            fmt_sig(self.fidelity_squeezed),
        ]
    }
}

/// Central `window` local modes of the chain against `window` scalar sites.
pub fn fidelity_row(chain: &CovarianceMatrix, window: usize, mass: f64) -> Result<FidelityRow> {
    let n = chain.n_modes();
    if window == 0 || window > n {
        return Err(Error::InvalidArgument(format!(
            "window {window} must be in 1..={n}"
        )));
    }
    let left = (n - window) / 2;
    let modes: Vec<usize> = (left..left + window).collect();
    let source = chain.restrict(&modes)?;
    let target = scalar_vacuum_cm(&ScalarFieldSpec::new(mass, window)?)?;
    let best = optimize_global_squeeze(&source, &target)?;
    Ok(FidelityRow {
        chain_size: n,
        region_size: window,
        squeeze_z: best.z,
        fidelity_raw: best.raw_fidelity,
        fidelity_squeezed: best.fidelity,
    })
}

pub fn fidelity_sweep(chain_size: usize, windows: &[usize], mass: f64) -> Result<Vec<FidelityRow>> {
    let chain = IonChainModel::build(chain_size)?.local_mode_cm();
    windows
        .par_iter()
        .map(|&w| fidelity_row(&chain, w, mass))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockRow {
    pub qudit_dim: usize,
    pub p_out_raw: f64,
    pub p_out_squeezed: f64,
}

impl CsvRow for FockRow {
    const HEADER: &'static str = "qudit_dim,p_out_raw,p_out_squeezed";

    fn fields(&self) -> Vec<String> {
        vec![
            self.qudit_dim.to_string(),
            fmt_sig(self.p_out_raw),
            fmt_sig(self.p_out_squeezed),
        ]
    }
}

/// Qudit-subspace deficits of a two-mode state before and after the
/// normal-form squeeze on both modes.
pub fn fock_rows(cm: &CovarianceMatrix, dims: &[usize]) -> Result<Vec<FockRow>> {
    let squeezed = local_transform(cm, normal_form_squeeze(cm), 0.0)?;
    dims.par_iter()
        .map(|&d| {
            Ok(FockRow {
                qudit_dim: d,
                p_out_raw: qudit_subspace_deficit(cm, d)?,
                p_out_squeezed: qudit_subspace_deficit(&squeezed, d)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub chain_size: usize,
    pub positions: Vec<f64>,
    pub frequencies: Vec<f64>,
    /// Interleaved local-mode covariance, only for chains of at most 6 ions.
    pub covariance: Option<Vec<Vec<f64>>>,
}

pub const CHAIN_REPORT_CM_LIMIT: usize = 6;

pub fn chain_report(n: usize) -> Result<ChainReport> {
    let model = IonChainModel::build(n)?;
    let covariance = (n <= CHAIN_REPORT_CM_LIMIT).then(|| {
        let cm = model.local_mode_cm();
        cm.matrix()
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    });
    Ok(ChainReport {
        chain_size: n,
        positions: model.positions.clone(),
        frequencies: model.frequencies.clone(),
        covariance,
    })
}

impl ChainReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("chain_size {}\n", self.chain_size);
        let join = |v: &[f64]| v.iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(" ");
        out.push_str(&format!("positions {}\n", join(&self.positions)));
        out.push_str(&format!("frequencies {}\n", join(&self.frequencies)));
        if let Some(cm) = &self.covariance {
            out.push_str("covariance\n");
            for row in cm {
                out.push_str(&join(row));
                out.push('\n');
            }
        }
        out
    }
}
