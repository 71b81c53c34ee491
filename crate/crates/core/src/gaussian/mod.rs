//! Zero-mean Gaussian states described by their covariance matrices.

mod covariance;
mod fidelity;
mod homodyne;
mod region;
mod spectrum;
mod symplectic;

pub use covariance::{check_modes, omega, CovarianceMatrix};
pub use fidelity::{
    fidelity, fidelity_via_matrix_sqrt, optimize_global_squeeze, SqueezeOptimum, SQUEEZE_BRACKET,
};
pub use homodyne::{condition_homodyne, Quadrature};
pub use region::RegionSpec;
pub use spectrum::{
    entanglement_entropy, is_separable, log_negativity, negativity_from_spectrum,
    partial_transpose, pt_symplectic_spectrum, symplectic_spectrum, symplectic_spectrum_of,
    SEPARABILITY_TOL,
};
pub use symplectic::{apply_symplectic, SymplecticTransform};
