//! Ground-state entanglement of trapped-ion local axial motional modes and
//! of the 1D lattice scalar-field vacuum, in the Gaussian continuous-variable
//! formalism.
//!
//! Covariance matrices use the interleaved phase-space order
//! `(φ₁, π₁, …, φₙ, πₙ)` and the convention that the vacuum is the identity.
//!
//! ```
//! use ionfield::{ion_chain::IonChainModel, gaussian};
//!
//! let chain = IonChainModel::build(2).unwrap();
//! let cm = chain.local_mode_cm();
//! let n = gaussian::log_negativity(&cm, &[0], &[1]).unwrap();
//! assert!((n - 3f64.ln() / 16f64.ln()).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod fock;
pub mod gaussian;
pub mod ion_chain;
pub mod numerics;
pub mod scalar_field;

pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, Quadrature, RegionSpec, SymplecticTransform};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
