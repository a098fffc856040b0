//! Dephasing of a qubit in a bosonic bath that an auxiliary qubit has
//! disturbed beforehand.
//!
//! The crate evaluates the decoherence functions of Ohmic and Lorentzian
//! baths ([`spectral`]), propagates the probe qubit ([`dynamics`]),
//! quantifies coherence revivals ([`nonmarkov`]) and bounds the evolution
//! time by relative-purity speed limits ([`qsl`]).
//!
//! ```
//! use qsl_disturb::{ModelConfig, SpectralDensity, DisturbanceConfig, nonmarkov};
//!
//! let bath = SpectralDensity::ohmic(5.0, 1.0, 1.0)?;
//! let cfg = ModelConfig::new(bath, DisturbanceConfig::new(0.5, 0.05)?);
//! let result = nonmarkov::measure(&cfg, 20.0, 4000)?;
//! assert!(result.n_value > 0.0);
//! # Ok::<(), qsl_disturb::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod dynamics;
pub mod error;
pub mod nonmarkov;
pub mod output;
pub mod presets;
pub mod qsl;
pub mod quadrature;
pub mod spectral;
pub mod state;

pub use dynamics::{
    coherence_trajectory, dephasing_factor, dephasing_factor_rate, evolve_state, ModelConfig, TimeGrid, Trajectory,
};
pub use error::{Error, Result};
pub use nonmarkov::{NonMarkovResult, SweepAxis};
pub use qsl::QslResult;
pub use spectral::{g_imag_cross, g_real, psi, DisturbanceConfig, Domain, Kernel, SpectralDensity};
pub use state::{coherence_l1, QubitState};

pub use num_complex::Complex64;
