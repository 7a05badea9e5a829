//! Steady-state optical Bloch equations for a four-level N-system.
//!
//! Levels `|1⟩` and `|3⟩` are hyperfine ground states, `|2⟩` and `|4⟩` are
//! excited states. A weak probe drives `|1⟩↔|2⟩`, a coupling beam drives
//! `|3⟩↔|2⟩` (together a Λ system showing EIT) and a control beam drives
//! `|3⟩↔|4⟩`. The crate solves for the steady-state density matrix of each
//! velocity class, averages over a thermal velocity distribution, sweeps the
//! probe detuning and extracts line-shape features.
//!
//! All frequencies inside the library are angular frequencies in rad/s; use
//! [`units::mhz`] to convert from linear MHz.
//!
//! ```
//! use nsystem::prelude::*;
//!
//! let scheme = LevelScheme::rubidium_d2();
//! let mut drives = DriveSet::rubidium_d2();
//! drives.probe.detuning = 0.0;
//! let h = build_hamiltonian(&drives, 0.0);
//! let d = build_dissipator(&scheme).unwrap();
//! let sigma = steady_state(&h, &d).unwrap();
//! // A resonant Λ system at v = 0 is dark: almost no probe absorption.
//! assert!(probe_absorption(&sigma) < 1e-3);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod doppler;
mod error;
pub mod obe;
pub mod oracle;
pub mod run;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};

/// The types and functions needed for most calculations.
pub mod prelude {
    pub use crate::doppler::{cutoff_scan, doppler_average, thermal_grid, VelocityGrid};
    pub use crate::obe::{
        build_dissipator, build_hamiltonian, probe_absorption, steady_state, DensityMatrix, DiagonalConvention,
        Dissipator, DriveSet, Field, Level, LevelScheme, Operator, Propagation, TransitModel,
    };
    pub use crate::spectra::{
        calibrate_od, extract_features, rabi_scan, scan_spectrum, stark_prediction, zeeman_multiplet, DetuningAxis,
        FeatureKind, OpticalDepth, ResonanceFeature, Scenario, Spectrum,
    };
    pub use crate::units::{mhz, to_mhz};
}
