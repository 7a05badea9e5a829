//! Unit conversions and physical constants.

use std::f64::consts::TAU;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Mass of a ⁸⁷Rb atom, kg.
pub const RB87_MASS: f64 = 1.443_160_648e-25;

/// Vacuum wavelength of the Rb D2 line, m.
pub const RB_D2_WAVELENGTH: f64 = 780.24e-9;

/// Linear frequency in MHz to angular frequency in rad/s.
pub fn mhz(f: f64) -> f64 {
    TAU * 1e6 * f
}

/// Linear frequency in kHz to angular frequency in rad/s.
pub fn khz(f: f64) -> f64 {
    TAU * 1e3 * f
}

/// Angular frequency in rad/s to linear frequency in MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / (TAU * 1e6)
}

/// Wavevector magnitude for a vacuum wavelength.
pub fn wavevector(wavelength: f64) -> f64 {
    TAU / wavelength
}
