use super::DiagonalConvention;
use crate::units::{mhz, wavevector, RB_D2_WAVELENGTH};
use crate::{Error, Result};

/// Propagation direction of a beam along the cell axis.
///
/// An atom moving with velocity `v` sees a forward beam's detuning as
/// `Δ − kv` and a backward beam's as `Δ + kv`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Propagation {
    #[default]
    Forward,
    Backward,
}

impl Propagation {
    /// Coefficient of `kv` in the Doppler-shifted detuning.
    pub fn doppler_sign(self) -> f64 {
        match self {
            Propagation::Forward => -1.0,
            Propagation::Backward => 1.0,
        }
    }
}

/// A single laser field: Rabi frequency and detuning in rad/s.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Field {
    pub rabi: f64,
    pub detuning: f64,
    pub propagation: Propagation,
}

impl Field {
    pub fn new(rabi: f64, detuning: f64, propagation: Propagation) -> Self {
        Field {
            rabi,
            detuning,
            propagation,
        }
    }

    /// Detuning seen by an atom whose Doppler shift is `kv`.
    pub fn shifted_detuning(&self, kv: f64) -> f64 {
        self.detuning + self.propagation.doppler_sign() * kv
    }
}

/// Probe (`|1⟩↔|2⟩`), coupling (`|3⟩↔|2⟩`) and control (`|3⟩↔|4⟩`) fields.
#[derive(Clone, Debug, PartialEq)]
pub struct DriveSet {
    pub probe: Field,
    pub coupling: Field,
    pub control: Field,
    /// Wavevector magnitude shared by all three fields, rad/m.
    pub wavevector: f64,
    pub convention: DiagonalConvention,
}

impl DriveSet {
    /// Weak resonant probe (2π×0.1 MHz), resonant coupling 2π×5 MHz, control
    /// off. Probe and coupling co-propagate, the control counter-propagates.
    pub fn rubidium_d2() -> Self {
        DriveSet {
            probe: Field::new(mhz(0.1), 0.0, Propagation::Forward),
            coupling: Field::new(mhz(5.0), 0.0, Propagation::Forward),
            control: Field::new(0.0, 0.0, Propagation::Backward),
            wavevector: wavevector(RB_D2_WAVELENGTH),
            convention: DiagonalConvention::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, field) in [
            ("probe", &self.probe),
            ("coupling", &self.coupling),
            ("control", &self.control),
        ] {
            if !(field.rabi >= 0.0 && field.rabi.is_finite()) {
                return Err(Error::invalid("rabi", format!("{name} Rabi frequency {}", field.rabi)));
            }
            if !field.detuning.is_finite() {
                return Err(Error::invalid(
                    "detuning",
                    format!("{name} detuning {}", field.detuning),
                ));
            }
        }
        if !(self.wavevector > 0.0 && self.wavevector.is_finite()) {
            return Err(Error::invalid("wavevector", format!("{}", self.wavevector)));
        }
        Ok(())
    }

    /// The same drives with coupling and control switched off.
    pub fn probe_only(&self) -> Self {
        let mut d = self.clone();
        d.coupling.rabi = 0.0;
        d.control.rabi = 0.0;
        d
    }
}

impl Default for DriveSet {
    fn default() -> Self {
        Self::rubidium_d2()
    }
}
