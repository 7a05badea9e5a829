//! Probe-detuning sweeps and what is measured on them.

mod features;
mod scans;

use rayon::prelude::*;

use crate::doppler::{doppler_average, VelocityGrid};
use crate::obe::{DriveSet, LevelScheme};
use crate::units::to_mhz;
use crate::{Error, Result};

pub use features::{extract_features, find_features, FeatureKind, FeatureOptions, ResonanceFeature};
pub use scans::{rabi_scan, stark_prediction, zeeman_multiplet, RabiContrast};

/// Everything that defines a Doppler-averaged absorption calculation except
/// the probe detuning.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub scheme: LevelScheme,
    pub drives: DriveSet,
    pub grid: VelocityGrid,
}

impl Scenario {
    pub fn new(scheme: LevelScheme, drives: DriveSet, grid: VelocityGrid) -> Self {
        Scenario { scheme, drives, grid }
    }

    /// The same scenario with coupling and control beams off.
    pub fn probe_only(&self) -> Self {
        Scenario {
            drives: self.drives.probe_only(),
            ..self.clone()
        }
    }

    /// Doppler-averaged absorption at one probe detuning (rad/s).
    pub fn absorption_at(&self, probe_detuning: f64) -> Result<f64> {
        let mut drives = self.drives.clone();
        drives.probe.detuning = probe_detuning;
        doppler_average(&self.scheme, &drives, &self.grid).map_err(|e| Error::AtDetuning {
            detuning_mhz: to_mhz(probe_detuning),
            source: Box::new(e),
        })
    }

    /// Absorption at every point, evaluated in parallel, returned in order.
    pub fn absorption_curve(&self, detunings: &[f64]) -> Result<Vec<f64>> {
        detunings.par_iter().map(|&d| self.absorption_at(d)).collect()
    }
}

/// Strictly ascending probe detunings, rad/s.
#[derive(Clone, Debug, PartialEq)]
pub struct DetuningAxis(Vec<f64>);

impl DetuningAxis {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("detuning_axis", "empty or non-finite"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("detuning_axis", "not strictly ascending"));
        }
        Ok(DetuningAxis(points))
    }

    /// Symmetric axis with a fine step inside `±inner_half_width` and a
    /// coarse step out to `±half_width`. The inner edge is the last fine
    /// point, `round(inner_half_width / inner_step) · inner_step`.
    pub fn piecewise(inner_half_width: f64, inner_step: f64, half_width: f64, outer_step: f64) -> Result<Self> {
        if !(inner_step > 0.0 && outer_step > 0.0 && inner_half_width >= 0.0 && half_width >= inner_half_width) {
            return Err(Error::invalid(
                "detuning_axis",
                "need positive steps and half_width >= inner_half_width",
            ));
        }
        let n_inner = (inner_half_width / inner_step).round() as i64;
        let edge = n_inner as f64 * inner_step;
        let n_outer = ((half_width - edge) / outer_step + 1e-9).floor().max(0.0) as i64;
        let positive: Vec<f64> = (1..=n_inner)
            .map(|i| i as f64 * inner_step)
            .chain((1..=n_outer).map(|j| edge + j as f64 * outer_step))
            .collect();
        let points = positive
            .iter()
            .rev()
            .map(|p| -p)
            .chain(std::iter::once(0.0))
            .chain(positive.iter().copied())
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Beer–Lambert calibration: `T = exp(−target_od · a / absorption_ref)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpticalDepth {
    pub target_od: f64,
    /// Probe-only line-centre absorption of the reference scenario.
    pub absorption_ref: f64,
}

impl OpticalDepth {
    pub fn new(target_od: f64, absorption_ref: f64) -> Result<Self> {
        if !(target_od > 0.0 && target_od.is_finite()) {
            return Err(Error::invalid("target_od", format!("{target_od}")));
        }
        if !(absorption_ref > 0.0 && absorption_ref.is_finite()) {
            return Err(Error::DegenerateReference {
                absorption: absorption_ref,
            });
        }
        Ok(OpticalDepth {
            target_od,
            absorption_ref,
        })
    }

    pub fn transmission(&self, absorption: f64) -> f64 {
        (-self.target_od * absorption / self.absorption_ref).exp()
    }
}

/// Chooses the absorption scale so that the probe-only scenario transmits
/// `exp(−target_od)` on resonance.
pub fn calibrate_od(reference: &Scenario, target_od: f64) -> Result<OpticalDepth> {
    if !(target_od > 0.0 && target_od.is_finite()) {
        return Err(Error::invalid("target_od", format!("{target_od}")));
    }
    let absorption = reference.probe_only().absorption_at(0.0)?;
    OpticalDepth::new(target_od, absorption)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMetadata {
    pub scenario: Scenario,
    pub od: OpticalDepth,
    /// `(offset rad/s, weight)` for composite spectra; empty otherwise.
    pub multiplet: Vec<(f64, f64)>,
}

/// Absorption and transmission against probe detuning.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub detunings: Vec<f64>,
    pub absorption: Vec<f64>,
    pub transmission: Vec<f64>,
    pub metadata: SpectrumMetadata,
}

impl Spectrum {
    pub(crate) fn from_absorption(axis: &DetuningAxis, absorption: Vec<f64>, metadata: SpectrumMetadata) -> Self {
        let transmission = absorption.iter().map(|a| metadata.od.transmission(*a)).collect();
        Spectrum {
            detunings: axis.points().to_vec(),
            absorption,
            transmission,
            metadata,
        }
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    /// Index of the smallest absorption.
    pub fn argmin_absorption(&self) -> usize {
        argext(&self.absorption, |a, b| a < b)
    }

    /// Index of the largest absorption.
    pub fn argmax_absorption(&self) -> usize {
        argext(&self.absorption, |a, b| a > b)
    }
}

fn argext(values: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if better(v, values[best]) {
            best = i;
        }
    }
    best
}

/// Sweeps the probe detuning over `axis`, holding everything else fixed.
pub fn scan_spectrum(scenario: &Scenario, axis: &DetuningAxis, od: &OpticalDepth) -> Result<Spectrum> {
    let absorption = scenario.absorption_curve(axis.points())?;
    Ok(Spectrum::from_absorption(
        axis,
        absorption,
        SpectrumMetadata {
            scenario: scenario.clone(),
            od: *od,
            multiplet: Vec::new(),
        },
    ))
}
