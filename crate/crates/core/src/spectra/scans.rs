use super::{DetuningAxis, OpticalDepth, Scenario, Spectrum, SpectrumMetadata};
use crate::{Error, Result};

/// Light shift `Ω² / (4Δ)` of the ground state `|3⟩` from a far-detuned
/// control beam, which moves the EIT resonance by the same amount (rad/s).
/// A red-detuned control (`Δ < 0`) moves it to lower probe frequency.
pub fn stark_prediction(omega: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::DivisionByZero("control detuning is zero"));
    }
    Ok(omega * omega / (4.0 * delta))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiContrast {
    pub control_rabi: f64,
    /// Line-centre absorption minus the probe-only absorption.
    pub contrast: f64,
}

/// Line-centre absorption contrast for each control Rabi frequency, with a
/// resonant control beam.
pub fn rabi_scan(scenario: &Scenario, control_rabi: &[f64]) -> Result<Vec<RabiContrast>> {
    if scenario.drives.control.detuning != 0.0 {
        return Err(Error::invalid("control.detuning", "rabi scan needs a resonant control"));
    }
    let baseline = scenario.probe_only().absorption_at(0.0)?;
    control_rabi
        .iter()
        .map(|&omega| {
            let mut s = scenario.clone();
            s.drives.control.rabi = omega;
            Ok(RabiContrast {
                control_rabi: omega,
                contrast: s.absorption_at(0.0)? - baseline,
            })
        })
        .collect()
}

/// Weighted superposition of copies of `base` whose probe resonance is
/// displaced by each offset (rad/s): component `m` contributes
/// `weights[m] · a(Δ21 − offsets[m])`.
pub fn zeeman_multiplet(
    base: &Scenario,
    axis: &DetuningAxis,
    od: &OpticalDepth,
    offsets: &[f64],
    weights: &[f64],
) -> Result<Spectrum> {
    if offsets.len() != weights.len() || offsets.is_empty() {
        return Err(Error::LengthMismatch(format!(
            "{} offsets, {} weights",
            offsets.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("weights", "must be non-negative and sum to 1"));
    }

    let mut composite = vec![0.0; axis.len()];
    for (&offset, &weight) in offsets.iter().zip(weights) {
        let shifted: Vec<f64> = axis.points().iter().map(|d| d - offset).collect();
        let component = base.absorption_curve(&shifted)?;
        for (c, a) in composite.iter_mut().zip(component) {
            *c += weight * a;
        }
    }
    Ok(Spectrum::from_absorption(
        axis,
        composite,
        SpectrumMetadata {
            scenario: base.clone(),
            od: *od,
            multiplet: offsets.iter().copied().zip(weights.iter().copied()).collect(),
        },
    ))
}
