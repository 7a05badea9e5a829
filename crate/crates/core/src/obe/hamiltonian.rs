use num_complex::Complex64;

use super::{DriveSet, Operator};

/// How detunings enter the diagonal of the Hamiltonian.
///
/// Write `Δ'` for a field's Doppler-shifted detuning
/// ([`Field::shifted_detuning`](super::Field::shifted_detuning)).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DiagonalConvention {
    /// Diagonal `(Δ'32 − Δ'21, Δ'32, 0, Δ'43)`: `|1⟩` sits at the Raman
    /// (two-photon) detuning, so for co-propagating probe and coupling the
    /// ground-state resonance is independent of velocity.
    #[default]
    TwoPhoton,
    /// Diagonal `(Δ'21, Δ'32, 0, Δ'43) / 2`, taken literally from the
    /// matrix as commonly printed. The `|1⟩` entry carries a Doppler shift
    /// that the `|3⟩` entry lacks, so the dark resonance moves with `v`;
    /// kept for comparison only.
    Printed,
}

/// Hamiltonian (rad/s, ħ = 1) of an atom moving with velocity `v` (m/s).
///
/// Off-diagonal entries are half the Rabi frequencies on the chain
/// `1–2`, `2–3`, `3–4`; the result is real symmetric and hence Hermitian.
pub fn build_hamiltonian(drives: &DriveSet, velocity: f64) -> Operator {
    let kv = drives.wavevector * velocity;
    let probe = drives.probe.shifted_detuning(kv);
    let coupling = drives.coupling.shifted_detuning(kv);
    let control = drives.control.shifted_detuning(kv);

    let diagonal = match drives.convention {
        DiagonalConvention::TwoPhoton => [coupling - probe, coupling, 0.0, control],
        DiagonalConvention::Printed => [0.5 * probe, 0.5 * coupling, 0.0, 0.5 * control],
    };

    let mut h = Operator::zeros();
    for (i, e) in diagonal.into_iter().enumerate() {
        h[(i, i)] = Complex64::from(e);
    }
    for (i, rabi) in [drives.probe.rabi, drives.coupling.rabi, drives.control.rabi]
        .into_iter()
        .enumerate()
    {
        h[(i, i + 1)] = Complex64::from(0.5 * rabi);
        h[(i + 1, i)] = Complex64::from(0.5 * rabi);
    }
    h
}
