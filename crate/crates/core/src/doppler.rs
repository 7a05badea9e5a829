//! Thermal velocity distribution and Doppler averaging.
//!
//! A [`VelocityGrid`] is a set of axial velocities with quadrature weights
//! summing to one. [`thermal_grid`] samples a 1-D Maxwell–Boltzmann
//! (Gaussian) distribution on a uniform grid; the integrand has narrow
//! velocity-space structure so a dense uniform grid is used rather than a
//! few Gauss–Hermite nodes.

use rayon::prelude::*;

use crate::obe::{build_dissipator, build_hamiltonian, probe_absorption, steady_state, DriveSet, LevelScheme};
use crate::units::BOLTZMANN;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct VelocityGrid {
    /// Standard deviation of the axial velocity, m/s (zero for a
    /// hand-built grid).
    pub sigma_v: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Largest `|kv|` (rad/s) kept by [`VelocityGrid::with_cutoff`].
    pub cutoff: Option<f64>,
}

/// Uniform grid over `±span·σv` with Gaussian weights normalised to one.
///
/// `σv = sqrt(kB·T/m)`. `n_nodes` must be odd so that `v = 0` is sampled.
pub fn thermal_grid(temperature: f64, atomic_mass: f64, span: f64, n_nodes: usize) -> Result<VelocityGrid> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidGrid(format!("temperature {temperature} K")));
    }
    if !(atomic_mass > 0.0 && atomic_mass.is_finite()) {
        return Err(Error::InvalidGrid(format!("atomic mass {atomic_mass} kg")));
    }
    if !(span >= 3.0 && span.is_finite()) {
        return Err(Error::InvalidGrid(format!("span {span} must be at least 3 sigma")));
    }
    if n_nodes < 3 || n_nodes.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "{n_nodes} nodes; need an odd count of at least 3"
        )));
    }

    let sigma_v = (BOLTZMANN * temperature / atomic_mass).sqrt();
    let half = (n_nodes / 2) as f64;
    let nodes: Vec<f64> = (0..n_nodes)
        .map(|i| (i as f64 - half) / half * span * sigma_v)
        .collect();
    let mut weights: Vec<f64> = nodes.iter().map(|v| (-0.5 * (v / sigma_v).powi(2)).exp()).collect();
    normalise(&mut weights);
    Ok(VelocityGrid {
        sigma_v,
        nodes,
        weights,
        cutoff: None,
    })
}

fn normalise(weights: &mut [f64]) {
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
}

impl VelocityGrid {
    /// A single velocity class with weight one.
    pub fn single(velocity: f64) -> Self {
        VelocityGrid {
            sigma_v: 0.0,
            nodes: vec![velocity],
            weights: vec![1.0],
            cutoff: None,
        }
    }

    /// Stationary atoms only.
    pub fn stationary() -> Self {
        Self::single(0.0)
    }

    /// Arbitrary nodes and non-negative weights; weights are used as given.
    pub fn from_nodes(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes with {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) || nodes.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("negative weight or non-finite node".into()));
        }
        Ok(VelocityGrid {
            sigma_v: 0.0,
            nodes,
            weights,
            cutoff: None,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Keeps the classes with `|kv| ≤ cutoff` and renormalises their
    /// weights to one.
    pub fn with_cutoff(&self, cutoff: f64, wavevector: f64) -> Result<VelocityGrid> {
        let (nodes, mut weights): (Vec<f64>, Vec<f64>) = self
            .nodes
            .iter()
            .zip(&self.weights)
            .filter(|(v, _)| (wavevector * **v).abs() <= cutoff)
            .unzip();
        if nodes.is_empty() || weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::EmptyGrid { cutoff });
        }
        normalise(&mut weights);
        Ok(VelocityGrid {
            sigma_v: self.sigma_v,
            nodes,
            weights,
            cutoff: Some(cutoff),
        })
    }
}

/// Weighted sum of the single-velocity probe absorption over the grid.
///
/// Velocity classes are solved in parallel; the sum is always taken in node
/// order, so the result does not depend on the thread count.
pub fn doppler_average(scheme: &LevelScheme, drives: &DriveSet, grid: &VelocityGrid) -> Result<f64> {
    drives.validate()?;
    let dissipator = build_dissipator(scheme)?;
    let per_node: Vec<f64> = grid
        .nodes
        .par_iter()
        .map(|&v| {
            let h = build_hamiltonian(drives, v);
            steady_state(&h, &dissipator)
                .map(|sigma| probe_absorption(&sigma))
                .map_err(|e| Error::AtVelocity {
                    velocity: v,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;
    Ok(per_node.iter().zip(&grid.weights).fold(0.0, |acc, (a, w)| acc + w * a))
}

/// Central absorption contrast for each velocity cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffContrast {
    /// Largest `|kv|` included, rad/s.
    pub cutoff: f64,
    /// Absorption at `Δ21 = 0` minus the probe-only absorption on the same
    /// truncated grid. Negative is transparency, positive enhanced
    /// absorption.
    pub contrast: f64,
}

/// Truncates the grid at each cutoff and measures the line-centre contrast.
///
/// The probe is put on resonance; all other drive parameters are used as
/// given.
pub fn cutoff_scan(
    scheme: &LevelScheme,
    drives: &DriveSet,
    grid: &VelocityGrid,
    cutoffs: &[f64],
) -> Result<Vec<CutoffContrast>> {
    if cutoffs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("cutoffs", "must be strictly ascending"));
    }
    let mut on = drives.clone();
    on.probe.detuning = 0.0;
    let off = on.probe_only();
    cutoffs
        .iter()
        .map(|&cutoff| {
            let truncated = grid.with_cutoff(cutoff, drives.wavevector)?;
            let contrast = doppler_average(scheme, &on, &truncated)? - doppler_average(scheme, &off, &truncated)?;
            Ok(CutoffContrast { cutoff, contrast })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{mhz, wavevector, RB87_MASS, RB_D2_WAVELENGTH};
    use std::f64::consts::TAU;

    fn room_grid(n: usize) -> VelocityGrid {
        thermal_grid(293.0, RB87_MASS, 4.0, n).unwrap()
    }

    #[test]
    fn rubidium_sigma_v() {
        // sqrt(1.380649e-23 · 293 / 1.443e-25) = 167.44 m/s;
        // 167.44 / 780.24e-9 = 214.6 MHz.
        let g = thermal_grid(293.0, 1.443e-25, 4.0, 101).unwrap();
        assert!((g.sigma_v - 167.44).abs() < 0.05, "{}", g.sigma_v);
        let k_sigma = wavevector(RB_D2_WAVELENGTH) * g.sigma_v / TAU / 1e6;
        assert!((k_sigma - 214.6).abs() < 0.1, "{k_sigma}");
    }

    #[test]
    fn three_node_grid() {
        let g = thermal_grid(293.0, RB87_MASS, 3.0, 3).unwrap();
        let s = g.sigma_v;
        assert_eq!(g.nodes.len(), 3);
        assert!((g.nodes[0] + 3.0 * s).abs() < 1e-9 && g.nodes[1] == 0.0 && (g.nodes[2] - 3.0 * s).abs() < 1e-9);
        let edge = (-4.5f64).exp();
        let total = 1.0 + 2.0 * edge;
        assert!((g.weights[1] - 1.0 / total).abs() < 1e-15);
        assert!((g.weights[0] - edge / total).abs() < 1e-15);
        assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn default_grid_invariants() {
        let g = room_grid(2001);
        assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(g.weights.iter().all(|w| *w >= 0.0));
        let n = g.len();
        for i in 0..n {
            assert!((g.nodes[i] + g.nodes[n - 1 - i]).abs() < 1e-9);
        }
        assert_eq!(g.nodes[n / 2], 0.0);
    }

    #[test]
    fn rejects_even_node_count() {
        assert!(matches!(
            thermal_grid(293.0, RB87_MASS, 4.0, 2000),
            Err(Error::InvalidGrid(_))
        ));
        assert!(thermal_grid(293.0, RB87_MASS, 2.0, 2001).is_err());
        assert!(thermal_grid(-1.0, RB87_MASS, 4.0, 2001).is_err());
    }

    #[test]
    fn cutoff_filters_and_renormalises() {
        let g = room_grid(2001);
        let k = wavevector(RB_D2_WAVELENGTH);
        let gamma = mhz(6.0);
        let t = g.with_cutoff(gamma, k).unwrap();
        assert!(t.nodes.iter().all(|v| (k * v).abs() <= gamma));
        let dropped = g.nodes.iter().filter(|v| (k * **v).abs() > gamma).count();
        assert_eq!(t.len() + dropped, g.len());
        assert!((t.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(t.cutoff, Some(gamma));
        assert!(matches!(g.with_cutoff(-1.0, k), Err(Error::EmptyGrid { .. })));
    }

    #[test]
    fn delta_grid_equals_single_velocity() {
        let scheme = LevelScheme::rubidium_d2();
        let mut drives = DriveSet::rubidium_d2();
        drives.probe.detuning = mhz(0.4);
        let d = build_dissipator(&scheme).unwrap();
        for v in [0.0, 55.0] {
            let direct = probe_absorption(&steady_state(&build_hamiltonian(&drives, v), &d).unwrap());
            let avg = doppler_average(&scheme, &drives, &VelocityGrid::single(v)).unwrap();
            assert_eq!(direct, avg);
        }
    }

    #[test]
    fn node_order_does_not_matter() {
        let scheme = LevelScheme::rubidium_d2();
        let drives = DriveSet::rubidium_d2();
        let g = room_grid(201);
        let forward = doppler_average(&scheme, &drives, &g).unwrap();
        let rev = VelocityGrid::from_nodes(
            g.nodes.iter().rev().copied().collect(),
            g.weights.iter().rev().copied().collect(),
        )
        .unwrap();
        let backward = doppler_average(&scheme, &drives, &rev).unwrap();
        assert!((forward - backward).abs() <= 1e-12 * forward.abs().max(1e-300));
        let mirrored = VelocityGrid::from_nodes(g.nodes.iter().map(|v| -v).collect(), g.weights.clone()).unwrap();
        let m = doppler_average(&scheme, &drives, &mirrored).unwrap();
        assert!((forward - m).abs() <= 1e-12 * forward.abs());
    }

    #[test]
    fn thermal_lambda_shows_eit_dip() {
        let scheme = LevelScheme::rubidium_d2();
        let mut drives = DriveSet::rubidium_d2();
        let g = room_grid(2001);
        let centre = doppler_average(&scheme, &drives, &g).unwrap();
        drives.probe.detuning = mhz(0.3);
        let side = doppler_average(&scheme, &drives, &g).unwrap();
        assert!(centre < side, "{centre} {side}");
    }

    #[test]
    fn infinite_cutoff_is_a_no_op() {
        let scheme = LevelScheme::rubidium_d2();
        let mut drives = DriveSet::rubidium_d2();
        drives.control.rabi = mhz(5.0);
        let g = room_grid(401);
        let scan = cutoff_scan(&scheme, &drives, &g, &[f64::INFINITY]).unwrap();
        let full = doppler_average(&scheme, &drives, &g).unwrap()
            - doppler_average(&scheme, &drives.probe_only(), &g).unwrap();
        assert!((scan[0].contrast - full).abs() < 1e-12 * full.abs());
    }

    #[test]
    fn cutoff_contrast_changes_sign() {
        let scheme = LevelScheme::rubidium_d2();
        let mut drives = DriveSet::rubidium_d2();
        drives.control.rabi = mhz(5.0);
        let g = room_grid(2001);
        let gamma = mhz(6.0);
        let scan = cutoff_scan(&scheme, &drives, &g, &[0.5 * gamma, 5.0 * gamma]).unwrap();
        assert!(scan[0].contrast < 0.0);
        assert!(scan[1].contrast > 0.0);
        assert!(cutoff_scan(&scheme, &drives, &g, &[gamma, 0.5 * gamma]).is_err());
    }
}
