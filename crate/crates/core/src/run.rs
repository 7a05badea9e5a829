//! Executes a [`ScenarioConfig`] and writes its results to a directory.
//!
//! Every run writes `manifest.cfg`: the full configuration in the config
//! grammar plus a `[run]` section (tool version, wall time, files written).
//! The other files depend on the run kind:
//!
//! | kind          | files |
//! |---------------|-------|
//! | `spectrum`    | `spectrum.csv`, `baseline.csv`, `features.txt` |
//! | `zeeman`      | as `spectrum`, for the weighted composite |
//! | `stark`       | `spectrum_0.csv` (control off), `spectrum_<i>.csv`, `features_<i>.txt`, `baseline.csv`, `stark.csv` |
//! | `cutoff-scan` | `cutoff_scan.csv` |
//! | `rabi-scan`   | `rabi_scan.csv` |
//!
//! Spectra are `detuning_MHz,absorption,transmission` with nine significant
//! digits; feature reports hold one `kind,center_MHz,fwhm_MHz,contrast` line
//! per feature. Nothing is written unless the whole computation succeeds.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::config::{ConfigError, RunKind, ScenarioConfig};
use crate::doppler::{cutoff_scan, CutoffContrast};
use crate::spectra::{
    calibrate_od, extract_features, rabi_scan, scan_spectrum, stark_prediction, zeeman_multiplet, FeatureKind,
    RabiContrast, ResonanceFeature, Spectrum,
};
use crate::units::{mhz, to_mhz};
use crate::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("solver failed: {0}")]
    Solver(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl RunError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Solver(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

/// A probe sweep with its probe-only baseline and the features between them.
#[derive(Clone, Debug)]
pub struct SpectrumRun {
    pub spectrum: Spectrum,
    pub baseline: Spectrum,
    pub features: Vec<ResonanceFeature>,
}

impl SpectrumRun {
    fn new(spectrum: Spectrum, baseline: Spectrum) -> Result<Self, Error> {
        let features = match extract_features(&spectrum, &baseline) {
            Ok(f) => f,
            Err(Error::NoFeature) => Vec::new(),
            Err(e) => return Err(e),
        };
        Ok(SpectrumRun {
            spectrum,
            baseline,
            features,
        })
    }

    /// The transparency feature with the largest contrast.
    pub fn strongest_transparency(&self) -> Option<&ResonanceFeature> {
        self.features
            .iter()
            .filter(|f| f.kind == FeatureKind::Transparency)
            .max_by(|a, b| a.contrast.total_cmp(&b.contrast))
    }
}

/// Measured and predicted EIT shift for one control Rabi frequency (rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarkShift {
    pub control_rabi: f64,
    pub predicted: f64,
    pub measured: f64,
}

#[derive(Clone, Debug)]
pub enum RunOutput {
    Spectrum(SpectrumRun),
    Stark {
        reference: SpectrumRun,
        runs: Vec<SpectrumRun>,
        shifts: Vec<StarkShift>,
    },
    CutoffScan(Vec<CutoffContrast>),
    RabiScan(Vec<RabiContrast>),
}

/// Runs the computation a configuration describes, without touching disk.
pub fn compute(config: &ScenarioConfig) -> Result<RunOutput, RunError> {
    config.validate()?;
    let scenario = config.scenario()?;
    let axis = config.detuning_axis()?;
    let od = || calibrate_od(&scenario, config.target_od);

    let output = match config.kind {
        RunKind::Spectrum => {
            let od = od()?;
            let spectrum = scan_spectrum(&scenario, &axis, &od)?;
            let baseline = scan_spectrum(&scenario.probe_only(), &axis, &od)?;
            RunOutput::Spectrum(SpectrumRun::new(spectrum, baseline)?)
        }
        RunKind::Zeeman => {
            let od = od()?;
            let offsets: Vec<f64> = config.zeeman_offsets_mhz.iter().copied().map(mhz).collect();
            let w = &config.zeeman_weights;
            let spectrum = zeeman_multiplet(&scenario, &axis, &od, &offsets, w)?;
            let baseline = zeeman_multiplet(&scenario.probe_only(), &axis, &od, &offsets, w)?;
            RunOutput::Spectrum(SpectrumRun::new(spectrum, baseline)?)
        }
        RunKind::Stark => {
            let od = od()?;
            let baseline = scan_spectrum(&scenario.probe_only(), &axis, &od)?;
            let sweep = |omega: f64| -> Result<SpectrumRun, Error> {
                let mut s = scenario.clone();
                s.drives.control.rabi = omega;
                SpectrumRun::new(scan_spectrum(&s, &axis, &od)?, baseline.clone())
            };
            let reference = sweep(0.0)?;
            let centre = |run: &SpectrumRun| run.strongest_transparency().map(|f| f.center).ok_or(Error::NoFeature);
            let reference_centre = centre(&reference)?;
            let mut runs = Vec::new();
            let mut shifts = Vec::new();
            for &omega_mhz in &config.stark_control_rabi_mhz {
                let omega = mhz(omega_mhz);
                let run = sweep(omega)?;
                shifts.push(StarkShift {
                    control_rabi: omega,
                    predicted: stark_prediction(omega, scenario.drives.control.detuning)?,
                    measured: centre(&run)? - reference_centre,
                });
                runs.push(run);
            }
            RunOutput::Stark {
                reference,
                runs,
                shifts,
            }
        }
        RunKind::CutoffScan => {
            let cutoffs: Vec<f64> = config.cutoffs_mhz.iter().copied().map(mhz).collect();
            RunOutput::CutoffScan(cutoff_scan(
                &scenario.scheme,
                &scenario.drives,
                &scenario.grid,
                &cutoffs,
            )?)
        }
        RunKind::RabiScan => {
            let omegas: Vec<f64> = config.rabi_control_rabi_mhz.iter().copied().map(mhz).collect();
            RunOutput::RabiScan(rabi_scan(&scenario, &omegas)?)
        }
    };
    Ok(output)
}

/// Nine significant digits.
fn num(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut s = String::from("detuning_MHz,absorption,transmission\n");
    for ((d, a), t) in spectrum
        .detunings
        .iter()
        .zip(&spectrum.absorption)
        .zip(&spectrum.transmission)
    {
        let _ = writeln!(s, "{},{},{}", num(to_mhz(*d)), num(*a), num(*t));
    }
    s
}

pub fn features_report(features: &[ResonanceFeature]) -> String {
    features
        .iter()
        .map(|f| {
            format!(
                "{},{},{},{}\n",
                f.kind.as_str(),
                num(to_mhz(f.center)),
                num(to_mhz(f.fwhm)),
                num(f.contrast)
            )
        })
        .collect()
}

/// File name and contents for every result file of a run.
pub fn render(output: &RunOutput) -> Vec<(String, String)> {
    let mut files = Vec::new();
    match output {
        RunOutput::Spectrum(run) => {
            files.push(("spectrum.csv".into(), spectrum_csv(&run.spectrum)));
            files.push(("baseline.csv".into(), spectrum_csv(&run.baseline)));
            files.push(("features.txt".into(), features_report(&run.features)));
        }
        RunOutput::Stark {
            reference,
            runs,
            shifts,
        } => {
            files.push(("baseline.csv".into(), spectrum_csv(&reference.baseline)));
            for (i, run) in std::iter::once(reference).chain(runs).enumerate() {
                files.push((format!("spectrum_{i}.csv"), spectrum_csv(&run.spectrum)));
                files.push((format!("features_{i}.txt"), features_report(&run.features)));
            }
            let mut s = String::from("control_rabi_MHz,predicted_shift_MHz,measured_shift_MHz\n");
            for shift in shifts {
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    num(to_mhz(shift.control_rabi)),
                    num(to_mhz(shift.predicted)),
                    num(to_mhz(shift.measured))
                );
            }
            files.push(("stark.csv".into(), s));
        }
        RunOutput::CutoffScan(points) => {
            let mut s = String::from("cutoff_MHz,contrast\n");
            for p in points {
                let _ = writeln!(s, "{},{}", num(to_mhz(p.cutoff)), num(p.contrast));
            }
            files.push(("cutoff_scan.csv".into(), s));
        }
        RunOutput::RabiScan(points) => {
            let mut s = String::from("control_rabi_MHz,contrast\n");
            for p in points {
                let _ = writeln!(s, "{},{}", num(to_mhz(p.control_rabi)), num(p.contrast));
            }
            files.push(("rabi_scan.csv".into(), s));
        }
    }
    files
}

/// The manifest: a `[run]` section followed by the complete configuration.
pub fn manifest(config: &ScenarioConfig, wall_time_s: f64, files: &[String]) -> String {
    let mut s = String::from("# Re-usable as a config file; the [run] section is ignored on load.\n");
    if let Some(p) = config.preset {
        let _ = writeln!(s, "# expanded from preset {}", p.name());
    }
    let _ = writeln!(
        s,
        "[run]\ntool = nsystem\ntool_version = {TOOL_VERSION}\nwall_time_s = {wall_time_s:.3}\nfiles = {}",
        files.join(", ")
    );
    s.push_str(&config.to_text());
    s
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub output: RunOutput,
    pub files: Vec<PathBuf>,
    pub wall_time_s: f64,
}

/// Computes the run and writes its files into `out_dir` (created if needed).
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary, RunError> {
    let start = Instant::now();
    let output = compute(config)?;
    let wall_time_s = start.elapsed().as_secs_f64();

    let mut rendered = render(&output);
    let names: Vec<String> = rendered.iter().map(|(n, _)| n.clone()).collect();
    rendered.push(("manifest.cfg".into(), manifest(config, wall_time_s, &names)));

    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut files = Vec::new();
    for (name, contents) in rendered {
        let path = out_dir.join(name);
        fs::write(&path, contents).map_err(io_err(&path))?;
        files.push(path);
    }
    Ok(RunSummary {
        output,
        files,
        wall_time_s,
    })
}
