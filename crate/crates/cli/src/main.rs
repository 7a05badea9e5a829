use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nsystem::config::{load, Preset};
use nsystem::run::{run, RunError, RunOutput};
use nsystem::units::to_mhz;

/// Steady-state probe spectra of a Doppler-broadened four-level N system.
#[derive(Debug, Parser)]
#[command(name = "nsystem", version)]
struct Args {
    /// Scenario file (sectioned `key = value` text).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in parameter set; takes precedence over `preset =` in the file.
    #[arg(long, value_parser = parse_preset)]
    preset: Option<Preset>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// `section.key=value`, applied after the file and preset.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse()
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nsystem: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), RunError> {
    let text = match &args.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?),
        None => None,
    };
    let config = load(text.as_deref(), args.preset, &args.overrides)?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.workers {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().expect("thread pool");
    let summary = pool.install(|| run(&config, &args.out))?;

    match &summary.output {
        RunOutput::Spectrum(r) => {
            for f in &r.features {
                println!(
                    "{:<12} centre {:+.4} MHz  fwhm {:.4} MHz  contrast {:+.4}",
                    f.kind.as_str(),
                    to_mhz(f.center),
                    to_mhz(f.fwhm),
                    f.contrast
                );
            }
        }
        RunOutput::Stark { shifts, .. } => {
            for s in shifts {
                println!(
                    "control {:.1} MHz  shift {:+.4} MHz  predicted {:+.4} MHz",
                    to_mhz(s.control_rabi),
                    to_mhz(s.measured),
                    to_mhz(s.predicted)
                );
            }
        }
        RunOutput::CutoffScan(points) => {
            for p in points {
                println!("cutoff {:.2} MHz  contrast {:+.4e}", to_mhz(p.cutoff), p.contrast);
            }
        }
        RunOutput::RabiScan(points) => {
            for p in points {
                println!(
                    "control {:.2} MHz  contrast {:+.4e}",
                    to_mhz(p.control_rabi),
                    p.contrast
                );
            }
        }
    }
    println!(
        "wrote {} files to {} in {:.1} s",
        summary.files.len(),
        args.out.display(),
        summary.wall_time_s
    );
    Ok(())
}
