//! Acceptance criteria at full preset resolution. Prints one PASS/FAIL line
//! per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use nsystem::config::{load, Preset, ScenarioConfig};
use nsystem::obe::{
    build_dissipator, build_hamiltonian, residual, steady_state, DensityMatrix, DiagonalConvention, DriveSet, Field,
    Level, LevelScheme, Propagation, TransitModel,
};
use nsystem::oracle::{max_step, time_evolve};
use nsystem::prelude::*;
use nsystem::run::{compute, RunOutput, SpectrumRun};
use nsystem::units::{khz, mhz, to_mhz};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn spectrum_run(preset: Preset, overrides: &[&str]) -> SpectrumRun {
    let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    match compute(&load(None, Some(preset), &o).unwrap()).unwrap() {
        RunOutput::Spectrum(r) => r,
        other => panic!("{} gave {other:?}", preset.name()),
    }
}

fn central(run: &SpectrumRun) -> Option<&ResonanceFeature> {
    run.features
        .iter()
        .min_by(|a, b| a.center.abs().total_cmp(&b.center.abs()))
}

fn describe(f: &ResonanceFeature) -> String {
    format!(
        "{} at {:+.2} kHz, fwhm {:.1} kHz, contrast {:+.4}",
        f.kind.as_str(),
        to_mhz(f.center) * 1e3,
        to_mhz(f.fwhm) * 1e3,
        f.contrast
    )
}

fn lambda_thermal_eit(run: &SpectrumRun) -> Outcome {
    let eit: Vec<_> = run
        .features
        .iter()
        .filter(|f| f.kind == FeatureKind::Transparency)
        .collect();
    let [f] = eit[..] else {
        return outcome(false, format!("{} transparency features", eit.len()));
    };
    let pass = f.center.abs() < khz(10.0) && f.fwhm >= khz(50.0) && f.fwhm <= khz(500.0);
    outcome(pass, describe(f))
}

fn n_thermal_inversion(run: &SpectrumRun) -> Outcome {
    let Some(f) = central(run) else {
        return outcome(false, "no features");
    };
    let narrow_absorption = run
        .features
        .iter()
        .filter(|f| f.kind == FeatureKind::Absorption && f.fwhm < khz(500.0))
        .count();
    let pass = f.kind == FeatureKind::Absorption && f.fwhm < khz(500.0) && narrow_absorption == 1;
    outcome(pass, describe(f))
}

fn cold_atoms() -> Outcome {
    let run = spectrum_run(Preset::NCold, &[]);
    let i0 = run.spectrum.detunings.iter().position(|d| *d == 0.0).unwrap();
    let excess = run.spectrum.transmission[i0] - run.baseline.transmission[i0];
    let central_absorption = run
        .features
        .iter()
        .any(|f| f.kind == FeatureKind::Absorption && (f.center - 0.0).abs() < 0.5 * f.fwhm.max(mhz(1.0)));
    let Some(c) = central(&run) else {
        return outcome(false, "no features");
    };
    let pass = excess > 0.0 && !central_absorption && c.kind == FeatureKind::Transparency && c.fwhm > mhz(1.0);
    outcome(
        pass,
        format!("T − T_baseline at centre {excess:+.4}; central {}", describe(c)),
    )
}

fn cutoff_emergence() -> Outcome {
    let RunOutput::CutoffScan(points) = compute(&ScenarioConfig::from_preset(Preset::CutoffScan)).unwrap() else {
        unreachable!()
    };
    let signs: Vec<bool> = points.iter().map(|p| p.contrast > 0.0).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let pass = points[0].contrast < 0.0 && points.last().unwrap().contrast > 0.0 && changes == 1;
    let listing: Vec<String> = points
        .iter()
        .map(|p| format!("{:.1}Γ: {:+.3e}", to_mhz(p.cutoff) / 6.0, p.contrast))
        .collect();
    outcome(pass, listing.join(", "))
}

fn equal_rabi_maximum() -> Outcome {
    let RunOutput::RabiScan(points) = compute(&ScenarioConfig::from_preset(Preset::RabiScan)).unwrap() else {
        unreachable!()
    };
    let best = points.iter().max_by(|a, b| a.contrast.total_cmp(&b.contrast)).unwrap();
    let pass = best.control_rabi == mhz(5.0) && best.contrast > 0.0;
    let listing: Vec<String> = points
        .iter()
        .map(|p| format!("{} MHz: {:+.3e}", to_mhz(p.control_rabi), p.contrast))
        .collect();
    outcome(pass, listing.join(", "))
}

fn stark_shift() -> Outcome {
    let RunOutput::Stark { shifts, .. } = compute(&ScenarioConfig::from_preset(Preset::Stark)).unwrap() else {
        unreachable!()
    };
    let pass = shifts.len() == 3
        && shifts
            .iter()
            .all(|s| s.measured < 0.0 && ((s.measured - s.predicted) / s.predicted).abs() < 0.1);
    let listing: Vec<String> = shifts
        .iter()
        .map(|s| {
            format!(
                "{} MHz: {:+.1} kHz vs {:+.1} kHz",
                to_mhz(s.control_rabi),
                to_mhz(s.measured) * 1e3,
                to_mhz(s.predicted) * 1e3
            )
        })
        .collect();
    outcome(pass, listing.join(", "))
}

/// The multiplet lines: features of `kind` within 50 kHz of each offset,
/// and no other `kind` features between the outer offsets.
fn multiplet_lines(run: &SpectrumRun, kind: FeatureKind, offsets: &[f64]) -> (bool, Vec<f64>) {
    let span = offsets.iter().fold(0.0f64, |m, o| m.max(o.abs())) + khz(200.0);
    let inner: Vec<_> = run
        .features
        .iter()
        .filter(|f| f.kind == kind && f.center.abs() <= span)
        .collect();
    let matched = inner.len() == offsets.len()
        && offsets
            .iter()
            .all(|o| inner.iter().any(|f| (f.center - o).abs() < khz(50.0)));
    (matched, inner.iter().map(|f| to_mhz(f.center)).collect())
}

fn zeeman_persistence() -> Outcome {
    let offsets = [mhz(-0.7), 0.0, mhz(0.7)];
    let on = spectrum_run(Preset::Zeeman, &[]);
    let off = spectrum_run(Preset::Zeeman, &["drives.control_rabi_MHz=0"]);
    let (on_ok, on_centres) = multiplet_lines(&on, FeatureKind::Absorption, &offsets);
    let (off_ok, off_centres) = multiplet_lines(&off, FeatureKind::Transparency, &offsets);
    outcome(
        on_ok && off_ok,
        format!("control on: absorption at {on_centres:.3?} MHz; control off: transparency at {off_centres:.3?} MHz"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut points = 0;
    let mut kv_max = 0.0f64;
    for preset in [Preset::LambdaCold, Preset::LambdaThermal, Preset::NCold] {
        let config = ScenarioConfig::from_preset(preset);
        let scenario = config.scenario().unwrap();
        let d = build_dissipator(&scenario.scheme).unwrap();
        let t_final = 50.0 / scenario.scheme.transit_rate;
        let sigma_v = scenario.grid.sigma_v;
        // Velocities follow the thermal distribution over the grid's span.
        let v_max = scenario.grid.nodes.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for _ in 0..5 {
            let v = if sigma_v > 0.0 {
                let normal = Normal::new(0.0, sigma_v).unwrap();
                loop {
                    let v: f64 = normal.sample(&mut rng);
                    if v.abs() <= v_max {
                        break v;
                    }
                }
            } else {
                0.0
            };
            let mut drives = scenario.drives.clone();
            drives.probe.detuning = mhz(rng.gen_range(-2.0..=2.0));
            kv_max = kv_max.max((drives.wavevector * v).abs());
            let h = build_hamiltonian(&drives, v);
            let steady = steady_state(&h, &d).unwrap();
            let evolved = time_evolve(&h, &d, &DensityMatrix::pure(Level::One), t_final, max_step(&h, &d)).unwrap();
            let diff = (steady.as_operator() - evolved.as_operator())
                .iter()
                .fold(0.0f64, |m, z| m.max(z.norm()));
            worst = worst.max(diff);
            points += 1;
        }
    }
    outcome(
        worst < 1e-6,
        format!(
            "{points} points up to |kv| = 2π×{:.0} MHz, worst elementwise difference {worst:.2e}",
            to_mhz(kv_max)
        ),
    )
}

fn random_scheme(rng: &mut ChaCha8Rng) -> LevelScheme {
    let mut s = LevelScheme::rubidium_d2();
    s.natural_decay = [
        if rng.gen_bool(0.2) {
            mhz(rng.gen_range(0.0..0.5))
        } else {
            0.0
        },
        mhz(rng.gen_range(0.5..20.0)),
        if rng.gen_bool(0.2) {
            mhz(rng.gen_range(0.0..0.5))
        } else {
            0.0
        },
        mhz(rng.gen_range(0.5..20.0)),
    ];
    s.branching = [[0.0; 4]; 4];
    for i in 0..4 {
        if s.natural_decay[i] == 0.0 {
            continue;
        }
        let mut row: [f64; 4] = std::array::from_fn(|j| if j == i { 0.0 } else { rng.gen_range(0.0..1.0) });
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|b| *b /= sum);
        s.branching[i] = row;
    }
    s.transit_rate = khz(rng.gen_range(10.0..1000.0));
    s.transit = [TransitModel::Repump, TransitModel::Exchange, TransitModel::Dephasing][rng.gen_range(0..3)];
    s
}

fn random_drives(rng: &mut ChaCha8Rng) -> DriveSet {
    let direction = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            Propagation::Forward
        } else {
            Propagation::Backward
        }
    };
    let field = |rng: &mut ChaCha8Rng, max_rabi: f64| {
        let d = direction(rng);
        Field::new(mhz(rng.gen_range(0.01..max_rabi)), mhz(rng.gen_range(-50.0..50.0)), d)
    };
    let probe = field(rng, 2.0);
    let coupling = field(rng, 30.0);
    let control = field(rng, 30.0);
    DriveSet {
        probe,
        coupling,
        control,
        convention: if rng.gen_bool(0.8) {
            DiagonalConvention::TwoPhoton
        } else {
            DiagonalConvention::Printed
        },
        ..DriveSet::rubidium_d2()
    }
}

fn invariant_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    let mut worst_residual = 0.0f64;
    let mut worst_eigenvalue = f64::INFINITY;
    for case in 0..1000 {
        let scheme = random_scheme(&mut rng);
        let drives = random_drives(&mut rng);
        let v = rng.gen_range(-600.0..600.0);
        let h = build_hamiltonian(&drives, v);
        let d = build_dissipator(&scheme).unwrap();
        match steady_state(&h, &d) {
            Ok(sigma) => {
                let report = sigma.invariants();
                let r = residual(&h, &d, &sigma);
                worst_residual = worst_residual.max(r);
                worst_eigenvalue = worst_eigenvalue.min(report.min_eigenvalue);
                if !(report.passes() && r < 1e-10) {
                    failures.push(format!("case {case}: {report:?}, residual {r:e}"));
                }
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    let mut detail = format!(
        "1000 cases, {} failures, worst residual {worst_residual:.1e}, lowest eigenvalue {worst_eigenvalue:.1e}",
        failures.len()
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    outcome(failures.is_empty(), detail)
}

fn refinement(preset: Preset, coarse: &SpectrumRun) -> Outcome {
    let fine = spectrum_run(
        preset,
        &["grid.nodes=4001", "axis.inner_step_kHz=5", "axis.outer_step_kHz=100"],
    );
    let (Some(a), Some(b)) = (central(coarse), central(&fine)) else {
        return outcome(false, "missing central feature");
    };
    let rel = |x: f64, y: f64| ((x - y) / x).abs();
    let fwhm = rel(a.fwhm, b.fwhm);
    let contrast = rel(a.contrast, b.contrast);
    // The centre sits at zero, so its change is measured against the width.
    let centre = (a.center - b.center).abs() / a.fwhm;
    let pass = a.kind == b.kind && fwhm < 0.02 && contrast < 0.02 && centre < 0.02;
    outcome(
        pass,
        format!(
            "{}: fwhm {:.3}%, contrast {:.3}%, centre {:.3}% of fwhm",
            preset.name(),
            fwhm * 100.0,
            contrast * 100.0,
            centre * 100.0
        ),
    )
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {id:>2} {name}: {} [{:.1} s]",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed += 1;
        }
    };

    let start = Instant::now();
    let lambda = spectrum_run(Preset::LambdaThermal, &[]);
    let n = spectrum_run(Preset::NThermal, &[]);
    println!(
        "thermal lambda and N spectra computed in {:.1} s",
        start.elapsed().as_secs_f64()
    );
    report(1, "lambda thermal EIT", &|| lambda_thermal_eit(&lambda));
    report(2, "N thermal inversion", &|| n_thermal_inversion(&n));
    report(3, "cold-atom contrast", &cold_atoms);
    report(4, "kv >= Γ emergence", &cutoff_emergence);
    report(5, "equal-Rabi maximum", &equal_rabi_maximum);
    report(6, "ac Stark shift", &stark_shift);
    report(7, "Zeeman persistence", &zeeman_persistence);
    report(8, "oracle equivalence", &oracle_equivalence);
    report(9, "invariant suite", &invariant_suite);
    report(10, "discretization robustness (lambda)", &|| {
        refinement(Preset::LambdaThermal, &lambda)
    });
    report(10, "discretization robustness (N)", &|| {
        refinement(Preset::NThermal, &n)
    });

    if failed == 0 {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
