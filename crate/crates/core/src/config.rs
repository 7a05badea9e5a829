//! Scenario configuration files and presets.
//!
//! The format is line-based:
//!
//! ```text
//! # comment (anything after '#' is ignored)
//! preset = n-thermal          # only key allowed before the first section
//!
//! [drives]
//! control_rabi_MHz = 5
//! [zeeman]
//! offsets_MHz = -0.7, 0, 0.7  # lists are comma-separated
//! ```
//!
//! Values are decimal numbers, comma-separated number lists, or bare words.
//! Frequencies are linear (MHz or kHz as the key says) and converted to
//! rad/s when a [`Scenario`] is built. A `[run]` section, as written into
//! run manifests, is ignored, so a manifest can be fed back in as a config.
//!
//! Without a preset every field listed in [`REQUIRED_KEYS`] (plus the list
//! fields of the chosen run kind) must be given.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::doppler::{thermal_grid, VelocityGrid};
use crate::obe::{DiagonalConvention, DriveSet, Field, LevelScheme, Propagation, TransitModel};
use crate::spectra::{DetuningAxis, Scenario};
use crate::units::{khz, mhz, wavevector};

/// A configuration problem, located by line (when it came from a file) and
/// field name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "field `{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn config_error(line: Option<usize>, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    LambdaCold,
    LambdaThermal,
    NCold,
    NThermal,
    Stark,
    CutoffScan,
    RabiScan,
    Zeeman,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::LambdaCold,
        Preset::LambdaThermal,
        Preset::NCold,
        Preset::NThermal,
        Preset::Stark,
        Preset::CutoffScan,
        Preset::RabiScan,
        Preset::Zeeman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::LambdaCold => "lambda-cold",
            Preset::LambdaThermal => "lambda-thermal",
            Preset::NCold => "n-cold",
            Preset::NThermal => "n-thermal",
            Preset::Stark => "stark",
            Preset::CutoffScan => "cutoff-scan",
            Preset::RabiScan => "rabi-scan",
            Preset::Zeeman => "zeeman",
        }
    }

    fn text(self) -> &'static str {
        match self {
            Preset::LambdaCold => "[scenario]\nkind = spectrum\n[grid]\nkind = stationary\n",
            Preset::LambdaThermal => "[scenario]\nkind = spectrum\n",
            Preset::NCold => "[scenario]\nkind = spectrum\n[drives]\ncontrol_rabi_MHz = 5\n[grid]\nkind = stationary\n",
            Preset::NThermal => "[scenario]\nkind = spectrum\n[drives]\ncontrol_rabi_MHz = 5\n",
            Preset::Stark => {
                "[scenario]\nkind = stark\n[drives]\ncontrol_detuning_MHz = -5000\n\
                 [stark]\ncontrol_rabi_MHz = 25, 50, 75\n\
                 [axis]\ninner_half_width_MHz = 1\nhalf_width_MHz = 10\n"
            }
            Preset::CutoffScan => {
                "[scenario]\nkind = cutoff-scan\n[drives]\ncontrol_rabi_MHz = 5\n\
                 [cutoff]\ncutoffs_MHz = 3, 6, 12, 30\n"
            }
            Preset::RabiScan => "[scenario]\nkind = rabi-scan\n[rabi]\ncontrol_rabi_MHz = 2.5, 5, 7.5, 10\n",
            Preset::Zeeman => {
                "[scenario]\nkind = zeeman\n[drives]\ncontrol_rabi_MHz = 5\n\
                 [zeeman]\noffsets_MHz = -0.7, 0, 0.7\n\
                 weights = 0.333333333333333, 0.333333333333333, 0.333333333333334\n"
            }
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset `{s}`"))
    }
}

/// Parameters shared by every preset.
const DEFAULTS: &str = "\
[levels]
gamma1_MHz = 0
gamma2_MHz = 6
gamma3_MHz = 0
gamma4_MHz = 6
branch_2_1 = 0.5
branch_2_3 = 0.5
branch_4_3 = 1
transit_MHz = 0.1
transit_model = repump
[drives]
probe_rabi_MHz = 0.1
coupling_rabi_MHz = 5
coupling_detuning_MHz = 0
control_rabi_MHz = 0
control_detuning_MHz = 0
wavelength_nm = 780.24
[grid]
kind = thermal
temperature_K = 293
mass_kg = 1.443160648e-25
span_sigma = 4
nodes = 2001
[axis]
inner_half_width_MHz = 2
inner_step_kHz = 10
half_width_MHz = 40
outer_step_kHz = 200
[optics]
target_od = 0.5
";

/// What a run computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunKind {
    /// One probe sweep plus its probe-only baseline.
    Spectrum,
    /// A sweep per control Rabi frequency; EIT centre shifts vs `Ω²/4Δ`.
    Stark,
    /// Line-centre contrast against velocity cutoff.
    CutoffScan,
    /// Line-centre contrast against control Rabi frequency.
    RabiScan,
    /// Weighted multiplet of shifted copies of the scenario.
    Zeeman,
}

impl RunKind {
    pub fn name(self) -> &'static str {
        match self {
            RunKind::Spectrum => "spectrum",
            RunKind::Stark => "stark",
            RunKind::CutoffScan => "cutoff-scan",
            RunKind::RabiScan => "rabi-scan",
            RunKind::Zeeman => "zeeman",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridConfig {
    Thermal {
        temperature_k: f64,
        mass_kg: f64,
        span_sigma: f64,
        nodes: usize,
    },
    Stationary,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisConfig {
    pub inner_half_width_mhz: f64,
    pub inner_step_khz: f64,
    pub half_width_mhz: f64,
    pub outer_step_khz: f64,
}

/// A fully specified run, in the units of the configuration file.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub preset: Option<Preset>,
    pub kind: RunKind,
    pub decay_mhz: [f64; 4],
    /// `branching[i][j]`: fraction of level `i + 1`'s decay into `j + 1`.
    pub branching: [[f64; 4]; 4],
    pub transit_mhz: f64,
    pub transit_model: TransitModel,
    pub probe_rabi_mhz: f64,
    pub coupling_rabi_mhz: f64,
    pub coupling_detuning_mhz: f64,
    pub control_rabi_mhz: f64,
    pub control_detuning_mhz: f64,
    pub wavelength_nm: f64,
    pub convention: DiagonalConvention,
    /// Probe, coupling, control.
    pub directions: [Propagation; 3],
    pub grid: GridConfig,
    pub axis: AxisConfig,
    pub target_od: f64,
    pub stark_control_rabi_mhz: Vec<f64>,
    pub cutoffs_mhz: Vec<f64>,
    pub rabi_control_rabi_mhz: Vec<f64>,
    pub zeeman_offsets_mhz: Vec<f64>,
    pub zeeman_weights: Vec<f64>,
}

/// Keys that must be present when no preset supplies them.
pub const REQUIRED_KEYS: &[&str] = &[
    "scenario.kind",
    "levels.gamma1_MHz",
    "levels.gamma2_MHz",
    "levels.gamma3_MHz",
    "levels.gamma4_MHz",
    "levels.transit_MHz",
    "levels.transit_model",
    "drives.probe_rabi_MHz",
    "drives.coupling_rabi_MHz",
    "drives.coupling_detuning_MHz",
    "drives.control_rabi_MHz",
    "drives.control_detuning_MHz",
    "drives.wavelength_nm",
    "grid.kind",
    "axis.inner_half_width_MHz",
    "axis.inner_step_kHz",
    "axis.half_width_MHz",
    "axis.outer_step_kHz",
    "optics.target_od",
];

const OPTIONAL_KEYS: &[&str] = &[
    "drives.convention",
    "drives.probe_direction",
    "drives.coupling_direction",
    "drives.control_direction",
    "grid.temperature_K",
    "grid.mass_kg",
    "grid.span_sigma",
    "grid.nodes",
    "stark.control_rabi_MHz",
    "cutoff.cutoffs_MHz",
    "rabi.control_rabi_MHz",
    "zeeman.offsets_MHz",
    "zeeman.weights",
];

fn is_known_key(key: &str) -> bool {
    if REQUIRED_KEYS.contains(&key) || OPTIONAL_KEYS.contains(&key) {
        return true;
    }
    // levels.branch_I_J
    key.strip_prefix("levels.branch_")
        .and_then(|rest| rest.split_once('_'))
        .and_then(|(i, j)| Some((i.parse::<usize>().ok()?, j.parse::<usize>().ok()?)))
        .is_some_and(|(i, j)| (1..=4).contains(&i) && (1..=4).contains(&j) && i != j)
}

#[derive(Clone, Debug)]
struct Value {
    text: String,
    line: Option<usize>,
}

type Entries = BTreeMap<String, Value>;

/// Parses config text into `section.key → value`, reporting syntax errors
/// by line.
fn parse_entries(text: &str) -> Result<(Option<(String, usize)>, Entries), ConfigError> {
    let mut section: Option<String> = None;
    let mut preset = None;
    let mut entries = Entries::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| config_error(Some(line), "", format!("malformed section header `{content}`")))?
                .trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(config_error(Some(line), "", format!("invalid section name `{name}`")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_error(Some(line), "", format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(config_error(Some(line), key, "invalid key"));
        }
        match section.as_deref() {
            None if key == "preset" => preset = Some((value.to_string(), line)),
            None => {
                return Err(config_error(
                    Some(line),
                    key,
                    "only `preset` may appear before the first section",
                ));
            }
            Some("run") => {}
            Some(s) => {
                let full = format!("{s}.{key}");
                if !is_known_key(&full) {
                    return Err(config_error(Some(line), &full, "unknown field"));
                }
                if entries.contains_key(&full) {
                    return Err(config_error(Some(line), &full, "given more than once"));
                }
                entries.insert(
                    full,
                    Value {
                        text: value.to_string(),
                        line: Some(line),
                    },
                );
            }
        }
    }
    Ok((preset, entries))
}

fn preset_entries(preset: Preset) -> Entries {
    let (_, mut base) = parse_entries(DEFAULTS).expect("built-in defaults parse");
    let (_, specific) = parse_entries(preset.text()).expect("built-in preset parses");
    base.extend(specific);
    for v in base.values_mut() {
        v.line = None;
    }
    base
}

/// Builds a configuration from an optional file, an optional preset and
/// `section.key=value` overrides, in increasing order of precedence. A
/// preset given explicitly wins over a `preset =` line in the file.
pub fn load(text: Option<&str>, preset: Option<Preset>, overrides: &[String]) -> Result<ScenarioConfig, ConfigError> {
    let (file_preset, file_entries) = match text {
        Some(t) => parse_entries(t)?,
        None => (None, Entries::new()),
    };
    let file_preset = match file_preset {
        Some((name, line)) => Some(
            name.parse::<Preset>()
                .map_err(|e| config_error(Some(line), "preset", e))?,
        ),
        None => None,
    };
    let mut preset = preset.or(file_preset);

    let mut override_entries = Entries::new();
    for o in overrides {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| config_error(None, o, "override must look like section.key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "preset" {
            preset = Some(value.parse().map_err(|e: String| config_error(None, "preset", e))?);
            continue;
        }
        if !is_known_key(key) {
            return Err(config_error(None, key, "unknown field"));
        }
        override_entries.insert(
            key.to_string(),
            Value {
                text: value.to_string(),
                line: None,
            },
        );
    }

    let mut entries = preset.map(preset_entries).unwrap_or_default();
    entries.extend(file_entries);
    entries.extend(override_entries);
    check_numbers(&entries)?;
    let mut config = from_entries(&entries)?;
    config.preset = preset;
    config.validate()?;
    Ok(config)
}

struct Reader<'a> {
    entries: &'a Entries,
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> Result<&Value, ConfigError> {
        self.entries
            .get(key)
            .ok_or_else(|| config_error(None, key, "missing required field"))
    }

    fn number(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.raw(key)?;
        parse_number(&v.text).map_err(|m| config_error(v.line, key, m))
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        if self.entries.contains_key(key) {
            self.number(key)
        } else {
            Ok(default)
        }
    }

    fn list(&self, key: &str, required: bool) -> Result<Vec<f64>, ConfigError> {
        let Some(v) = self.entries.get(key) else {
            return if required {
                Err(config_error(None, key, "missing required field"))
            } else {
                Ok(Vec::new())
            };
        };
        v.text
            .split(',')
            .map(|item| parse_number(item.trim()))
            .collect::<Result<_, _>>()
            .map_err(|m| config_error(v.line, key, m))
    }

    fn word<T>(&self, key: &str, default: Option<T>, choices: &[(&str, T)]) -> Result<T, ConfigError>
    where
        T: Copy,
    {
        let Some(v) = self.entries.get(key) else {
            return default.ok_or_else(|| config_error(None, key, "missing required field"));
        };
        choices
            .iter()
            .find(|(name, _)| *name == v.text)
            .map(|(_, t)| *t)
            .ok_or_else(|| {
                let names: Vec<_> = choices.iter().map(|(n, _)| *n).collect();
                config_error(
                    v.line,
                    key,
                    format!("expected one of {}, got `{}`", names.join(", "), v.text),
                )
            })
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).and_then(|v| v.line)
    }
}

/// Reports malformed numeric values, earliest line first, before any
/// missing-field errors.
fn check_numbers(entries: &Entries) -> Result<(), ConfigError> {
    let mut numeric: Vec<(&String, &Value)> = entries
        .iter()
        .filter(|(k, _)| !WORD_KEYS.contains(&k.as_str()))
        .collect();
    numeric.sort_by_key(|(_, v)| v.line.unwrap_or(usize::MAX));
    for (key, value) in numeric {
        for item in value.text.split(',') {
            parse_number(item.trim()).map_err(|m| config_error(value.line, key, m))?;
        }
    }
    Ok(())
}

const WORD_KEYS: &[&str] = &[
    "scenario.kind",
    "levels.transit_model",
    "drives.convention",
    "drives.probe_direction",
    "drives.coupling_direction",
    "drives.control_direction",
    "grid.kind",
];

fn parse_number(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a decimal number, got `{s}`")),
    }
}

const KINDS: &[(&str, RunKind)] = &[
    ("spectrum", RunKind::Spectrum),
    ("stark", RunKind::Stark),
    ("cutoff-scan", RunKind::CutoffScan),
    ("rabi-scan", RunKind::RabiScan),
    ("zeeman", RunKind::Zeeman),
];
const TRANSIT_MODELS: &[(&str, TransitModel)] = &[
    ("repump", TransitModel::Repump),
    ("exchange", TransitModel::Exchange),
    ("dephasing", TransitModel::Dephasing),
];
const CONVENTIONS: &[(&str, DiagonalConvention)] = &[
    ("two-photon", DiagonalConvention::TwoPhoton),
    ("printed", DiagonalConvention::Printed),
];
const DIRECTIONS: &[(&str, Propagation)] = &[("forward", Propagation::Forward), ("backward", Propagation::Backward)];
const GRID_KINDS: &[(&str, bool)] = &[("thermal", true), ("stationary", false)];

fn from_entries(entries: &Entries) -> Result<ScenarioConfig, ConfigError> {
    let r = Reader { entries };
    let kind = r.word("scenario.kind", None, KINDS)?;

    let mut decay_mhz = [0.0; 4];
    for (i, d) in decay_mhz.iter_mut().enumerate() {
        *d = r.number(&format!("levels.gamma{}_MHz", i + 1))?;
    }
    let mut branching = [[0.0; 4]; 4];
    for (i, row) in branching.iter_mut().enumerate() {
        for (j, b) in row.iter_mut().enumerate() {
            if i != j {
                *b = r.number_or(&format!("levels.branch_{}_{}", i + 1, j + 1), 0.0)?;
            }
        }
    }

    let grid = if r.word("grid.kind", None, GRID_KINDS)? {
        let nodes = r.number("grid.nodes")?;
        if nodes.fract() != 0.0 || nodes < 1.0 {
            return Err(config_error(
                r.line("grid.nodes"),
                "grid.nodes",
                "expected a positive integer",
            ));
        }
        GridConfig::Thermal {
            temperature_k: r.number("grid.temperature_K")?,
            mass_kg: r.number("grid.mass_kg")?,
            span_sigma: r.number("grid.span_sigma")?,
            nodes: nodes as usize,
        }
    } else {
        GridConfig::Stationary
    };

    Ok(ScenarioConfig {
        preset: None,
        kind,
        decay_mhz,
        branching,
        transit_mhz: r.number("levels.transit_MHz")?,
        transit_model: r.word("levels.transit_model", None, TRANSIT_MODELS)?,
        probe_rabi_mhz: r.number("drives.probe_rabi_MHz")?,
        coupling_rabi_mhz: r.number("drives.coupling_rabi_MHz")?,
        coupling_detuning_mhz: r.number("drives.coupling_detuning_MHz")?,
        control_rabi_mhz: r.number("drives.control_rabi_MHz")?,
        control_detuning_mhz: r.number("drives.control_detuning_MHz")?,
        wavelength_nm: r.number("drives.wavelength_nm")?,
        convention: r.word("drives.convention", Some(DiagonalConvention::TwoPhoton), CONVENTIONS)?,
        directions: [
            r.word("drives.probe_direction", Some(Propagation::Forward), DIRECTIONS)?,
            r.word("drives.coupling_direction", Some(Propagation::Forward), DIRECTIONS)?,
            r.word("drives.control_direction", Some(Propagation::Backward), DIRECTIONS)?,
        ],
        grid,
        axis: AxisConfig {
            inner_half_width_mhz: r.number("axis.inner_half_width_MHz")?,
            inner_step_khz: r.number("axis.inner_step_kHz")?,
            half_width_mhz: r.number("axis.half_width_MHz")?,
            outer_step_khz: r.number("axis.outer_step_kHz")?,
        },
        target_od: r.number("optics.target_od")?,
        stark_control_rabi_mhz: r.list("stark.control_rabi_MHz", kind == RunKind::Stark)?,
        cutoffs_mhz: r.list("cutoff.cutoffs_MHz", kind == RunKind::CutoffScan)?,
        rabi_control_rabi_mhz: r.list("rabi.control_rabi_MHz", kind == RunKind::RabiScan)?,
        zeeman_offsets_mhz: r.list("zeeman.offsets_MHz", kind == RunKind::Zeeman)?,
        zeeman_weights: r.list("zeeman.weights", kind == RunKind::Zeeman)?,
    })
}

impl ScenarioConfig {
    /// The configuration a preset expands to.
    pub fn from_preset(preset: Preset) -> Self {
        load(None, Some(preset), &[]).expect("built-in presets are valid")
    }

    pub fn level_scheme(&self) -> LevelScheme {
        LevelScheme {
            natural_decay: self.decay_mhz.map(mhz),
            branching: self.branching,
            transit_rate: mhz(self.transit_mhz),
            transit: self.transit_model,
        }
    }

    pub fn drives(&self) -> DriveSet {
        let [p, c, k] = self.directions;
        DriveSet {
            probe: Field::new(mhz(self.probe_rabi_mhz), 0.0, p),
            coupling: Field::new(mhz(self.coupling_rabi_mhz), mhz(self.coupling_detuning_mhz), c),
            control: Field::new(mhz(self.control_rabi_mhz), mhz(self.control_detuning_mhz), k),
            wavevector: wavevector(self.wavelength_nm * 1e-9),
            convention: self.convention,
        }
    }

    pub fn velocity_grid(&self) -> Result<VelocityGrid, ConfigError> {
        match self.grid {
            GridConfig::Stationary => Ok(VelocityGrid::stationary()),
            GridConfig::Thermal {
                temperature_k,
                mass_kg,
                span_sigma,
                nodes,
            } => thermal_grid(temperature_k, mass_kg, span_sigma, nodes)
                .map_err(|e| config_error(None, "grid", e.to_string())),
        }
    }

    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        Ok(Scenario::new(self.level_scheme(), self.drives(), self.velocity_grid()?))
    }

    pub fn detuning_axis(&self) -> Result<DetuningAxis, ConfigError> {
        let a = &self.axis;
        DetuningAxis::piecewise(
            mhz(a.inner_half_width_mhz),
            khz(a.inner_step_khz),
            mhz(a.half_width_mhz),
            khz(a.outer_step_khz),
        )
        .map_err(|e| config_error(None, "axis", e.to_string()))
    }

    /// Checks that the parameters describe something computable.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.level_scheme()
            .validate()
            .map_err(|e| config_error(None, "levels", e.to_string()))?;
        self.drives()
            .validate()
            .map_err(|e| config_error(None, "drives", e.to_string()))?;
        self.velocity_grid()?;
        self.detuning_axis()?;
        if !(self.target_od > 0.0) {
            return Err(config_error(None, "optics.target_od", "must be positive"));
        }
        let positive = |key: &str, values: &[f64]| {
            if values.iter().any(|v| *v < 0.0) {
                Err(config_error(None, key, "values must be non-negative"))
            } else {
                Ok(())
            }
        };
        match self.kind {
            RunKind::Stark => {
                positive("stark.control_rabi_MHz", &self.stark_control_rabi_mhz)?;
                if self.control_detuning_mhz == 0.0 {
                    return Err(config_error(
                        None,
                        "drives.control_detuning_MHz",
                        "stark runs need a detuned control",
                    ));
                }
            }
            RunKind::CutoffScan => {
                positive("cutoff.cutoffs_MHz", &self.cutoffs_mhz)?;
                if self.cutoffs_mhz.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(config_error(None, "cutoff.cutoffs_MHz", "must be strictly ascending"));
                }
            }
            RunKind::RabiScan => {
                positive("rabi.control_rabi_MHz", &self.rabi_control_rabi_mhz)?;
                if self.control_detuning_mhz != 0.0 {
                    return Err(config_error(
                        None,
                        "drives.control_detuning_MHz",
                        "rabi scans need a resonant control",
                    ));
                }
            }
            RunKind::Zeeman => {
                if self.zeeman_offsets_mhz.len() != self.zeeman_weights.len() {
                    return Err(config_error(None, "zeeman.weights", "needs one weight per offset"));
                }
                positive("zeeman.weights", &self.zeeman_weights)?;
                if (self.zeeman_weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                    return Err(config_error(None, "zeeman.weights", "must sum to 1"));
                }
            }
            RunKind::Spectrum => {}
        }
        Ok(())
    }

    /// Every field, in the file grammar. Loading the result reproduces
    /// `self` exactly (numbers use shortest round-trip formatting).
    pub fn to_text(&self) -> String {
        fn list(values: &[f64]) -> String {
            values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        }
        fn name<T: PartialEq + Copy>(choices: &[(&'static str, T)], value: T) -> &'static str {
            choices
                .iter()
                .find(|(_, t)| *t == value)
                .map(|(n, _)| *n)
                .expect("every value has a name")
        }

        let mut s = String::new();
        let _ = writeln!(s, "[scenario]\nkind = {}", self.kind.name());
        let _ = writeln!(s, "[levels]");
        for (i, d) in self.decay_mhz.iter().enumerate() {
            let _ = writeln!(s, "gamma{}_MHz = {d}", i + 1);
        }
        for (i, row) in self.branching.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if *b != 0.0 {
                    let _ = writeln!(s, "branch_{}_{} = {b}", i + 1, j + 1);
                }
            }
        }
        let _ = writeln!(s, "transit_MHz = {}", self.transit_mhz);
        let _ = writeln!(s, "transit_model = {}", name(TRANSIT_MODELS, self.transit_model));
        let _ = writeln!(s, "[drives]");
        let _ = writeln!(s, "probe_rabi_MHz = {}", self.probe_rabi_mhz);
        let _ = writeln!(s, "coupling_rabi_MHz = {}", self.coupling_rabi_mhz);
        let _ = writeln!(s, "coupling_detuning_MHz = {}", self.coupling_detuning_mhz);
        let _ = writeln!(s, "control_rabi_MHz = {}", self.control_rabi_mhz);
        let _ = writeln!(s, "control_detuning_MHz = {}", self.control_detuning_mhz);
        let _ = writeln!(s, "wavelength_nm = {}", self.wavelength_nm);
        let _ = writeln!(s, "convention = {}", name(CONVENTIONS, self.convention));
        for (label, dir) in ["probe", "coupling", "control"].iter().zip(self.directions) {
            let _ = writeln!(s, "{label}_direction = {}", name(DIRECTIONS, dir));
        }
        let _ = writeln!(s, "[grid]");
        match self.grid {
            GridConfig::Stationary => {
                let _ = writeln!(s, "kind = stationary");
            }
            GridConfig::Thermal {
                temperature_k,
                mass_kg,
                span_sigma,
                nodes,
            } => {
                let _ = writeln!(
                    s,
                    "kind = thermal\ntemperature_K = {temperature_k}\nmass_kg = {mass_kg:e}\n\
                     span_sigma = {span_sigma}\nnodes = {nodes}"
                );
            }
        }
        let a = &self.axis;
        let _ = writeln!(
            s,
            "[axis]\ninner_half_width_MHz = {}\ninner_step_kHz = {}\nhalf_width_MHz = {}\nouter_step_kHz = {}",
            a.inner_half_width_mhz, a.inner_step_khz, a.half_width_mhz, a.outer_step_khz
        );
        let _ = writeln!(s, "[optics]\ntarget_od = {}", self.target_od);
        let lists = [
            ("stark", "control_rabi_MHz", &self.stark_control_rabi_mhz),
            ("cutoff", "cutoffs_MHz", &self.cutoffs_mhz),
            ("rabi", "control_rabi_MHz", &self.rabi_control_rabi_mhz),
            ("zeeman", "offsets_MHz", &self.zeeman_offsets_mhz),
            ("zeeman", "weights", &self.zeeman_weights),
        ];
        let mut last_section = "";
        for (section, key, values) in lists {
            if values.is_empty() {
                continue;
            }
            if section != last_section {
                let _ = writeln!(s, "[{section}]");
                last_section = section;
            }
            let _ = writeln!(s, "{key} = {}", list(values));
        }
        s
    }
}
