//! `key = value unit` run configuration.
//!
//! ```text
//! # benchmark
//! M  = 100 kg
//! R  = 10 cm
//! N  = 1e15
//! dm = 1e-5 eV
//! d  = 1 mm
//! T  = 0 .. 1 s / 2000
//! ```

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::analytic::{EnsembleParams, Experiment};
use crate::gravity::GravitySource;
use crate::oracle::GridSettings;
use crate::units::{to_natural, Quantity, ATOMIC_MASS_UNIT_KG, C_M_PER_S, JOULE_PER_EV};

/// Rb-87 atomic mass, the default `m1`.
pub const DEFAULT_GROUND_MASS_U: f64 = 86.909_180_527;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{}{key}: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, key: &str, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn global(key: &str, message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            key: key.to_string(),
            message: message.into(),
        }
    }
}

/// Source in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceSpec {
    Point { mass_kg: f64 },
    Cylinder { density_kg_per_m: f64, radius_m: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleChoice {
    None,
    Closed,
    Grid,
    Both,
}

impl OracleChoice {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "none" | "off" => Some(OracleChoice::None),
            "closed" => Some(OracleChoice::Closed),
            "grid" => Some(OracleChoice::Grid),
            "both" => Some(OracleChoice::Both),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleChoice::None => "none",
            OracleChoice::Closed => "closed",
            OracleChoice::Grid => "grid",
            OracleChoice::Both => "both",
        }
    }

    pub fn closed(&self) -> bool {
        matches!(self, OracleChoice::Closed | OracleChoice::Both)
    }

    pub fn grid(&self) -> bool {
        matches!(self, OracleChoice::Grid | OracleChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Observation times `start + (stop − start)·k/points`, `k = 1..=points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeRange {
    pub start_s: f64,
    pub stop_s: f64,
    pub points: usize,
}

impl TimeRange {
    pub fn times(&self) -> Vec<f64> {
        let span = self.stop_s - self.start_s;
        (1..=self.points)
            .map(|k| self.start_s + span * k as f64 / self.points as f64)
            .collect()
    }
}

/// Validated run configuration; physical values in SI (dm in eV).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: SourceSpec,
    pub separation_m: f64,
    pub atoms: f64,
    pub ground_mass_kg: f64,
    pub splitting_ev: f64,
    pub width_m: f64,
    pub time: TimeRange,
    pub include_fast_phase: bool,
    pub oracle: OracleChoice,
    pub grid: GridSettings,
    pub format: OutputFormat,
    /// Warn when `|x_cl|/R` exceeds this at the last time.
    pub linearization_warn: f64,
    /// Insert the leading-order resonance times into scans.
    pub resonances: bool,
}

fn scaled(unit: &str, table: &[(&str, f64)]) -> Option<f64> {
    table.iter().find(|(u, _)| *u == unit).map(|(_, f)| *f)
}

const LENGTH: &[(&str, f64)] = &[("m", 1.0), ("cm", 1e-2), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9)];
const TIME: &[(&str, f64)] = &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9)];
const ENERGY_EV: &[(&str, f64)] = &[
    ("eV", 1.0),
    ("meV", 1e-3),
    ("ueV", 1e-6),
    ("neV", 1e-9),
    ("J", 1.0 / JOULE_PER_EV),
];
const DENSITY: &[(&str, f64)] = &[("kg/m", 1.0), ("g/cm", 0.1)];

fn mass_factor(unit: &str) -> Option<f64> {
    let ev = JOULE_PER_EV / (C_M_PER_S * C_M_PER_S);
    match unit {
        "kg" => Some(1.0),
        "g" => Some(1e-3),
        "u" | "Da" => Some(ATOMIC_MASS_UNIT_KG),
        "eV" => Some(ev),
        "MeV" => Some(1e6 * ev),
        "GeV" => Some(1e9 * ev),
        _ => None,
    }
}

fn number(line: usize, key: &str, text: &str) -> Result<f64, ConfigError> {
    let v: f64 = text
        .parse()
        .map_err(|_| ConfigError::at(line, key, format!("cannot parse number {text:?}")))?;
    if !v.is_finite() {
        return Err(ConfigError::at(line, key, format!("{key} must be finite")));
    }
    Ok(v)
}

fn quantity(line: usize, key: &str, value: &str, factor: impl Fn(&str) -> Option<f64>) -> Result<f64, ConfigError> {
    let mut parts = value.split_whitespace();
    let (Some(num), Some(unit), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(ConfigError::at(line, key, format!("expected `<number> <unit>`, got {value:?}")));
    };
    let f = factor(unit).ok_or_else(|| ConfigError::at(line, key, format!("unknown unit {unit:?}")))?;
    let v = number(line, key, num)? * f;
    if !(v > 0.0) {
        return Err(ConfigError::at(line, key, format!("{key} must be positive")));
    }
    Ok(v)
}

fn flag(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "on" | "true" | "yes" => Ok(true),
        "off" | "false" | "no" => Ok(false),
        _ => Err(ConfigError::at(line, key, format!("expected on/off, got {value:?}"))),
    }
}

fn count(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::at(line, key, format!("expected a whole number, got {value:?}")))
}

fn time_range(line: usize, value: &str) -> Result<TimeRange, ConfigError> {
    let bad = || ConfigError::at(line, "T", format!("expected `<start> .. <stop> <unit> / <points>`, got {value:?}"));
    let (range, points) = value.split_once('/').ok_or_else(bad)?;
    let (start, rest) = range.split_once("..").ok_or_else(bad)?;
    let mut rest = rest.split_whitespace();
    let (Some(stop), Some(unit), None) = (rest.next(), rest.next(), rest.next()) else {
        return Err(bad());
    };
    let f = scaled(unit, TIME).ok_or_else(|| ConfigError::at(line, "T", format!("unknown unit {unit:?}")))?;
    let start_s = number(line, "T", start.trim())? * f;
    let stop_s = number(line, "T", stop)? * f;
    let points = count(line, "T", points.trim())?;
    if start_s < 0.0 {
        return Err(ConfigError::at(line, "T", "T must be non-negative"));
    }
    if !(stop_s > start_s) {
        return Err(ConfigError::at(line, "T", "T range must be strictly increasing"));
    }
    if points < 2 {
        return Err(ConfigError::at(line, "T", "T range needs at least 2 points"));
    }
    Ok(TimeRange { start_s, stop_s, points })
}

const KEYS: &[&str] = &[
    "M",
    "rho",
    "l",
    "R",
    "N",
    "m1",
    "dm",
    "d",
    "T",
    "fast_phase",
    "oracle",
    "format",
    "grid_points",
    "grid_steps",
    "linearization_warn",
    "resonances",
];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, content, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::at(line, key, "unknown key"));
        }
        if entries.insert(key, (line, value)).is_some() {
            return Err(ConfigError::at(line, key, "duplicate key"));
        }
    }
    let required = |key: &str| entries.get(key).copied().ok_or_else(|| ConfigError::global(key, "missing key"));

    let source = match (entries.get("M"), entries.get("rho"), entries.get("l")) {
        (Some(&(line, v)), None, None) => SourceSpec::Point {
            mass_kg: quantity(line, "M", v, mass_factor)?,
        },
        (None, Some(&(lr, rho)), Some(&(ll, l))) => SourceSpec::Cylinder {
            density_kg_per_m: quantity(lr, "rho", rho, |u| scaled(u, DENSITY))?,
            radius_m: quantity(ll, "l", l, |u| scaled(u, LENGTH))?,
        },
        (Some(&(line, _)), _, _) => return Err(ConfigError::at(line, "M", "give either M or rho and l, not both")),
        (None, None, None) => return Err(ConfigError::global("M", "missing key (or rho and l for a cylinder)")),
        _ => return Err(ConfigError::global("rho", "a cylinder needs both rho and l")),
    };

    let (line, v) = required("R")?;
    let separation_m = quantity(line, "R", v, |u| scaled(u, LENGTH))?;
    if let SourceSpec::Cylinder { radius_m, .. } = source {
        if separation_m < radius_m {
            return Err(ConfigError::at(line, "R", "R must not be smaller than the cylinder radius l"));
        }
    }
    let (line, v) = required("N")?;
    let atoms = number(line, "N", v)?;
    if !(atoms >= 1.0) {
        return Err(ConfigError::at(line, "N", "N must be at least 1"));
    }
    let ground_mass_kg = match entries.get("m1") {
        Some(&(line, v)) => quantity(line, "m1", v, mass_factor)?,
        None => DEFAULT_GROUND_MASS_U * ATOMIC_MASS_UNIT_KG,
    };
    let (line, v) = required("dm")?;
    let splitting_ev = quantity(line, "dm", v, |u| scaled(u, ENERGY_EV))?;
    let (line, v) = required("d")?;
    let width_m = quantity(line, "d", v, |u| scaled(u, LENGTH))?;
    let (line, v) = required("T")?;
    let time = time_range(line, v)?;

    let include_fast_phase = match entries.get("fast_phase") {
        Some(&(line, v)) => flag(line, "fast_phase", v)?,
        None => false,
    };
    let resonances = match entries.get("resonances") {
        Some(&(line, v)) => flag(line, "resonances", v)?,
        None => true,
    };
    let oracle = match entries.get("oracle") {
        Some(&(line, v)) => OracleChoice::parse(v)
            .ok_or_else(|| ConfigError::at(line, "oracle", format!("expected none/closed/grid/both, got {v:?}")))?,
        None => OracleChoice::None,
    };
    let format = match entries.get("format") {
        Some(&(line, v)) => {
            OutputFormat::parse(v).ok_or_else(|| ConfigError::at(line, "format", format!("expected csv or json, got {v:?}")))?
        }
        None => OutputFormat::Csv,
    };
    let mut grid = GridSettings::default();
    if let Some(&(line, v)) = entries.get("grid_points") {
        grid.points = count(line, "grid_points", v)?;
        if grid.points < 64 || !grid.points.is_power_of_two() {
            return Err(ConfigError::at(line, "grid_points", "grid_points must be a power of two, at least 64"));
        }
    }
    if let Some(&(line, v)) = entries.get("grid_steps") {
        grid.steps = count(line, "grid_steps", v)?;
        if grid.steps == 0 {
            return Err(ConfigError::at(line, "grid_steps", "grid_steps must be positive"));
        }
    }
    let linearization_warn = match entries.get("linearization_warn") {
        Some(&(line, v)) => {
            let w = number(line, "linearization_warn", v)?;
            if !(w > 0.0) {
                return Err(ConfigError::at(line, "linearization_warn", "linearization_warn must be positive"));
            }
            w
        }
        None => 1e-3,
    };

    let config = RunConfig {
        source,
        separation_m,
        atoms,
        ground_mass_kg,
        splitting_ev,
        width_m,
        time,
        include_fast_phase,
        oracle,
        grid,
        format,
        linearization_warn,
        resonances,
    };
    config.experiment().map_err(|e| ConfigError::global("config", e.to_string()))?;
    Ok(config)
}

impl RunConfig {
    /// Config text that parses back to `self` exactly (SI units, shortest
    /// round-trip number formatting).
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        match self.source {
            SourceSpec::Point { mass_kg } => writeln!(s, "M = {mass_kg:e} kg"),
            SourceSpec::Cylinder {
                density_kg_per_m,
                radius_m,
            } => writeln!(s, "rho = {density_kg_per_m:e} kg/m\nl = {radius_m:e} m"),
        }
        .unwrap();
        let on = |b: bool| if b { "on" } else { "off" };
        let _ = writeln!(s, "R = {:e} m", self.separation_m);
        let _ = writeln!(s, "N = {:e}", self.atoms);
        let _ = writeln!(s, "m1 = {:e} kg", self.ground_mass_kg);
        let _ = writeln!(s, "dm = {:e} eV", self.splitting_ev);
        let _ = writeln!(s, "d = {:e} m", self.width_m);
        let _ = writeln!(s, "T = {:e} .. {:e} s / {}", self.time.start_s, self.time.stop_s, self.time.points);
        let _ = writeln!(s, "fast_phase = {}", on(self.include_fast_phase));
        let _ = writeln!(s, "oracle = {}", self.oracle.name());
        let _ = writeln!(s, "format = {}", self.format.name());
        let _ = writeln!(s, "grid_points = {}", self.grid.points);
        let _ = writeln!(s, "grid_steps = {}", self.grid.steps);
        let _ = writeln!(s, "linearization_warn = {:e}", self.linearization_warn);
        let _ = writeln!(s, "resonances = {}", on(self.resonances));
        s
    }

    /// Rebuilds the config from the `# key = value` lines of an emitted CSV.
    pub fn from_csv_metadata(csv: &str) -> Result<Self, ConfigError> {
        let text: String = csv
            .lines()
            .take_while(|l| l.starts_with('#'))
            .filter(|l| !l.starts_with("#!") && l.contains('='))
            .map(|l| format!("{}\n", l.trim_start_matches('#').trim()))
            .collect();
        parse_config(&text)
    }

    pub fn experiment(&self) -> Result<Experiment, crate::analytic::AnalyticError> {
        let kg = |v: f64| to_natural(Quantity::kilograms(v).expect("validated"));
        let m = |v: f64| to_natural(Quantity::metres(v).expect("validated"));
        let source = match self.source {
            SourceSpec::Point { mass_kg } => GravitySource::point_mass(kg(mass_kg))?,
            SourceSpec::Cylinder {
                density_kg_per_m,
                radius_m,
            } => GravitySource::cylinder(kg(density_kg_per_m) / m(1.0), m(radius_m))?,
        };
        let ensemble = EnsembleParams::new(self.atoms, kg(self.ground_mass_kg), self.splitting_ev, m(self.width_m))?;
        Experiment::new(ensemble, source, m(self.separation_m))
    }
}
