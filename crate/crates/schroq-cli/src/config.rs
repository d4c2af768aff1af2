//! Flat key-value experiment configs.
//!
//! One `key = value` pair per line, `#` comments, and an `include = <path>`
//! directive that splices in another file (relative to the including file)
//! before the keys that follow it, so a config can start from a preset and
//! override fields.  Parse errors carry file and line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use schroq::evolution::PotentialSpec;
use schroq::experiments::{ExperimentConfig, InitialState};
use schroq::mesh_qft::MeshKind;
use schroq::phase_estimation::PhaseAnchor;

/// A config parse failure with its location.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub file: PathBuf,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: {}", self.file.display(), self.line, self.message)
        } else {
            write!(f, "{}: {}", self.file.display(), self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(file: &Path, line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { file: file.to_path_buf(), line, message: message.into() }
}

/// Key-value pairs with the location each was last set at.
#[derive(Debug, Default)]
struct RawConfig {
    values: BTreeMap<String, (String, PathBuf, usize)>,
}

fn read_into(raw: &mut RawConfig, path: &Path, depth: usize) -> Result<(), ConfigError> {
    if depth > 8 {
        return Err(err(path, 0, "include chain deeper than 8 files"));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(path, 0, format!("cannot read config: {e}")))?;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(path, line_no, format!("expected `key = value`, got {line:?}")));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(err(path, line_no, "empty key or value"));
        }
        if key == "include" {
            let base = path.parent().unwrap_or(Path::new("."));
            read_into(raw, &base.join(&value), depth + 1)?;
        } else {
            raw.values.insert(key, (value, path.to_path_buf(), line_no));
        }
    }
    Ok(())
}

const KNOWN_KEYS: &[&str] = &[
    "potential",
    "omega",
    "v0",
    "kappa",
    "convention",
    "work_qubits",
    "sim_qubits",
    "t",
    "steps",
    "e_ref",
    "initial",
    "random_count",
    "seed",
    "anchor",
    "output",
];

/// A parsed experiment file: the run parameters plus the output path.
#[derive(Debug, Clone)]
pub struct FileConfig {
    pub experiment: ExperimentConfig,
    pub output: Option<PathBuf>,
}

pub fn load(path: &Path) -> Result<FileConfig, ConfigError> {
    let mut raw = RawConfig::default();
    read_into(&mut raw, path, 0)?;

    for (key, (_, file, line)) in &raw.values {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(err(file, *line, format!("unknown key {key:?}")));
        }
    }

    let get = |key: &str| raw.values.get(key);
    let require = |key: &str| {
        get(key).ok_or_else(|| err(path, 0, format!("missing required key {key:?}")))
    };
    fn parse<T: std::str::FromStr>(
        entry: &(String, PathBuf, usize),
        what: &str,
    ) -> Result<T, ConfigError> {
        entry.0.parse().map_err(|_| {
            err(&entry.1, entry.2, format!("field {what}: cannot parse {:?}", entry.0))
        })
    }

    let pot_entry = require("potential")?;
    let potential = match pot_entry.0.as_str() {
        "harmonic" => {
            let omega: f64 = parse(require("omega")?, "omega")?;
            PotentialSpec::harmonic(omega)
                .map_err(|e| err(&pot_entry.1, pot_entry.2, e.to_string()))?
        }
        "square-well" => {
            let v0: f64 = parse(require("v0")?, "v0")?;
            PotentialSpec::square_well(v0)
                .map_err(|e| err(&pot_entry.1, pot_entry.2, e.to_string()))?
        }
        "coulomb" => {
            let kappa: f64 = parse(require("kappa")?, "kappa")?;
            PotentialSpec::coulomb(kappa)
                .map_err(|e| err(&pot_entry.1, pot_entry.2, e.to_string()))?
        }
        other => {
            return Err(err(
                &pot_entry.1,
                pot_entry.2,
                format!("field potential: expected harmonic | square-well | coulomb, got {other:?}"),
            ))
        }
    };

    let conv_entry = require("convention")?;
    let convention = match conv_entry.0.as_str() {
        "asymmetric" => MeshKind::Asymmetric,
        "symmetric" => MeshKind::Symmetric,
        other => {
            return Err(err(
                &conv_entry.1,
                conv_entry.2,
                format!("field convention: expected asymmetric | symmetric, got {other:?}"),
            ))
        }
    };

    let work_qubits: usize = parse(require("work_qubits")?, "work_qubits")?;
    let sim_qubits: usize = parse(require("sim_qubits")?, "sim_qubits")?;
    let t: f64 = parse(require("t")?, "t")?;
    let steps: usize = parse(require("steps")?, "steps")?;
    if !(t > 0.0) || steps == 0 {
        return Err(err(path, 0, format!("need t > 0 and steps >= 1 (t = {t}, steps = {steps})")));
    }

    let e_ref = match get("e_ref") {
        None => None,
        Some(entry) if entry.0 == "auto" => None,
        Some(entry) => Some(parse::<f64>(entry, "e_ref")?),
    };

    let init_entry = require("initial")?;
    let initial = if init_entry.0 == "random" {
        let count: usize = parse(require("random_count")?, "random_count")?;
        let seed: u64 = parse(require("seed")?, "seed")?;
        InitialState::Random { count, seed }
    } else {
        InitialState::Named(init_entry.0.clone())
    };

    let anchor = match get("anchor") {
        None => PhaseAnchor::MaxAmplitude,
        Some(entry) if entry.0 == "max" => PhaseAnchor::MaxAmplitude,
        Some(entry) => PhaseAnchor::RealAt(parse::<f64>(entry, "anchor")?),
    };

    let output = get("output").map(|entry| PathBuf::from(&entry.0));

    Ok(FileConfig {
        experiment: ExperimentConfig {
            potential,
            convention,
            work_qubits,
            sim_qubits,
            t,
            steps,
            e_ref,
            initial,
            anchor,
        },
        output,
    })
}
