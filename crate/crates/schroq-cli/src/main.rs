//! `schroq` — experiment driver for the schroq library.
//!
//! Subcommands run phase-estimation experiments from declarative configs
//! (or built-in presets), project eigenfunctions, report gate inventories
//! and run the validation battery.  Exit codes: 0 ok, 1 check or runtime
//! failure, 2 usage error.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use schroq::evolution::{
    kinetic_circuit, lower_to_two_qubit, potential_half_circuit, trotter_step_circuit,
    PotentialSpec, TrotterConfig,
};
use schroq::experiments::{preset, presets, ExperimentConfig, InitialState};
use schroq::mesh_qft::qft_circuit;
use schroq::phase_estimation::{
    phase_estimate, project_eigenfunction, random_state_average, SpectrumResult,
};
use schroq::reference::{analytic_eigenfunction, analytic_levels, initial_state_library};
use schroq::Circuit;

#[derive(Parser)]
#[command(
    name = "schroq",
    version,
    about = "Quantum-circuit spectra and eigenfunctions for 1D potentials"
)]
struct Cli {
    /// List built-in experiment presets and exit.
    #[arg(long)]
    list_presets: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run phase estimation and write an energy,probability CSV.
    Spectrum {
        /// Preset name or path to a config file.
        config: String,
    },
    /// Project the eigenfunction of a spectrum bin; writes the x,re,im CSV
    /// plus a companion CSV with the analytic eigenfunction samples.
    Eigenfunction {
        /// Preset name or path to a config file.
        config: String,
        /// Bin selector: "peak" or an explicit bin index.
        #[arg(long, default_value = "peak")]
        bin: String,
    },
    /// Run the oracle/property self-check battery.
    Validate {
        /// Perturb a QFT angle to demonstrate the failure path.
        #[arg(long)]
        fault_qft: bool,
    },
    /// Print gate counts and arity histograms for the configured circuits.
    Gates {
        /// Preset name or path to a config file.
        config: String,
        /// Also dump the Trotter-step circuit, one line per gate.
        #[arg(long)]
        dump: bool,
    },
}

/// A failure carrying the exit code it should map to.
enum CliError {
    Usage(String),
    Run(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Run(_) => ExitCode::from(1),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Run(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime(msg: impl std::fmt::Display) -> CliError {
    CliError::Run(msg.to_string())
}

struct LoadedConfig {
    name: String,
    experiment: ExperimentConfig,
    output: Option<PathBuf>,
}

/// Resolves the argument as a preset name first, then as a config path.
fn resolve_config(arg: &str) -> Result<LoadedConfig, CliError> {
    if let Ok(p) = preset(arg) {
        return Ok(LoadedConfig {
            name: p.name.to_string(),
            experiment: p.config,
            output: None,
        });
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(usage(format!(
            "{arg:?} is neither a preset nor a config file; try --list-presets"
        )));
    }
    let file = config::load(path).map_err(|e| usage(e.to_string()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".to_string());
    Ok(LoadedConfig { name, experiment: file.experiment, output: file.output })
}

/// Joins relative outputs under SCHROQ_OUTDIR when it is set.
fn output_path(requested: Option<PathBuf>, default_name: &str) -> PathBuf {
    let path = requested.unwrap_or_else(|| PathBuf::from(default_name));
    if path.is_absolute() {
        return path;
    }
    match std::env::var_os("SCHROQ_OUTDIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path,
    }
}

fn run_experiment(exp: &ExperimentConfig) -> Result<SpectrumResult, CliError> {
    let cfg = exp.phase_config().map_err(runtime)?;
    match &exp.initial {
        InitialState::Named(name) => {
            let initial = initial_state_library(name, cfg.mesh()).map_err(runtime)?;
            phase_estimate(&initial, &exp.potential, &cfg).map_err(runtime)
        }
        InitialState::Random { count, seed } => {
            random_state_average(&exp.potential, &cfg, *count, *seed).map_err(runtime)
        }
    }
}

fn format_g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| runtime(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn cmd_spectrum(arg: &str) -> Result<(), CliError> {
    let loaded = resolve_config(arg)?;
    let spectrum = run_experiment(&loaded.experiment)?;
    for w in spectrum.warnings() {
        eprintln!("warning: {w}");
    }

    let mut csv = String::from("energy,probability\n");
    for bin in spectrum.bins().iter().rev() {
        csv.push_str(&format!(
            "{},{}\n",
            format_g17(bin.energy),
            format_g17(bin.probability)
        ));
    }
    let path = output_path(loaded.output, &format!("{}_spectrum.csv", loaded.name));
    write_file(&path, &csv)?;

    let (m, bin) = spectrum.dominant_bin();
    println!(
        "E_ref = {:.6}; dominant bin {m}: E = {:.6}, p = {:.6}",
        loaded.experiment.resolved_e_ref(),
        bin.energy,
        bin.probability
    );
    println!("spectrum written to {}", path.display());
    Ok(())
}

fn cmd_eigenfunction(arg: &str, bin_selector: &str) -> Result<(), CliError> {
    let loaded = resolve_config(arg)?;
    let spectrum = run_experiment(&loaded.experiment)?;
    for w in spectrum.warnings() {
        eprintln!("warning: {w}");
    }

    let m = match bin_selector {
        "peak" => spectrum.dominant_bin().0,
        s => s
            .parse::<usize>()
            .map_err(|_| usage(format!("bin selector must be `peak` or an index, got {s:?}")))?,
    };
    if m >= spectrum.bins().len() {
        return Err(usage(format!(
            "bin {m} out of range (0..{})",
            spectrum.bins().len()
        )));
    }
    let projected = project_eigenfunction(&spectrum, m, loaded.experiment.anchor)
        .map_err(|e| runtime(format!("bin {m}: {e}")))?;
    if projected.fell_back {
        eprintln!("warning: anchor amplitude vanishes; phase fixed at the maximum instead");
    }

    let mesh = projected.wavefunction.convention();
    let xs = mesh.mesh_points();
    let mut csv = String::from("x,re,im\n");
    for (k, v) in projected.wavefunction.values().iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{}\n",
            format_g17(xs[k]),
            format_g17(v.re),
            format_g17(v.im)
        ));
    }
    let path = output_path(loaded.output, &format!("{}_eigenfunction.csv", loaded.name));
    write_file(&path, &csv)?;

    // companion: analytic eigenfunction of the level nearest the bin energy
    let energy = spectrum.bins()[m].energy;
    let levels = analytic_levels(&loaded.experiment.potential);
    let max_level = match loaded.experiment.potential {
        PotentialSpec::Coulomb { .. } => 3.min(levels.len()),
        _ => levels.len(),
    };
    let nearest = (0..max_level)
        .min_by(|&a, &b| {
            (levels[a] - energy)
                .abs()
                .partial_cmp(&(levels[b] - energy).abs())
                .unwrap()
        })
        .ok_or_else(|| runtime("no analytic level available"))?;
    let mut exact = analytic_eigenfunction(&loaded.experiment.potential, nearest, mesh)
        .map_err(runtime)?;
    // sign-match the analytic samples at the anchor point
    if exact.values()[projected.anchor_index].re < 0.0 {
        for v in exact.values_mut() {
            *v = -*v;
        }
    }
    let mut exact_csv = String::from("x,re,im\n");
    for (k, v) in exact.values().iter().enumerate() {
        exact_csv.push_str(&format!(
            "{},{},{}\n",
            format_g17(xs[k]),
            format_g17(v.re),
            format_g17(v.im)
        ));
    }
    let exact_path = path.with_file_name(format!(
        "{}_exact.csv",
        path.file_stem().unwrap_or_default().to_string_lossy()
    ));
    write_file(&exact_path, &exact_csv)?;

    println!(
        "bin {m}: E = {:.6}, p = {:.6}; analytic level {} at E = {:.6}",
        energy,
        spectrum.bins()[m].probability,
        nearest,
        levels[nearest]
    );
    println!("eigenfunction written to {}", path.display());
    println!("analytic overlay written to {}", exact_path.display());
    Ok(())
}

fn cmd_validate(fault_qft: bool) -> Result<(), CliError> {
    let fault = if fault_qft {
        schroq::validate::FaultInjection::QftAngle
    } else {
        schroq::validate::FaultInjection::None
    };
    let results = schroq::validate::run_all(fault);
    let mut failures = 0usize;
    println!("{:<24} {:>9} {:>12} {:>12}", "check", "status", "measured", "bound");
    for r in &results {
        println!(
            "{:<24} {:>9} {:>12.3e} {:>12.3e}",
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            r.measured,
            r.bound
        );
        if !r.passed {
            failures += 1;
            eprintln!("FAIL {}: measured {:.6e} exceeds bound {:.6e}\n  {}",
                r.name, r.measured, r.bound, r.detail);
        }
    }
    if let Some(sweep) = results.iter().find(|r| r.name == "trotter-step-slope") {
        println!("\nper-step Trotter sweep: {}", sweep.detail);
    }
    if failures > 0 {
        return Err(CliError::Run(format!("{failures} check(s) failed")));
    }
    println!("all {} checks passed", results.len());
    Ok(())
}

fn print_circuit_report(label: &str, circuit: &Circuit) {
    let hist = circuit.arity_histogram();
    let hist_str: Vec<String> = hist
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(arity, n)| format!("{n} of arity {arity}"))
        .collect();
    println!(
        "{label:<28} {:>5} gates, max arity {}: {}",
        circuit.len(),
        circuit.max_arity(),
        hist_str.join(", ")
    );
}

fn cmd_gates(arg: &str, dump: bool) -> Result<(), CliError> {
    let loaded = resolve_config(arg)?;
    let exp = &loaded.experiment;
    let mesh = exp.mesh().map_err(runtime)?;
    let dt = exp.t / exp.steps as f64;
    let cfg = TrotterConfig::new(dt, mesh).map_err(runtime)?;
    let s = exp.sim_qubits;
    let qubits: Vec<usize> = (0..s).collect();

    let potential = potential_half_circuit(&exp.potential, &cfg, s, &qubits).map_err(runtime)?;
    let lowered = lower_to_two_qubit(&potential).map_err(runtime)?;
    let kinetic = kinetic_circuit(&cfg, s, &qubits).map_err(runtime)?;
    let qft = qft_circuit(s, &qubits, false).map_err(runtime)?;
    let step = trotter_step_circuit(&exp.potential, &cfg).map_err(runtime)?;

    println!("circuits at dt = {dt:.6e}, s = {s}:");
    print_circuit_report("potential half-step", &potential);
    print_circuit_report("  after lowering", &lowered);
    print_circuit_report("kinetic", &kinetic);
    print_circuit_report("QFT", &qft);
    print_circuit_report("full Trotter step", &step);

    if dump {
        println!("--- trotter step dump ---");
        print!("{}", step.dump());
    }
    Ok(())
}

fn list_presets() {
    println!("{:<8} {:<18} figure", "name", "alias");
    for p in presets() {
        println!("{:<8} {:<18} {}", p.name, p.alias.unwrap_or("-"), p.figure);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_presets {
        list_presets();
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: expected a subcommand or --list-presets (see --help)");
        return ExitCode::from(2);
    };
    let result = match command {
        Command::Spectrum { config } => cmd_spectrum(&config),
        Command::Eigenfunction { config, bin } => cmd_eigenfunction(&config, &bin),
        Command::Validate { fault_qft } => cmd_validate(fault_qft),
        Command::Gates { config, dump } => cmd_gates(&config, dump),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
