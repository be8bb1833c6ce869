//! Batch CLI for the internally coupled quantum Otto cycle.
//!
//! Subcommands:
//! * `gslc` / `elc` / `nelc` — run a sweep in the chosen limit-cycle mode;
//! * `phase` — run a sweep in the config's own mode (phase diagrams);
//! * `tau-scan` — NELC scan over the stroke duration with GSLC/ELC
//!   asymptotes recorded in the output metadata;
//! * `check` — run the internal invariant suite (exit 1 on failure).
//!
//! Runs read a flat dotted-key JSON config (`--config run.json`) and accept
//! `--set key=value` overrides; outputs (CSV/JSON/SVG) are declared in the
//! config under `output.*`. `OTTO_THREADS` caps the worker count (0 = auto).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use otto_core::sweep::{
    run_check_suite, run_phase_sweep, run_tau_scan, Mode, SweepConfig,
};
use otto_core::thermo::Regime;
use otto_core::{svg, sweep, OttoError};

#[derive(Parser)]
#[command(name = "otto", version, about = "Coupled single-qubit quantum Otto cycle sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Flat dotted-key JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set g_h=2.5 or --set grid.axis1.count=40.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Gibbs-state limit cycle sweep.
    Gslc(RunArgs),
    /// Equilibrating limit cycle sweep.
    Elc(RunArgs),
    /// Non-equilibrating limit cycle sweep (finite stroke durations).
    Nelc(RunArgs),
    /// Sweep in the mode declared by the config.
    Phase(RunArgs),
    /// NELC scan over the stroke duration tau.
    #[command(name = "tau-scan")]
    TauScan(RunArgs),
    /// Run the internal invariant suite.
    Check,
}

fn load_config(args: &RunArgs, force_mode: Option<Mode>) -> Result<SweepConfig, OttoError> {
    let mut cfg = match &args.config {
        Some(path) => SweepConfig::from_file(path)?,
        None => SweepConfig::default(),
    };
    if let Some(mode) = force_mode {
        cfg.mode = mode;
    }
    for assignment in &args.sets {
        cfg.apply_override(assignment)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn describe_point(p: &sweep::PointRecord) -> String {
    let mut line = String::new();
    if !p.axis_values.is_empty() {
        let vals: Vec<String> = p.axis_values.iter().map(|v| format!("{v}")).collect();
        line.push_str(&format!("[{}] ", vals.join(", ")));
    }
    line.push_str(&format!(
        "Q_h={:.6e} Q_c={:.6e} W={:.6e} regime={}",
        p.q_h,
        p.q_c,
        p.w,
        p.regime.as_str()
    ));
    match (p.regime, p.figure_of_merit) {
        (Regime::Engine, Some(eta)) => line.push_str(&format!(" eta={eta:.12}")),
        (Regime::Refrigerator, Some(xi)) => line.push_str(&format!(" xi={xi:.12}")),
        _ => {}
    }
    if let Some(pw) = p.power {
        line.push_str(&format!(" power={pw:.6e}"));
    }
    if p.status != "ok" {
        line.push_str(&format!(" status={}", p.status));
    }
    line
}

fn run(cfg: &SweepConfig, tau_scan: bool) -> Result<(), OttoError> {
    let result = if tau_scan {
        run_tau_scan(cfg)?
    } else {
        run_phase_sweep(cfg)?
    };
    if let Some(path) = &cfg.out_csv {
        sweep::emit_csv(&result, path)?;
        eprintln!("wrote {}", path.display());
    }
    if let Some(path) = &cfg.out_json {
        sweep::emit_json(&result, path)?;
        eprintln!("wrote {}", path.display());
    }
    if let Some(path) = &cfg.out_svg {
        svg::emit_svg(&result, path, &cfg.svg_field, cfg.svg_width, cfg.svg_height)?;
        eprintln!("wrote {}", path.display());
    }
    // small runs print per-point results; large ones a summary
    if result.points.len() <= 12 {
        for p in &result.points {
            println!("{}", describe_point(p));
        }
    } else {
        let engines = result
            .points
            .iter()
            .filter(|p| p.regime == Regime::Engine)
            .count();
        let fridges = result
            .points
            .iter()
            .filter(|p| p.regime == Regime::Refrigerator)
            .count();
        let failed = result.points.iter().filter(|p| p.status != "ok").count();
        println!(
            "{} points: {} engine, {} refrigerator, {} none, {} failed",
            result.points.len(),
            engines,
            fridges,
            result.points.len() - engines - fridges,
            failed
        );
    }
    for (k, v) in &result.reference {
        println!("reference {k} = {v:.12e}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<(), OttoError> = match &cli.command {
        Command::Gslc(args) => load_config(args, Some(Mode::Gslc)).and_then(|c| run(&c, false)),
        Command::Elc(args) => load_config(args, Some(Mode::Elc)).and_then(|c| run(&c, false)),
        Command::Nelc(args) => load_config(args, Some(Mode::Nelc)).and_then(|c| run(&c, false)),
        Command::Phase(args) => load_config(args, None).and_then(|c| run(&c, false)),
        Command::TauScan(args) => {
            load_config(args, Some(Mode::Nelc)).and_then(|c| run(&c, true))
        }
        Command::Check => {
            let mut failed = false;
            for outcome in run_check_suite() {
                let tag = if outcome.passed { "PASS" } else { "FAIL" };
                println!("{tag} {}: {}", outcome.name, outcome.detail);
                failed |= !outcome.passed;
            }
            return if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ OttoError::Config(_)) | Err(e @ OttoError::InvalidParams(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
