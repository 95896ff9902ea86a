//! `twofold` — concurrence bounds for two-qubit states, exactly and through
//! two simulated measurement routes.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

use twofold_core::coincidence::{dip_scan, estimate_bounds, simulate_run, CountRecord};
use twofold_core::concurrence::{
    bound_components, lower_bound, purity_oracle, upper_bound, wootters_concurrence,
};
use twofold_core::qlinalg::DensityMatrix;
use twofold_core::report::{
    density_to_json_rows, emit_csv, emit_json, load_density_json, run_scenario, verify_table1,
    ScenarioConfig,
};
use twofold_core::states::{
    bell_singlet, dephased_singlet, quartz_to_coherence, random_density, random_pure, werner,
    CalibrationParams,
};
use twofold_core::tomography::{reconstruct, simulate_counts};

#[derive(Parser)]
#[command(
    name = "twofold",
    about = "Concurrence bounds from twofold-copy parity measurements",
    version
)]
struct Cli {
    /// Override the default seed (also via TWOFOLD_SEED).
    #[arg(long, global = true, env = "TWOFOLD_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact concurrence and bounds for one state (JSON to stdout).
    Bounds {
        /// State spec: singlet | mixed | d=V | werner=P | thickness=MM |
        /// random=SEED | pure=SEED | file=PATH
        #[arg(long)]
        state: String,
    },
    /// Simulate tomography of one state and reconstruct it.
    Tomo {
        #[arg(long)]
        state: String,
        /// Shots per tomography setting.
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
    },
    /// Full coincidence run on the configured state: counts plus estimates.
    Simulate {
        /// Scenario TOML with exactly one state configured.
        #[arg(long)]
        config: PathBuf,
        /// Write the CountRecord JSON here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate bounds from a CountRecord JSON file (e.g. bench data).
    Analyze {
        #[arg(long)]
        counts: PathBuf,
        /// Apply the finite-visibility correction during estimation.
        #[arg(long)]
        correction: bool,
    },
    /// Run the full study from a scenario file and emit a report.
    Table1 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the embedded eight-state reference table for consistency.
    VerifyTable1,
    /// Scan one beamsplitter through the interference region.
    Dipscan {
        /// Mode overlap m at the dip center.
        #[arg(long)]
        overlap: f64,
        /// Polarization state of the photon pair meeting at the splitter.
        #[arg(long, default_value = "mixed")]
        state: String,
        #[arg(long, default_value_t = 81)]
        points: usize,
        /// Gaussian dip width in stage units.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Scan half-width in units of sigma.
        #[arg(long, default_value_t = 8.0)]
        half_width: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Parse a state spec into (label, state).
fn parse_state(spec: &str) -> Result<(String, DensityMatrix)> {
    let spec = spec.trim();
    match spec {
        "singlet" => return Ok(("singlet".into(), bell_singlet())),
        "mixed" => {
            let rho = werner(0.0)?;
            return Ok(("mixed".into(), rho));
        }
        _ => {}
    }
    let (kind, value) = spec
        .split_once('=')
        .with_context(|| format!("unrecognized state spec `{spec}`"))?;
    match kind {
        "d" => {
            let d: f64 = value.parse().context("d must be a number")?;
            Ok((format!("d={d}"), dephased_singlet(d)?))
        }
        "werner" => {
            let p: f64 = value.parse().context("werner parameter must be a number")?;
            Ok((format!("werner={p}"), werner(p)?))
        }
        "thickness" => {
            let mm: f64 = value.parse().context("thickness must be millimeters")?;
            let d = quartz_to_coherence(mm, &CalibrationParams::default())?;
            Ok((format!("thickness={mm}mm"), dephased_singlet(d)?))
        }
        "random" => {
            let seed: u64 = value.parse().context("random seed must be an integer")?;
            Ok((format!("random={seed}"), random_density(seed, 4)?))
        }
        "pure" => {
            let seed: u64 = value.parse().context("pure seed must be an integer")?;
            Ok((format!("pure={seed}"), random_pure(seed)))
        }
        "file" => Ok((value.to_string(), load_density_json(value)?)),
        other => bail!("unknown state kind `{other}`"),
    }
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let seed = cli.seed.unwrap_or(7);
    match cli.command {
        Command::Bounds { state } => {
            let (label, rho) = parse_state(&state)?;
            let c = wootters_concurrence(&rho)?;
            let lower = lower_bound(&rho)?;
            let upper = upper_bound(&rho)?;
            let components = bound_components(&rho)?;
            let oracle = purity_oracle(&rho)?;
            let doc = json!({
                "state": label,
                "concurrence": c,
                "lower": lower,
                "upper": upper,
                "components": components,
                "purity": oracle,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Tomo { state, shots } => {
            let (label, rho) = parse_state(&state)?;
            let counts = simulate_counts(&rho, shots, seed)?;
            let result = reconstruct(&counts, Some(&rho))?;
            let doc = json!({
                "state": label,
                "counts": counts,
                "rho_hat": density_to_json_rows(&result.rho_hat),
                "concurrence": result.concurrence,
                "lower": result.lower,
                "upper": result.upper,
                "fidelity_vs_truth": result.fidelity_vs_truth,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Simulate { config, out } => {
            let mut cfg = ScenarioConfig::from_toml_file(&config.display().to_string())?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let states = cfg.build_states()?;
            if states.len() != 1 {
                bail!(
                    "simulate needs exactly one configured state, found {}",
                    states.len()
                );
            }
            let (label, rho) = &states[0];
            let mut sim = cfg.sim.clone();
            sim.seed = twofold_core::child_seed(cfg.seed, 2);
            let record = simulate_run(rho, &sim, twofold_core::child_seed(cfg.seed, 3))?;
            let estimate = estimate_bounds(&record, &sim)?;
            if let Some(path) = &out {
                std::fs::write(path, record.to_json()?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let doc = json!({
                "state": label,
                "record": record,
                "estimate": estimate,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Analyze { counts, correction } => {
            let text = std::fs::read_to_string(&counts)
                .with_context(|| format!("reading {}", counts.display()))?;
            let record = CountRecord::from_json(&text)?;
            let mut cfg = record.config.clone();
            cfg.visibility_correction = correction;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let estimate = estimate_bounds(&record, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&json!({ "estimate": estimate }))?);
        }
        Command::Table1 { config, format, out } => {
            let mut cfg = ScenarioConfig::from_toml_file(&config.display().to_string())?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let rows = run_scenario(&cfg)?;
            let text = match format {
                Format::Csv => emit_csv(&rows)?,
                Format::Json => emit_json(&rows)?,
            };
            write_or_print(out.as_ref(), text.trim_end())?;
        }
        Command::VerifyTable1 => {
            let verification = verify_table1();
            print!("{}", verification.render());
            if !verification.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Dipscan {
            overlap,
            state,
            points,
            sigma,
            half_width,
        } => {
            let (label, rho) = parse_state(&state)?;
            let n = points.max(2);
            let span = half_width * sigma;
            let positions: Vec<f64> = (0..n)
                .map(|i| -span + 2.0 * span * i as f64 / (n - 1) as f64)
                .collect();
            let scan = dip_scan(&rho, overlap, &positions, sigma)?;
            let doc = json!({
                "state": label,
                "overlap": overlap,
                "sigma": sigma,
                "scan": scan,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
