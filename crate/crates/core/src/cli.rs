//! Command-line front end. [`run`] returns the process exit status.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::circuit::{builtin, CircuitDoc, TimedCircuit};
use crate::config::{Config, OutputFormat};
use crate::error::Result;
use crate::histories::{FamilyDoc, HistoryFamily};
use crate::infoloc::{locate_channel, ChannelPrep};
use crate::scenarios::{run_scenario, SCENARIOS};
use crate::qmath::C64;
use crate::serial::{complex_sig12, from_json, sig12, to_json_pretty, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "histloc", version, about = "Locate quantum information in consistent-histories frameworks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: json or text.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Seed for the random part of the λ-grid.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of random λ-grid points.
    #[arg(long, global = true)]
    lambda_grid_size: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a named scenario, or `all`.
    Scenario {
        #[arg(value_parser = scenario_name)]
        name: String,
    },
    /// Find the minimal subsystems that hold a channel input at one time.
    Locate {
        /// Builtin name (`teleportation`, `dense-coding`) or circuit JSON file.
        #[arg(long)]
        circuit: String,
        #[arg(long)]
        time: String,
        #[arg(long, default_value_t = 0)]
        input_qubit: usize,
    },
    /// Check the consistency of a history family JSON file.
    CheckFamily { file: PathBuf },
}

fn scenario_name(s: &str) -> std::result::Result<String, String> {
    if s == "all" || SCENARIOS.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of: all, {}", SCENARIOS.join(", ")))
    }
}

/// Builds the configuration: defaults, then the file, then flags, then
/// the seed from the environment.
fn resolve_config(common: &Common, env: &dyn Fn(&str) -> Option<String>) -> Result<Config> {
    let mut config = Config::default();
    if let Some(path) = &common.config {
        config.merge_file_text(&std::fs::read_to_string(path)?)?;
    }
    if let Some(f) = common.format {
        config.format = f;
    }
    if let Some(s) = common.seed {
        config.seed = s;
    }
    if let Some(n) = common.lambda_grid_size {
        config.lambda_grid_size = n;
    }
    config.apply_env(env)?;
    config.validate()?;
    Ok(config)
}

fn load_circuit(name: &str) -> Result<TimedCircuit> {
    match builtin(name) {
        Ok(c) => Ok(c),
        Err(_) if Path::new(name).exists() => {
            let doc: CircuitDoc = from_json(&std::fs::read_to_string(name)?)?;
            TimedCircuit::from_doc(&doc)
        }
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'a str,
    command: &'a str,
    config: &'a Config,
    #[serde(flatten)]
    body: T,
}

fn emit_json<T: Serialize>(out: &mut dyn Write, command: &str, config: &Config, body: T) -> Result<()> {
    let doc = Envelope { schema: SCHEMA, command, config, body };
    writeln!(out, "{}", to_json_pretty(&doc)?)?;
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, env, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = resolve_config(&cli.common, env)?;
    match &cli.command {
        Command::Scenario { name } => {
            let reports = run_scenario(name, &config)?;
            match config.format {
                OutputFormat::Json => emit_json(out, "scenario", &config, json!({ "reports": reports }))?,
                OutputFormat::Text => {
                    for r in &reports {
                        write!(out, "{}", r.render_text())?;
                    }
                }
            }
            let failed: Vec<&str> = reports.iter().flat_map(|r| r.failed_ids()).collect();
            if failed.is_empty() {
                Ok(EXIT_OK)
            } else {
                writeln!(err, "failing claims: {}", failed.join(", "))?;
                Ok(EXIT_FAILED)
            }
        }
        Command::Locate { circuit, time, input_qubit } => {
            let c = load_circuit(circuit)?;
            let prep = ChannelPrep::with_zero_environment(*input_qubit, c.n_qubits())?;
            let report = locate_channel(&c, &prep, time, &config.grid(), config.channel_tolerance())?;
            match config.format {
                OutputFormat::Json => emit_json(out, "locate", &config, json!({ "circuit": circuit, "location": report }))?,
                OutputFormat::Text => {
                    writeln!(out, "{circuit} at {time}, input qubit {}", report.input_qubit)?;
                    for s in &report.subsets {
                        match s.witness_lambda {
                            Some([re, im]) => writeln!(
                                out,
                                "  {{{}}} not located (fails at λ={})",
                                s.qubits.join(","),
                                complex_sig12(C64::new(re, im))
                            )?,
                            None => writeln!(out, "  {{{}}} located", s.qubits.join(","))?,
                        }
                    }
                    let minimal: Vec<String> = report.minimal.iter().map(|m| format!("{{{}}}", m.join(","))).collect();
                    writeln!(out, "minimal: {}", minimal.join(" "))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::CheckFamily { file } => {
            let doc: FamilyDoc = from_json(&std::fs::read_to_string(file)?)?;
            let family = HistoryFamily::from_doc(&doc)?;
            let report = family.consistency_check(config.eps_consistency);
            let verdict = if report.consistent { "consistent" } else { "inconsistent" };
            match config.format {
                OutputFormat::Json => {
                    emit_json(out, "check-family", &config, json!({ "family": family.name(), "verdict": verdict, "consistency": report }))?
                }
                OutputFormat::Text => writeln!(
                    out,
                    "{}: {verdict} (worst chain-ket overlap {}, tolerance {})",
                    family.name(),
                    sig12(report.worst_overlap),
                    report.tolerance
                )?,
            }
            Ok(if report.consistent { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

