use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

use complexity_drop::codec::InstructionCostModel;
use complexity_drop::oracle::{equivalence_sweep, sweep_case_count};
use complexity_drop::{explain, unexpectedness, validate_scenario, Scenario};

/// Score the unexpectedness of structured scenario descriptions.
#[derive(Parser)]
#[command(name = "cdrop", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a scenario file and print the report as JSON.
    Score {
        /// Path to a scenario JSON file.
        #[arg(long)]
        scenario: PathBuf,
        /// Pretty-print the JSON output.
        #[arg(long)]
        pretty: bool,
    },
    /// Score a scenario and print both priced computation sequences.
    Explain {
        /// Path to a scenario JSON file.
        #[arg(long)]
        scenario: PathBuf,
        /// Pretty-print the JSON output.
        #[arg(long)]
        pretty: bool,
    },
    /// Re-score a scenario across a parameter range and print CSV rows.
    Sweep {
        /// Path to a sweep spec JSON file.
        #[arg(long)]
        spec: PathBuf,
    },
    /// Cross-check the digit codec against exhaustive program search.
    OracleCheck {
        /// Check every digit string up to this length.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Override the per-opcode cost in bits.
        #[arg(long)]
        opcode_cost: Option<f64>,
    },
}

/// How a run failed, mapped onto the exit code.
enum Failure {
    /// The input was structurally unacceptable: exit 2, problems listed.
    Schema(Vec<String>),
    /// Anything else: exit 1.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Schema(problems)) => {
            eprintln!("input rejected:");
            for p in &problems {
                eprintln!("  {p}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Score { scenario, pretty } => {
            let s = load_scenario(&scenario)?;
            let report = unexpectedness(&s).map_err(|e| anyhow!(e))?;
            print_json(&report, pretty)?;
            eprintln!("{}: U = {:.4} bits", scenario.display(), report.u_bits);
            Ok(())
        }
        Command::Explain { scenario, pretty } => {
            let s = load_scenario(&scenario)?;
            let explanation = explain(&s).map_err(|e| anyhow!(e))?;
            print_json(&explanation, pretty)?;
            eprintln!(
                "{}: U = {:.4} bits over {} world / {} observation steps",
                scenario.display(),
                explanation.report.u_bits,
                explanation.w_breakdown.per_atom.len(),
                explanation.o_breakdown.per_atom.len(),
            );
            Ok(())
        }
        Command::Sweep { spec } => sweep(&spec),
        Command::OracleCheck {
            max_len,
            opcode_cost,
        } => oracle_check(max_len, opcode_cost),
    }
}

fn print_json<T: serde::Serialize>(value: &T, pretty: bool) -> Result<(), Failure> {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .context("serializing report")?;
    println!("{text}");
    Ok(())
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| Failure::Schema(vec![format!("{}: {e}", path.display())]))?;
    let violations = validate_scenario(&scenario);
    if !violations.is_empty() {
        return Err(Failure::Schema(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok(scenario)
}

/// A sweep varies one scalar inside a scenario file and reports U per value.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSpec {
    /// Column name for the varied parameter.
    parameter: String,
    target: SweepTarget,
    values: Vec<serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepTarget {
    /// Scenario file, relative to the spec file's directory.
    scenario: String,
    /// JSON pointer to the field to overwrite, e.g. `/events/1/time/t_h`.
    pointer: String,
}

fn sweep(spec_path: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(spec_path)
        .with_context(|| format!("reading {}", spec_path.display()))?;
    let spec: SweepSpec = serde_json::from_str(&text)
        .map_err(|e| Failure::Schema(vec![format!("{}: {e}", spec_path.display())]))?;

    let dir = spec_path.parent().unwrap_or_else(|| Path::new("."));
    let scenario_path = dir.join(&spec.target.scenario);
    let base_text = std::fs::read_to_string(&scenario_path)
        .with_context(|| format!("reading {}", scenario_path.display()))?;
    let base: serde_json::Value = serde_json::from_str(&base_text)
        .map_err(|e| Failure::Schema(vec![format!("{}: {e}", scenario_path.display())]))?;
    if base.pointer(&spec.target.pointer).is_none() {
        return Err(Failure::Schema(vec![format!(
            "pointer {} does not resolve in {}",
            spec.target.pointer,
            scenario_path.display()
        )]));
    }

    let rows: Vec<Result<(f64, Option<f64>), String>> = spec
        .values
        .par_iter()
        .map(|value| {
            let mut patched = base.clone();
            *patched
                .pointer_mut(&spec.target.pointer)
                .expect("pointer checked above") = value.clone();
            let scenario: Scenario =
                serde_json::from_value(patched).map_err(|e| e.to_string())?;
            let violations = validate_scenario(&scenario);
            if !violations.is_empty() {
                return Err(violations
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "));
            }
            let report = unexpectedness(&scenario).map_err(|e| e.to_string())?;
            Ok((report.u_bits, report.cognitive_probability))
        })
        .collect();

    println!("param,U_bits,p");
    for (value, row) in spec.values.iter().zip(rows) {
        let (u, p) = row.map_err(|e| {
            Failure::Schema(vec![format!("value {value}: {e}")])
        })?;
        let p_text = p.map(|p| p.to_string()).unwrap_or_default();
        println!("{value},{u},{p_text}");
    }
    eprintln!(
        "swept {} over {} values of {}",
        spec.target.scenario,
        spec.values.len(),
        spec.parameter
    );
    Ok(())
}

fn oracle_check(max_len: usize, opcode_cost: Option<f64>) -> Result<(), Failure> {
    let mut m = InstructionCostModel::default();
    if let Some(bits) = opcode_cost {
        if !(bits.is_finite() && bits >= 0.0) {
            return Err(Failure::Schema(vec![format!(
                "opcode cost must be a non-negative finite number, got {bits}"
            )]));
        }
        m.opcode_cost_bits = bits;
    }
    if max_len == 0 {
        return Err(Failure::Schema(vec![
            "--max-len must be at least 1".to_string()
        ]));
    }
    let mismatches = equivalence_sweep(max_len, &m);
    println!(
        "{} cases, {} mismatches",
        sweep_case_count(max_len),
        mismatches.len()
    );
    for mm in mismatches.iter().take(20) {
        eprintln!(
            "  {}: codec {} bits, search {} bits",
            mm.digits, mm.codec_bits, mm.oracle_bits
        );
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Runtime(anyhow!(
            "digit codec disagrees with exhaustive search"
        )))
    }
}
