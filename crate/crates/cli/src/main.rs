use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use roofs_cli::commands::{run_check, run_roof, run_state_factory, CheckArgs, CHECKS};
use roofs_cli::figures::{figure_planar, figure_rs, figure_spinsq, log_lambdas, DEFAULT_PLANAR_JS};
use roofs_cli::output::Table;
use roofs_cli::spec::{parse_op, parse_state};
use roofs_cli::{CliError, Format, Result, RunConfig};
use roofs_core::roofs::Direction;

#[derive(Debug, Parser)]
#[command(name = "roofs", version, about = "Quantum Fisher information, variance roofs and uncertainty relations")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Min,
    Max,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Random qutrits: Robertson–Schrödinger, eigendecomposition (K) and concave-roof slacks.
    FigureRs,
    /// Planar-squeezed states: F_Q[J_z] against B_FQ.
    FigurePlanar {
        /// Spin quantum numbers (comma separated).
        #[arg(long, value_delimiter = ',')]
        j: Option<Vec<f64>>,
    },
    /// Spin-squeezed states: F_Q[J_z] against B_FQ over a λ grid.
    FigureSpinsq {
        #[arg(long, default_value_t = 50.0)]
        j: f64,
        /// Explicit λ values (comma separated); otherwise 10^-2 … 10^6, four per decade.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
    },
    /// Evaluate one uncertainty relation or criterion and print a JSON report.
    Check {
        /// Check name; `list` prints the available names.
        name: String,
        /// State spec (JSON or @file).
        #[arg(long)]
        state: Option<String>,
        /// Operator spec (JSON or @file); give twice for A and B.
        #[arg(long = "op")]
        ops: Vec<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Number of spins for `vxyz` on states without that information.
        #[arg(long)]
        parties: Option<usize>,
    },
    /// Convex (min) or concave (max) roof of a sum of variances.
    Roof {
        #[arg(long)]
        state: String,
        #[arg(long = "op", required = true)]
        ops: Vec<String>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Min)]
        direction: DirectionArg,
    },
    /// Build a state from a spec and print it as JSON.
    StateFactory {
        #[arg(long)]
        state: String,
    },
}

fn table_output(table: &Table, format: Format) -> Result<String> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn json_output<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> Result<String> {
    let cfg = &cli.run;
    match cli.command {
        Command::FigureRs => table_output(&figure_rs(cfg)?, cfg.format),
        Command::FigurePlanar { j } => {
            table_output(&figure_planar(j.as_deref().unwrap_or(&DEFAULT_PLANAR_JS))?, cfg.format)
        }
        Command::FigureSpinsq { j, lambdas } => {
            let grid = lambdas.unwrap_or_else(|| log_lambdas(-2, 6, 4));
            table_output(&figure_spinsq(j, &grid)?, cfg.format)
        }
        Command::Check {
            name,
            state,
            ops,
            alpha,
            beta,
            parties,
        } => {
            if name == "list" {
                return Ok(CHECKS.join("\n") + "\n");
            }
            let state = state.ok_or_else(|| CliError::Usage("--state is required".into()))?;
            let built = parse_state(&state)?.build(cfg.cutoff)?;
            let ops = ops.iter().map(|o| parse_op(o)).collect::<Result<Vec<_>>>()?;
            let args = CheckArgs {
                ops,
                alpha,
                beta,
                parties,
            };
            json_output(&run_check(&name, &built, &args, cfg)?)
        }
        Command::Roof { state, ops, direction } => {
            let built = parse_state(&state)?.build(cfg.cutoff)?;
            let ops = ops.iter().map(|o| parse_op(o)).collect::<Result<Vec<_>>>()?;
            let direction = match direction {
                DirectionArg::Min => Direction::Min,
                DirectionArg::Max => Direction::Max,
            };
            json_output(&run_roof(&built, &ops, direction, cfg)?)
        }
        Command::StateFactory { state } => json_output(&run_state_factory(&parse_state(&state)?, cfg)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.run.out.clone();
    let result = run(cli).and_then(|text| match out {
        Some(path) => std::fs::write(path, text).map_err(CliError::from),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(CliError::from),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let json = serde_json::to_string(&e.to_json()).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", e.kind()));
            eprintln!("{json}");
            ExitCode::from(2)
        }
    }
}
