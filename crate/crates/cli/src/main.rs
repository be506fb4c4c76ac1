use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qpflow_cli::scenario::Scenario;
use qpflow_cli::{commands, demo, json, CliError, Options, Output};

#[derive(Parser)]
#[command(name = "qpflow", version, about = "Multiplier groups of algebraic quasiperiodic torus flows")]
struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = qpflow_core::sim::DEFAULT_TOL)]
    tol: f64,
    /// Also enumerate symmetries with entries bounded by this.
    #[arg(long, global = true)]
    bound: Option<u32>,
    /// Cross-check with floating-point orbit sampling.
    #[arg(long, global = true)]
    verify_sim: bool,
    #[arg(long, global = true)]
    flow: Option<String>,
    #[arg(long, global = true)]
    target: Option<String>,
    #[arg(long, global = true)]
    map: Option<String>,
    #[arg(long, global = true)]
    symmetry: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Multiplier ring and group of a flow.
    Multipliers,
    /// Push a flow along a map and compare multiplier groups.
    Push,
    /// Lift a symmetry of the image flow back through the map.
    LiftSym,
    /// Least power of a symmetry that descends along the map.
    PushSym,
    /// Index of the image multiplier group.
    Index,
    /// Check that a map semiconjugates two flows.
    Verify,
    /// Recompute the Q(sqrt 2) worked example.
    Demo,
    /// Run the scenario's computation list.
    Run,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Multipliers => "multipliers",
            Command::Push => "push",
            Command::LiftSym => "lift-sym",
            Command::PushSym => "push-sym",
            Command::Index => "index",
            Command::Verify => "verify",
            Command::Demo => "demo",
            Command::Run => "run",
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let opts = Options {
        seed: cli.seed,
        samples: cli.samples,
        tol: cli.tol,
        bound: cli.bound,
        verify_sim: cli.verify_sim,
        flow: cli.flow.clone(),
        target: cli.target.clone(),
        map: cli.map.clone(),
        symmetry: cli.symmetry.clone(),
    };
    if let Command::Demo = cli.command {
        return demo::run(&opts);
    }
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| CliError::input(format!("{} needs --scenario", cli.command.name())))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let sc = Scenario::parse(&text)?;
    match cli.command {
        Command::Run => commands::run(&sc, &opts),
        c => commands::dispatch(c.name(), &sc, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            if cli.json {
                print!("{}", json::render(&out.value));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
