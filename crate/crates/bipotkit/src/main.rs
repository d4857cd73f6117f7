use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bipotkit::error::Result;
use bipotkit::{eval_report, graph, parse_vector, suite, CliError, ConfigFile, LawConfig, LawKind, Suite};
use clap::{Args, Parser, Subcommand};

/// Bipotentials for set-valued constitutive laws: evaluate, sample and verify.
#[derive(Parser)]
#[command(name = "bipotkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate b(x, y), the duality product, the gap and the regime.
    Eval {
        #[command(flatten)]
        law: LawArgs,
        /// Strain-like argument, comma separated (friction: x_n,x_t1,x_t2).
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Stress-like argument, comma separated (friction: y_n,y_t1,y_t2).
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Sample the law on a one-dimensional sublattice and write CSV.
    Graph {
        #[command(flatten)]
        law: LawArgs,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks and print a JSON report.
    Verify {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LawArgs {
    #[arg(long, value_enum)]
    law: Option<LawKind>,
    /// JSON config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    mu_minus: Option<f64>,
    #[arg(long)]
    mu_plus: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    lattice_points: Option<usize>,
}

impl LawArgs {
    fn resolve(&self) -> Result<LawConfig> {
        let flags = ConfigFile {
            law: self.law,
            lambda: self.lambda,
            epsilon: self.epsilon,
            dim: self.dim,
            mu: self.mu,
            mu_minus: self.mu_minus,
            mu_plus: self.mu_plus,
            samples: self.samples,
            lattice_points: self.lattice_points,
            tol: self.tol,
            seed: self.seed,
            ..Default::default()
        };
        LawConfig::resolve(self.config.as_deref(), &flags)
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Write { path: p.into(), source })?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut out = output(path)?;
    let text = serde_json::to_string_pretty(value).expect("reports serialise");
    let target = path.unwrap_or(Path::new("<stdout>"));
    writeln!(out, "{text}").and_then(|_| out.flush()).map_err(|source| CliError::Write { path: target.into(), source })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { law, x, y } => {
            let cfg = law.resolve()?;
            let report = eval_report(&cfg, &parse_vector(&x)?, &parse_vector(&y)?)?;
            write_json(&report, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { law, out } => {
            let cfg = law.resolve()?;
            graph::write_graph(&cfg, output(out.as_deref())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { law, suite: which, out } => {
            let cfg = law.resolve()?;
            let report = suite::run(&cfg, which)?;
            write_json(&report, out.as_deref())?;
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bipotkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
