mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use normweingarten::io::{JobConfig, RelationSelector};

/// Rotational linear Weingarten surfaces k1 + λ k2 = μ in the normed space
/// ((x1² + x2²)^m + x3^(2m))^(1/2m).
#[derive(Debug, Parser)]
#[command(name = "normweingarten", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the case, admissible intervals and endpoint kinds.
    Classify {
        #[command(flatten)]
        job: JobArgs,
        /// Print JSON instead of text.
        #[arg(long)]
        as_json: bool,
    },
    /// Solve, optionally glue, and write the profile, mesh and metadata.
    Generate {
        #[command(flatten)]
        job: JobArgs,
        /// Which branch (or glued piece) goes into the CSV.
        #[arg(long, default_value_t = 0)]
        piece: usize,
    },
    /// Check a profile table (or a freshly solved branch) against the relation.
    Verify {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, default_value_t = 0)]
        piece: usize,
    },
    /// Sweep the constant of a recipe and tabulate period and pole gaps.
    ScanCoincidence {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

/// Job keys; any given here override the config file.
#[derive(Debug, Args)]
struct JobArgs {
    /// Flat TOML file with the same keys as these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, value_enum)]
    relation: Option<RelationArg>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    height: Option<f64>,
    /// plus, minus, + or -.
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    recipe: Option<String>,
    #[arg(long)]
    segments: Option<usize>,
    /// Profile table to verify.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    obj: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum RelationArg {
    Linear,
    K2Const,
}

impl JobArgs {
    fn config(self) -> Result<JobConfig, commands::Failure> {
        let file = match &self.config {
            Some(path) => JobConfig::load(path)?,
            None => JobConfig::default(),
        };
        let flags = JobConfig {
            m: self.m,
            relation: self.relation.map(|r| match r {
                RelationArg::Linear => RelationSelector::Linear,
                RelationArg::K2Const => RelationSelector::K2Const,
            }),
            lambda: self.lambda,
            mu: self.mu,
            c1: self.c1,
            c2: self.c2,
            height: self.height,
            sign: self.sign,
            samples: self.samples,
            epsilon: self.epsilon,
            tol: self.tol,
            recipe: self.recipe,
            segments: self.segments,
            profile: self.profile,
            csv: self.csv,
            obj: self.obj,
            json: self.json,
            report: self.report,
        };
        Ok(file.overlay(flags))
    }
}

fn run(cli: Cli) -> Result<ExitCode, commands::Failure> {
    match cli.command {
        Command::Classify { job, as_json } => commands::classify(&job.config()?.resolve()?, as_json),
        Command::Generate { job, piece } => commands::generate(&job.config()?.resolve()?, piece),
        Command::Verify { job, piece } => commands::verify(&job.config()?.resolve()?, piece),
        Command::ScanCoincidence { job, from, to, steps } => {
            let mut cfg = job.config()?;
            if cfg.c1.is_none() && cfg.c2.is_none() {
                cfg.c1 = Some(from);
            }
            commands::scan_coincidence(&cfg.resolve()?, from, to, steps)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WEINGARTEN_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
