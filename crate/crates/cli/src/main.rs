use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use kgsol::config::{ExperimentConfig, Subcommand};
use kgsol::experiment::{exit_code, run_subcommand, Outcome};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    VerifyIdentities,
    Spectral,
    Simulate,
    Shoot,
    DecayFit,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::VerifyIdentities => Subcommand::VerifyIdentities,
            Command::Spectral => Subcommand::Spectral,
            Command::Simulate => Subcommand::Simulate,
            Command::Shoot => Subcommand::Shoot,
            Command::DecayFit => Subcommand::DecayFit,
        }
    }
}

/// Experiments on the even soliton of the focusing cubic Klein-Gordon equation.
#[derive(Debug, Parser)]
#[command(name = "kgsol", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Flat `section.key = value` file; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,

    /// CSV destination; overrides `output.path`. Standard output otherwise.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed of the random test fields.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Worker threads (0 picks the number of cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn run(cli: &Cli) -> kgsol::Result<Outcome> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p)?,
        None => String::new(),
    };
    let cfg = ExperimentConfig::parse(&text)?;
    let sub = Subcommand::from(cli.command);
    cfg.validate(sub)?;
    let path = cli.out.clone().or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    let sink: Box<dyn Write> = match &path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    run_subcommand(sub, &cfg, cli.seed, sink)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        log::warn!("thread pool: {e}");
    }
    let result = run(&cli);
    match &result {
        Ok(o) => {
            for f in &o.failures {
                eprintln!("FAIL {f}");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
