//! `cyclone`: simulation, training, humanness evaluation and the play service.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error. Failures print a
//! single line to stderr: `error: usage: ...` or `error: runtime: ...`.

mod commands;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "cyclone", version, about = "Cyclone Hanabi agent")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "CYCLONE_OUT_DIR", default_value = "cyclone-out")]
    pub out_dir: PathBuf,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "CYCLONE_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play seeded games between two policies, or a cross-play matrix.
    Sim(SimArgs),
    /// Full-factorial weight search until saturation.
    Train(TrainArgs),
    /// Fraction of recorded decisions a policy reproduces.
    Humanness(HumannessArgs),
    /// Simulate games and record their decisions as a decision db.
    GenDb(GenDbArgs),
    /// Replay a game log and print its final score.
    Replay(ReplayArgs),
    /// Run the HTTP play service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Policy A: preset name or weight file.
    #[arg(long, default_value = "self-play")]
    pub a: String,
    /// Policy B: preset name or weight file.
    #[arg(long, default_value = "self-play")]
    pub b: String,
    #[arg(short = 'n', long, default_value_t = 1000)]
    pub games: usize,
    /// Game i uses seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write every game log under `logs/`.
    #[arg(long)]
    pub logs: bool,
    /// Play every pairing of `--policies` instead of A against B.
    #[arg(long)]
    pub matrix: bool,
    /// Comma-separated policies for `--matrix`.
    #[arg(long, value_delimiter = ',', default_value = "human-like,human-complementary,self-play")]
    pub policies: Vec<String>,
    /// Keep the score of a game that ends on the third strike.
    #[arg(long)]
    pub stacks_stand: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Selfplay,
    Paired,
    Humanness,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum, default_value = "selfplay")]
    pub objective: ObjectiveKind,
    /// Starting weights: preset name or weight file.
    #[arg(long, default_value = "human-like")]
    pub start: String,
    /// Fixed partner for `--objective paired`.
    #[arg(long, default_value = "human-like")]
    pub partner: String,
    /// Decision db for `--objective humanness`.
    #[arg(long)]
    pub db: Option<PathBuf>,
    /// Games per candidate for game objectives.
    #[arg(long, default_value_t = 200)]
    pub games: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub max_rounds: usize,
    #[arg(long)]
    pub max_experiments: Option<usize>,
    /// Step halvings after a round without improvement.
    #[arg(long, default_value_t = 2)]
    pub refinements: u32,
    /// Continue from `audit.jsonl` in the output directory.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Debug, Args)]
pub struct HumannessArgs {
    /// Policy: preset name or weight file.
    #[arg(long, default_value = "human-like")]
    pub weights: String,
    #[arg(long)]
    pub db: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenDbArgs {
    /// Policy whose decisions are recorded.
    #[arg(long)]
    pub preset: String,
    /// Partner policy (defaults to a copy of `--preset`).
    #[arg(long)]
    pub partner: Option<String>,
    #[arg(short = 'n', long, default_value_t = 10)]
    pub games: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file name inside the output directory.
    #[arg(long, default_value = "decisions.jsonl")]
    pub file: String,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub log: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Sessions created without a seed use `seed + n`.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write logs and human decisions here after every move.
    #[arg(long)]
    pub capture_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    tracing_subscriber::fmt().with_writer(std::io::stderr).with_target(false).init();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: usage: {}", one_line(&m));
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: runtime: {}", one_line(&format!("{e:#}")));
            ExitCode::from(1)
        }
    }
}
