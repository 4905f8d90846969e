//! `stratlog`: analyze stratified-logic theories from the command line.

mod corpus;
mod render;
mod repl;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stratlog::oracle::{differential_check, random_theory};
use stratlog::parser::{parse_source, SourceTheory};
use stratlog::pragmatics::analyze;
use stratlog::{Caps, EngineError};

#[derive(Parser)]
#[command(name = "stratlog", version, about = "Defeasible pragmatic inference in stratified logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the inference report of each theory file.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        opts: Options,
    },
    /// Push utterances one line at a time and print what changes.
    Repl {
        file: PathBuf,
        /// Ignore the utterances in FILE and start from its rules alone.
        #[arg(long)]
        rules_only: bool,
        #[command(flatten)]
        opts: Options,
    },
    /// Run every corpus theory and compare with its golden transcript.
    Corpus {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
        /// Only run files whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
        /// Overwrite the golden transcripts with the current output.
        #[arg(long)]
        bless: bool,
        #[command(flatten)]
        opts: Options,
    },
    /// Compare the tableau pipeline with brute-force enumeration on random theories.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: u64,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct Options {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Print every optimistic schema.
    #[arg(long)]
    pub show_schemata: bool,
    /// Print every tableau leaf.
    #[arg(long)]
    pub show_tableau: bool,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_branches: u64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_literals: u64,
}

impl Options {
    pub fn caps(&self) -> Caps {
        Caps { max_branches: self.max_branches as usize, max_literals: self.max_literals as usize }
    }
}

pub const EXIT_INCONSISTENT: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

pub fn exit_code(err: &EngineError) -> u8 {
    match err {
        EngineError::Inconsistent | EngineError::EmptySchemata => EXIT_INCONSISTENT,
        EngineError::Syntax(_) => EXIT_PARSE,
        EngineError::BranchCap(_)
        | EngineError::LiteralCap(_)
        | EngineError::AtomCap { .. }
        | EngineError::SlotCap { .. } => EXIT_CAP,
    }
}

pub fn load(path: &Path) -> Result<SourceTheory, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_source(&path.display().to_string(), &text).map_err(|e| format!("{}:{e}", path.display()))
}

fn cmd_analyze(files: &[PathBuf], opts: &Options) -> u8 {
    let mut status = 0;
    let mut json = Vec::new();
    for path in files {
        let source = match load(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                status = status.max(EXIT_PARSE);
                continue;
            }
        };
        match analyze(&source.theory, opts.caps()) {
            Ok(analysis) => match opts.format {
                Format::Table => print!("{}", render::analysis_table(&source.name, &analysis, opts)),
                Format::Json => json.push(render::analysis_json(&source.name, &analysis, opts)),
            },
            Err(e) => {
                eprintln!("error: {}: {e}", source.name);
                status = status.max(exit_code(&e));
            }
        }
    }
    if opts.format == Format::Json && !json.is_empty() {
        let value = if json.len() == 1 { json.remove(0) } else { serde_json::Value::Array(json) };
        println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize"));
    }
    status
}

fn cmd_fuzz(seed: u64, count: u64, opts: &Options) -> u8 {
    let mut divergences = 0;
    for s in seed..seed.saturating_add(count) {
        let theory = random_theory(s);
        match differential_check(&theory, opts.caps()) {
            Ok(report) => {
                if let Some(d) = report.divergence {
                    divergences += 1;
                    println!("seed {s}: divergence\n{}\n{d}", render::theory_text(&theory));
                }
            }
            Err(e) => {
                divergences += 1;
                println!("seed {s}: {e}");
            }
        }
    }
    match opts.format {
        Format::Table => println!("{count} theories from seed {seed}, {divergences} divergences"),
        Format::Json => println!("{}", serde_json::json!({ "seed": seed, "count": count, "divergences": divergences })),
    }
    u8::from(divergences > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Analyze { files, opts } => cmd_analyze(files, opts),
        Command::Repl { file, rules_only, opts } => {
            let stdin = std::io::stdin();
            repl::run(file, *rules_only, opts, stdin.lock(), &mut std::io::stdout())
        }
        Command::Corpus { dir, filter, bless, opts } => corpus::run(dir, filter.as_deref(), *bless, opts),
        Command::Fuzz { seed, count, opts } => cmd_fuzz(*seed, *count, opts),
    };
    ExitCode::from(code)
}
