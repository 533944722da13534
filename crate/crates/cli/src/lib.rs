//! Command-line front end for `pacsdiv`: resolves the run configuration,
//! loads the corpus, and writes one table plus a metadata sidecar per
//! command.

pub mod commands;
pub mod config;
pub mod error;
pub mod synth;
pub mod table;

use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use pacsdiv_core::corpus::IngestStats;
use pacsdiv_core::pacs::KnownCodes;
use pacsdiv_core::{Corpus, Error as CoreError, IngestConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use commands::Command;
pub use config::{Format, Options, RunConfig};
pub use error::{exit, CliError};
use table::{write_atomic, Table};

#[derive(Debug, Parser)]
#[command(
    name = "pacsdiv",
    version,
    about = "Diversity and citation tables from PACS-coded article metadata"
)]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,

    #[command(subcommand)]
    pub command: Command,
}

/// Files written by one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: PathBuf,
    pub meta: PathBuf,
    pub dropped: Option<PathBuf>,
}

#[derive(Serialize)]
struct CorpusMeta {
    file: String,
    sha256: String,
    records: usize,
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    output: String,
    corpus: CorpusMeta,
    config: config::RecordedConfig,
    ingest: &'a IngestStats,
    notes: Vec<String>,
}

/// Loads the input file, returning the corpus and the SHA-256 of its bytes.
pub fn load_input(config: &RunConfig) -> Result<(Corpus, String), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CoreError::Io { path, source }
    };
    let known_codes = match &config.known_codes {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io(p))?;
            Some(KnownCodes::parse(&text)?)
        }
        None => None,
    };
    let bytes = fs::read(&config.input).map_err(io(&config.input))?;
    let fingerprint = hex::encode(Sha256::digest(&bytes));
    let ingest = IngestConfig {
        skip_invalid_lines: config.skip_invalid_lines,
        known_codes,
    };
    let corpus = Corpus::from_reader(bytes.as_slice(), &ingest).map_err(|e| match e {
        CoreError::Io { source, .. } => io(&config.input)(source),
        other => other,
    })?;
    Ok((corpus, fingerprint))
}

/// Runs one command on an already loaded corpus and writes its outputs.
pub fn run_loaded(
    command: Command,
    config: &RunConfig,
    corpus: &Corpus,
    fingerprint: &str,
) -> Result<RunOutput, CliError> {
    let report = commands::build(command, corpus, config)?;
    let name = format!("{}.{}", command.name(), config.format.extension());
    let table = write_atomic(&config.out_dir, &name, &report.table.render(config.format)?)?;

    let meta = Meta {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: command.name(),
        output: name,
        corpus: CorpusMeta {
            file: config
                .input
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: fingerprint.to_string(),
            records: corpus.len(),
        },
        config: config.recorded(),
        ingest: corpus.ingest_stats(),
        notes: report.notes,
    };
    let mut meta_bytes = serde_json::to_vec_pretty(&meta)?;
    meta_bytes.push(b'\n');
    let meta = write_atomic(
        &config.out_dir,
        &format!("{}.meta.json", command.name()),
        &meta_bytes,
    )?;

    let dropped = if corpus.dropped_lines().is_empty() {
        None
    } else {
        let mut t = Table::new(["line", "reason"]);
        for d in corpus.dropped_lines() {
            t.push(vec![d.line.into(), d.reason.clone().into()]);
        }
        Some(write_atomic(
            &config.out_dir,
            "dropped_records.csv",
            &t.to_csv()?,
        )?)
    };
    Ok(RunOutput {
        table,
        meta,
        dropped,
    })
}

/// Loads the corpus and runs one command, on a pool of `config.threads`
/// workers.
pub fn run(command: Command, config: &RunConfig) -> Result<RunOutput, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        let (corpus, fingerprint) = load_input(config)?;
        run_loaded(command, config, &corpus, &fingerprint)
    })
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
        }
    };
    let result = RunConfig::resolve(&cli.options).and_then(|config| run(cli.command, &config));
    match result {
        Ok(_) => exit::OK,
        Err(e) => {
            eprintln!("pacsdiv {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
