use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use pacsdiv_core::{AuthorMode, DiversityGroupScheme, YearRange, ZeroPacsPolicy};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PACSDIV_OUT_DIR";

pub const DEFAULT_WINDOWS: &str = "1985-1990,1990-1995,1995-2000,2000-2005,2005-2010";
pub const DEFAULT_COHORTS: &str = "1985-1994,1994-2003";
pub const DEFAULT_PERIOD: &str = "1985-2013";
pub const DEFAULT_GROUPS: &str = "0-3,4-9,10-27,28+";
pub const DEFAULT_BANDS: &str = "low=0-2,medium=3-5,high=6+";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Options shared by every command. Anything given here overrides the
/// config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Article metadata, JSON Lines
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output directory [default: $PACSDIV_OUT_DIR, else .]
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// TOML file with any of the options below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Consecutive author windows, e.g. 1985-1990,1990-1995 (end year excluded)
    #[arg(long, global = true)]
    pub windows: Option<String>,

    /// Paper cohorts for citation tables, e.g. 1985-1994,1994-2003
    #[arg(long, global = true)]
    pub cohorts: Option<String>,

    /// Period for summary and distribution tables
    #[arg(long, global = true)]
    pub period: Option<String>,

    /// Citation horizon in years
    #[arg(long, global = true)]
    pub horizon: Option<u32>,

    /// Author diversity groups, e.g. 0-3,4-9,10-27,28+
    #[arg(long, global = true)]
    pub groups: Option<String>,

    /// Paper diversity bands, e.g. low=0-2,medium=3-5,high=6+
    #[arg(long, global = true)]
    pub bands: Option<String>,

    /// Count papers without PACS codes as diversity 0
    #[arg(long, global = true)]
    pub include_zero_pacs: bool,

    #[arg(long, global = true, value_enum)]
    pub author_mode: Option<AuthorModeArg>,

    /// Worker threads; 0 uses all cores
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Drop unreadable lines instead of failing
    #[arg(long, global = true)]
    pub skip_invalid_lines: bool,

    /// List of valid codes, one per line; unknown codes are only counted
    #[arg(long, global = true)]
    pub known_codes: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuthorModeArg {
    Windowed,
    Cumulative,
}

impl From<AuthorModeArg> for AuthorMode {
    fn from(m: AuthorModeArg) -> Self {
        match m {
            AuthorModeArg::Windowed => AuthorMode::Windowed,
            AuthorModeArg::Cumulative => AuthorMode::Cumulative,
        }
    }
}

/// Config file contents; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub windows: Option<String>,
    pub cohorts: Option<String>,
    pub period: Option<String>,
    pub horizon: Option<u32>,
    pub groups: Option<String>,
    pub bands: Option<String>,
    pub include_zero_pacs: Option<bool>,
    pub author_mode: Option<AuthorModeArg>,
    pub threads: Option<usize>,
    pub skip_invalid_lines: Option<bool>,
    pub known_codes: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub format: Format,
    pub windows: Vec<YearRange>,
    pub cohorts: Vec<YearRange>,
    pub period: YearRange,
    pub horizon: u32,
    pub groups: DiversityGroupScheme,
    pub bands: DiversityGroupScheme,
    pub zero_pacs: ZeroPacsPolicy,
    pub author_mode: AuthorMode,
    pub threads: usize,
    pub skip_invalid_lines: bool,
    pub known_codes: Option<PathBuf>,
}

impl RunConfig {
    /// Resolves flags over the config file over defaults.
    pub fn resolve(opts: &Options) -> Result<Self, CliError> {
        let file = match &opts.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        RunConfig::merge(opts, file, std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
    }

    pub fn merge(
        opts: &Options,
        file: FileConfig,
        env_out_dir: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let input = opts
            .input
            .clone()
            .or(file.input)
            .ok_or_else(|| CliError::Config("no input file given (--input)".into()))?;
        let out_dir = opts
            .out_dir
            .clone()
            .or(file.out_dir)
            .or(env_out_dir)
            .unwrap_or_else(|| PathBuf::from("."));
        let pick = |flag: &Option<String>, file: Option<String>, default: &str| {
            flag.clone().or(file).unwrap_or_else(|| default.to_string())
        };

        let windows = YearRange::parse_list(&pick(&opts.windows, file.windows, DEFAULT_WINDOWS))?;
        let cohorts = YearRange::parse_list(&pick(&opts.cohorts, file.cohorts, DEFAULT_COHORTS))?;
        if windows.is_empty() {
            return Err(CliError::Config("empty window list".into()));
        }
        if cohorts.is_empty() {
            return Err(CliError::Config("empty cohort list".into()));
        }
        let period = pick(&opts.period, file.period, DEFAULT_PERIOD).parse()?;
        let horizon = opts
            .horizon
            .or(file.horizon)
            .unwrap_or(pacsdiv_core::cohort::DEFAULT_HORIZON);
        if horizon == 0 {
            return Err(CliError::Config("horizon must be at least 1".into()));
        }
        let groups =
            DiversityGroupScheme::parse(&pick(&opts.groups, file.groups, DEFAULT_GROUPS), "G")?;
        let bands =
            DiversityGroupScheme::parse(&pick(&opts.bands, file.bands, DEFAULT_BANDS), "B")?;
        let include_zero = opts.include_zero_pacs || file.include_zero_pacs.unwrap_or(false);

        Ok(RunConfig {
            input,
            out_dir,
            format: opts.format.or(file.format).unwrap_or_default(),
            windows,
            cohorts,
            period,
            horizon,
            groups,
            bands,
            zero_pacs: if include_zero {
                ZeroPacsPolicy::IncludeAsZero
            } else {
                ZeroPacsPolicy::Exclude
            },
            author_mode: opts
                .author_mode
                .or(file.author_mode)
                .map(Into::into)
                .unwrap_or_default(),
            threads: opts.threads.or(file.threads).unwrap_or(0),
            skip_invalid_lines: opts.skip_invalid_lines || file.skip_invalid_lines.unwrap_or(false),
            known_codes: opts.known_codes.clone().or(file.known_codes),
        })
    }

    /// The settings that shape results, as recorded in output metadata.
    /// Thread count and output location are left out so that metadata does
    /// not vary between otherwise identical runs.
    pub fn recorded(&self) -> RecordedConfig {
        let join = |v: &[YearRange]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        RecordedConfig {
            format: self.format,
            windows: join(&self.windows),
            cohorts: join(&self.cohorts),
            period: self.period.to_string(),
            horizon: self.horizon,
            groups: self.groups.to_string(),
            bands: self.bands.to_string(),
            zero_pacs: self.zero_pacs,
            author_mode: self.author_mode,
            skip_invalid_lines: self.skip_invalid_lines,
            known_codes: self.known_codes.is_some(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordedConfig {
    pub format: Format,
    pub windows: String,
    pub cohorts: String,
    pub period: String,
    pub horizon: u32,
    pub groups: String,
    pub bands: String,
    pub zero_pacs: ZeroPacsPolicy,
    pub author_mode: AuthorMode,
    pub skip_invalid_lines: bool,
    pub known_codes: bool,
}
