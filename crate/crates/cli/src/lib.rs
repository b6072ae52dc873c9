//! Command-line frontend: mesh export, singular-curve reports, invariant tables and
//! the verification suite.

pub mod commands;
pub mod mesh;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use surflab::exprlang::SurfaceConfig;
use surflab::surface_core::SurfaceData;
use surflab::wirtinger::Complex;

#[derive(Debug, Parser)]
#[command(name = "surflab", version, about = "Maxfaces and CMC surfaces: meshes, singular points and invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the surface over the domain and write an OBJ mesh.
    Build(CommonArgs),
    /// Trace singular curves from seeds and write classification reports as JSON.
    Singular(CommonArgs),
    /// Trace one singular curve and write its invariants as CSV.
    Invariants(CommonArgs),
    /// Run the property suite and report residuals.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Surface description (.toml or .json).
    #[arg(long)]
    pub config: PathBuf,
    /// Grid resolution per axis; defaults to the config value.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Seed point `re,im` near the singular set; repeatable.
    #[arg(long, value_parser = parse_seed, allow_hyphen_values = true)]
    pub seed: Vec<Complex>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `re,im`.
pub fn parse_seed(text: &str) -> Result<Complex, String> {
    let (re, im) = text.split_once(',').ok_or_else(|| format!("expected `re,im`, got `{text}`"))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}"));
    let z = Complex::new(parse(re)?, parse(im)?);
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("seed `{text}` is not finite"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] surflab::exprlang::ConfigError),
    #[error(transparent)]
    Surface(#[from] surflab::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Output was produced but some property or seed failed.
    PropertyFailure,
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(2)
    }
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::PropertyFailure => ExitCode::from(1),
        }
    }
}

/// Loaded config with the surface data built from it.
pub struct Loaded {
    pub config: SurfaceConfig,
    pub data: SurfaceData,
    pub base: Complex,
    pub resolution: usize,
}

impl Loaded {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let config = SurfaceConfig::load(&args.config)?;
        let resolution = args.resolution.unwrap_or(config.resolution);
        if resolution < 2 {
            return Err(CliError::Usage(format!("resolution must be at least 2, got {resolution}")));
        }
        let data = SurfaceData::from_config(&config)?;
        let base = config.base_point.map_or_else(|| config.domain.base_point(), |p| Complex::new(p[0], p[1]));
        if !config.domain.contains(base) {
            return Err(surflab::Error::OutsideDomain { at: base }.into());
        }
        Ok(Self { config, data, base, resolution })
    }
}

/// Writer for `--out`, or standard output.
pub fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Build(a) => commands::build(a),
        Command::Singular(a) => commands::singular(a),
        Command::Invariants(a) => commands::invariants(a),
        Command::Verify(a) => verify::verify(a),
    }
}
