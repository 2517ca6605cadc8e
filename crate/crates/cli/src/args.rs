use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzydea::{Approach, ChancePairing, SolverOptions};

#[derive(Debug, Parser)]
#[command(name = "fuzzydea", version, about = "Slacks-based efficiency analysis with triangular fuzzy data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rescale crisp columns per group and fuzzify the columns marked `fuzzify`.
    Normalize(NormalizeArgs),
    /// Efficiency scores under one approach over an alpha grid.
    Efficiency(EfficiencyArgs),
    /// Credibility, possibility and alpha-cut results side by side.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// CSV file, first row header.
    #[arg(long)]
    pub data: PathBuf,
    /// JSON schema mapping column names to roles and kinds.
    #[arg(long)]
    pub schema: PathBuf,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub input: Input,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal places, or `full` for exact round-trip values.
    #[arg(long, default_value = "2", value_parser = parse_precision)]
    pub precision: Precision,
    /// Also write the schema that describes the normalized file.
    #[arg(long)]
    pub schema_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision(pub Option<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

#[derive(Debug, Args)]
pub struct Model {
    /// Normalize and fuzzify the input first, as `normalize` would.
    #[arg(long)]
    pub normalize: bool,
    /// How fuzzy balance equations turn into crisp row pairs.
    #[arg(long, default_value = "interval", value_parser = parse_pairing)]
    pub pairing: ChancePairing,
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EfficiencyArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_parser = parse_approach)]
    pub approach: Approach,
    /// Comma list (`0.5,0.75,1`) or range (`0.5..1.0:0.1`). Defaults to 1 for
    /// crisp and `0.5..1.0:0.1` otherwise.
    #[arg(long, value_parser = parse_grid)]
    pub alpha: Option<Grid>,
    #[command(flatten)]
    pub model: Model,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: Input,
    /// Same syntax as `efficiency --alpha`.
    #[arg(long, value_parser = parse_grid, default_value = "0.5..1.0:0.1")]
    pub alpha: Grid,
    #[command(flatten)]
    pub model: Model,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn parse_approach(s: &str) -> Result<Approach, String> {
    s.parse().map_err(|e: fuzzydea::Error| e.to_string())
}

fn parse_pairing(s: &str) -> Result<ChancePairing, String> {
    s.parse().map_err(|e: fuzzydea::Error| e.to_string())
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    if s == "full" {
        return Ok(Precision(None));
    }
    s.parse()
        .map(|p| Precision(Some(p)))
        .map_err(|_| format!("expected a number of decimals or 'full', got '{s}'"))
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{}' is not a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{}' is not finite", s.trim()))
    }
}

/// `a,b,c` or `start..end:step`, inclusive of `end` up to rounding.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("alpha grid is empty".into());
    }
    if let Some((range, step)) = s.split_once(':') {
        let (start, end) = range
            .split_once("..")
            .ok_or_else(|| format!("expected start..end:step, got '{s}'"))?;
        let (start, end, step) = (number(start)?, number(end)?, number(step)?);
        if step <= 0.0 {
            return Err(format!("step must be positive, got {step}"));
        }
        if end < start {
            return Err(format!("range end {end} is below its start {start}"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize;
        // Rounding keeps 0.5 + 3 * 0.1 printing as 0.8.
        let grid = (0..=count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect();
        return Ok(Grid(grid));
    }
    s.split(',').map(number).collect::<Result<_, _>>().map(Grid)
}

/// Solver tolerances from `FUZZYDEA_TOL`: either one number for the
/// feasibility tolerance or `feasibility=..,pivot=..`.
pub fn parse_tolerances(s: &str) -> Result<SolverOptions, String> {
    let mut opts = SolverOptions::default();
    let positive = |v: &str| -> Result<f64, String> {
        let v = number(v)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(format!("tolerance must be positive, got {v}"))
        }
    };
    if !s.contains('=') {
        opts.feasibility_tol = positive(s)?;
        return Ok(opts);
    }
    for part in s.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got '{part}'"))?;
        match key.trim() {
            "feasibility" => opts.feasibility_tol = positive(value)?,
            "pivot" => opts.pivot_tol = positive(value)?,
            other => return Err(format!("unknown tolerance '{other}' (expected feasibility or pivot)")),
        }
    }
    Ok(opts)
}
