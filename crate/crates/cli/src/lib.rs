//! Command implementations behind the `fuzzydea` binary.

pub mod args;
mod render;

use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::Context;
use fuzzydea::ingest::Precision;
use fuzzydea::{
    evaluate, parse_dataset, prepare, write_datasets, Approach, ApproachConfig, ColumnKind, Dataset, Error,
    ModelOptions, SchemaConfig, SolverOptions,
};

use args::{Cli, Command, EfficiencyArgs, Format, Input, Model, NormalizeArgs, ReportArgs};
use render::Block;

pub const TOL_ENV: &str = "FUZZYDEA_TOL";

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Usage = 2,
    Data = 3,
    Solver = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub kind: ExitKind,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

fn fail(kind: ExitKind, error: impl Into<anyhow::Error>) -> Failure {
    Failure { kind, error: error.into() }
}

fn classify(e: Error) -> Failure {
    let kind = match &e {
        Error::Config(_) => ExitKind::Usage,
        Error::Parse { .. } | Error::Domain(_) => ExitKind::Data,
        Error::MalformedLp(_) | Error::IterationLimit(_) | Error::Solver { .. } => ExitKind::Solver,
    };
    fail(kind, e)
}

type Outcome<T> = std::result::Result<T, Failure>;

pub fn run(cli: Cli) -> Outcome<()> {
    let solver = solver_options()?;
    match cli.command {
        Command::Normalize(a) => normalize(a),
        Command::Efficiency(a) => efficiency(a, solver),
        Command::Report(a) => report(a, solver),
    }
}

fn solver_options() -> Outcome<SolverOptions> {
    match std::env::var(TOL_ENV) {
        Ok(s) => args::parse_tolerances(&s).map_err(|e| fail(ExitKind::Usage, anyhow::anyhow!("{TOL_ENV}: {e}"))),
        Err(_) => Ok(SolverOptions::default()),
    }
}

fn read_file(path: &Path, what: &str) -> Outcome<String> {
    if !path.exists() {
        return Err(fail(ExitKind::Usage, anyhow::anyhow!("{what} not found: {}", path.display())));
    }
    fs::read_to_string(path)
        .with_context(|| format!("reading {what} {}", path.display()))
        .map_err(|e| fail(ExitKind::Data, e))
}

fn load(input: &Input) -> Outcome<(SchemaConfig, Vec<Dataset>)> {
    let schema_text = read_file(&input.schema, "schema")?;
    let schema = SchemaConfig::from_json(&schema_text)
        .map_err(|e| fail(ExitKind::Usage, anyhow::Error::new(e).context(input.schema.display().to_string())))?;
    let data = read_file(&input.data, "data file")?;
    let groups = parse_dataset(&data, &schema)
        .map_err(|e| fail(ExitKind::Data, anyhow::Error::new(e).context(input.data.display().to_string())))?;
    Ok((schema, groups))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(|e| fail(ExitKind::Data, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn normalize(a: NormalizeArgs) -> Outcome<()> {
    let (schema, groups) = load(&a.input)?;
    let prepared = groups.iter().map(prepare).collect::<Result<Vec<_>, _>>().map_err(classify)?;
    let schema = schema.after_fuzzify();
    let precision: Precision = a.precision.0;
    let text = write_datasets(&prepared, &schema, precision).map_err(classify)?;
    if let Some(path) = &a.schema_out {
        emit(&(schema.to_json() + "\n"), Some(path))?;
    }
    emit(&text, a.out.as_deref())
}

/// Groups ready for scoring: normalized if asked, with no column left awaiting fuzzification.
fn scoring_groups(input: &Input, model: &Model) -> Outcome<Vec<Dataset>> {
    let (_, groups) = load(input)?;
    if model.normalize {
        return groups.iter().map(prepare).collect::<Result<_, _>>().map_err(classify);
    }
    let pending: Vec<&str> = groups[0]
        .input_columns()
        .iter()
        .chain(groups[0].output_columns())
        .filter(|c| c.kind == ColumnKind::Fuzzify)
        .map(|c| c.name.as_str())
        .collect();
    if !pending.is_empty() {
        return Err(fail(
            ExitKind::Usage,
            anyhow::anyhow!(
                "column(s) {} still need fuzzification; pass --normalize or run `fuzzydea normalize` first",
                pending.join(", ")
            ),
        ));
    }
    Ok(groups)
}

fn config(approach: Approach, grid: Vec<f64>, model: &Model, solver: SolverOptions) -> Outcome<ApproachConfig> {
    let cfg = ApproachConfig::new(approach, grid).map_err(|e| fail(ExitKind::Usage, e))?;
    Ok(cfg.with_options(ModelOptions { pairing: model.pairing, solver }))
}

fn score(groups: &[Dataset], cfg: &ApproachConfig) -> Outcome<Vec<Block>> {
    groups
        .iter()
        .map(|ds| {
            let results = evaluate(ds, cfg).map_err(classify)?;
            Ok(Block {
                group: ds.group().to_owned(),
                approach: cfg.approach(),
                alphas: cfg.alpha_grid().to_vec(),
                results,
            })
        })
        .collect()
}

fn render(title: &str, model: &Model, blocks: &[Block]) -> Outcome<String> {
    let text = match model.format {
        Format::Markdown => Ok(render::markdown(title, model.pairing, blocks)),
        Format::Csv => render::csv(blocks),
        Format::Json => render::json(model.pairing, blocks),
    };
    text.map_err(|e| fail(ExitKind::Data, e))
}

fn efficiency(a: EfficiencyArgs, solver: SolverOptions) -> Outcome<()> {
    let grid = match (a.alpha, a.approach) {
        (Some(g), _) => g.0,
        (None, Approach::Crisp) => vec![1.0],
        (None, _) => vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
    };
    let cfg = config(a.approach, grid, &a.model, solver)?;
    let groups = scoring_groups(&a.input, &a.model)?;
    let blocks = score(&groups, &cfg)?;
    let text = render(&format!("Efficiency ({})", a.approach), &a.model, &blocks)?;
    emit(&text, a.model.out.as_deref())
}

fn report(a: ReportArgs, solver: SolverOptions) -> Outcome<()> {
    let approaches = [Approach::Credibility, Approach::AlphaCut, Approach::Possibility];
    let configs = approaches
        .iter()
        .map(|&ap| config(ap, a.alpha.0.clone(), &a.model, solver))
        .collect::<Outcome<Vec<_>>>()?;
    let groups = scoring_groups(&a.input, &a.model)?;
    let mut blocks = Vec::new();
    for cfg in &configs {
        blocks.extend(score(&groups, cfg)?);
    }
    let text = render("Efficiency report", &a.model, &blocks)?;
    emit(&text, a.model.out.as_deref())
}
