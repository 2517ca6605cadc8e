//! CSV loading, per-group normalization onto the 1–9 judgment scale, and
//! fuzzification of designated columns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dea::{Attribute, Column, ColumnKind, Dataset, DmuRecord};
use crate::error::{Error, Result};
use crate::fuzzy::TriangularFuzzyNumber;

/// Top of the judgment scale.
pub const SCALE_MAX: f64 = 9.0;
/// Group label used when the schema has no group column.
pub const DEFAULT_GROUP: &str = "all";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Id,
    Group,
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnSpec {
    pub role: Role,
    #[serde(default = "crisp_kind")]
    pub kind: ColumnKind,
    /// Source columns of a `fuzzy3` attribute; defaults to `<name>_r,<name>_s,<name>_u`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<[String; 3]>,
}

fn crisp_kind() -> ColumnKind {
    ColumnKind::Crisp
}

/// Column roles keyed by attribute name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchemaConfig {
    pub columns: BTreeMap<String, ColumnSpec>,
}

impl SchemaConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let schema: SchemaConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("schema: {e}")))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let count = |role: Role| self.columns.values().filter(|c| c.role == role).count();
        if count(Role::Id) != 1 {
            return Err(Error::Config(format!(
                "schema needs exactly one id column, found {}",
                count(Role::Id)
            )));
        }
        if count(Role::Group) > 1 {
            return Err(Error::Config("schema has more than one group column".into()));
        }
        if count(Role::Input) == 0 {
            return Err(Error::Config("schema declares no input columns".into()));
        }
        if count(Role::Output) == 0 {
            return Err(Error::Config("schema declares no output columns".into()));
        }
        for (name, spec) in &self.columns {
            let attribute = matches!(spec.role, Role::Input | Role::Output);
            if !attribute && spec.kind != ColumnKind::Crisp {
                return Err(Error::Config(format!("column '{name}' is not an attribute but has kind {:?}", spec.kind)));
            }
            if spec.columns.is_some() && spec.kind != ColumnKind::Fuzzy3 {
                return Err(Error::Config(format!("column '{name}' lists source columns but is not fuzzy3")));
            }
        }
        Ok(())
    }

    pub fn id_column(&self) -> &str {
        self.columns
            .iter()
            .find(|(_, c)| c.role == Role::Id)
            .map(|(n, _)| n.as_str())
            .expect("validated schema has an id column")
    }

    pub fn group_column(&self) -> Option<&str> {
        self.columns.iter().find(|(_, c)| c.role == Role::Group).map(|(n, _)| n.as_str())
    }

    /// Schema describing data after every `fuzzify` column was fuzzified.
    pub fn after_fuzzify(&self) -> SchemaConfig {
        let mut out = self.clone();
        for spec in out.columns.values_mut() {
            if spec.kind == ColumnKind::Fuzzify {
                spec.kind = ColumnKind::Fuzzy3;
            }
        }
        out
    }

    fn source_columns(name: &str, spec: &ColumnSpec) -> Vec<String> {
        match (spec.kind, &spec.columns) {
            (ColumnKind::Fuzzy3, Some(cols)) => cols.to_vec(),
            (ColumnKind::Fuzzy3, None) => ["r", "s", "u"].iter().map(|s| format!("{name}_{s}")).collect(),
            _ => vec![name.to_owned()],
        }
    }
}

struct Binding {
    column: Column,
    sources: Vec<(usize, String)>,
}

fn header_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::parse(Some(1), Some(name), "missing column"))
}

fn parse_number(raw: &str, line: usize, col: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::parse(Some(line), Some(col), format!("'{raw}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(Some(line), Some(col), format!("'{raw}' is not finite")));
    }
    Ok(v)
}

fn read_attribute(rec: &csv::StringRecord, b: &Binding, line: usize) -> Result<Attribute> {
    let mut vals = Vec::with_capacity(3);
    for (idx, name) in &b.sources {
        let raw = rec.get(*idx).unwrap_or("");
        let v = parse_number(raw, line, name)?;
        if v <= 0.0 {
            return Err(Error::parse(Some(line), Some(name), format!("value {v} must be strictly positive")));
        }
        vals.push(v);
    }
    match b.column.kind {
        ColumnKind::Fuzzy3 => TriangularFuzzyNumber::new(vals[0], vals[1], vals[2])
            .map(Attribute::Fuzzy)
            .map_err(|e| Error::parse(Some(line), Some(&b.column.name), e.to_string())),
        _ => Ok(Attribute::Crisp(vals[0])),
    }
}

/// Parse CSV text into one dataset per group, in order of first appearance.
pub fn parse_dataset(csv_text: &str, schema: &SchemaConfig) -> Result<Vec<Dataset>> {
    schema.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(Some(1), None, e.to_string()))?
        .clone();

    let id_idx = header_index(&headers, schema.id_column())?;
    let group_idx = schema.group_column().map(|g| header_index(&headers, g)).transpose()?;

    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (name, spec) in &schema.columns {
        if !matches!(spec.role, Role::Input | Role::Output) {
            continue;
        }
        let sources = SchemaConfig::source_columns(name, spec)
            .into_iter()
            .map(|src| header_index(&headers, &src).map(|i| (i, src)))
            .collect::<Result<Vec<_>>>()?;
        let binding = Binding {
            column: Column::new(name.clone(), spec.kind),
            sources,
        };
        if spec.role == Role::Input {
            inputs.push(binding);
        } else {
            outputs.push(binding);
        }
    }
    // file order, not schema key order
    inputs.sort_by_key(|b| b.sources[0].0);
    outputs.sort_by_key(|b| b.sources[0].0);

    let mut groups: Vec<(String, Vec<DmuRecord>)> = Vec::new();
    for row in reader.records() {
        let rec = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            Error::parse(line, None, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let name = rec.get(id_idx).unwrap_or("").to_owned();
        if name.is_empty() {
            return Err(Error::parse(Some(line), Some(schema.id_column()), "empty identifier"));
        }
        let group = match group_idx {
            Some(g) => rec.get(g).unwrap_or("").to_owned(),
            None => DEFAULT_GROUP.to_owned(),
        };
        if group.is_empty() {
            return Err(Error::parse(Some(line), schema.group_column(), "empty group label"));
        }
        let dmu = DmuRecord {
            name,
            group: group.clone(),
            inputs: inputs.iter().map(|b| read_attribute(&rec, b, line)).collect::<Result<_>>()?,
            outputs: outputs.iter().map(|b| read_attribute(&rec, b, line)).collect::<Result<_>>()?,
        };
        match groups.iter_mut().find(|(g, _)| *g == group) {
            Some((_, members)) => members.push(dmu),
            None => groups.push((group, vec![dmu])),
        }
    }
    if groups.is_empty() {
        return Err(Error::parse(None, None, "no records"));
    }

    let input_cols: Vec<Column> = inputs.into_iter().map(|b| b.column).collect();
    let output_cols: Vec<Column> = outputs.into_iter().map(|b| b.column).collect();
    groups
        .into_iter()
        .map(|(group, records)| Dataset::new(group, input_cols.clone(), output_cols.clone(), records))
        .collect()
}

fn column_max(ds: &Dataset, is_input: bool, k: usize, name: &str) -> Result<f64> {
    let max = ds
        .records()
        .iter()
        .map(|r| if is_input { r.inputs[k] } else { r.outputs[k] })
        .map(|a| match a {
            Attribute::Crisp(v) => Ok(v),
            Attribute::Fuzzy(_) => Err(Error::Domain(format!("column '{name}' is already fuzzy"))),
        })
        .try_fold(f64::NEG_INFINITY, |acc, v| v.map(|v| acc.max(v)))?;
    if max.is_nan() || max <= 0.0 {
        return Err(Error::Domain(format!(
            "column '{name}' in group '{}' has nonpositive maximum {max}",
            ds.group()
        )));
    }
    Ok(max)
}

/// `v -> 1 + 8 v / M` on every plain crisp column, `M` being the group maximum.
pub fn normalize_group(ds: &Dataset) -> Result<Dataset> {
    let maxima = |cols: &[Column], is_input: bool| -> Result<Vec<Option<f64>>> {
        cols.iter()
            .enumerate()
            .map(|(k, c)| match c.kind {
                ColumnKind::Crisp => column_max(ds, is_input, k, &c.name).map(Some),
                _ => Ok(None),
            })
            .collect()
    };
    let in_max = maxima(ds.input_columns(), true)?;
    let out_max = maxima(ds.output_columns(), false)?;
    ds.map_values(|_, is_input, k, v| {
        let max = if is_input { in_max[k] } else { out_max[k] };
        Ok(match (max, v) {
            (Some(m), Attribute::Crisp(x)) => Attribute::Crisp(1.0 + (SCALE_MAX - 1.0) * x / m),
            _ => *v,
        })
    })
}

/// Replace crisp column `column` with triangular numbers centred on the
/// nearest scale point of `1 + 8 v / M`, one step wide on each side and
/// clipped to `[1, 9]`.
pub fn fuzzify_column(ds: &Dataset, column: &str) -> Result<Dataset> {
    let (is_input, k) = match ds.input_columns().iter().position(|c| c.name == column) {
        Some(k) => (true, k),
        None => match ds.output_columns().iter().position(|c| c.name == column) {
            Some(k) => (false, k),
            None => return Err(Error::Domain(format!("no attribute column named '{column}'"))),
        },
    };
    let max = column_max(ds, is_input, k, column)?;

    let mut records = ds.records().to_vec();
    for rec in &mut records {
        let slot = if is_input { &mut rec.inputs[k] } else { &mut rec.outputs[k] };
        let v = slot.peak();
        let scaled = 1.0 + (SCALE_MAX - 1.0) * v / max;
        // half-up rounding
        let centre = (scaled + 0.5).floor();
        *slot = Attribute::Fuzzy(TriangularFuzzyNumber::new(
            (centre - 1.0).max(1.0),
            centre,
            (centre + 1.0).min(SCALE_MAX),
        )?);
    }
    let retag = |cols: &[Column]| -> Vec<Column> {
        cols.iter()
            .map(|c| {
                if c.name == column {
                    Column::new(c.name.clone(), ColumnKind::Fuzzy3)
                } else {
                    c.clone()
                }
            })
            .collect()
    };
    ds.with_columns(retag(ds.input_columns()), retag(ds.output_columns()), records)
}

/// Normalize plain crisp columns, then fuzzify every `fuzzify` column.
pub fn prepare(ds: &Dataset) -> Result<Dataset> {
    let mut out = normalize_group(ds)?;
    let targets: Vec<String> = ds
        .input_columns()
        .iter()
        .chain(ds.output_columns())
        .filter(|c| c.kind == ColumnKind::Fuzzify)
        .map(|c| c.name.clone())
        .collect();
    for name in targets {
        out = fuzzify_column(&out, &name)?;
    }
    Ok(out)
}

/// Decimal places for written values; `None` writes the shortest exact form.
pub type Precision = Option<usize>;

fn format_value(v: f64, precision: Precision) -> String {
    match precision {
        Some(p) => format!("{v:.p$}"),
        None => format!("{v}"),
    }
}

/// Write datasets back to CSV. Fuzzy columns expand to the source columns the
/// schema names, or `<name>_r,<name>_s,<name>_u`.
pub fn write_datasets(datasets: &[Dataset], schema: &SchemaConfig, precision: Precision) -> Result<String> {
    let Some(first) = datasets.first() else {
        return Err(Error::Domain("nothing to write".into()));
    };
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![schema.id_column().to_owned()];
    let group_col = schema.group_column();
    if let Some(g) = group_col {
        header.push(g.to_owned());
    }
    for col in first.input_columns().iter().chain(first.output_columns()) {
        let spec = schema.columns.get(&col.name).filter(|spec| spec.kind == col.kind);
        match (col.kind, spec) {
            (ColumnKind::Fuzzy3, Some(spec)) => header.extend(SchemaConfig::source_columns(&col.name, spec)),
            (ColumnKind::Fuzzy3, None) => header.extend(["r", "s", "u"].iter().map(|s| format!("{}_{s}", col.name))),
            _ => header.push(col.name.clone()),
        }
    }
    let csv_err = |e: csv::Error| Error::Domain(format!("csv write failed: {e}"));
    writer.write_record(&header).map_err(csv_err)?;

    for ds in datasets {
        if ds.input_columns() != first.input_columns() || ds.output_columns() != first.output_columns() {
            return Err(Error::Domain(format!("group '{}' has a different column layout", ds.group())));
        }
        for rec in ds.records() {
            let mut row = vec![rec.name.clone()];
            if group_col.is_some() {
                row.push(rec.group.clone());
            }
            for v in rec.inputs.iter().chain(&rec.outputs) {
                match v {
                    Attribute::Crisp(x) => row.push(format_value(*x, precision)),
                    Attribute::Fuzzy(f) => {
                        row.extend([f.lower(), f.peak(), f.upper()].iter().map(|x| format_value(*x, precision)))
                    }
                }
            }
            writer.write_record(&row).map_err(csv_err)?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Domain(format!("csv write failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
