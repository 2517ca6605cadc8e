//! Crisp slacks-based measure (SBM) model.
//!
//! For DMU `z` the fractional program
//!
//! ```text
//! min  (1 - (1/m) sum_i s-_i / x_iz) / (1 + (1/n) sum_j s+_j / y_jz)
//! s.t. sum_o lambda_o x_io + s-_i = x_iz
//!      sum_o lambda_o y_jo - s+_j = y_jz
//! ```
//!
//! is linearized by scaling every variable with `t` and pinning the
//! denominator to one. The LP works over `(t, lambda_1..lambda_r, S-_1..S-_m,
//! S+_1..S+_n)`, where `S = t * s` and `Lambda = t * lambda`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{CutBounds, TriangularFuzzyNumber};
use crate::lp::{self, LinearProgram, LpStatus, Relation, SolverOptions};

/// Lower bound standing in for the strict `t > 0`.
pub const T_LOWER_BOUND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Crisp,
    /// Crisp in the source data, to be turned into a triangular number.
    Fuzzify,
    /// Triangular number read from three source columns.
    Fuzzy3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

impl Column {
    pub fn new(name: impl Into<String>, kind: ColumnKind) -> Self {
        Column {
            name: name.into(),
            kind,
        }
    }

    pub fn crisp(name: impl Into<String>) -> Self {
        Column::new(name, ColumnKind::Crisp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Attribute {
    Crisp(f64),
    Fuzzy(TriangularFuzzyNumber),
}

impl Attribute {
    pub fn as_fuzzy(&self) -> TriangularFuzzyNumber {
        match *self {
            Attribute::Crisp(v) => TriangularFuzzyNumber::crisp(v),
            Attribute::Fuzzy(f) => f,
        }
    }

    pub fn peak(&self) -> f64 {
        match self {
            Attribute::Crisp(v) => *v,
            Attribute::Fuzzy(f) => f.peak(),
        }
    }

    /// Smallest value in the support.
    pub fn support_min(&self) -> f64 {
        match self {
            Attribute::Crisp(v) => *v,
            Attribute::Fuzzy(f) => f.lower(),
        }
    }

    pub fn cut(&self, beta: f64) -> Result<CutBounds> {
        match self {
            Attribute::Crisp(v) => {
                crate::fuzzy::cut_bounds(&TriangularFuzzyNumber::crisp(*v), beta)?;
                Ok(CutBounds::point(*v))
            }
            Attribute::Fuzzy(f) => f.cut(beta),
        }
    }

    fn is_crisp_valued(&self) -> bool {
        match self {
            Attribute::Crisp(_) => true,
            Attribute::Fuzzy(f) => f.is_crisp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmuRecord {
    pub name: String,
    pub group: String,
    pub inputs: Vec<Attribute>,
    pub outputs: Vec<Attribute>,
}

/// DMUs of one peer group, evaluated against each other.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    group: String,
    inputs: Vec<Column>,
    outputs: Vec<Column>,
    records: Vec<DmuRecord>,
}

impl Dataset {
    pub fn new(group: impl Into<String>, inputs: Vec<Column>, outputs: Vec<Column>, records: Vec<DmuRecord>) -> Result<Self> {
        let group = group.into();
        if inputs.is_empty() || outputs.is_empty() {
            return Err(Error::Domain(format!(
                "group '{group}' needs at least one input and one output"
            )));
        }
        if records.len() < 2 {
            return Err(Error::Domain(format!(
                "group '{group}' has {} DMU(s); at least 2 are required",
                records.len()
            )));
        }
        for (k, rec) in records.iter().enumerate() {
            if rec.group != group {
                return Err(Error::Domain(format!(
                    "DMU '{}' belongs to group '{}', not '{group}'",
                    rec.name, rec.group
                )));
            }
            if records[..k].iter().any(|other| other.name == rec.name) {
                return Err(Error::Domain(format!("duplicate DMU '{}' in group '{group}'", rec.name)));
            }
            if rec.inputs.len() != inputs.len() || rec.outputs.len() != outputs.len() {
                return Err(Error::Domain(format!(
                    "DMU '{}' has {}/{} attributes, schema declares {}/{}",
                    rec.name,
                    rec.inputs.len(),
                    rec.outputs.len(),
                    inputs.len(),
                    outputs.len()
                )));
            }
            let attrs = inputs.iter().zip(&rec.inputs).chain(outputs.iter().zip(&rec.outputs));
            for (col, value) in attrs {
                let min = value.support_min();
                if !(min > 0.0 && min.is_finite()) || !value.as_fuzzy().upper().is_finite() {
                    return Err(Error::Domain(format!(
                        "DMU '{}' attribute '{}' must be strictly positive",
                        rec.name, col.name
                    )));
                }
            }
        }
        Ok(Dataset {
            group,
            inputs,
            outputs,
            records,
        })
    }

    /// All-crisp dataset from plain rows `(name, inputs, outputs)`.
    pub fn crisp(group: &str, input_names: &[&str], output_names: &[&str], rows: &[(&str, &[f64], &[f64])]) -> Result<Self> {
        let records = rows
            .iter()
            .map(|(name, x, y)| DmuRecord {
                name: name.to_string(),
                group: group.to_string(),
                inputs: x.iter().map(|&v| Attribute::Crisp(v)).collect(),
                outputs: y.iter().map(|&v| Attribute::Crisp(v)).collect(),
            })
            .collect();
        Dataset::new(
            group,
            input_names.iter().map(|n| Column::crisp(*n)).collect(),
            output_names.iter().map(|n| Column::crisp(*n)).collect(),
            records,
        )
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn input_columns(&self) -> &[Column] {
        &self.inputs
    }

    pub fn output_columns(&self) -> &[Column] {
        &self.outputs
    }

    pub fn records(&self) -> &[DmuRecord] {
        &self.records
    }

    /// Number of inputs `m`.
    pub fn m(&self) -> usize {
        self.inputs.len()
    }

    /// Number of outputs `n`.
    pub fn n(&self) -> usize {
        self.outputs.len()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.records.iter().position(|r| r.name == name)
    }

    pub fn is_crisp(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.inputs.iter().chain(&r.outputs).all(Attribute::is_crisp_valued))
    }

    /// Replace every attribute with `f(record index, is_input, attribute index, value)`.
    pub fn map_values<F>(&self, mut f: F) -> Result<Dataset>
    where
        F: FnMut(usize, bool, usize, &Attribute) -> Result<Attribute>,
    {
        let mut records = Vec::with_capacity(self.records.len());
        for (o, rec) in self.records.iter().enumerate() {
            let inputs = rec.inputs.iter().enumerate().map(|(i, v)| f(o, true, i, v)).collect::<Result<_>>()?;
            let outputs = rec.outputs.iter().enumerate().map(|(j, v)| f(o, false, j, v)).collect::<Result<_>>()?;
            records.push(DmuRecord {
                name: rec.name.clone(),
                group: rec.group.clone(),
                inputs,
                outputs,
            });
        }
        Dataset::new(self.group.clone(), self.inputs.clone(), self.outputs.clone(), records)
    }

    /// Every fuzzy attribute replaced by its peak.
    pub fn at_peak(&self) -> Dataset {
        self.map_values(|_, _, _, v| Ok(Attribute::Crisp(v.peak())))
            .expect("peaks of a valid dataset are positive")
    }

    pub(crate) fn with_columns(&self, inputs: Vec<Column>, outputs: Vec<Column>, records: Vec<DmuRecord>) -> Result<Dataset> {
        Dataset::new(self.group.clone(), inputs, outputs, records)
    }

    pub(crate) fn check_index(&self, z: usize) -> Result<()> {
        if z >= self.records.len() {
            return Err(Error::Domain(format!(
                "DMU index {z} out of range for group '{}' ({} DMUs)",
                self.group,
                self.records.len()
            )));
        }
        Ok(())
    }
}

/// Positions of the SBM variables inside the LP vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SbmLayout {
    pub dmus: usize,
    pub inputs: usize,
    pub outputs: usize,
}

impl SbmLayout {
    pub fn of(ds: &Dataset) -> Self {
        SbmLayout {
            dmus: ds.len(),
            inputs: ds.m(),
            outputs: ds.n(),
        }
    }

    pub fn t(&self) -> usize {
        0
    }

    pub fn lambda(&self, o: usize) -> usize {
        1 + o
    }

    pub fn input_slack(&self, i: usize) -> usize {
        1 + self.dmus + i
    }

    pub fn output_slack(&self, j: usize) -> usize {
        1 + self.dmus + self.inputs + j
    }

    pub fn num_vars(&self) -> usize {
        1 + self.dmus + self.inputs + self.outputs
    }

    /// `t - (1/m) sum_i S-_i / x_i`
    pub(crate) fn objective(&self, input_divisors: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.num_vars()];
        c[self.t()] = 1.0;
        let m = self.inputs as f64;
        for (i, x) in input_divisors.iter().enumerate() {
            c[self.input_slack(i)] = -1.0 / (m * x);
        }
        c
    }

    /// `t + (1/n) sum_j S+_j / y_j`, set equal to one.
    pub(crate) fn normalization(&self, output_divisors: &[f64]) -> Vec<f64> {
        let mut a = vec![0.0; self.num_vars()];
        a[self.t()] = 1.0;
        let n = self.outputs as f64;
        for (j, y) in output_divisors.iter().enumerate() {
            a[self.output_slack(j)] = 1.0 / (n * y);
        }
        a
    }

    /// `sum_o lambda_o x_io + S-_i - t x_iz`
    pub(crate) fn input_row(&self, i: usize, peers: impl IntoIterator<Item = f64>, own: f64) -> Vec<f64> {
        let mut a = vec![0.0; self.num_vars()];
        for (o, x) in peers.into_iter().enumerate() {
            a[self.lambda(o)] = x;
        }
        a[self.input_slack(i)] = 1.0;
        a[self.t()] = -own;
        a
    }

    /// `sum_o lambda_o y_jo - S+_j - t y_jz`
    pub(crate) fn output_row(&self, j: usize, peers: impl IntoIterator<Item = f64>, own: f64) -> Vec<f64> {
        let mut a = vec![0.0; self.num_vars()];
        for (o, y) in peers.into_iter().enumerate() {
            a[self.lambda(o)] = y;
        }
        a[self.output_slack(j)] = -1.0;
        a[self.t()] = -own;
        a
    }
}

/// Optimal SBM point. Lambdas and slacks are the raw, `t`-scaled LP values;
/// the `descaled_*` accessors divide by `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SbmSolution {
    pub efficiency: f64,
    pub t: f64,
    pub lambdas: Vec<f64>,
    pub input_slacks: Vec<f64>,
    pub output_slacks: Vec<f64>,
    pub status: LpStatus,
}

impl SbmSolution {
    pub(crate) fn from_lp(layout: SbmLayout, sol: &lp::LpSolution) -> Self {
        let x = &sol.primal;
        SbmSolution {
            efficiency: sol.objective_value,
            t: x[layout.t()],
            lambdas: x[layout.lambda(0)..layout.input_slack(0)].to_vec(),
            input_slacks: x[layout.input_slack(0)..layout.output_slack(0)].to_vec(),
            output_slacks: x[layout.output_slack(0)..layout.num_vars()].to_vec(),
            status: sol.status,
        }
    }

    pub fn descaled_lambdas(&self) -> Vec<f64> {
        self.lambdas.iter().map(|v| v / self.t).collect()
    }

    pub fn descaled_input_slacks(&self) -> Vec<f64> {
        self.input_slacks.iter().map(|v| v / self.t).collect()
    }

    pub fn descaled_output_slacks(&self) -> Vec<f64> {
        self.output_slacks.iter().map(|v| v / self.t).collect()
    }
}

/// LP for the crisp SBM model of DMU `z`.
pub fn build_crisp_sbm(ds: &Dataset, z: usize) -> Result<LinearProgram> {
    ds.check_index(z)?;
    if !ds.is_crisp() {
        return Err(Error::Domain(format!(
            "group '{}' holds fuzzy attributes; evaluate them through a cut or at the peak",
            ds.group()
        )));
    }
    let layout = SbmLayout::of(ds);
    let own = &ds.records()[z];
    let x_z: Vec<f64> = own.inputs.iter().map(Attribute::peak).collect();
    let y_z: Vec<f64> = own.outputs.iter().map(Attribute::peak).collect();

    let mut lp = LinearProgram::new(layout.objective(&x_z));
    lp.add_constraint(layout.normalization(&y_z), Relation::Eq, 1.0);
    for (i, &own) in x_z.iter().enumerate() {
        let peers = ds.records().iter().map(|r| r.inputs[i].peak());
        lp.add_constraint(layout.input_row(i, peers, own), Relation::Eq, 0.0);
    }
    for (j, &own) in y_z.iter().enumerate() {
        let peers = ds.records().iter().map(|r| r.outputs[j].peak());
        lp.add_constraint(layout.output_row(j, peers, own), Relation::Eq, 0.0);
    }
    lp.set_lower_bound(layout.t(), T_LOWER_BOUND);
    Ok(lp)
}

pub fn solve_sbm(ds: &Dataset, z: usize) -> Result<SbmSolution> {
    solve_sbm_with(ds, z, &SolverOptions::default())
}

pub fn solve_sbm_with(ds: &Dataset, z: usize, opts: &SolverOptions) -> Result<SbmSolution> {
    let program = build_crisp_sbm(ds, z)?;
    let context = format!("DMU '{}' (crisp SBM)", ds.records()[z].name);
    solve_program(&program, SbmLayout::of(ds), opts, context)
}

pub(crate) fn solve_program(program: &LinearProgram, layout: SbmLayout, opts: &SolverOptions, context: String) -> Result<SbmSolution> {
    let sol = lp::solve_with(program, opts)?;
    if !sol.is_optimal() {
        return Err(Error::Solver {
            context,
            status: sol.status,
        });
    }
    Ok(SbmSolution::from_lp(layout, &sol))
}
