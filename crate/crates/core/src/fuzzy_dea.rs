//! Fuzzy SBM evaluation: credibility, possibility and alpha-cut approaches.
//!
//! The credibility and possibility approaches share one crisp LP family,
//! parameterized by a cut level `beta`:
//!
//! ```text
//! min  t - (1/m) sum_i S-_i / (x_iz)L
//! s.t. t + (1/n) sum_j S+_j / (y_jz)L = 1
//!      paired rows bounding  sum_o lambda_o x_io + S-_i - t x_iz  around 0
//!      paired rows bounding  sum_o lambda_o y_jo - S+_j - t y_jz  around 0
//! ```
//!
//! Credibility level `alpha` maps to `beta = 2(1 - alpha)`, possibility level
//! `alpha` to `beta = alpha`. Each occurrence of a fuzzy coefficient is
//! bounded on its own, including `x_iz` inside the lambda sum.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dea::{self, Attribute, Dataset, SbmLayout, SbmSolution, T_LOWER_BOUND};
use crate::error::{Error, Result};
use crate::fuzzy::{credibility_cut_level, CutBounds};
use crate::lp::{LinearProgram, Relation, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    Crisp,
    Credibility,
    Possibility,
    #[serde(rename = "alphacut")]
    AlphaCut,
}

impl Approach {
    pub fn name(&self) -> &'static str {
        match self {
            Approach::Crisp => "crisp",
            Approach::Credibility => "credibility",
            Approach::Possibility => "possibility",
            Approach::AlphaCut => "alphacut",
        }
    }

    /// Admissible range of confidence levels.
    pub fn alpha_range(&self) -> (f64, f64) {
        match self {
            Approach::Credibility => (0.5, 1.0),
            _ => (0.0, 1.0),
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Approach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "crisp" => Ok(Approach::Crisp),
            "credibility" => Ok(Approach::Credibility),
            "possibility" => Ok(Approach::Possibility),
            "alphacut" | "alpha-cut" => Ok(Approach::AlphaCut),
            other => Err(Error::Config(format!("unknown approach '{other}'"))),
        }
    }
}

/// How each fuzzy balance equation becomes a pair of crisp rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChancePairing {
    /// Lower bound <= 0 <= upper bound: the cut of the balance expression
    /// must contain zero.
    #[default]
    Interval,
    /// Upper bound <= 0 <= lower bound, the literal chance-constraint pair.
    /// Infeasible once any coefficient of the evaluated DMU has width.
    Strict,
}

impl FromStr for ChancePairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "interval" => Ok(ChancePairing::Interval),
            "strict" => Ok(ChancePairing::Strict),
            other => Err(Error::Config(format!("unknown pairing '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModelOptions {
    pub pairing: ChancePairing,
    pub solver: SolverOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproachConfig {
    approach: Approach,
    alpha_grid: Vec<f64>,
    pub options: ModelOptions,
}

impl ApproachConfig {
    pub fn new(approach: Approach, alpha_grid: Vec<f64>) -> Result<Self> {
        if alpha_grid.is_empty() {
            return Err(Error::Config("alpha grid is empty".into()));
        }
        let (lo, hi) = approach.alpha_range();
        if let Some(a) = alpha_grid.iter().find(|a| !(lo..=hi).contains(*a)) {
            return Err(Error::Config(format!(
                "alpha {a} outside [{lo}, {hi}] admitted by the {approach} approach"
            )));
        }
        if alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("alpha grid must be strictly increasing".into()));
        }
        Ok(ApproachConfig {
            approach,
            alpha_grid,
            options: ModelOptions::default(),
        })
    }

    pub fn with_options(mut self, options: ModelOptions) -> Self {
        self.options = options;
        self
    }

    pub fn approach(&self) -> Approach {
        self.approach
    }

    pub fn alpha_grid(&self) -> &[f64] {
        &self.alpha_grid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Score {
    Scalar(f64),
    Interval { lower: f64, upper: f64 },
}

impl Score {
    pub fn midpoint(&self) -> f64 {
        match *self {
            Score::Scalar(v) => v,
            Score::Interval { lower, upper } => 0.5 * (lower + upper),
        }
    }

    pub fn is_efficient(&self, tol: f64) -> bool {
        self.midpoint() >= 1.0 - tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelResult {
    pub alpha: f64,
    pub score: Score,
    /// One solution per solve: two for alpha-cut (pessimistic, optimistic).
    pub solutions: Vec<SbmSolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyResult {
    pub dmu: String,
    pub approach: Approach,
    pub levels: Vec<LevelResult>,
    pub rank: Option<usize>,
}

impl EfficiencyResult {
    pub fn efficient_levels(&self, tol: f64) -> usize {
        self.levels.iter().filter(|l| l.score.is_efficient(tol)).count()
    }

    pub fn mean_score(&self) -> f64 {
        self.levels.iter().map(|l| l.score.midpoint()).sum::<f64>() / self.levels.len() as f64
    }
}

/// Score within this distance of one counts as efficient when ranking.
pub const EFFICIENT_TOL: f64 = 1e-6;
/// Mean scores closer than this tie.
pub const TIE_TOL: f64 = 1e-9;

/// Crisp LP of the fuzzy SBM model at cut level `beta`.
pub fn build_cut_sbm(ds: &Dataset, z: usize, beta: f64, pairing: ChancePairing) -> Result<LinearProgram> {
    ds.check_index(z)?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!("cut level {beta} outside [0, 1]")));
    }
    let layout = SbmLayout::of(ds);
    let cuts = |pick: fn(&dea::DmuRecord) -> &[Attribute], k: usize| -> Result<Vec<CutBounds>> {
        ds.records().iter().map(|r| pick(r)[k].cut(beta)).collect()
    };
    let input_cuts: Vec<Vec<CutBounds>> = (0..ds.m()).map(|i| cuts(|r| &r.inputs, i)).collect::<Result<_>>()?;
    let output_cuts: Vec<Vec<CutBounds>> = (0..ds.n()).map(|j| cuts(|r| &r.outputs, j)).collect::<Result<_>>()?;

    let name = &ds.records()[z].name;
    let divisor = |cb: &CutBounds, col: &str| -> Result<f64> {
        if cb.lower <= 0.0 {
            return Err(Error::Domain(format!(
                "DMU '{name}' attribute '{col}' reaches {} at cut level {beta}",
                cb.lower
            )));
        }
        Ok(cb.lower)
    };
    let x_div = input_cuts
        .iter()
        .zip(ds.input_columns())
        .map(|(c, col)| divisor(&c[z], &col.name))
        .collect::<Result<Vec<_>>>()?;
    let y_div = output_cuts
        .iter()
        .zip(ds.output_columns())
        .map(|(c, col)| divisor(&c[z], &col.name))
        .collect::<Result<Vec<_>>>()?;

    let mut lp = LinearProgram::new(layout.objective(&x_div));
    lp.add_constraint(layout.normalization(&y_div), Relation::Eq, 1.0);

    // `peer_hi` chooses which bound of the peer coefficients sits in the `<=` row.
    let peer_hi = pairing == ChancePairing::Strict;
    let pick = |cb: &CutBounds, hi: bool| if hi { cb.upper } else { cb.lower };
    for (i, c) in input_cuts.iter().enumerate() {
        // S-_i enters positively and t x_iz negatively, so the upper bound of
        // the expression uses the upper peer bounds and the lower own bound.
        let le = layout.input_row(i, c.iter().map(|cb| pick(cb, peer_hi)), pick(&c[z], !peer_hi));
        let ge = layout.input_row(i, c.iter().map(|cb| pick(cb, !peer_hi)), pick(&c[z], peer_hi));
        push_pair(&mut lp, le, ge);
    }
    for (j, c) in output_cuts.iter().enumerate() {
        let le = layout.output_row(j, c.iter().map(|cb| pick(cb, peer_hi)), pick(&c[z], !peer_hi));
        let ge = layout.output_row(j, c.iter().map(|cb| pick(cb, !peer_hi)), pick(&c[z], peer_hi));
        push_pair(&mut lp, le, ge);
    }
    lp.set_lower_bound(layout.t(), T_LOWER_BOUND);
    Ok(lp)
}

/// Coinciding rows collapse into the equality they jointly enforce.
fn push_pair(lp: &mut LinearProgram, le: Vec<f64>, ge: Vec<f64>) {
    if le == ge {
        lp.add_constraint(le, Relation::Eq, 0.0);
    } else {
        lp.add_constraint(le, Relation::Le, 0.0);
        lp.add_constraint(ge, Relation::Ge, 0.0);
    }
}

fn solve_cut(ds: &Dataset, z: usize, beta: f64, opts: &ModelOptions, context: String) -> Result<SbmSolution> {
    let program = build_cut_sbm(ds, z, beta, opts.pairing)?;
    dea::solve_program(&program, SbmLayout::of(ds), &opts.solver, context)
}

fn context(ds: &Dataset, z: usize, approach: Approach, alpha: f64) -> String {
    format!("DMU '{}' at alpha={alpha} ({approach})", ds.records()[z].name)
}

/// Efficiency at credibility level `alpha` in `[0.5, 1]`.
pub fn credibility_efficiency(ds: &Dataset, z: usize, alpha: f64, opts: &ModelOptions) -> Result<SbmSolution> {
    let beta = credibility_cut_level(alpha)?;
    ds.check_index(z)?;
    solve_cut(ds, z, beta, opts, context(ds, z, Approach::Credibility, alpha))
}

/// Efficiency at possibility level `alpha` in `[0, 1]`; equals the
/// credibility score at level `1 - alpha / 2`.
pub fn possibility_efficiency(ds: &Dataset, z: usize, alpha: f64, opts: &ModelOptions) -> Result<SbmSolution> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("possibility level {alpha} outside [0, 1]")));
    }
    ds.check_index(z)?;
    solve_cut(ds, z, alpha, opts, context(ds, z, Approach::Possibility, alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaCutInterval {
    pub lower: SbmSolution,
    pub upper: SbmSolution,
}

impl AlphaCutInterval {
    pub fn bounds(&self) -> (f64, f64) {
        (self.lower.efficiency, self.upper.efficiency)
    }
}

/// Pessimistic and optimistic crisp SBM scores at cut level `alpha`.
///
/// The optimistic scenario puts the evaluated DMU at its lower input and
/// upper output bounds and every peer at the opposite ends; the pessimistic
/// scenario swaps the two.
pub fn alphacut_interval(ds: &Dataset, z: usize, alpha: f64, opts: &ModelOptions) -> Result<AlphaCutInterval> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha-cut level {alpha} outside [0, 1]")));
    }
    ds.check_index(z)?;
    let scenario = |optimistic: bool| -> Result<SbmSolution> {
        let crisp = ds.map_values(|o, is_input, _, v| {
            let cb = v.cut(alpha)?;
            let favourable = (o == z) == optimistic;
            let low = is_input == favourable;
            Ok(Attribute::Crisp(if low { cb.lower } else { cb.upper }))
        })?;
        let program = dea::build_crisp_sbm(&crisp, z)?;
        let tag = if optimistic { "optimistic" } else { "pessimistic" };
        let ctx = format!("{} {tag}", context(ds, z, Approach::AlphaCut, alpha));
        dea::solve_program(&program, SbmLayout::of(ds), &opts.solver, ctx)
    };
    Ok(AlphaCutInterval {
        lower: scenario(false)?,
        upper: scenario(true)?,
    })
}

fn evaluate_level(ds: &Dataset, z: usize, approach: Approach, alpha: f64, opts: &ModelOptions) -> Result<LevelResult> {
    let (score, solutions) = match approach {
        Approach::Crisp => {
            let sol = dea::solve_sbm_with(&ds.at_peak(), z, &opts.solver)?;
            (Score::Scalar(sol.efficiency), vec![sol])
        }
        Approach::Credibility => {
            let sol = credibility_efficiency(ds, z, alpha, opts)?;
            (Score::Scalar(sol.efficiency), vec![sol])
        }
        Approach::Possibility => {
            let sol = possibility_efficiency(ds, z, alpha, opts)?;
            (Score::Scalar(sol.efficiency), vec![sol])
        }
        Approach::AlphaCut => {
            let iv = alphacut_interval(ds, z, alpha, opts)?;
            let (lower, upper) = iv.bounds();
            (Score::Interval { lower, upper }, vec![iv.lower, iv.upper])
        }
    };
    Ok(LevelResult { alpha, score, solutions })
}

/// Scores for every DMU of `ds` over the configured grid, ranked.
pub fn evaluate(ds: &Dataset, cfg: &ApproachConfig) -> Result<Vec<EfficiencyResult>> {
    let mut results = Vec::with_capacity(ds.len());
    for (z, rec) in ds.records().iter().enumerate() {
        let levels = cfg
            .alpha_grid()
            .iter()
            .map(|&alpha| evaluate_level(ds, z, cfg.approach(), alpha, &cfg.options))
            .collect::<Result<Vec<_>>>()?;
        results.push(EfficiencyResult {
            dmu: rec.name.clone(),
            approach: cfg.approach(),
            levels,
            rank: None,
        });
    }
    rank(results)
}

/// Dense ranking: more efficient levels first, then higher mean score
/// (interval midpoints). Tied units share a rank and the next distinct unit
/// takes the following integer, so `[1, 1, 2]` rather than `[1, 1, 3]`.
pub fn rank(mut results: Vec<EfficiencyResult>) -> Result<Vec<EfficiencyResult>> {
    let Some(first) = results.first() else {
        return Ok(results);
    };
    let approach = first.approach;
    let grid: Vec<f64> = first.levels.iter().map(|l| l.alpha).collect();
    for r in &results {
        if r.approach != approach {
            return Err(Error::Domain(format!(
                "cannot rank {} results together with {approach} results",
                r.approach
            )));
        }
        if r.levels.len() != grid.len() || r.levels.iter().zip(&grid).any(|(l, a)| l.alpha != *a) {
            return Err(Error::Domain(format!("DMU '{}' was evaluated on a different alpha grid", r.dmu)));
        }
    }
    let keys: Vec<(usize, f64)> = results
        .iter()
        .map(|r| (r.efficient_levels(EFFICIENT_TOL), r.mean_score()))
        .collect();
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&a, &b| keys[b].0.cmp(&keys[a].0).then(keys[b].1.total_cmp(&keys[a].1)));
    let tied = |a: (usize, f64), b: (usize, f64)| a.0 == b.0 && (a.1 - b.1).abs() <= TIE_TOL;
    let mut current = 1;
    for (pos, &k) in order.iter().enumerate() {
        if pos > 0 && !tied(keys[order[pos - 1]], keys[k]) {
            current += 1;
        }
        results[k].rank = Some(current);
    }
    Ok(results)
}
