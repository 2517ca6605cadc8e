//! Dense two-phase primal simplex.
//!
//! Problems are always minimizations over variables with finite,
//! nonnegative lower bounds and no upper bounds. Every model builder in the
//! crate produces a [`LinearProgram`] and hands it to [`solve`].

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    /// Signed violation of the row at `x`; zero or negative when satisfied.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs - self.rhs,
            Relation::Ge => self.rhs - lhs,
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `min objective · x` subject to `constraints` and `x >= lower_bounds`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let num_vars = objective.len();
        LinearProgram {
            num_vars,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![0.0; num_vars],
        }
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: f64) -> &mut Self {
        self.lower_bounds[var] = bound;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n {
            return Err(Error::MalformedLp(format!(
                "objective has {} entries, expected {n}",
                self.objective.len()
            )));
        }
        if self.lower_bounds.len() != n {
            return Err(Error::MalformedLp(format!(
                "lower bounds have {} entries, expected {n}",
                self.lower_bounds.len()
            )));
        }
        if let Some(j) = self.objective.iter().position(|c| !c.is_finite()) {
            return Err(Error::MalformedLp(format!("objective coefficient {j} is not finite")));
        }
        if let Some(j) = self.lower_bounds.iter().position(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::MalformedLp(format!(
                "lower bound of variable {j} must be finite and nonnegative"
            )));
        }
        for (k, row) in self.constraints.iter().enumerate() {
            if row.coefficients.len() != n {
                return Err(Error::MalformedLp(format!(
                    "constraint {k} has {} coefficients, expected {n}",
                    row.coefficients.len()
                )));
            }
            if !row.rhs.is_finite() || row.coefficients.iter().any(|a| !a.is_finite()) {
                return Err(Error::MalformedLp(format!("constraint {k} has a non-finite entry")));
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest constraint or bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| c.violation(x));
        let bounds = self.lower_bounds.iter().zip(x).map(|(l, v)| l - v);
        rows.chain(bounds).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// `objective · primal` when optimal, NaN otherwise.
    pub objective_value: f64,
    /// Zero-filled unless optimal.
    pub primal: Vec<f64>,
}

impl LpSolution {
    fn without_point(status: LpStatus, num_vars: usize) -> Self {
        LpSolution {
            status,
            objective_value: f64::NAN,
            primal: vec![0.0; num_vars],
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Largest phase-one residual still accepted as feasible.
    pub feasibility_tol: f64,
    /// Smallest magnitude accepted as a pivot element or an improving reduced cost.
    pub pivot_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub stall_threshold: usize,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feasibility_tol: 1e-7,
            pivot_tol: 1e-9,
            stall_threshold: 50,
            max_iterations: 50_000,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with(lp, &SolverOptions::default())
}

pub fn solve_with(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution> {
    lp.validate()?;
    let mut tab = Tableau::standardize(lp);

    if tab.num_artificial > 0 {
        let mut phase_one = vec![0.0; tab.width()];
        phase_one[tab.artificial_start..tab.cols].fill(1.0);
        tab.price(&phase_one);
        match tab.run(opts, true)? {
            Outcome::Optimal => {}
            // phase one is bounded below by zero
            Outcome::Unbounded => unreachable!("phase one cannot be unbounded"),
        }
        let residual = -tab.obj[tab.cols];
        if residual > opts.feasibility_tol {
            return Ok(LpSolution::without_point(LpStatus::Infeasible, lp.num_vars));
        }
        tab.expel_artificials(opts);
    }

    let mut costs = vec![0.0; tab.width()];
    costs[..lp.num_vars].copy_from_slice(&lp.objective);
    tab.price(&costs);
    if let Outcome::Unbounded = tab.run(opts, false)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, lp.num_vars));
    }

    let mut primal = lp.lower_bounds.clone();
    for (i, &var) in tab.basis.iter().enumerate() {
        if var < lp.num_vars {
            primal[var] += tab.rhs(i).max(0.0);
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: lp.objective_at(&primal),
        primal,
    })
}

enum Outcome {
    Optimal,
    Unbounded,
}

/// Row-major tableau; the last entry of every row holds the right-hand side.
struct Tableau {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    /// Reduced costs, with the negated objective value in the last slot.
    obj: Vec<f64>,
    basis: Vec<usize>,
    artificial_start: usize,
    num_artificial: usize,
}

impl Tableau {
    fn standardize(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        // Shift x = l + x' and orient every row to a nonnegative rhs.
        let rows: Vec<(Vec<f64>, Relation, f64)> = lp
            .constraints
            .iter()
            .map(|c| {
                let shift: f64 = c.coefficients.iter().zip(&lp.lower_bounds).map(|(a, l)| a * l).sum();
                let rhs = c.rhs - shift;
                if rhs < 0.0 {
                    let coeffs = c.coefficients.iter().map(|a| -a).collect();
                    (coeffs, c.relation.flipped(), -rhs)
                } else {
                    (c.coefficients.clone(), c.relation, rhs)
                }
            })
            .collect();

        let num_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let num_artificial = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let artificial_start = n + num_slack;
        let cols = artificial_start + num_artificial;
        let m = rows.len();

        let mut data = vec![0.0; m * (cols + 1)];
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (n, artificial_start);
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            let row = &mut data[i * (cols + 1)..(i + 1) * (cols + 1)];
            row[..n].copy_from_slice(&coeffs);
            row[cols] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
            }
        }

        Tableau {
            rows: m,
            cols,
            data,
            obj: vec![0.0; cols + 1],
            basis,
            artificial_start,
            num_artificial,
        }
    }

    fn width(&self) -> usize {
        self.cols + 1
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width()..(i + 1) * self.width()]
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    /// Load reduced costs for `costs` relative to the current basis.
    fn price(&mut self, costs: &[f64]) {
        self.obj.copy_from_slice(costs);
        self.obj[self.cols] = 0.0;
        for i in 0..self.rows {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                let w = self.width();
                for j in 0..w {
                    self.obj[j] -= cb * self.data[i * w + j];
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let p = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        self.data[r * w + c] = 1.0;
        let pivot_row: Vec<f64> = self.row(r).to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + c];
            if f != 0.0 {
                for (x, p) in self.data[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
                self.data[i * w + c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (x, p) in self.obj[..w].iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn entering(&self, allow_artificial: bool, bland: bool, tol: f64) -> Option<usize> {
        let limit = if allow_artificial { self.cols } else { self.artificial_start };
        let mut best: Option<(usize, f64)> = None;
        for j in 0..limit {
            let d = self.obj[j];
            if d < -tol {
                if bland {
                    return Some(j);
                }
                // strict comparison keeps the lowest index on ties
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, c: usize, tol: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let a = self.at(i, c);
            if a > tol {
                let ratio = self.rhs(i).max(0.0) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        if (!tie && ratio < br) || (tie && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
        }
        best
    }

    fn run(&mut self, opts: &SolverOptions, phase_one: bool) -> Result<Outcome> {
        let mut bland = false;
        let mut stalled = 0usize;
        for _ in 0..opts.max_iterations {
            let Some(c) = self.entering(phase_one, bland, opts.pivot_tol) else {
                return Ok(Outcome::Optimal);
            };
            let Some((r, step)) = self.leaving(c, opts.pivot_tol) else {
                return Ok(Outcome::Unbounded);
            };
            if step <= 1e-12 {
                stalled += 1;
                if stalled > opts.stall_threshold {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
            self.pivot(r, c);
        }
        Err(Error::IterationLimit(opts.max_iterations))
    }

    /// Pivot zero-valued artificials out of the basis; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn expel_artificials(&mut self, opts: &SolverOptions) {
        let mut redundant = Vec::new();
        for i in 0..self.rows {
            if self.basis[i] < self.artificial_start {
                continue;
            }
            let col = (0..self.artificial_start)
                .map(|j| (j, self.at(i, j).abs()))
                .filter(|&(_, a)| a > opts.pivot_tol)
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
            match col {
                Some((j, _)) => self.pivot(i, j),
                None => redundant.push(i),
            }
        }
        if redundant.is_empty() {
            return;
        }
        let w = self.width();
        let mut data = Vec::with_capacity(self.data.len());
        let mut basis = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            if !redundant.contains(&i) {
                data.extend_from_slice(&self.data[i * w..(i + 1) * w]);
                basis.push(self.basis[i]);
            }
        }
        self.rows = basis.len();
        self.data = data;
        self.basis = basis;
    }
}
