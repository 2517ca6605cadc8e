//! Strategies and brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use fuzzydea::lp::{LinearProgram, Relation};
use fuzzydea::{solve_sbm, Attribute, Column, ColumnKind, Dataset, DmuRecord, TriangularFuzzyNumber};
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Every constraint of the program as `(a, relation, b)`, including `x_k >= 0`.
fn all_rows(lp: &LinearProgram) -> Vec<(Vec<f64>, Relation, f64)> {
    let mut rows: Vec<_> = lp
        .constraints
        .iter()
        .map(|c| (c.coefficients.clone(), c.relation, c.rhs))
        .collect();
    for k in 0..lp.num_vars {
        let mut e = vec![0.0; lp.num_vars];
        e[k] = 1.0;
        rows.push((e, Relation::Ge, lp.lower_bounds[k]));
    }
    rows
}

/// Minimum objective over all vertices, or `None` when no vertex is feasible.
pub fn vertex_optimum(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars;
    let rows = all_rows(lp);
    let mut best: Option<f64> = None;
    for active in (0..rows.len()).combinations(n) {
        let a = DMatrix::from_fn(n, n, |r, c| rows[active[r]].0[c]);
        let b = DVector::from_fn(n, |r, _| rows[active[r]].2);
        let lu = a.lu();
        if lu.determinant().abs() < 1e-9 {
            continue;
        }
        let Some(x) = lu.solve(&b) else { continue };
        let x: Vec<f64> = x.iter().copied().collect();
        if lp.max_violation(&x) > 1e-9 {
            continue;
        }
        let v = lp.objective_at(&x);
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    best
}

pub fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![3 => Just(Relation::Le), 2 => Just(Relation::Ge), 1 => Just(Relation::Eq)]
}

/// Up to 6 variables, integer data, and `sum x <= 10` so every feasible LP is bounded.
pub fn bounded_lp() -> impl Strategy<Value = LinearProgram> {
    (1usize..=6).prop_flat_map(|n| {
        let row = (prop::collection::vec(-5i32..=5, n), relation(), -5i32..=15);
        (prop::collection::vec(-9i32..=9, n), prop::collection::vec(row, 0..=4)).prop_map(move |(c, rows)| {
            let mut lp = LinearProgram::new(c.into_iter().map(f64::from).collect());
            lp.add_constraint(vec![1.0; n], Relation::Le, 10.0);
            for (a, rel, b) in rows {
                lp.add_constraint(a.into_iter().map(f64::from).collect(), rel, f64::from(b));
            }
            lp
        })
    })
}

#[derive(Debug)]
pub struct Crisp {
    pub x: Vec<Vec<f64>>, // x[o][i]
    pub y: Vec<Vec<f64>>, // y[o][j]
}

impl Crisp {
    pub fn dataset(&self) -> Dataset {
        let m = self.x[0].len();
        let n = self.y[0].len();
        let names: Vec<String> = (0..self.x.len()).map(|o| format!("D{o}")).collect();
        let ins: Vec<String> = (0..m).map(|i| format!("x{i}")).collect();
        let outs: Vec<String> = (0..n).map(|j| format!("y{j}")).collect();
        let ins: Vec<&str> = ins.iter().map(String::as_str).collect();
        let outs: Vec<&str> = outs.iter().map(String::as_str).collect();
        let rows: Vec<(&str, &[f64], &[f64])> = (0..self.x.len())
            .map(|o| (names[o].as_str(), self.x[o].as_slice(), self.y[o].as_slice()))
            .collect();
        Dataset::crisp("g", &ins, &outs, &rows).unwrap()
    }

    /// rho(lambda) with slacks implied by the balance equations.
    pub fn rho(&self, z: usize, lambda: &[f64]) -> f64 {
        let (m, n) = (self.x[0].len(), self.y[0].len());
        let comp = |i: usize, v: &Vec<Vec<f64>>| -> f64 { lambda.iter().zip(v).map(|(l, row)| l * row[i]).sum() };
        let num: f64 = (0..m).map(|i| comp(i, &self.x) / self.x[z][i]).sum::<f64>() / m as f64;
        let den: f64 = 1.0 + (0..n).map(|j| comp(j, &self.y) / self.y[z][j] - 1.0).sum::<f64>() / n as f64;
        num / den
    }

    /// Rows `a . lambda <= b` describing {lambda >= 0, X lambda <= x_z, Y lambda >= y_z}.
    fn polytope(&self, z: usize) -> Vec<(Vec<f64>, f64)> {
        let r = self.x.len();
        let mut rows = Vec::new();
        for i in 0..self.x[0].len() {
            rows.push(((0..r).map(|o| self.x[o][i]).collect(), self.x[z][i]));
        }
        for j in 0..self.y[0].len() {
            rows.push(((0..r).map(|o| -self.y[o][j]).collect(), -self.y[z][j]));
        }
        for o in 0..r {
            let mut e = vec![0.0; r];
            e[o] = -1.0;
            rows.push((e, 0.0));
        }
        rows
    }

    pub fn oracle(&self, z: usize) -> f64 {
        let r = self.x.len();
        let rows = self.polytope(z);
        let mut best = f64::INFINITY;
        for active in (0..rows.len()).combinations(r) {
            let a = DMatrix::from_fn(r, r, |p, c| rows[active[p]].0[c]);
            let b = DVector::from_fn(r, |p, _| rows[active[p]].1);
            let lu = a.lu();
            if lu.determinant().abs() < 1e-10 {
                continue;
            }
            let Some(l) = lu.solve(&b) else { continue };
            let l: Vec<f64> = l.iter().copied().collect();
            let feasible = rows
                .iter()
                .all(|(a, b)| a.iter().zip(&l).map(|(p, q)| p * q).sum::<f64>() <= b + 1e-9);
            if feasible {
                best = best.min(self.rho(z, &l));
            }
        }
        best
    }
}

pub fn crisp_data() -> impl Strategy<Value = Crisp> {
    (2usize..=3, 1usize..=2, 1usize..=2).prop_flat_map(|(r, m, n)| {
        let x = prop::collection::vec(prop::collection::vec(1.0f64..10.0, m), r);
        let y = prop::collection::vec(prop::collection::vec(1.0f64..10.0, n), r);
        (x, y).prop_map(|(x, y)| Crisp { x, y })
    })
}

pub fn attribute() -> impl Strategy<Value = Attribute> + Clone {
    prop_oneof![
        (1.0f64..10.0).prop_map(Attribute::Crisp),
        (2.0f64..10.0, 0.0f64..1.5, 0.0f64..1.5)
            .prop_map(|(s, a, b)| Attribute::Fuzzy(TriangularFuzzyNumber::new(s - a, s, s + b).unwrap())),
    ]
}

pub fn dataset_with(values: impl Strategy<Value = Attribute> + Clone) -> impl Strategy<Value = Dataset> {
    (2usize..=5, 1usize..=2, 1usize..=2).prop_flat_map(move |(r, m, n)| {
        let row = (prop::collection::vec(values.clone(), m), prop::collection::vec(values.clone(), n));
        prop::collection::vec(row, r).prop_map(move |rows| {
            let records = rows
                .into_iter()
                .enumerate()
                .map(|(k, (inputs, outputs))| DmuRecord {
                    name: format!("D{k}"),
                    group: "g".into(),
                    inputs,
                    outputs,
                })
                .collect();
            let col = |p: &str, k| Column::new(format!("{p}{k}"), ColumnKind::Fuzzy3);
            Dataset::new("g", (0..m).map(|i| col("x", i)).collect(), (0..n).map(|j| col("y", j)).collect(), records)
                .unwrap()
        })
    })
}

pub fn fuzzy_dataset() -> impl Strategy<Value = Dataset> {
    dataset_with(attribute())
}

pub fn crisp_dataset() -> impl Strategy<Value = Dataset> {
    dataset_with((1.0f64..10.0).prop_map(Attribute::Crisp))
}

/// Triangular numbers with `r < s < u`.
pub fn strict_tfn() -> impl Strategy<Value = TriangularFuzzyNumber> {
    (-50.0f64..50.0, 0.01f64..10.0, 0.01f64..10.0)
        .prop_map(|(s, a, b)| TriangularFuzzyNumber::new(s - a, s, s + b).unwrap())
}

/// Largest score deviation between `ds` and its unit-rescaled copy.
pub fn units_deviation(data: &Crisp, kx: &[f64], ky: &[f64]) -> f64 {
    let scaled = Crisp {
        x: data.x.iter().map(|row| row.iter().zip(kx).map(|(v, k)| v * k).collect()).collect(),
        y: data.y.iter().map(|row| row.iter().zip(ky).map(|(v, k)| v * k).collect()).collect(),
    };
    let (a, b) = (data.dataset(), scaled.dataset());
    (0..a.len())
        .map(|z| (solve_sbm(&a, z).unwrap().efficiency - solve_sbm(&b, z).unwrap().efficiency).abs())
        .fold(0.0, f64::max)
}
