//! Synthetic workloads for the benchmarks.

use fuzzydea::{Attribute, Column, ColumnKind, Dataset, DmuRecord, TriangularFuzzyNumber};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `dmus` units with `m` crisp inputs and `n` outputs, the last output fuzzy.
pub fn synthetic_dataset(dmus: usize, m: usize, n: usize, seed: u64) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let records = (0..dmus)
        .map(|k| {
            let inputs = (0..m).map(|_| Attribute::Crisp(rng.gen_range(1.0..9.0))).collect();
            let outputs = (0..n)
                .map(|j| {
                    if j + 1 == n {
                        let s: f64 = rng.gen_range(2.0..8.0);
                        Attribute::Fuzzy(TriangularFuzzyNumber::new(s - 1.0, s, s + 1.0).unwrap())
                    } else {
                        Attribute::Crisp(rng.gen_range(1.0..9.0))
                    }
                })
                .collect();
            DmuRecord {
                name: format!("D{k}"),
                group: "synthetic".into(),
                inputs,
                outputs,
            }
        })
        .collect();
    let inputs = (0..m).map(|i| Column::crisp(format!("x{i}"))).collect();
    let outputs = (0..n)
        .map(|j| {
            let kind = if j + 1 == n { ColumnKind::Fuzzy3 } else { ColumnKind::Crisp };
            Column::new(format!("y{j}"), kind)
        })
        .collect();
    Dataset::new("synthetic", inputs, outputs, records).expect("generated data is valid")
}
