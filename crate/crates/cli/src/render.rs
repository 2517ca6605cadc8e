use fuzzydea::{Approach, ChancePairing, EfficiencyResult, Score};
use serde::Serialize;

/// Ranked results of one approach on one group.
pub struct Block {
    pub group: String,
    pub approach: Approach,
    pub alphas: Vec<f64>,
    pub results: Vec<EfficiencyResult>,
}

fn cell(score: &Score) -> String {
    match score {
        Score::Scalar(v) => format!("{v:.4}"),
        Score::Interval { lower, upper } => format!("[{lower:.4},{upper:.4}]"),
    }
}

fn alpha_label(a: f64) -> String {
    format!("alpha={a}")
}

fn rank_of(r: &EfficiencyResult) -> String {
    r.rank.map_or_else(String::new, |k| k.to_string())
}

pub fn markdown(title: &str, pairing: ChancePairing, blocks: &[Block]) -> String {
    let mut out = format!("# {title}\n\nPairing: {}. Scores rounded to 4 decimals.\n", pairing_name(pairing));
    let mut last_approach = None;
    for b in blocks {
        if last_approach != Some(b.approach) {
            out.push_str(&format!("\n## {}\n", b.approach));
            last_approach = Some(b.approach);
        }
        out.push_str(&format!("\n### {}\n\n| DMU |", b.group));
        for a in &b.alphas {
            out.push_str(&format!(" {} |", alpha_label(*a)));
        }
        out.push_str(" Rank |\n|---|");
        out.push_str(&"---:|".repeat(b.alphas.len() + 1));
        out.push('\n');
        for r in &b.results {
            out.push_str(&format!("| {} |", r.dmu));
            for level in &r.levels {
                out.push_str(&format!(" {} |", cell(&level.score)));
            }
            out.push_str(&format!(" {} |\n", rank_of(r)));
        }
    }
    out
}

pub fn csv(blocks: &[Block]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let alphas = blocks.first().map(|b| b.alphas.clone()).unwrap_or_default();
    let mut header = vec!["approach".to_owned(), "group".to_owned(), "dmu".to_owned()];
    header.extend(alphas.iter().map(|a| alpha_label(*a)));
    header.push("rank".to_owned());
    w.write_record(&header)?;
    for b in blocks {
        for r in &b.results {
            let mut row = vec![b.approach.to_string(), b.group.clone(), r.dmu.clone()];
            row.extend(r.levels.iter().map(|l| cell(&l.score)));
            row.push(rank_of(r));
            w.write_record(&row)?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Serialize)]
struct JsonReport<'a> {
    pairing: &'static str,
    results: Vec<JsonRow<'a>>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    group: &'a str,
    dmu: &'a str,
    approach: Approach,
    alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    rank: Option<usize>,
}

pub fn json(pairing: ChancePairing, blocks: &[Block]) -> anyhow::Result<String> {
    let mut results = Vec::new();
    for b in blocks {
        for r in &b.results {
            for level in &r.levels {
                let (score, lower, upper) = match level.score {
                    Score::Scalar(v) => (Some(v), None, None),
                    Score::Interval { lower, upper } => (None, Some(lower), Some(upper)),
                };
                results.push(JsonRow {
                    group: &b.group,
                    dmu: &r.dmu,
                    approach: b.approach,
                    alpha: level.alpha,
                    score,
                    lower,
                    upper,
                    rank: r.rank,
                });
            }
        }
    }
    let report = JsonReport { pairing: pairing_name(pairing), results };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

fn pairing_name(p: ChancePairing) -> &'static str {
    match p {
        ChancePairing::Interval => "interval",
        ChancePairing::Strict => "strict",
    }
}
