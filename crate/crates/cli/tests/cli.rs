use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn fuzzydea(args: &[&str]) -> Output {
    fuzzydea_env(args, &[])
}

fn fuzzydea_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fuzzydea"));
    cmd.args(args).env_remove("FUZZYDEA_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn normalized() -> [String; 4] {
    [
        "--data".into(),
        data("oil_normalized.csv").display().to_string(),
        "--schema".into(),
        data("oil_normalized.schema.json").display().to_string(),
    ]
}

/// `command`, then the input flags, then `extra`.
fn with<'a>(command: &'a str, base: &'a [String], extra: &[&'a str]) -> Vec<&'a str> {
    std::iter::once(command)
        .chain(base.iter().map(String::as_str))
        .chain(extra.iter().copied())
        .collect()
}

#[test]
fn normalize_matches_reference_table_except_hpcl_nci() {
    let raw = data("oil_raw.csv").display().to_string();
    let schema = data("oil_raw.schema.json").display().to_string();
    let out = fuzzydea(&["normalize", "--data", &raw, "--schema", &schema]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let reference = std::fs::read_to_string(data("oil_normalized.csv")).unwrap();
    let reference: Vec<&str> = reference.lines().collect();
    let text = stdout(&out);
    let got: Vec<&str> = text.lines().collect();
    assert_eq!(got.len(), reference.len());
    assert_eq!(got[0], reference[0]);
    for (g, p) in got.iter().zip(&reference).skip(1) {
        if g.starts_with("HPCL,") {
            assert_eq!(*g, "HPCL,large,1.73,4.26,8.00,9.00,9.00,3.09");
            continue;
        }
        let g: Vec<f64> = g.split(',').skip(2).map(|v| v.parse().unwrap()).collect();
        let p: Vec<f64> = p.split(',').skip(2).map(|v| v.parse().unwrap()).collect();
        assert_eq!(g, p);
    }
}

#[test]
fn normalize_writes_files_that_parse_back() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("norm.csv");
    let schema_out = dir.path().join("norm.schema.json");
    let raw = data("oil_raw.csv").display().to_string();
    let schema = data("oil_raw.schema.json").display().to_string();
    let out = fuzzydea(&[
        "normalize", "--data", &raw, "--schema", &schema, "--precision", "full",
        "--out", csv.to_str().unwrap(), "--schema-out", schema_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());

    let scored = fuzzydea(&[
        "efficiency", "--data", csv.to_str().unwrap(), "--schema", schema_out.to_str().unwrap(),
        "--approach", "credibility", "--format", "json",
    ]);
    let direct = fuzzydea(&[
        "efficiency", "--data", &raw, "--schema", &schema, "--normalize", "--approach", "credibility", "--format", "json",
    ]);
    assert_eq!(scored.status.code(), Some(0), "{}", stderr(&scored));
    assert_eq!(stdout(&scored), stdout(&direct));
}

#[test]
fn missing_schema_is_a_usage_error() {
    let raw = data("oil_raw.csv").display().to_string();
    let out = fuzzydea(&["normalize", "--data", &raw, "--schema", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("schema not found"), "{}", stderr(&out));
}

#[test]
fn schema_without_outputs_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let schema = dir.path().join("s.json");
    std::fs::write(&schema, r#"{"name": {"role": "id"}, "x": {"role": "input"}}"#).unwrap();
    let toy = data("toy.csv").display().to_string();
    let out = fuzzydea(&["normalize", "--data", &toy, "--schema", schema.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no output columns"), "{}", stderr(&out));
}

#[test]
fn crisp_toy_scores() {
    let toy = data("toy.csv").display().to_string();
    let schema = data("toy.schema.json").display().to_string();
    let out = fuzzydea(&["efficiency", "--data", &toy, "--schema", &schema, "--approach", "crisp", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "approach,group,dmu,alpha=1,rank\ncrisp,all,A,1.0000,1\ncrisp,all,B,0.5000,2\n");
}

#[test]
fn alphacut_at_one_collapses_to_the_crisp_score() {
    let base = normalized();
    let cut = fuzzydea(&with("efficiency", &base, &["--approach", "alphacut", "--alpha", "1", "--format", "csv"]));
    let crisp = fuzzydea(&with("efficiency", &base, &["--approach", "crisp", "--format", "csv"]));
    assert_eq!(cut.status.code(), Some(0), "{}", stderr(&cut));
    let crisp_text = stdout(&crisp);
    for (c, k) in stdout(&cut).lines().skip(1).zip(crisp_text.lines().skip(1)) {
        let c: Vec<&str> = c.split(',').collect();
        let k: Vec<&str> = k.split(',').collect();
        let lower = c[3].trim_start_matches("\"[");
        let upper = c[4].trim_end_matches("]\"");
        assert_eq!((lower, upper), (k[3], k[3]), "{c:?} vs {k:?}");
    }
}

#[test]
fn grid_validation_exits_with_usage_code() {
    let base = normalized();
    for alpha in ["", "0.3", "0.9,0.8", "1..0.5:0.1"] {
        let out = fuzzydea(&with("efficiency", &base, &["--approach", "credibility", "--alpha", alpha]));
        assert_eq!(out.status.code(), Some(2), "alpha {alpha:?}: {}", stderr(&out));
    }
    let out = fuzzydea(&with("report", &base, &["--alpha", ""]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_cell_is_a_data_error_with_location() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "name,x,y\nA,2,1\nB,-4,1\n").unwrap();
    let schema = data("toy.schema.json").display().to_string();
    let out = fuzzydea(&["efficiency", "--data", csv.to_str().unwrap(), "--schema", &schema, "--approach", "crisp"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("line 3") && err.contains("column 'x'"), "{err}");
}

#[test]
fn infeasible_cell_is_a_solver_error_naming_it() {
    let base = normalized();
    let out = fuzzydea(&with("efficiency", &base, &["--approach", "credibility", "--pairing", "strict"]));
    assert_eq!(out.status.code(), Some(4));
    let err = stderr(&out);
    assert!(err.contains("BPCL") && err.contains("alpha=0.6"), "{err}");
}

#[test]
fn unfuzzified_columns_need_normalize() {
    let raw = data("oil_raw.csv").display().to_string();
    let schema = data("oil_raw.schema.json").display().to_string();
    let base = ["--data", raw.as_str(), "--schema", schema.as_str()];
    let mut args = vec!["efficiency"];
    args.extend(base);
    args.extend(["--approach", "possibility"]);
    let out = fuzzydea(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NCI"));
    args.push("--normalize");
    assert_eq!(fuzzydea(&args).status.code(), Some(0));
}

#[test]
fn report_is_deterministic_and_covers_every_approach() {
    let base = normalized();
    for format in ["markdown", "csv", "json"] {
        let a = fuzzydea(&with("report", &base, &["--format", format]));
        let b = fuzzydea(&with("report", &base, &["--format", format]));
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{format} output differs between runs");
    }
    let md = stdout(&fuzzydea(&with("report", &base, &[])));
    for heading in ["## credibility", "## alphacut", "## possibility", "### large", "### small"] {
        assert!(md.contains(heading), "missing {heading}");
    }
    assert!(md.contains("| DMU | alpha=0.5 | alpha=0.6 | alpha=0.7 | alpha=0.8 | alpha=0.9 | alpha=1 | Rank |"));
}

#[test]
fn json_records_are_keyed_by_group_dmu_approach_alpha() {
    let base = normalized();
    let out = fuzzydea(&with("report", &base, &["--format", "json", "--alpha", "0.5,1"]));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 3 * 9 * 2);
    let mut keys: Vec<String> = rows
        .iter()
        .map(|r| format!("{}/{}/{}/{}", r["group"], r["dmu"], r["approach"], r["alpha"]))
        .collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), rows.len());
    let cut = rows.iter().find(|r| r["approach"] == "alphacut").unwrap();
    assert!(cut["lower"].is_f64() && cut["upper"].is_f64() && cut.get("score").is_none());
}

#[test]
fn tolerance_override_from_environment() {
    let toy = data("toy.csv").display().to_string();
    let schema = data("toy.schema.json").display().to_string();
    let args = ["efficiency", "--data", toy.as_str(), "--schema", schema.as_str(), "--approach", "crisp"];
    let ok = fuzzydea_env(&args, &[("FUZZYDEA_TOL", "feasibility=1e-8,pivot=1e-10")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert_eq!(stdout(&ok), stdout(&fuzzydea(&args)));
    let bad = fuzzydea_env(&args, &[("FUZZYDEA_TOL", "fast")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("FUZZYDEA_TOL"));
}
