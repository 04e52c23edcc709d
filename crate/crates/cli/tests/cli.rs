use std::path::Path;
use std::process::{Command, Output};

use fuzzport_cli::args::{EXIT_BUDGET, EXIT_THRESHOLD, EXIT_VALIDATION};
use fuzzport_cli::report::CSV_HEADER;
use fuzzport_cli::{load_instance, paper_table1, write_instance};
use fuzzport_core::{FuzzyRandomReturn, PortfolioInstance, RandomFactor};
use proptest::prelude::*;

fn fuzzport(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzport")).args(args).output().unwrap()
}

fn write_json(dir: &Path, name: &str, json: &serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(json).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn fixture_json() -> serde_json::Value {
    serde_json::from_str(&write_instance(&paper_table1())).unwrap()
}

#[test]
fn default_run_prints_all_levels() {
    let out = fuzzport(&[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for level in ["0.1", "0.4", "0.7", "0.9"] {
        assert!(text.contains(level), "{text}");
    }
}

#[test]
fn invalid_level_exits_with_validation_code() {
    let out = fuzzport(&["--levels", "1.5"]);
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION.into()));
}

#[test]
fn malformed_instance_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut json = fixture_json();
    json["assets"][2]["beta"] = (-1.0).into();
    let path = write_json(dir.path(), "bad.json", &json);
    let out = fuzzport(&["--instance", &path]);
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION.into()));
    assert!(String::from_utf8_lossy(&out.stderr).contains("assets[2].beta"));
}

#[test]
fn budget_infeasible_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut json = fixture_json();
    json["total_fund"] = 400.0.into();
    let path = write_json(dir.path(), "budget.json", &json);
    let out = fuzzport(&["--instance", &path]);
    assert_eq!(out.status.code(), Some(EXIT_BUDGET.into()));
}

#[test]
fn enforced_floor_exit_code() {
    let out = fuzzport(&["--levels", "0.7", "--enforce-threshold"]);
    assert_eq!(out.status.code(), Some(EXIT_THRESHOLD.into()));
    let out = fuzzport(&["--levels", "0.1", "--enforce-threshold"]);
    assert!(out.status.success());
}

#[test]
fn csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = fuzzport(&["--levels", "0.1,0.9", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][10], "60;0;20;60;60");
    assert_eq!(&rows[1][8], "false");
}

#[test]
fn search_rows_never_beat_the_oracle() {
    let out = fuzzport(&["--solver", "ica", "--seeds", "1..5", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    for row in rows {
        assert_eq!(row["solver"], "ica");
        let objective = row["objective"].as_f64().unwrap();
        let oracle = row["oracle_objective"].as_f64().unwrap();
        assert!(objective <= oracle + 1e-9);
        assert!(row["budget_residual"].as_f64().unwrap().abs() <= 1e-6);
    }
}

#[test]
fn reproduce_json_lists_comparisons() {
    let out = fuzzport(&["reproduce-paper", "--seeds", "7", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let comparisons = json["comparisons"].as_array().unwrap();
    assert_eq!(comparisons.len(), 4);
    assert!(comparisons.iter().all(|c| c["allocation_matches"] == true));
}

fn arb_instance() -> impl Strategy<Value = PortfolioInstance> {
    let ret = (0.0..10.0f64, 0.0..2.0f64, 0.0..3.0f64, 0.0..2.0f64, 0.0..2.0f64)
        .prop_map(|(r0, w, r2, b, g)| FuzzyRandomReturn::new(r0, r0 + w, r2, b, g).unwrap());
    (1usize..6).prop_flat_map(move |n| {
        (
            prop::collection::vec(ret.clone(), n),
            ret.clone(),
            prop::collection::vec(1.0..100.0f64, n),
            0.05..1.0f64,
            -1.0..1.0f64,
            0.1..3.0f64,
        )
            .prop_map(|(assets, target, upper, share, mean, sd)| {
                let fund = share * upper.iter().sum::<f64>();
                PortfolioInstance::new(assets, target, fund, upper, RandomFactor::new(mean, sd).unwrap())
                    .unwrap()
            })
    })
}

proptest! {
    #[test]
    fn instance_files_round_trip(p in arb_instance()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        std::fs::write(&path, write_instance(&p)).unwrap();
        prop_assert_eq!(load_instance(&path).unwrap(), p);
    }
}
