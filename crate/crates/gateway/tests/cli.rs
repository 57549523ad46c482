use std::path::Path;
use std::process::{Command, Output};

use h4_core::codec::{weighted_code_length, CodeTable, SymbolFrequencyTable};
use h4_core::config::Config;
use h4_core::experiment::{SessionStore, METRICS_FILE};

fn h4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h4")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = h4(args);
    assert!(out.status.success(), "h4 {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_codes_writes_a_loadable_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("codes.tsv");
    ok(&["gen-codes", "--out", p(&out)]);
    let table = CodeTable::load(&out).unwrap();
    assert_eq!(table, Config::default().code_table().unwrap());

    // stdout when no --out
    assert_eq!(ok(&["gen-codes"]), table.to_text());
}

#[test]
fn kspc_prints_the_weighted_code_length() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("codes.tsv");
    let freqs = dir.path().join("freqs.tsv");
    let config = Config::default();
    std::fs::write(&table, config.code_table().unwrap().to_text()).unwrap();
    std::fs::write(&freqs, config.frequency_table().unwrap().to_text()).unwrap();

    let printed: f64 = ok(&["kspc", "--table", p(&table), "--freqs", p(&freqs)]).trim().parse().unwrap();
    let expected =
        weighted_code_length(&CodeTable::load(&table).unwrap(), &SymbolFrequencyTable::load(&freqs).unwrap()).unwrap();
    assert!((printed - expected).abs() < 1e-12, "{printed} vs {expected}");

    let unweighted: f64 = ok(&["kspc", "--mode", "unweighted"]).trim().parse().unwrap();
    assert!(unweighted > printed);
}

#[test]
fn config_file_changes_the_symbol_set() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("h4.toml");
    std::fs::write(&config, "alphabet = \"etao\"\n[commands]\nbksp = 0.0\nenter = 0.0\n").unwrap();
    let text = ok(&["--config", p(&config), "gen-codes"]);
    assert_eq!(CodeTable::parse(&text).unwrap().len(), 5);
}

#[test]
fn schedule_simulate_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("schedule.json");
    let store = dir.path().join("session");
    let table = dir.path().join("codes.tsv");
    let report = dir.path().join("report.json");
    let plot = dir.path().join("plot.csv");

    ok(&["schedule", "--participants", "3", "--blocks", "2", "--per-block", "2", "--out", p(&schedule)]);
    ok(&["gen-codes", "--out", p(&table)]);
    ok(&["simulate", "--schedule", p(&schedule), "--table", p(&table), "--store", p(&store)]);

    let stored = SessionStore::load(&store).unwrap();
    assert_eq!(stored.len(), 3 * 3 * 2 * 2);
    let csv = std::fs::read_to_string(store.join(METRICS_FILE)).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|c| *c == "efficiency").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), stored.len());
    for row in rows {
        assert_eq!(row.split(',').nth(col).unwrap().parse::<f64>().unwrap(), 100.0, "{row}");
    }

    let text = ok(&[
        "analyze",
        "--store",
        p(&store),
        "--verify",
        p(&table),
        "--json",
        p(&report),
        "--plot-csv",
        p(&plot),
    ]);
    assert!(!text.is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["trials"], stored.len());
    assert!(std::fs::read_to_string(&plot).unwrap().starts_with("device,metric,series,block,value\n"));
}

#[test]
fn verify_rejects_a_foreign_table() {
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("schedule.json");
    let store = dir.path().join("session");
    let other = dir.path().join("other.tsv");
    ok(&["schedule", "--participants", "3", "--blocks", "1", "--per-block", "1", "--out", p(&schedule)]);
    ok(&["simulate", "--schedule", p(&schedule), "--store", p(&store)]);
    std::fs::write(&other, include_str!("../../core/data/partial.tsv")).unwrap();

    let out = h4(&["analyze", "--store", p(&store), "--verify", p(&other)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["gen-codes", "kspc", "schedule", "simulate", "analyze", "serve"] {
        let text = ok(&[sub, "--help"]);
        assert!(text.contains("Usage: h4"), "{sub}: {text}");
    }
}

#[test]
fn bad_invocations_fail() {
    for args in [
        &["nope"][..],
        &["kspc", "--mode", "sideways"],
        &["simulate"],
        &["simulate", "--schedule", "/nonexistent/schedule.json"],
        &["schedule", "--participants", "4"],
    ] {
        assert!(!h4(args).status.success(), "{args:?}");
    }
}
