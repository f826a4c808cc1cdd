use std::path::Path;
use std::process::{Command, Output};
use std::str::FromStr;

use dv5_core::certify::Certificate;
use dv5_core::defining::{DefiningVector, TypeSignature};
use dv5_core::tables::{BUILTIN_TABLE1, BUILTIN_TABLES, BUILTIN_TABLE_TYPES};
use serde_json::Value;

const TABLE2_ROW1: &str = "2212121201212112211111121111112";

fn dv5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dv5"))
        .args(args)
        .env_remove("DV5_FIXTURE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn analyze_all_ones_is_self_orthogonal() {
    let out = dv5(&["analyze", &"1".repeat(31), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 31);
    assert_eq!(v["k"], 5);
    assert_eq!(v["d"], 16);
    assert_eq!(v["h"], 5);
    assert_eq!(v["is_so"], true);
    assert_eq!(v["is_lcd"], false);
}

#[test]
fn analyze_printed_row() {
    let out = dv5(&["analyze", TABLE2_ROW1, "--format", "json"]);
    let v = json(&out);
    assert_eq!(
        (v["n"].as_u64(), v["d"].as_u64(), v["h"].as_u64()),
        (Some(41), Some(20), Some(3))
    );
}

#[test]
fn comma_and_digit_forms_agree() {
    let commas: Vec<String> = TABLE2_ROW1.chars().map(String::from).collect();
    let a = dv5(&["analyze", TABLE2_ROW1]);
    let b = dv5(&["analyze", &commas.join(",")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_report_position() {
    let out = dv5(&["analyze", "11111111111111x1111111111111111"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position 14"), "{err}");
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(dv5(&["analyze", "111", "--bogus"]).status.code(), Some(1));
    assert_eq!(dv5(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dv5(&["certify"]).status.code(), Some(1));
    assert_eq!(dv5(&["--help"]).status.code(), Some(0));
}

#[test]
fn certify_44_finds_two_classes() {
    let out = dv5(&["certify", "--n", "44", "--d", "22", "--no-witness"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = Certificate::from_json(&stdout(&out)).unwrap();
    assert!(cert.lcd_nonexistent);
    let classes: usize = cert.strata.iter().map(|s| s.classes.len()).sum();
    assert_eq!(classes, 2);
}

#[test]
fn certificate_json_has_stable_fields() {
    let out = dv5(&["certify", "--n", "45"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in [
        "n",
        "k",
        "d",
        "s",
        "t",
        "strata",
        "min_h",
        "lcd_nonexistent",
        "witness",
        "paper_diffs",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["d"], 22);
    assert_eq!(v["min_h"], 1);
    for stratum in v["strata"].as_array().unwrap() {
        for key in ["description", "method", "min_h", "classes"] {
            assert!(stratum.get(key).is_some(), "stratum missing {key}");
        }
        for class in stratum["classes"].as_array().unwrap() {
            for key in [
                "representative",
                "h",
                "weight_enumerator",
                "member_count",
                "orbit_size",
            ] {
                assert!(class.get(key).is_some(), "class missing {key}");
            }
        }
    }
    let w = &v["witness"];
    assert_eq!(w["d"], 21);
    let l = DefiningVector::parse(w["defining_vector"].as_str().unwrap()).unwrap();
    assert!(dv5_core::certify::validate_witness(&l, 21, true));
}

#[test]
fn certify_intermediate_distance() {
    let out = dv5(&["certify", "--n", "47", "--d", "23", "--no-witness"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["lcd_nonexistent"], true);
}

#[test]
fn exhausted_budget_exits_two() {
    let out = dv5(&["certify", "--n", "45", "--no-witness", "--max-nodes", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let cert = Certificate::from_json(&stdout(&out)).unwrap();
    assert!(!cert.complete);
    assert!(!cert.lcd_nonexistent);
}

#[test]
fn table_one_lists_all_residues() {
    let out = dv5(&["table", "--id", "1", "--s", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 32);
}

#[test]
fn table_seven_has_seven_classes() {
    let out = dv5(&["table", "--id", "7", "--s", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["class_count"], 7);
}

#[test]
fn table_three_shifts_with_s() {
    let one = dv5(&["table", "--id", "3", "--s", "2", "--format", "json"]);
    let two = dv5(&["table", "--id", "3", "--s", "3", "--format", "json"]);
    // the printed table lists fewer classes than exist
    assert_eq!(one.status.code(), Some(3));
    let (a, b) = (json(&one), json(&two));
    let a = a[0]["classes"].as_array().unwrap();
    let b = b[0]["classes"].as_array().unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x["representative"], y["representative"]);
        let wx: Vec<(u64, u64)> = parse_compact(x["weight_enumerator_at_s"].as_str().unwrap());
        let wy: Vec<(u64, u64)> = parse_compact(y["weight_enumerator_at_s"].as_str().unwrap());
        let shifted: Vec<(u64, u64)> = wx.iter().map(|&(w, c)| (w + 16, c)).collect();
        assert_eq!(shifted, wy);
    }
}

fn parse_compact(text: &str) -> Vec<(u64, u64)> {
    dv5_core::analysis::WeightEnumerator::from_compact(text)
        .unwrap()
        .terms
        .into_iter()
        .filter(|&(w, _)| w > 0)
        .collect()
}

fn write_fixtures(dir: &Path, tables: &str) {
    std::fs::write(dir.join("tables.csv"), tables).unwrap();
    std::fs::write(dir.join("table_types.csv"), BUILTIN_TABLE_TYPES).unwrap();
    std::fs::write(dir.join("table1.csv"), BUILTIN_TABLE1).unwrap();
}

#[test]
fn fixture_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path(), BUILTIN_TABLES);
    let builtin = dv5(&["table", "--id", "t13", "--format", "json"]);
    let copied = Command::new(env!("CARGO_BIN_EXE_dv5"))
        .args(["table", "--id", "t13", "--format", "json"])
        .env("DV5_FIXTURE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(builtin.status.code(), Some(0));
    assert_eq!(copied.status.code(), Some(0));
    assert_eq!(builtin.stdout, copied.stdout);

    let edited: String = BUILTIN_TABLES
        .lines()
        .map(|l| {
            if l.starts_with("t13,1,") {
                l.replace(",3,1+23", ",2,1+23")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    write_fixtures(dir.path(), &edited);
    let out = dv5(&[
        "table",
        "--id",
        "t13",
        "--format",
        "json",
        "--fixtures",
        dir.path().to_str().unwrap(),
    ]);
    let v = json(&out);
    let kinds: Vec<&str> = v[0]["errata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["hull-mismatch"]);

    let empty = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dv5"))
        .args(["table", "--id", "t13"])
        .env("DV5_FIXTURE_DIR", empty.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dv5.conf");
    std::fs::write(&cfg, "# defaults\nformat = csv\nseed = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = dv5(&["--config", cfg, "witness", "--n", "41"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n,d,seed,found"), "{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("41,19,3,true,"));
    let out = dv5(&[
        "--config", cfg, "witness", "--n", "41", "--format", "json", "--seed", "5",
    ]);
    assert_eq!(json(&out)["seed"], 5);

    std::fs::write(dir.path().join("bad.conf"), "colour = red\n").unwrap();
    let out = dv5(&[
        "--config",
        dir.path().join("bad.conf").to_str().unwrap(),
        "analyze",
        "111",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("cert{i}.json"));
            let out = dv5(&[
                "certify",
                "--n",
                "41",
                "--seed",
                "9",
                "-o",
                path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0));
            assert!(out.stdout.is_empty());
            std::fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let cert = Certificate::from_json(std::str::from_utf8(&runs[0]).unwrap()).unwrap();
    assert_eq!(
        cert.to_json().trim_end(),
        std::str::from_utf8(&runs[0]).unwrap().trim_end()
    );
}

#[test]
fn enumerate_csv_round_trips() {
    let out = dv5(&["enumerate", "--n", "16", "--d", "8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("defining_vector,type_signature"));
    let mut count = 0;
    for line in lines {
        let (vector, sig) = line.split_once(',').unwrap();
        let l = DefiningVector::parse(vector).unwrap();
        assert_eq!(TypeSignature::from_str(sig).unwrap(), TypeSignature::of(&l));
        assert_eq!(l.to_text(), vector);
        count += 1;
    }
    let summary = json(&dv5(&[
        "enumerate",
        "--n",
        "16",
        "--d",
        "8",
        "--format",
        "json",
    ]));
    assert_eq!(summary["total"].as_u64(), Some(count));
}

#[test]
fn enumerate_edge_cases() {
    let none = json(&dv5(&[
        "enumerate",
        "--n",
        "13",
        "--d",
        "6",
        "--format",
        "json",
    ]));
    assert_eq!(none["total"], 0);
    let simplex = json(&dv5(&[
        "enumerate",
        "--n",
        "31",
        "--d",
        "16",
        "--format",
        "json",
    ]));
    assert_eq!(simplex["vectors"], serde_json::json!(["1".repeat(31)]));
}

#[test]
fn classify_csv_round_trips() {
    let out = dv5(&[
        "classify",
        "--n",
        "44",
        "--d",
        "22",
        "--max-entry",
        "2",
        "--zero-entry",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        let l = DefiningVector::parse(fields[1]).unwrap();
        let profile = dv5_core::analysis::CodeProfile::of(&l);
        assert_eq!(fields[4], profile.h.to_string());
        assert_eq!(fields[5], profile.weight_enumerator.to_compact());
    }
}

#[test]
fn witness_not_found_is_not_nonexistence() {
    let out = dv5(&[
        "witness",
        "--n",
        "47",
        "--d",
        "23",
        "--restarts",
        "1",
        "--steps",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("not a proof of nonexistence"));
}
