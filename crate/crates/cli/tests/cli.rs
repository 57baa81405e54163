use std::process::Command;

use cayleylab::verifier::{ClaimId, ClaimReport};
use cayleylab_cli::serialize::{report_json, scaling_csv};
use num_bigint::BigInt;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayleylab"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn diameter_of_c5_is_four() {
    let (code, out, _) = run(&["diameter", "--group", "cyclic:5", "--gens", "standard"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "4");
}

#[test]
fn diameter_json_and_csv() {
    let (code, out, _) = run(&["diameter", "--group", "cyclic:5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["diameter"], 4);
    assert_eq!(v["ball_sizes"], serde_json::json!([1, 2, 3, 4, 5]));
    let (_, out, _) = run(&["diameter", "--group", "sym:3", "--format", "csv"]);
    assert_eq!(out, "radius,ball_size\n0,1\n1,3\n2,6\n");
}

#[test]
fn non_generating_set_has_infinite_diameter() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.txt");
    std::fs::write(&path, "(0 1)\n").unwrap();
    let gens = format!("file:{}", path.display());
    let (code, out, _) = run(&["diameter", "--group", "sym:3", "--gens", &gens]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "infinite");
}

#[test]
fn verify_nilp2_on_q8_passes() {
    let (code, out, _) = run(&["verify", "--claim", "NILP2", "--group", "q8", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["claim"], "NILP2");
}

#[test]
fn missing_gens_file_is_usage_error() {
    let (code, _, err) = run(&["diameter", "--group", "sym:3", "--gens", "file:missing.txt"]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.txt"));
}

#[test]
fn bad_group_spec_reports_offset() {
    let (code, _, err) = run(&["diameter", "--group", "wreath:xy"]);
    assert_eq!(code, 2);
    assert!(err.contains("offset 7"), "{err}");
}

#[test]
fn unknown_subcommand_and_help() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn zero_caps_are_rejected() {
    assert_eq!(run(&["diameter", "--group", "cyclic:5", "--cap-power", "0"]).0, 2);
    assert_eq!(run(&["diameter", "--group", "cyclic:5", "--cap-elements", "0"]).0, 2);
}

#[test]
fn element_cap_exits_three() {
    let (code, _, err) = run(&["diameter", "--group", "cyclic:100", "--cap-elements", "10"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn subgroup_cap_exits_three() {
    let (code, _, _) = run(&["verify", "--claim", "NILP2", "--group", "sym:4", "--cap-subgroups", "10"]);
    assert_eq!(code, 3);
}

#[test]
fn failing_claim_exits_one() {
    // S₄ is not abelian, so the abelian check cannot even start.
    assert_eq!(run(&["verify", "--claim", "ABELIAN_DIAM", "--group", "sym:4"]).0, 2);
    // Radius 1 holds no nontrivial normal subgroup of S₃, and index 1 forces H = S₃.
    let (code, out, _) = run(&["verify", "--claim", "BT_WITNESS", "--group", "sym:3", "--index-cap", "1"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("FAIL"));
}

#[test]
fn verify_single_subgroup() {
    let (code, out, _) = run(&[
        "verify", "--claim", "SCHREIER", "--group", "sym:3", "--subgroup", "(0 1 2)", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["witnesses"]["schreier_size"], 2);
}

#[test]
fn verify_scaling_is_usage_error() {
    assert_eq!(run(&["verify", "--claim", "SCALING", "--group", "cyclic:4"]).0, 2);
}

#[test]
fn normal_set_per_class() {
    let (code, out, _) = run(&["verify", "--claim", "NORMAL_SET", "--group", "sym:3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn structure_views() {
    let (code, out, _) = run(&["structure", "--group", "sl2:5", "--classes", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["count"], 9);
    let (_, out, _) = run(&["structure", "--group", "sym:4", "--subgroups", "--format", "json"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["count"], 30);
    let (_, out, _) = run(&["structure", "--group", "q8", "--best-section", "--format", "json"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["section_order"], 4);
    assert_eq!(run(&["structure", "--group", "q8", "--classes", "--subgroups"]).0, 2);
}

#[test]
fn growth_lists_power_sizes() {
    let (code, out, _) = run(&["growth", "--group", "cyclic:1000", "--max-n", "10", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["power_sizes"], Value::from(vec![1; 10]));
    assert_eq!(v["witness"]["n"], 1);
    assert_eq!(v["witness"]["ratio"], "1");
}

#[test]
fn scaling_csv_has_header_and_rows() {
    let (code, out, _) = run(&["scaling", "--family", "cyclic", "--range", "16,32,64,128", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "param,order,diameter,log_order,fit_exponent");
    assert_eq!(lines.len(), 5);
    let diam: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(diam, ["15", "31", "63", "127"]);
}

#[test]
fn sl2_range_keeps_primes() {
    let (code, out, _) = run(&["scaling", "--family", "sl2", "--range", "3..7", "--format", "csv"]);
    assert_eq!(code, 0);
    let params: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(params, ["3", "5", "7"]);
}

#[test]
fn sweep_file_with_relative_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = std::fs::read_to_string(cayleylab::verifier::fixtures_dir().join("a4.tbl")).unwrap();
    std::fs::write(dir.path().join("a4.tbl"), table).unwrap();
    let corpus = dir.path().join("corpus.txt");
    std::fs::write(&corpus, "# two groups\ncyclic:6 standard\ntable:a4.tbl\n").unwrap();
    let out_path = dir.path().join("out.jsonl");
    let (code, _, err) = run(&[
        "sweep",
        "--corpus",
        corpus.to_str().unwrap(),
        "--claims",
        "NILP2,CONJ_BOUND",
        "--format",
        "json",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
    }
    assert!(err.contains("4 reports"));
}

#[test]
fn sweep_rejects_unknown_claim() {
    assert_eq!(run(&["sweep", "--claims", "NILP3"]).0, 2);
}

#[test]
fn huge_witness_serialised_as_string() {
    let mut r = ClaimReport::new(ClaimId::AbelianDiam, "synthetic");
    r.int("order", BigInt::from(1) << 64);
    let v = report_json(&r);
    assert_eq!(v["witnesses"]["order"], "18446744073709551616");
}

#[test]
fn scaling_rows_one_per_parameter() {
    let table = cayleylab::verifier::scaling_experiment(
        cayleylab::verifier::ScalingFamily::Dihedral,
        &[3, 4, 5],
        &cayleylab::GensSpec::standard(),
    )
    .unwrap();
    assert_eq!(scaling_csv(&table.rows).lines().count(), 4);
}

#[test]
fn in_process_run_matches_binary() {
    assert_eq!(cayleylab_cli::run(["cayleylab", "verify", "--claim", "nilp2", "--group", "q8", "--output", "/dev/null"]), 0);
}
