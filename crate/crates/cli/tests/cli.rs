//! Subprocess integration tests: exit codes, report schema, determinism,
//! and format agreement, driving the real binary.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_parverma"))
        .args(args)
        .output()
        .expect("failed to run parverma");
    let code = output.status.code().unwrap_or(-1);
    (
        code,
        String::from_utf8_lossy(&output.stdout).to_string(),
        String::from_utf8_lossy(&output.stderr).to_string(),
    )
}

#[test]
fn certify_steinberg_confirmed() {
    let (code, stdout, _) = run(&[
        "certify", "--type", "A1", "--p", "3", "--chi", "zero", "--levi", "", "--lambda", "2",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["certificates"][0]["status"], "confirmed");
    assert_eq!(v["certificates"][0]["R_direct"], "1");
    assert_eq!(v["summary"]["confirmed"], 1);
}

#[test]
fn certify_no_claim() {
    let (code, stdout, _) = run(&["certify", "--type", "A1", "--p", "3", "--lambda", "0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["certificates"][0]["status"], "no_claim");
    assert_eq!(v["certificates"][0]["simple"], false);
    assert_eq!(v["certificates"][0]["witness_dim"], 2);
}

#[test]
fn improper_levi_is_input_error() {
    let (code, _, stderr) = run(&[
        "certify", "--type", "A2", "--p", "3", "--levi", "1,2", "--lambda", "0,0",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("proper subset"));
}

#[test]
fn bad_prime_is_input_error() {
    let (code, _, stderr) = run(&["sweep", "--type", "B2", "--p", "2"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("not good") || stderr.contains("prime"));
}

#[test]
fn chi_parse_error_has_column() {
    let (code, _, stderr) = run(&[
        "certify", "--type", "A2", "--p", "3", "--chi", "f[a1]=1;e[a2]=1", "--lambda", "0,0",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("column"), "diagnostic should carry a column: {stderr}");
}

#[test]
fn missing_lambda_is_input_error() {
    let (code, _, _) = run(&["certify", "--type", "A1", "--p", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn unknown_flag_exits_one_not_two() {
    // exit code 2 is reserved for theorem violations
    let (code, _, _) = run(&["sweep", "--type", "A1", "--p", "3", "--frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn sweep_reports_are_byte_identical() {
    let args = [
        "sweep", "--type", "A2", "--p", "3", "--levi", "1", "--chi", "levi:J=2", "--seed", "7",
    ];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(out1, out2, "same config and seed must render identically");
}

#[test]
fn csv_and_json_carry_identical_certificate_data() {
    let base = [
        "sweep", "--type", "A1", "--p", "5", "--chi", "levi:J=1",
    ];
    let (_, json_out, _) = run(&base);
    let mut csv_args = base.to_vec();
    csv_args.extend(["--format", "csv"]);
    let (_, csv_out, _) = run(&csv_args);
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let certs = v["certificates"].as_array().unwrap();
    let lines: Vec<&str> = csv_out.trim().lines().collect();
    assert_eq!(lines[0], "lambda_1,R_direct,simple,status,witness_dim");
    assert_eq!(lines.len(), certs.len() + 1);
    for (line, cert) in lines[1..].iter().zip(certs.iter()) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], cert["lambda"][0].as_str().unwrap());
        assert_eq!(cols[1], cert["R_direct"].as_str().unwrap());
        assert_eq!(cols[2], cert["simple"].to_string());
        assert_eq!(cols[3], cert["status"].as_str().unwrap());
        let wd = cert["witness_dim"].as_u64().map(|d| d.to_string()).unwrap_or_default();
        assert_eq!(cols[4], wd);
    }
}

#[test]
fn config_echo_normalizes_chi() {
    let (_, stdout, _) = run(&[
        "sweep", "--type", "A2", "--p", "3", "--chi", "f[a2]=1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["config"]["chi"], "levi:J=2");
    assert_eq!(v["config"]["type"], "A2");
}

#[test]
fn identities_command_passes() {
    let (code, stdout, _) = run(&[
        "identities", "--type", "B2", "--p", "3", "--levi", "2", "--chi", "levi:J=1",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("insertion_vanishing"));
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn identities_marks_vacuous_cases() {
    let (code, stdout, _) = run(&["identities", "--type", "A1", "--p", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("vacuous"), "empty I makes the Levi checks vacuous");
}

#[test]
fn timings_flag_adds_wall_ms() {
    let (_, without, _) = run(&["sweep", "--type", "A1", "--p", "3"]);
    assert!(!without.contains("wall_ms"));
    let (_, with, _) = run(&["sweep", "--type", "A1", "--p", "3", "--timings"]);
    assert!(with.contains("wall_ms"));
}

#[test]
fn emit_witnesses_includes_echelon_rows() {
    let (_, stdout, _) = run(&[
        "certify", "--type", "A1", "--p", "3", "--lambda", "0", "--emit-witnesses",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let w = v["certificates"][0]["witness"].as_array().unwrap();
    assert_eq!(w.len(), 2);
    assert_eq!(w[0].as_array().unwrap().len(), 3);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("parverma-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (code, stdout, _) = run(&[
        "sweep", "--type", "A1", "--p", "3", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["summary"]["total"], 3);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn workers_flag_gives_same_report() {
    let (_, seq, _) = run(&["sweep", "--type", "B2", "--p", "3", "--levi", "2"]);
    let (_, par, _) = run(&["sweep", "--type", "B2", "--p", "3", "--levi", "2", "--workers", "4"]);
    assert_eq!(seq, par, "output ordering is deterministic regardless of scheduling");
}

#[test]
fn recheck_chop_seed_reports_no_disagreement() {
    let (code, stdout, _) = run(&[
        "sweep", "--type", "A2", "--p", "3", "--levi", "1", "--recheck-chop-seed", "17",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    // key is present only when a disagreement was found
    assert!(v.get("chop_disagreements").is_none());
}

#[test]
fn semisimple_chi_upgrades_field() {
    let (code, stdout, _) = run(&["sweep", "--type", "A1", "--p", "3", "--chi", "h1=1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["config"]["m"], 3, "field upgraded to F_{{p^p}}");
    assert_eq!(v["summary"]["total"], 3);
    assert_eq!(v["summary"]["violations"], 0);
    // lambda values print in polynomial form
    let lam = v["certificates"][0]["lambda"][0].as_str().unwrap();
    assert!(lam.contains("t"), "weights live outside the prime subfield: {lam}");
}

#[test]
fn forced_ext_degree_without_solutions_bails() {
    let (code, _, stderr) = run(&[
        "sweep", "--type", "A1", "--p", "3", "--chi", "h1=1", "--ext-degree", "1",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("ext-degree"), "should suggest raising the degree: {stderr}");
}

#[test]
fn incompatible_weight_is_input_error() {
    // chi(h1) = 1 forces lambda outside F_3; lambda = 0 cannot satisfy
    // lambda^p - lambda = chi(h)^p
    let (code, _, stderr) = run(&[
        "certify", "--type", "A1", "--p", "3", "--chi", "h1=1", "--lambda", "0",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("incompatible"), "got: {stderr}");
}

#[test]
fn oversized_module_is_input_error() {
    // A3 at p=7 with empty I asks for a 7^6-dimensional module
    let (code, _, stderr) = run(&[
        "certify", "--type", "A3", "--p", "7", "--lambda", "0,0,0",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("exceeds"), "got: {stderr}");
}

#[test]
fn explicit_sweep_list_runs_in_lex_order() {
    let (code, stdout, _) = run(&["sweep", "--type", "A1", "--p", "5", "--sweep", "4;1;0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let lams: Vec<&str> = v["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["lambda"][0].as_str().unwrap())
        .collect();
    assert_eq!(lams, vec!["0", "1", "4"]);
    assert_eq!(v["summary"]["total"], 3);
    assert_eq!(v["summary"]["confirmed"], 1);
}

#[test]
fn constants_dump_is_csv() {
    let (code, stdout, _) = run(&["constants", "--type", "B2", "--p", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.trim().lines().collect();
    assert_eq!(lines[0], "alpha,beta,n");
    assert!(lines.len() > 10);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
}

#[test]
fn rank_flag_variant() {
    let (code, stdout, _) = run(&[
        "sweep", "--type", "A", "--rank", "1", "--p", "3",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["config"]["type"], "A1");
}
