use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susy-radial"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn strip_timing(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("timing_ms");
            v
        })
        .collect()
}

#[test]
fn hydrogen_series() {
    let out = run(&["spectrum", "--family", "kratzer", "--A", "0", "--B", "1", "--N", "3", "--l", "0", "--n", "0..3"]);
    let recs = records(&out);
    let expected = [-0.5, -0.125, -1.0 / 18.0, -0.03125];
    assert_eq!(recs.len(), 4);
    for (i, (r, e)) in recs.iter().zip(expected).enumerate() {
        assert_eq!(r["index"], i);
        assert_eq!(r["n"], i);
        assert!((num(&r["analytic_E"]) - e).abs() < 1e-14);
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn oscillator_ground_state_with_oracle() {
    let recs = records(&run(&["spectrum", "--family", "gk", "--A", "0", "--N", "3", "--l", "0", "--n", "0", "--oracle"]));
    let e = num(&recs[0]["analytic_E"]);
    assert!((e - 2.121320).abs() < 1e-6);
    assert!((num(&recs[0]["oracle_E"]) - e).abs() / e < 1e-6);
    assert_eq!(recs[0]["oracle"]["node_count"], 0);
    assert_eq!(recs[0]["pass"], true);
}

#[test]
fn inverse_power_reports_required_coefficient() {
    let recs = records(&run(&["spectrum", "--family", "v1", "--A2", "-1", "--A3", "0", "--A4", "0.5", "--N", "3", "--l", "0"]));
    let r = &recs[0];
    assert!((num(&r["analytic_E"]) + 0.5).abs() < 1e-14);
    assert_eq!(r["required_coefficient"]["name"], "A1");
    assert!((num(&r["required_coefficient"]["value"]) + 1.0).abs() < 1e-14);
    assert!(num(&r["residual"]) < 1e-8);
}

#[test]
fn inconsistent_coefficient_is_rejected() {
    let out = run(&["spectrum", "--family", "v1", "--A1", "-0.5", "--A2", "-1", "--A3", "0", "--A4", "0.5", "--N", "3", "--l", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kratzer_duality_passes() {
    let recs = records(&run(&["verify-map", "--family", "kratzer", "--A", "0", "--B", "1", "--N", "3", "--lambda", "0", "--n", "1..4"]));
    assert_eq!(recs.len(), 4);
    for r in &recs {
        assert_eq!(r["pass"], true, "{r}");
        let lhs = num(&r["values"]["dual_lhs"]);
        let rhs = num(&r["values"]["dual_rhs"]);
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs());
        assert_eq!(r["target"]["N"], 4);
    }
}

#[test]
fn duality_with_oracle_on_image() {
    let recs = records(&run(&[
        "verify-map", "--family", "kratzer", "--A", "0.5", "--B", "1", "--N", "4", "--l", "1", "--n", "2..3", "--oracle",
    ]));
    assert_eq!(recs.len(), 6);
    assert!(recs.iter().all(|r| r["pass"] == true));
}

#[test]
fn lambda_out_of_range_exits_2() {
    let out = run(&["verify-map", "--family", "kratzer", "--A", "0", "--B", "1", "--N", "3", "--lambda", "5", "--n", "1..4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[0, 1]"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["spectrum", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--family", "morse", "--N", "3"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--family", "kratzer", "--A", "0", "--B", "1", "--N", "0"]).status.code(), Some(2));
}

#[test]
fn inverse_power_chain() {
    let recs = records(&run(&["verify-map", "--family", "v1", "--A2", "-1", "--A3", "0", "--A4", "0.5", "--N", "3", "--l", "0", "--lambda", "0"]));
    let r = &recs[0];
    let dual = 8f64.sqrt();
    assert!((num(&r["values"]["dual_lhs"]) - dual).abs() < 1e-12);
    assert!((num(&r["values"]["dual_rhs"]) - dual).abs() < 1e-12);
    assert_eq!(r["values"]["B2"], -4.0);
    assert_eq!(r["pass"], true);
}

#[test]
fn csv_output() {
    let out = run(&["spectrum", "--family", "gk", "--A", "0", "--N", "3", "--l", "0", "--n", "0..1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<_> = rows.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header, ["family", "N", "l", "n", "analytic_E", "oracle_E", "rel_dev", "residual", "pass"]);
    let rows: Vec<_> = rows.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    let e1: f64 = rows[1][4].parse().unwrap();
    assert!((e1 - 3.5 * 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn config_round_trip_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let cfg_s = cfg.to_str().unwrap();
    let flags = ["spectrum", "--family", "v1", "--A2", "-2", "--A3", "0.3", "--A4", "0.5", "--N", "3", "--l", "0", "--oracle"];
    let mut saving = flags.to_vec();
    saving.extend(["--save-config", cfg_s]);
    let direct = run(&saving);
    assert!(direct.status.success());
    assert!(Path::new(&cfg).exists());
    let replay = run(&["spectrum", "--config", cfg_s]);
    assert!(replay.status.success());
    assert_eq!(
        strip_timing(&String::from_utf8(direct.stdout).unwrap()),
        strip_timing(&String::from_utf8(replay.stdout).unwrap())
    );
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "family = \"kratzer\"\nA = 0.0\nB = 1.0\nN = 3\nl = 0\nn = \"0\"\n").unwrap();
    let recs = records(&run(&["spectrum", "--config", cfg.to_str().unwrap(), "--B", "2"]));
    assert!((num(&recs[0]["analytic_E"]) + 2.0).abs() < 1e-14);
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "family = \"gk\"\nwibble = 1\n").unwrap();
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, jobs) in ["1", "4"].iter().enumerate() {
        let path = dir.path().join(format!("o{i}.jsonl"));
        let out = run(&["oracle-compare", "--batch", "v1-random", "--count", "4", "--seed", "7", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        outputs.push(strip_timing(&std::fs::read_to_string(path).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].len(), 4);
    for (i, r) in outputs[0].iter().enumerate() {
        assert_eq!(r["index"], i);
    }
}

#[test]
fn sign_adjudication_batch() {
    let recs = records(&run(&["oracle-compare", "--batch", "v2-sign", "--count", "3"]));
    assert_eq!(recs.len(), 4);
    let worked = &recs[0];
    assert_eq!(worked["label"], "worked instance");
    assert!((num(&worked["values"]["plus_sign_E"]) - 8f64.sqrt()).abs() < 1e-12);
    assert!(worked["values"]["minus_sign_E"].is_null());
    assert!(recs.iter().all(|r| r["pass"] == true));
}

#[test]
fn ladder_batch() {
    let recs = records(&run(&[
        "oracle-compare", "--batch", "pseudoharmonic-ladder", "--family", "pseudoharmonic", "--Btil", "2", "--Atil", "1",
        "--V0", "0.5", "--N", "4", "--l", "2",
    ]));
    assert_eq!(recs.len(), 4);
    for r in &recs {
        assert!((num(&r["values"]["spacing"]) - 4.0).abs() < 1e-5);
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn numerov_method_selectable() {
    let recs = records(&run(&["spectrum", "--family", "kratzer", "--A", "0.5", "--B", "1", "--N", "3", "--l", "1", "--n", "0..2", "--oracle", "--method", "numerov"]));
    assert!(recs.iter().all(|r| r["oracle"]["method"] == "numerov_shooting" && r["pass"] == true));
}

#[test]
fn explicit_grid_is_used() {
    let recs = records(&run(&["spectrum", "--family", "gk", "--A", "1", "--N", "3", "--n", "0", "--oracle", "--grid-points", "3000", "--rmin", "0.01", "--rmax", "8"]));
    let o = &recs[0]["oracle"];
    assert_eq!(o["points"], 3000);
    assert_eq!(o["r_max"], 8.0);
}

#[test]
fn too_many_levels_for_grid_exits_2() {
    let out = run(&["spectrum", "--family", "gk", "--A", "0", "--N", "3", "--n", "0..40", "--oracle", "--grid-points", "20", "--rmin", "0.01", "--rmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn starved_solver_exits_3() {
    let out = run(&[
        "spectrum", "--family", "kratzer", "--A", "0", "--B", "1", "--N", "3", "--n", "0..5", "--oracle", "--method", "numerov",
        "--grid-points", "16", "--rmin", "1e-6", "--rmax", "1000",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}
