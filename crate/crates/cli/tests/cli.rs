use std::process::Command;

fn radsum(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_radsum"))
        .args(args)
        .env("RADSUM_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_prints_certified_distance() {
    let o = radsum(&["construct", "--d", "2", "--k", "1", "--N", "10000", "--beta", "1/2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("witness: 2450"), "{s}");
    assert!(s.contains("value: 0.00252"), "{s}");
}

#[test]
fn infeasible_exits_with_two() {
    let o = radsum(&["construct", "--d", "2", "--k", "1", "--N", "31"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("32"));
}

#[test]
fn undecided_exits_with_three() {
    let o = radsum(&["--precision-cap", "16", "oracle", "g", "--d", "2", "--k", "2", "--N", "101"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invalid_input_exits_with_one() {
    let o = radsum(&["oracle", "inhom", "--d", "2", "--k", "1", "--N", "50", "--beta", "1/0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_json_record() {
    let o = radsum(&["--json", "oracle", "inhom", "--d", "2", "--k", "1", "--N", "50", "--beta", "0.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["method"], "oracle-inhom");
    assert_eq!(v["witness"], "42");
    assert_eq!(v["beta"], "0.5");
    let mid: f64 = v["value_mid"].as_str().unwrap().parse().unwrap();
    assert!((mid - 0.019_26).abs() < 1e-4);
}

#[test]
fn budget_refusal_is_an_error() {
    let o = radsum(&["oracle", "g", "--d", "2", "--k", "2", "--N", "101", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn taylor_subcommands() {
    let o = radsum(&["taylor", "expand", "--d", "2", "--u", "0", "--v", "1", "--order", "3"]);
    assert!(stdout(&o).contains("(1/2)*M^-1"), "{}", stdout(&o));
    let o = radsum(&["taylor", "solve", "--d", "2", "--params", "1,1;-1,1;0,-3"]);
    let s = stdout(&o);
    assert!(s.contains("weights (3, 3, 2)") && s.contains("-9/2"), "{s}");
    let o = radsum(&["taylor", "search", "--d", "2", "--k", "2", "--u", "0..0", "--v", "-2..2"]);
    assert!(stdout(&o).contains("params (0, -1) (0, 1)"));
    let o = radsum(&["taylor", "search", "--d", "2", "--k", "2", "--u", "0..0", "--v", "-2..2", "--max-subsets", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--resume 3"));
    let o = radsum(&["--json", "taylor", "verify", "--d", "2", "--params", "0,-1;0,1", "--M", "10,100"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["witness"], "99 101");
}

#[test]
fn dual_scan_reports_witness() {
    let o = radsum(&["--json", "dual-scan", "--d", "2", "--primes", "2", "--H", "1000", "--sigma", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"], "2");
    assert_eq!(v["sigma"], "1");
}

#[test]
fn sweep_and_fit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("s2.toml");
    std::fs::write(
        &spec,
        "name = \"s2\"\nmethod = \"taylor-verify\"\nd = 2\nparams = [\"0,-1\", \"0,1\"]\nM = [10, 100, 1000]\nfit = true\n",
    )
    .unwrap();
    let out = dir.path().to_str().unwrap();
    let o = radsum(&["sweep", "--spec", spec.to_str().unwrap(), "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = dir.path().join("s2.csv");
    for name in ["s2.csv", "s2.json", "s2.meta.json"] {
        assert!(dir.path().join(name).exists());
    }
    let o = radsum(&["fit", "--input", csv.to_str().unwrap(), "--x", "m", "--k", "2", "--d", "2"]);
    let s = stdout(&o);
    assert!(s.contains("~ -3/1"), "{s}");
    assert!(s.contains("-(k - 1/d) = -1.5"), "{s}");
}
