use radsum_cli::record::read_csv;
use radsum_cli::{run_sweep, write_outputs, SweepDocument, SweepSpec};

fn spec(text: &str) -> SweepSpec {
    SweepSpec::from_toml(text).expect("valid spec")
}

fn values(doc: &SweepDocument) -> Vec<f64> {
    doc.records.iter().map(|r| r.value_f64().expect("value")).collect()
}

#[test]
fn construct_sweep_decreases() {
    let s = spec(
        r#"
name = "construct"
method = "construct"
d = 2
k = [2]
N = [10000, 100000, 1000000]
beta = ["1/3"]
fit = true
"#,
    );
    let run = run_sweep(&s).unwrap();
    assert_eq!(run.document.schema_version, "1");
    let v = values(&run.document);
    assert_eq!(v.len(), 3);
    assert!(v[0] > v[1] && v[1] > v[2], "{v:?}");
    assert!(run.document.fit.as_ref().unwrap().slope < 0.0);
    assert_eq!(run.metadata.wall_ms.len(), 3);
}

#[test]
fn taylor_verify_sweep_ratios_approach_one() {
    let s = spec(
        r#"
name = "s4"
method = "taylor-verify"
d = 2
params = ["1,1", "-1,1", "0,-2", "0,9"]
M = [50, 100, 200, 400]
"#,
    );
    let run = run_sweep(&s).unwrap();
    let dev: Vec<f64> = run.document.records.iter().map(|r| (r.ratio.unwrap() - 1.0).abs()).collect();
    for w in dev.windows(2) {
        assert!(w[1] < w[0], "{dev:?}");
    }
    assert!(dev[3] < 1e-3);
}

#[test]
fn dual_scan_sweep_non_increasing() {
    let s = spec(
        r#"
name = "dual"
method = "dual-scan"
d = 2
primes = [2, 3]
H = [1000, 10000, 100000]
sigma = "1/2"
"#,
    );
    let v = values(&run_sweep(&s).unwrap().document);
    assert!(v.iter().all(|&x| x > 0.0));
    assert!(v[0] >= v[1] && v[1] >= v[2], "{v:?}");
}

#[test]
fn per_cell_errors_stay_in_band() {
    let s = spec(
        r#"
name = "mixed"
method = "construct"
d = 2
k = [1]
N = [31, 10000]
beta = ["0"]
"#,
    );
    let run = run_sweep(&s).unwrap();
    assert!(run.document.records[0].error.as_deref().unwrap().contains("infeasible"));
    assert!(run.document.records[1].error.is_none());
    assert_eq!(run.document.records[0].n, Some(31));
}

#[test]
fn oracle_sweeps() {
    let g = spec("name = \"g\"\nmethod = \"oracle-g\"\nd = 2\nk = [1, 2]\nN = [3]\n");
    let run = run_sweep(&g).unwrap();
    assert_eq!(run.document.records[0].witness.as_deref(), Some("3"));
    assert_eq!(run.document.records[1].witness.as_deref(), Some("2 3"));
    let h = spec("name = \"h\"\nmethod = \"oracle-inhom\"\nd = 2\nk = [1]\nN = [50]\nbeta = [\"1/2\", \"0\"]\n");
    let run = run_sweep(&h).unwrap();
    assert_eq!(run.document.records[0].witness.as_deref(), Some("42"));
    assert_eq!(run.document.records[1].exact, Some(true));
}

#[test]
fn csv_and_json_agree_and_reruns_are_identical() {
    let s = spec(
        r#"
name = "agree"
method = "construct"
d = 2
k = [1, 2]
N = [10000, 100000]
beta = ["0", "1/3", "0.5"]
"#,
    );
    let dir = tempfile::tempdir().unwrap();
    let run = run_sweep(&s).unwrap();
    write_outputs(&run, dir.path()).unwrap();
    let csv_a = std::fs::read(dir.path().join("agree.csv")).unwrap();
    let json_a = std::fs::read(dir.path().join("agree.json")).unwrap();

    let from_csv = read_csv(csv_a.as_slice()).unwrap();
    let doc: SweepDocument = serde_json::from_slice(&json_a).unwrap();
    assert_eq!(from_csv, doc.records);

    let again = run_sweep(&s).unwrap();
    write_outputs(&again, dir.path()).unwrap();
    assert_eq!(std::fs::read(dir.path().join("agree.csv")).unwrap(), csv_a);
    assert_eq!(std::fs::read(dir.path().join("agree.json")).unwrap(), json_a);
}

#[test]
fn decimal_columns_enclose_values() {
    use radsum_core::decimal::parse_rational;
    use radsum_core::{certified_sum_dist, EvalConfig, RadicandTuple};
    let s = spec("name = \"one\"\nmethod = \"oracle-g\"\nd = 2\nk = [2]\nN = [101]\n");
    let rec = run_sweep(&s).unwrap().document.records.remove(0);
    let mid = parse_rational(rec.value_mid.as_deref().unwrap()).unwrap();
    let rad = parse_rational(rec.value_rad.as_deref().unwrap()).unwrap();
    let radicands: Vec<u64> = rec.witness.unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    let t = RadicandTuple::new(2, radicands).unwrap();
    let cfg = EvalConfig {
        accuracy_goal: 1e-12,
        ..Default::default()
    };
    let tight = certified_sum_dist(&t, &parse_rational("0").unwrap(), &cfg).unwrap().value;
    assert!(mid.clone() - &rad <= tight.lower() && tight.upper() <= mid + rad);
}

#[test]
fn spec_validation() {
    assert!(SweepSpec::from_toml("name = \"x\"\nmethod = \"nope\"\nd = 2\n").is_err());
    assert!(SweepSpec::from_toml("name = \"x\"\nmethod = \"construct\"\nd = 2\nunknown = 1\n").is_err());
    let s = spec("name = \"x\"\nmethod = \"construct\"\nd = 2\nk = [1]\n");
    assert!(run_sweep(&s).is_err());
}
