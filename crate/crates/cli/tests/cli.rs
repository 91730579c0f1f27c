use std::path::Path;
use std::process::{Command, Output};

fn lifshitz(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lifshitz"))
        .args(args)
        .current_dir(dir)
        .env_remove("LIFSHITZ_OUT_DIR")
        .output()
        .unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn selfenergy_window_csv() {
    let t = tempfile::tempdir().unwrap();
    let o = lifshitz(
        &["selfenergy", "--lambda", "0.1", "--epsilon", "1", "--out-dir", "se"],
        t.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(t.path().join("se/selfenergy.csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);
    assert!(csv.starts_with("energy,estar,sigma"));
    assert_eq!(json(&t.path().join("se/selfenergy.json"))["passes"], true);
}

#[test]
fn gate_free_census() {
    let t = tempfile::tempdir().unwrap();
    let o = lifshitz(&["diagrams", "--n", "3", "--gate-free", "--out-dir", "d"], t.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&t.path().join("d/diagrams.json"));
    assert_eq!(v["gate_free"], true);
    assert_eq!(v["all_superficially_convergent"], true);
    assert_eq!(
        v["partitions"].as_array().unwrap().len(),
        v["count"].as_u64().unwrap() as usize
    );
}

#[test]
fn expand_verify_example() {
    let t = tempfile::tempdir().unwrap();
    let o = lifshitz(
        &[
            "expand-verify",
            "--N",
            "2",
            "--box",
            "8",
            "--lambda",
            "0.5",
            "--seed",
            "7",
            "--out-dir",
            "e",
        ],
        t.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&t.path().join("e/expand_verify.json"));
    assert!(v["max_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["terms"], 5);
    let table = std::fs::read_to_string(t.path().join("e/expansion_terms.tsv")).unwrap();
    assert_eq!(table.lines().count(), 6);
}

#[test]
fn config_errors_exit_2() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(lifshitz(&["fracmom", "--lamda", "3"], t.path()).status.code(), Some(2));
    std::fs::write(t.path().join("bad.toml"), "[fracmom]\nlamda = 2\n").unwrap();
    assert_eq!(
        lifshitz(&["fracmom", "--config", "bad.toml"], t.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        lifshitz(&["criterion", "--s", "0.3", "--L", "2"], t.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numerical_failure_exits_3() {
    let t = tempfile::tempdir().unwrap();
    let o = lifshitz(&["green", "--radius", "100", "--out-dir", "g"], t.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("numerical failure"));
}

#[test]
fn flags_override_config_and_env_sets_out_dir() {
    let t = tempfile::tempdir().unwrap();
    std::fs::write(
        t.path().join("c.toml"),
        "seed = 4\n[fracmom]\nbox = 6\nsamples = 10\ndistances = [1, 2]\nlambda = 0.2\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lifshitz"))
        .args(["fracmom", "--config", "c.toml", "--lambda", "0.4", "--etas", "1e-3"])
        .current_dir(t.path())
        .env("LIFSHITZ_OUT_DIR", "from-env")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&t.path().join("from-env/fracmom.json"));
    assert_eq!(v["lambda"], 0.4);
    assert_eq!(v["box"], 6);
    let m = json(&t.path().join("from-env/manifest.json"));
    assert!(m["config"].as_str().unwrap().contains("seed = 4"));
}

#[test]
fn manifest_replay_reproduces_outputs() {
    let t = tempfile::tempdir().unwrap();
    let args = [
        "fracmom",
        "--box",
        "6",
        "--samples",
        "12",
        "--distances",
        "1,2",
        "--seed",
        "3",
        "--out-dir",
        "a",
    ];
    assert_eq!(lifshitz(&args, t.path()).status.code(), Some(0));
    let o = lifshitz(&["fracmom", "--config", "a/config.toml", "--out-dir", "b"], t.path());
    assert_eq!(o.status.code(), Some(0));
    for f in ["fracmom.csv", "fracmom.json", "config.toml"] {
        assert_eq!(
            std::fs::read(t.path().join("a").join(f)).unwrap(),
            std::fs::read(t.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }
    let ma = json(&t.path().join("a/manifest.json"));
    let mb = json(&t.path().join("b/manifest.json"));
    assert_eq!(ma["config_hash"], mb["config_hash"]);
    assert_eq!(ma["outputs"], mb["outputs"]);
}

#[test]
fn thread_count_does_not_change_outputs() {
    let t = tempfile::tempdir().unwrap();
    let base = ["diagram-value", "--graph", "f", "--samples", "5000", "--seed", "2"];
    let mut a = base.to_vec();
    a.extend(["--out-dir", "one"]);
    let mut b = base.to_vec();
    b.extend(["--out-dir", "two", "--threads", "2"]);
    assert_eq!(lifshitz(&a, t.path()).status.code(), Some(0));
    assert_eq!(lifshitz(&b, t.path()).status.code(), Some(0));
    assert_eq!(
        std::fs::read(t.path().join("one/diagram_values.csv")).unwrap(),
        std::fs::read(t.path().join("two/diagram_values.csv")).unwrap()
    );
}

#[test]
fn criterion_and_partition_value_run() {
    let t = tempfile::tempdir().unwrap();
    let o = lifshitz(
        &["criterion", "--L", "2,3", "--samples", "3", "--out-dir", "c"],
        t.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read_to_string(t.path().join("c/criterion.csv"))
            .unwrap()
            .lines()
            .count(),
        3
    );
    let o = lifshitz(
        &[
            "diagram-value",
            "--partition",
            "{{1,4},{2,5}}",
            "--samples",
            "2000",
            "--out-dir",
            "v",
        ],
        t.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
