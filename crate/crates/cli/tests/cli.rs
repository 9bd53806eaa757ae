use std::path::Path;
use std::process::{Command, Output};

fn perclab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perclab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn csv_replays_from_its_recorded_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = perclab(
        dir.path(),
        &[
            "one-arm", "--family", "triangular-lattice-disk", "--size", "10", "--radii", "2,5,10", "--trials", "300",
            "--seed", "9", "--out", "arm.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let config = dir.path().join("arm.config.toml");
    assert!(config.exists());
    let replay = perclab(dir.path(), &["run", "--config", "arm.config.toml", "--workers", "8", "--out", "again.csv"]);
    assert!(replay.status.success());
    let a = std::fs::read(dir.path().join("arm.csv")).unwrap();
    let b = std::fs::read(dir.path().join("again.csv")).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("r,p,trials,successes,estimate,ci_lo,ci_hi"));
}

#[test]
fn generated_graph_feeds_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = perclab(dir.path(), &["generate", "--family", "d-regular-hyperbolic", "--size", "5", "--out", "g.txt"]);
    assert!(out.status.success());
    let res = perclab(dir.path(), &["resistance", "--graph", "g.txt", "--r-max", "5"]);
    assert!(res.status.success());
    let csv = String::from_utf8(res.stdout).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(String::from_utf8_lossy(&res.stderr).contains("verdict: "));
    let svg = perclab(dir.path(), &["render-packing", "--graph", "g.txt"]);
    assert!(svg.status.success());
    assert!(String::from_utf8(svg.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn seven_regular_ball_of_radius_ten_is_transient_like() {
    let dir = tempfile::tempdir().unwrap();
    let out = perclab(dir.path(), &["generate", "--family", "d-regular-hyperbolic", "--size", "10", "--out", "g.txt"]);
    assert!(out.status.success());
    let res = perclab(dir.path(), &["resistance", "--graph", "g.txt", "--r-max", "10"]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("verdict: transient-like"));
}

#[test]
fn malformed_config_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.toml"),
        "[run]\nexperiment = \"one-arm\"\ntrails = 10\n",
    )
    .unwrap();
    let out = perclab(dir.path(), &["run", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trails"));
}

#[test]
fn numerical_failure_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    // A disc this small holds no sites, so every trial is excluded.
    let out = perclab(dir.path(), &["hvoronoi", "--lambdas", "1", "--radius", "0.0001", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
