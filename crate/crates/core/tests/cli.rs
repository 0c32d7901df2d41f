use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockpart"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn tempdir(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("blockpart-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn bounds_prints_treewidth_constant() {
    let out = run(&["bounds", "--ell", "222", "--t", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("15288899"));
    assert_eq!(report(&out)["details"]["tw_bound"], "15288899");
}

#[test]
fn chordal_output_is_six_blocking() {
    let d = tempdir("chordal");
    let out = run(&[
        "chordal",
        "--tau",
        "1",
        "--seed",
        "1",
        "--n",
        "200",
        "--out-dir",
        d.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], "blockpart.report/1");
    assert!(r["claims"]["claims"]
        .as_object()
        .unwrap()
        .values()
        .all(|c| c["failed"] == 0));
    let v = run(&[
        "verify",
        "--graph",
        &path(&d, "graph.json"),
        "--partition",
        &path(&d, "partition.json"),
        "--ell",
        "6",
    ]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(report(&v)["details"]["verdict"], "holds");
}

#[test]
fn block2_output_is_two_blocking() {
    let d = tempdir("block2");
    let dir = d.to_str().unwrap();
    let gen = run(&[
        "gen",
        "--kind",
        "ktree",
        "--n",
        "80",
        "--k",
        "3",
        "--seed",
        "5",
        "--out-dir",
        dir,
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let b = run(&[
        "block2",
        "--graph",
        &path(&d, "graph.json"),
        "--decomposition",
        &path(&d, "decomposition.json"),
        "--out-dir",
        dir,
    ]);
    assert_eq!(b.status.code(), Some(0));
    let v = run(&[
        "verify",
        "--graph",
        &path(&d, "graph.json"),
        "--partition",
        &path(&d, "partition.json"),
        "--ell",
        "2",
    ]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn counterexample_and_budget_exit_codes() {
    let d = tempdir("codes");
    let dir = d.to_str().unwrap();
    assert_eq!(
        run(&["chordal", "--n", "200", "--seed", "1", "--out-dir", dir])
            .status
            .code(),
        Some(0)
    );
    let (g, p) = (path(&d, "graph.json"), path(&d, "partition.json"));
    let ce = run(&["verify", "--graph", &g, "--partition", &p, "--ell", "1"]);
    assert_eq!(ce.status.code(), Some(2));
    let r = report(&ce);
    assert_eq!(r["status"], "counterexample");
    assert_eq!(r["details"]["counterexample"].as_array().unwrap().len(), 3);
    let b = run(&[
        "verify",
        "--graph",
        &g,
        "--partition",
        &p,
        "--ell",
        "7",
        "--budget",
        "5",
    ]);
    assert_eq!(b.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["bounds", "--ell", "2"]).status.code(), Some(1));
    assert_eq!(run(&["nosuch"]).status.code(), Some(1));
    assert_eq!(
        run(&[
            "verify",
            "--graph",
            "/nonexistent",
            "--partition",
            "/nonexistent",
            "--ell",
            "2"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn failed_claim_exits_four_with_claim_id() {
    let out = run(&[
        "refine",
        "--grid-rows",
        "60",
        "--grid-cols",
        "60",
        "--c",
        "6",
        "--d-indep",
        "2",
        "--n0",
        "14",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("claim window_has_qualifying_edge"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let d = tempdir("config");
    let cfg = d.join("cfg.json");
    std::fs::write(&cfg, r#"{"ell": 894, "t": 3}"#).unwrap();
    let a = run(&["bounds", "--config", cfg.to_str().unwrap()]);
    assert_eq!(report(&a)["details"]["tw_bound"], "963922179");
    let b = run(&["bounds", "--config", cfg.to_str().unwrap(), "--ell", "222"]);
    assert_eq!(report(&b)["details"]["tw_bound"], "15288899");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let runs = [
        vec!["refine", "--n", "300", "--seed", "3", "--measure"],
        vec!["genusz", "--ell", "11", "--seed", "2", "--combine"],
        vec!["step", "--r", "6", "--s", "3", "--iterate", "--seed", "4"],
    ];
    for args in runs {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn power_model_validates() {
    let d = tempdir("power");
    let dir = d.to_str().unwrap();
    assert_eq!(
        run(&[
            "gen",
            "--kind",
            "grid",
            "--rows",
            "6",
            "--cols",
            "7",
            "--out-dir",
            dir
        ])
        .status
        .code(),
        Some(0)
    );
    let out = run(&[
        "power",
        "--graph",
        &path(&d, "graph.json"),
        "--k",
        "4",
        "--d",
        "3",
        "--out-dir",
        dir,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = run(&[
        "step",
        "--model",
        &path(&d, "model.json"),
        "--r",
        "5",
        "--s",
        "3",
    ]);
    // the power model has radius 2, so it is (5, 3)-shallow as well
    assert_eq!(
        s.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&s.stderr)
    );
}
