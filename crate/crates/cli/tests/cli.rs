use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_turan-cycles"));
    c.env_remove("TURAN_CYCLES_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_c7(dir: &Path) -> String {
    let path = dir.join("c7.edges");
    fs::write(
        &path,
        "# seven-cycle\n7\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 0\n",
    )
    .unwrap();
    path.display().to_string()
}

/// Drops the fields allowed to differ between identical runs.
fn stable(mut v: Value) -> Value {
    let obj = v.as_object_mut().unwrap();
    obj.remove("elapsed_ms");
    obj.remove("version");
    v
}

#[test]
fn count_reports_decimal_string() {
    let dir = tempfile::tempdir().unwrap();
    let c7 = write_c7(dir.path());
    let out = run(&["count", "--graph", &c7, "--length", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["count"], "1");
    assert_eq!(v["command"], "count");
    assert_eq!(v["seed"], 0);
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn odd_girth_of_cycle_and_bipartite_graph() {
    let dir = tempfile::tempdir().unwrap();
    let c7 = write_c7(dir.path());
    assert_eq!(json(&run(&["odd-girth", "--graph", &c7]))["odd_girth"], 7);
    let path = dir.path().join("p.edges");
    fs::write(&path, "3\n0 1\n1 2\n").unwrap();
    assert!(json(&run(&["odd-girth", "--graph", path.to_str().unwrap()]))["odd_girth"].is_null());
}

#[test]
fn large_counts_round_trip() {
    let out = run(&[
        "blowup",
        "count",
        "--base",
        "5",
        "--parts",
        "40,40,40,40,40",
        "--k",
        "5",
    ]);
    let v = json(&out);
    let count = v["count"].as_str().unwrap();
    assert_eq!(count.parse::<u128>().unwrap(), 40u128.pow(5));
    let out = run(&[
        "blowup",
        "count",
        "--base",
        "7",
        "--parts",
        "200,200,200,200,200,200,200",
        "--k",
        "21",
    ]);
    let count = json(&out)["count"].as_str().unwrap().to_string();
    assert!(count.len() > 40, "{count}");
    assert!(count.chars().all(|c| c.is_ascii_digit()));
}

#[test]
fn coefficient_has_seventeen_significant_digits() {
    let out = run(&[
        "blowup",
        "coeff",
        "--base",
        "5",
        "--weights",
        "0.2,0.2,0.2,0.2,0.2",
        "--k",
        "5",
    ]);
    let raw = String::from_utf8(out.stdout).unwrap();
    let line = raw.lines().find(|l| l.contains("\"coefficient\"")).unwrap();
    let number = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = number.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{number}");
    assert!((number.parse::<f64>().unwrap() - 5f64.powi(-5)).abs() < 1e-15);
}

#[test]
fn verify_proposition_emits_csv() {
    let out = run(&["verify", "proposition", "--k", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        [
            "n,blowup,counterexample,ck2free",
            "7,1,2,true",
            "8,2,8,true",
            "9,4,24,true"
        ]
    );
}

#[test]
fn k0_report_brackets_the_sign_change() {
    let v = json(&run(&["weights", "k0", "--ell", "3", "--kmax", "201"]));
    let r = &v["results"][0];
    assert_eq!(r["k0"], 59);
    assert!(r["bracketing_f"]["below"].as_f64().unwrap() < 0.0);
    assert!(r["bracketing_f"]["at"].as_f64().unwrap() > 0.0);
}

#[test]
fn weights_f_sign() {
    let v = json(&run(&["weights", "f", "--ell", "3", "--k", "25"]));
    assert_eq!(v["positive"], false);
    let v = json(&run(&["weights", "f", "--ell", "3", "--k", "101"]));
    assert_eq!(v["positive"], true);
}

#[test]
fn identical_runs_are_identical() {
    let args = [
        "--seed",
        "7",
        "weights",
        "optimize",
        "--base",
        "5",
        "--k",
        "9",
        "--iterations",
        "300",
    ];
    let a = stable(json(&run(&args)));
    let b = stable(json(&run(&args)));
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a["seed"], 7);
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k8.edges");
    let out = run(&[
        "construct",
        "blowup",
        "--base",
        "5",
        "--parts",
        "2,2,2,2,2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let graph = path.to_str().unwrap();
    let one = bin()
        .env("TURAN_CYCLES_THREADS", "1")
        .args(["count", "--graph", graph, "--length", "7"])
        .output()
        .unwrap();
    let many = run(&["--threads", "4", "count", "--graph", graph, "--length", "7"]);
    assert_eq!(json(&one)["count"], json(&many)["count"]);
}

#[test]
fn construct_then_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prop.edges");
    let out = run(&[
        "construct",
        "proposition",
        "--k",
        "7",
        "--n",
        "9",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["n"], 9);
    let v = json(&run(&[
        "count",
        "--graph",
        path.to_str().unwrap(),
        "--length",
        "7",
    ]));
    assert_eq!(v["count"], "24");
}

#[test]
fn construct_without_output_streams_edge_list() {
    let out = run(&["construct", "blowup", "--base", "5", "--n", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("5"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn certify_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let c7 = write_c7(dir.path());
    let v = json(&run(&["certify", "--graph", &c7, "--k", "7"]));
    assert_eq!(v["per_cycle_bound_exact"], "1");
    assert_eq!(v["m"], "1");
    assert_eq!(v["bound_certified"], true);
}

#[test]
fn stability_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.edges");
    run(&[
        "construct",
        "blowup",
        "--base",
        "7",
        "--parts",
        "3,3,3,3,3,3,3",
        "--output",
        path.to_str().unwrap(),
    ]);
    let v = json(&run(&[
        "stability",
        "extract",
        "--graph",
        path.to_str().unwrap(),
        "--k",
        "7",
    ]));
    assert_eq!(v["final"]["leftover"].as_array().unwrap().len(), 0);
    assert_eq!(v["final"]["classes"].as_array().unwrap().len(), 7);

    let tri = dir.path().join("t.edges");
    fs::write(&tri, "3\n0 1\n1 2\n0 2\n").unwrap();
    let v = json(&run(&[
        "stability",
        "clean",
        "--graph",
        tri.to_str().unwrap(),
        "--k",
        "5",
    ]));
    assert_eq!(v["removed_count"], 1);
    assert!(v["odd_girth"].is_null());
}

#[test]
fn search_reports_exact_maximum() {
    let v = json(&run(&["search", "--n", "5", "--k", "5", "--ell", "3"]));
    assert_eq!(v["max_count"], "1");
}

#[test]
fn repro_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "repro",
        "proposition",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);
    let csv = fs::read_to_string(dir.path().join("proposition.csv")).unwrap();
    assert!(
        csv.starts_with("k,n,blowup,counterexample,ck2free,beats_power_bound\n7,7,1,2,true,true")
    );
}

#[test]
fn failing_suite_exits_one_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["repro", "thresholds", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    let failed: Vec<&str> = v["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["k0(101) <= 146"]);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["repro", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--graph", "/nonexistent", "--length", "3"])
            .status
            .code(),
        Some(2)
    );
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "3\n0 1 2\n").unwrap();
    let out = run(&["count", "--graph", bad.to_str().unwrap(), "--length", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
    assert_eq!(
        run(&["search", "--n", "9", "--k", "7", "--ell", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["construct", "proposition", "--k", "7", "--n", "20"])
            .status
            .code(),
        Some(2)
    );
}
