use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_nonneg3");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad report ({e}): {}\n{}", self.stdout, self.stderr))
    }
}

fn run_env(args: &[&str], threads: Option<&str>) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("NONNEG3_THREADS");
    if let Some(t) = threads {
        cmd.env("NONNEG3_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_env(args, None)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn slack_square(dir: &Path) -> String {
    let p = dir.join("square_slack.json");
    std::fs::write(
        &p,
        r#"{"rows":4,"cols":4,"entries":[["1","1","0","0"],["0","1","1","0"],["0","0","1","1"],["1","0","0","1"]]}"#,
    )
    .unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gens_and_gb_check_four_by_six() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g46.txt");
    let r = run(&["gens", "--m", "4", "--n", "6", "--out", file.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = r.json();
    assert_eq!(j["data"]["quartics"], 15);
    assert_eq!(j["data"]["sextics"], 20);
    assert_eq!(j["data"]["total"], 35);
    assert_eq!(j["data"]["seed"], 0);
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 35);

    let r = run(&["gb-check", "--m", "4", "--n", "6", "--gens", file.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let j = r.json();
    assert_eq!(j["status"], "PASS");
    assert_eq!(check(&j, "buchberger_criterion")["status"], "PASS");
    assert_eq!(check(&j, "reduced_basis_equal")["status"], "PASS");
}

#[test]
fn gb_check_failure_carries_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "# not a basis\n1 * x[1,1]^2 - 1 * x[1,2]\n1 * x[1,1] * x[1,2] - 1 * x[2,1]\n").unwrap();
    let r = run(&["gb-check", "--m", "2", "--n", "2", "--gens", file.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    let j = r.json();
    assert_eq!(check(&j, "buchberger_criterion")["status"], "FAIL");
    let failing = j["data"]["certificate"]["failing"].as_array().unwrap();
    assert!(!failing.is_empty());
    assert_ne!(failing[0]["remainder"], "0");
}

#[test]
fn budget_exhaustion_aborts() {
    let r = run(&["gb-check", "--m", "4", "--n", "4", "--max-pairs", "1"]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert_eq!(r.json()["status"], "ABORTED");
}

#[test]
fn nnrank_of_slack_square_is_false() {
    let dir = tempfile::tempdir().unwrap();
    let m = slack_square(dir.path());
    let r = run(&["nnrank", "--matrix", &m]);
    assert_eq!(r.code, 0);
    let j = r.json();
    assert_eq!(j["data"]["decision"], false);
    assert_eq!(check(&j, "candidates_exhausted")["status"], "PASS");
    assert_eq!(check(&j, "transpose_consistent")["status"], "PASS");
    let b = run(&["boundary", "--matrix", &m]).json();
    assert_eq!(b["data"]["status"], "NOT_IN_MODEL");
}

#[test]
fn membership_verdicts() {
    let member = |m: &str, n: &str, expr: &str| {
        let r = run(&["member", "--m", m, "--n", n, "--expr", expr]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        r.json()["data"]["member"].as_bool().unwrap()
    };
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g44.txt");
    assert_eq!(run(&["gens", "--m", "4", "--n", "4", "--out", file.to_str().unwrap()]).code, 0);
    let text = std::fs::read_to_string(&file).unwrap();
    let quartic = text.lines().find(|l| !l.starts_with('#')).unwrap().to_string();
    assert!(member("4", "4", &quartic));
    assert!(!member("4", "4", "1"));
    assert!(!member("4", "4", "1 * x[1,1]"));

    let sextic = dir.path().join("f.txt");
    let r = run(&["sextic", "--triple", "1,2,3", "--n", "3", "--out", sextic.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let r = run(&["member", "--m", "4", "--n", "3", "--poly", sextic.to_str().unwrap()]);
    assert_eq!(r.json()["data"]["member"], true);
}

#[test]
fn pullback_command_passes() {
    let r = run(&["pullback"]);
    assert_eq!(r.code, 0);
    let j = r.json();
    for c in ["exact_division", "cofactor_bidegree", "a_row_degrees", "product_identity"] {
        assert_eq!(check(&j, c)["status"], "PASS", "{c}");
    }
}

#[test]
fn square_render_has_expected_elements() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("sq.svg");
    let r = run(&["render", "--example", "square", "--out", svg.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"outer\"").count(), 1);
    assert!(text.matches("class=\"inner\"").count() >= 1);
    assert!(text.matches("class=\"triangle\"").count() >= 4);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["--bogus"]).code, 64);
    assert_eq!(run(&["nnrank", "--matrix", "/nonexistent/m.json"]).code, 64);
    assert_eq!(run(&["sextic", "--triple", "1,1,2", "--n", "4"]).code, 64);
    assert_eq!(run(&["member", "--m", "4", "--n", "4", "--expr", "1 * a[1,1]"]).code, 64);
    assert_eq!(run(&["gb-check", "--m", "4", "--n", "4", "--max-seconds", "0"]).code, 64);
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let m = slack_square(dir.path());
    let commands: Vec<Vec<&str>> = vec![
        vec!["dim-check", "--m", "4", "--n", "5", "--seed", "11"],
        vec!["vanish-check", "--m", "4", "--n", "5", "--samples", "10", "--seed", "3"],
        vec!["invariance-check", "--groups", "2", "--trials", "3", "--seed", "5"],
        vec!["example", "square"],
        vec!["example", "moitra", "--n", "2"],
        vec!["nnrank", "--matrix", &m],
        vec!["boundary", "--matrix", &m],
        vec!["gb-check", "--m", "4", "--n", "4"],
        vec!["gens", "--m", "5", "--n", "4"],
        vec!["pullback"],
    ];
    for args in &commands {
        let a = run_env(args, Some("1"));
        let b = run_env(args, Some("1"));
        let c = run_env(args, Some("4"));
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{args:?} repeated");
        assert_eq!(a.stdout, c.stdout, "{args:?} threads 1 vs 4");
    }
    let s1 = run(&["invariance-check", "--groups", "1", "--trials", "2", "--seed", "1"]).stdout;
    let s2 = run(&["invariance-check", "--groups", "1", "--trials", "2", "--seed", "2"]).stdout;
    assert_ne!(s1, s2);
}
