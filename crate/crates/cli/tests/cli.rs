use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopstrata"))
        .args(args)
        .env_remove("LOOPSTRATA_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn atlas_gl2_dot_is_a_chain() {
    let o = run(&["atlas", "--group", "GL:2", "--mu", "1,0", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(dot.matches("label=").count(), 2);
    assert!(dot.contains("n0 -> n1;"));
    assert!(dot.contains("s1 | (1,0) | (1,0)"));
}

#[test]
fn atlas_json_counts() {
    let o = run(&["atlas", "--group", "GSp:4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["strata"].as_array().unwrap().len(), 4);
    assert_eq!(v["group"], "GSp:4");
    let o = run(&["atlas", "--group", "GL:2", "--mu", "1,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["strata"].as_array().unwrap().len(), 1);
    assert_eq!(v["closure"], serde_json::json!([[true]]));
}

#[test]
fn atlas_eo_reports_closure_check() {
    let o = run(&["atlas", "--eo", "--group", "GSp:6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["strata"].as_array().unwrap().len(), 8);
    assert!(stderr(&o).contains(", 0 failures"));
}

#[test]
fn atlas_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = ["atlas", "--group", "GL:3", "--mu", "2,1,0", "--dot", "--out"];
    let mut args = base.to_vec();
    args.push(a.to_str().unwrap());
    assert_eq!(run(&args).status.code(), Some(0));
    let mut args = base.to_vec();
    args.extend([b.to_str().unwrap(), "--jobs", "3"]);
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let dot = std::fs::read_to_string(a.with_extension("dot")).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn classify_reports() {
    let o = run(&["classify", "tau[1,0]", "--group", "GL:2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("newton: (1/2,1/2)"));
    assert!(s.contains("truncation: (e, (1,0))"));
    assert!(s.contains("fundamental [G N⊇{}]: true"));
    let s = stdout(&run(&["classify", "t[1,1]", "--group", "GL:2"]));
    assert!(s.contains("newton: (1,1)") && s.contains("kappa: [2]"));
    let s = stdout(&run(&["classify", "s1*s1"]));
    assert!(s.contains("element: e\n"));
}

#[test]
fn parse_errors_exit_2() {
    let o = run(&["classify", "s1*x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 3"));
    assert_eq!(run(&["atlas", "--group", "E:8"]).status.code(), Some(2));
    assert_eq!(run(&["atlas", "--mu", "0,1"]).status.code(), Some(2));
    assert_eq!(run(&["atlas", "--mu", "1,0,0"]).status.code(), Some(2));
    assert_eq!(run(&["atlas", "--q", "6"]).status.code(), Some(2));
    assert_eq!(run(&["dieudonne", "--slopes", "2/4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "matrix-oracle", "--group", "GSp:4"]).status.code(), Some(2));
}

#[test]
fn budget_errors_exit_3() {
    let o = run(&["atlas", "--group", "GL:3", "--mu", "2,0,0", "--budget", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("BudgetExceeded"));
    let o = Command::new(env!("CARGO_BIN_EXE_loopstrata"))
        .args(["atlas", "--group", "GL:3", "--mu", "2,0,0"])
        .env("LOOPSTRATA_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["atlas", "--budget", "0"]).status.code(), Some(2));
}

#[test]
fn truncate_files() {
    let dir = tempfile::tempdir().unwrap();
    let diag = write(dir.path(), "diag.txt", "field 2 1\nprecision 5\nt, 0\n0, 1\n");
    let o = run(&["truncate", &diag, "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("truncation: (s1, (1,0))"));
    assert!(s.contains("oracle: agrees"));

    let id = write(dir.path(), "id.txt", "field 3 1\nprecision exact\n1, 0\n0, 1\n");
    assert!(stdout(&run(&["truncate", &id])).contains("truncation: (e, (0,0))"));

    let d = dir.path().join("d.txt");
    let o = run(&["dieudonne", "--slopes", "1/2", "--out", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["truncate", d.to_str().unwrap(), "--oracle"]);
    let s = stdout(&o);
    assert!(s.contains("truncation: (e, (1,0))"), "{s}");
    assert!(s.contains("oracle: agrees"));

    let low = write(dir.path(), "low.txt", "field 2 1\nprecision 2\nt^2, 0\n0, 1\n");
    let o = run(&["truncate", &low]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("need at least 3"));

    let bad = write(dir.path(), "bad.txt", "field 2 1\nprecision 3\nt, 0\n0, x\n");
    assert_eq!(run(&["truncate", &bad]).status.code(), Some(2));
    assert_eq!(run(&["truncate", &diag, "--group", "GL:3"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "--suite", "cor15", "--group", "GL:3", "--mu", "1,1,0"],
        vec!["verify", "--suite", "matrix-oracle", "--group", "GL:2", "--q", "2", "--precision", "3"],
        vec!["verify", "--suite", "thm14", "--group", "GSp:4"],
        vec!["verify", "--suite", "all", "--group", "GL:3", "--mu", "2,1,0"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["passed"], true);
        assert!(!v["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_reports_failures_with_exit_1() {
    let o = run(&["verify", "--suite", "fundamental", "--group", "GL:4", "--mu", "1,1,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["property"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["minimal-dieudonne-is-fundamental"]);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "thm11", "--group", "GL:2", "--mu", "1,0", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
