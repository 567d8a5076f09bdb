use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const PROGRAM: &str = "\
space X = baire
space Y = reals
func h : X * Y -> xreal : delta 2
kernel q : X -> Y : delta 1
set A in X * Y : pi 1
let lam = integral(h, q)
let s = select(A)
assert level(s) == delta 4
assert blocked(lam) by F-INT
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projcalc")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projcalc")).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn infer_reports_and_gates() {
    let dir = TempDir::new().unwrap();
    let prog = write(dir.path(), "p.pjc", PROGRAM);

    let zfc = run(&["infer", s(&prog)]);
    assert_eq!(zfc.status.code(), Some(0), "{}", stderr(&zfc));
    let out = stdout(&zfc);
    assert!(out.starts_with("mode: ZFC\n"));
    assert!(out.contains("let lam: blocked (AxiomRequired: F-INT)"));
    assert!(out.contains("PASS assert level(s) == delta 4"));

    // Under PD the integral goes through, so the `blocked` assertion fails.
    let pd = run(&["infer", s(&prog), "--assume-pd"]);
    assert_eq!(pd.status.code(), Some(1));
    assert!(stdout(&pd).contains("let lam: delta 5-measurable"));
    assert!(stderr(&pd).contains("blocked(lam) by F-INT"));
}

#[test]
fn infer_json_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let prog = write(dir.path(), "p.pjc", PROGRAM);
    let a = run(&["infer", s(&prog), "--json"]);
    let b = run(&["infer", s(&prog), "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "projcalc/1");
    assert_eq!(v["mode"], "ZFC");
    assert_eq!(v["passed"], true);
    assert_eq!(v["assertions"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_program_exits_2_with_position() {
    let dir = TempDir::new().unwrap();
    let prog = write(dir.path(), "bad.pjc", "space X = baire\nset A in X : sigma\n");
    let o = run(&["infer", s(&prog)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
}

#[test]
fn emitted_derivations_check() {
    let dir = TempDir::new().unwrap();
    let prog = write(dir.path(), "p.pjc", PROGRAM);
    let out = dir.path().join("derivs");
    let o = run(&["infer", s(&prog), "--assume-pd", "--emit-derivations", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let mut files: Vec<PathBuf> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(files.iter().any(|f| f.ends_with("let_lam.pjd")));
    for f in &files {
        let c = run(&["check", s(f), s(&prog)]);
        assert_eq!(c.status.code(), Some(0), "{}: {}", f.display(), stderr(&c));
        assert_eq!(stdout(&c), "ok\n");
    }

    // A PD derivation does not check against a tampered level.
    let text = fs::read_to_string(out.join("let_lam.pjd")).unwrap();
    let tampered = write(dir.path(), "t.pjd", &text.replacen("\"level\":5", "\"level\":4", 1));
    let c = run(&["check", s(&tampered), s(&prog)]);
    assert_eq!(c.status.code(), Some(1));
    assert!(stderr(&c).starts_with("CheckError at /"), "{}", stderr(&c));

    let garbage = write(dir.path(), "g.pjd", "{\"rule\": ");
    let c = run(&["check", s(&garbage), s(&prog)]);
    assert_eq!(c.status.code(), Some(1));
    assert!(stderr(&c).contains("FormatError"));
}

#[test]
fn oracle_suites() {
    let o = run(&["oracle", "EPS-E", "--seed", "7", "--count", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    for (i, l) in lines.iter().enumerate() {
        assert_eq!(l["identity"], "EPS-E");
        assert_eq!(l["seed"], 7 + i as u64);
        assert_eq!(l["verdict"], "ok");
    }
    let again = run(&["oracle", "EPS-E", "--seed", "7", "--count", "3"]);
    assert_eq!(o.stdout, again.stdout);

    let all = run(&["oracle", "all", "--count", "20"]);
    assert_eq!(all.status.code(), Some(0));
    assert_eq!(stdout(&all).lines().count(), 100);

    let bad = run(&["oracle", "NOPE"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn oracle_on_a_model_file() {
    let dir = TempDir::new().unwrap();
    let model = write(
        dir.path(),
        "m.pjm",
        r#"{"spaces": {"X": ["a", "b"]},
            "funcs": {"f": {"dom": "X", "cod": "xreal", "table": [["a", "1"], ["b", "-inf"]]},
                      "g": {"dom": "X", "cod": "xreal", "table": [["a", "+inf"], ["b", "2"]]}}}"#,
    );
    let o = run(&["oracle", "SUM-PRE", "--model", s(&model), "--c", "1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "ok");
    let o = run(&["oracle", "PROD-POS", "--model", s(&model)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn game_solving() {
    let dir = TempDir::new().unwrap();
    let copy = write(dir.path(), "copy.pjg", r#"{"k": 2, "N": 0, "target": {"expr": "a0 != b0"}}"#);
    let o = run(&["game", s(&copy)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("winner: II\n"), "{out}");
    assert!(out.contains("(0) -> 0"));
    assert!(out.contains("(1) -> 1"));

    let j = run(&["game", s(&copy), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["schema"], "projcalc/1");
    assert_eq!(v["winner"], "II");
    assert_eq!(j.stdout, run(&["game", s(&copy), "--json"]).stdout);

    // Hex target 0x8000 at k=2, N=1: only the play (0,0,0,0).
    let hex = write(dir.path(), "hex.pjg", r#"{"k": 2, "N": 1, "target": "8000"}"#);
    let o = run(&["game", s(&hex)]);
    assert!(stdout(&o).starts_with("winner: II\n"));

    let limited = run_env(&["game", s(&copy)], "PROJCALC_NODE_BUDGET", "3");
    assert_eq!(limited.status.code(), Some(3));
    assert!(stderr(&limited).contains("ResourceLimit"));

    let bad = write(dir.path(), "bad.pjg", r#"{"k": 2, "N": 0, "target": {"expr": "a0 = 1"}}"#);
    assert_eq!(run(&["game", s(&bad)]).status.code(), Some(2));
}

#[test]
fn fmt_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let prog = write(dir.path(), "p.pjc", PROGRAM);
    let o = run(&["fmt", s(&prog)]);
    assert_eq!(o.status.code(), Some(0));
    let canonical = write(dir.path(), "c.pjc", &stdout(&o));
    assert_eq!(run(&["fmt", s(&canonical), "--check"]).status.code(), Some(0));
    let messy = write(dir.path(), "m.pjc", &PROGRAM.replace("integral(h, q)", "integral( h ,q )"));
    assert_eq!(run(&["fmt", s(&messy), "--check"]).status.code(), Some(1));
}
