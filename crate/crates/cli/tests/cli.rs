use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hermclass::ResultFile;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hermclass"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], input: &Path, output: &Path) -> Output {
    bin().arg("run").arg("--input").arg(input).arg("--output").arg(output).args(args).output().unwrap()
}

const QUADRATIC: &str = r#"
unknowns = ["x"]
parameters = ["y1", "y2"]
equations = ["x^2 + y1*x + y2"]
"#;

#[test]
fn quadratic_family_end_to_end() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "q.toml", QUADRATIC);
    let output = dir.path().join("q.json");
    let out = run(&["--verify", "5", "--seed", "3"], &input, &output);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = ResultFile::from_json(&fs::read_to_string(&output).unwrap()).unwrap();
    r.self_check().unwrap();
    assert!(r.minors.iter().any(|m| m.poly == "y1^2 - 4*y2"));
    let mut counts: Vec<i64> = r.regions.iter().map(|g| g.count).collect();
    counts.sort();
    counts.dedup();
    assert_eq!(counts, vec![0, 2]);
    assert_eq!(r.seed, 3);
    assert!(r.timing.is_some());
}

#[test]
fn practical_variant_from_file_options() {
    let dir = TempDir::new().unwrap();
    let body = format!("{QUADRATIC}inequalities = [\"x\"]\n[options]\nvariant = \"determinants-first\"\n");
    let input = write(&dir, "q.toml", &body);
    let output = dir.path().join("q.json");
    let out = run(&[], &input, &output);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = ResultFile::from_json(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(r.variant.to_string(), "determinants-first");
    assert_eq!(r.determinants.len(), 2);
    r.self_check().unwrap();
}

#[test]
fn malformed_expression_reports_line_and_column() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.toml", "unknowns = [\"x\"]\nparameters = [\"y\"]\nequations = [\"x +* y\"]\n");
    let out = run(&[], &input, &dir.path().join("o.json"));
    assert!(!out.status.success());
    assert_ne!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:3:18"), "{err}");
    assert!(!dir.path().join("o.json").exists());
}

#[test]
fn unknown_variable_is_an_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.toml", "unknowns = [\"x\"]\nparameters = [\"y\"]\nequations = [\"x + z\"]\n");
    let out = run(&[], &input, &dir.path().join("o.json"));
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains('z'));
}

#[test]
fn inconsistent_system_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.toml", "unknowns = [\"x\"]\nparameters = [\"y\"]\nequations = [\"x\", \"x - 1\"]\n");
    let output = dir.path().join("i.json");
    let out = run(&[], &input, &output);
    assert_eq!(out.status.code(), Some(2));
    let r = ResultFile::from_json(&fs::read_to_string(&output).unwrap()).unwrap();
    assert!(r.inconsistent);
}

#[test]
fn heuristic_output_with_require_complete_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "q.toml", QUADRATIC);
    let output = dir.path().join("q.json");
    let out = run(&["--backend", "heuristic", "--require-complete"], &input, &output);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["--backend", "heuristic"], &input, &output);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn determinants_only() {
    let dir = TempDir::new().unwrap();
    let body = format!("{QUADRATIC}inequalities = [\"x\"]\n");
    let input = write(&dir, "q.toml", &body);
    let output = dir.path().join("q.json");
    let out = run(&["--dets-only"], &input, &output);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = ResultFile::from_json(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(r.determinants, vec!["m[0][2]", "m[1][2]"]);
    assert!(r.regions.is_empty());
}

#[test]
fn generator_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.toml");
    let b = dir.path().join("b.toml");
    for p in [&a, &b] {
        let out = bin()
            .args(["gen", "--n", "3", "--t", "2", "--s", "1", "--d", "2", "--seed", "7", "--output"])
            .arg(p)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let f = hermclass::SystemFile::from_toml(&text).unwrap();
    assert_eq!((f.unknowns.len(), f.parameters.len(), f.equations.len(), f.inequalities.len()), (3, 2, 3, 1));
}

#[test]
fn usage_errors_do_not_look_like_inconsistency() {
    let out = bin().args(["run", "--backend", "nope", "--input", "x.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    assert!(bin().arg("--help").output().unwrap().status.success());
}
