use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mfunctor"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generated(dir: &Path, name: &str) -> PathBuf {
    let o = run(&["generate", name]);
    assert_eq!(o.status.code(), Some(0), "generate {name}");
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, &o.stdout).unwrap();
    p
}

fn edit(src: &Path, dst: &Path, f: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(src).unwrap()).unwrap();
    f(&mut v);
    std::fs::write(dst, v.to_string()).unwrap();
    dst.to_path_buf()
}

#[test]
fn every_generated_theory_validates() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "trivial",
        "abelian-2",
        "abelian-3",
        "abelian-4",
        "fibonacci",
    ] {
        let p = generated(dir.path(), name);
        let o = run(&["validate", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let o = run(&["relations", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn generated_documents_have_expected_shape() {
    let o = run(&["generate", "trivial"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["labels"], serde_json::json!(["0"]));
    let o = run(&["generate", "abelian-2"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().len(), 2);
    for r in v["R"]
        .as_array()
        .unwrap()
        .iter()
        .chain(v["B"].as_array().unwrap())
    {
        let z = &r["matrix"][0][0];
        let m = z[0].as_f64().unwrap().hypot(z[1].as_f64().unwrap());
        assert!((m - 1.0).abs() < 1e-12);
    }
    assert!(v["comment"].as_str().unwrap().contains("gauge"));
}

#[test]
fn trivial_s_matrix_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = generated(dir.path(), "trivial");
    let o = run(&["s-matrix", p.to_str().unwrap(), "--label", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("[1.000000000000+0.000000000000i]"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn fibonacci_s_matrix_with_and_without_s() {
    let dir = tempfile::tempdir().unwrap();
    let p = generated(dir.path(), "fibonacci");
    let o = run(&["--machine", "s-matrix", p.to_str().unwrap(), "--label", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out: Value = serde_json::from_slice(&o.stdout).unwrap();
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let flat = |v: &Value| -> Vec<f64> {
        v.as_array()
            .unwrap()
            .iter()
            .flat_map(|row| row.as_array().unwrap().iter())
            .flat_map(|z| z.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
            .collect()
    };
    let (a, b) = (flat(&out["S"]), flat(&doc["S"]));
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));

    let bare = edit(&p, &dir.path().join("bare.json"), |v| {
        v.as_object_mut().unwrap().remove("S");
    });
    let o = run(&["s-matrix", bare.to_str().unwrap(), "--label", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("fixed-point residual"));
    let o = run(&[
        "s-matrix",
        bare.to_str().unwrap(),
        "--label",
        "t",
        "--variant",
        "sandwich",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_document_names_the_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = generated(dir.path(), "fibonacci");
    let bad = edit(&p, &dir.path().join("corrupted.json"), |v| {
        let blk = v["F"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|b| b["quad"] == serde_json::json!(["t", "t", "t", "t"]) && b["nu"] == "0")
            .unwrap();
        let x = blk["matrix"][0][0][0].as_f64().unwrap();
        blk["matrix"][0][0][0] = (x + 1e-3).into();
    });
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let fails: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.ends_with("FAIL"))
        .map(String::from)
        .collect();
    assert!(!fails.is_empty());
    assert!(
        fails
            .iter()
            .any(|l| l.starts_with("relpent") || l.starts_with("abba")),
        "{fails:?}"
    );
    // a loose enough tolerance accepts it
    let o = run(&["--tol", "0.1", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn format_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"labels\": [\"0\"]").unwrap();
    assert_eq!(
        run(&["validate", p.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let good = generated(dir.path(), "trivial");
    let extra = edit(&good, &dir.path().join("extra.json"), |v| {
        v["bogus"] = 1.into();
    });
    assert_eq!(
        run(&["validate", extra.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["validate", "/nonexistent/doc.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["s-matrix", good.to_str().unwrap(), "--label", "zz"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unknown_generator_exits_three() {
    assert_eq!(run(&["generate", "ising"]).status.code(), Some(3));
}

#[test]
fn dims_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = generated(dir.path(), "fibonacci");
    let q = |args: &[&str]| {
        let mut a = vec!["dims", p.to_str().unwrap()];
        a.extend_from_slice(args);
        stdout(&run(&a)).trim().to_string()
    };
    assert_eq!(q(&["--genus", "2"]), "5");
    assert_eq!(q(&["--genus", "1"]), "2");
    assert_eq!(q(&["--genus", "0", "--boundary", "0"]), "1");
    assert_eq!(q(&["--genus", "0", "--boundary", "t"]), "0");
    assert_eq!(q(&["--genus", "0", "--boundary", "t,t,t"]), "1");
}

#[test]
fn machine_output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let p = generated(dir.path(), "abelian-4");
    let a = run(&["--machine", "--jobs", "1", "relations", p.to_str().unwrap()]);
    let b = run(&["--machine", "--jobs", "4", "relations", p.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn literal_readings_fail_honestly() {
    let dir = tempfile::tempdir().unwrap();
    let p = generated(dir.path(), "fibonacci");
    let o = run(&["relations", p.to_str().unwrap(), "--closed-form", "printed"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("dehn-closed-printed"));
    let o = run(&["relations", p.to_str().unwrap(), "--mcg-form", "literal"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_documents_exit_codes() {
    let o = run(&["--help"]);
    let s = stdout(&o);
    for needle in [
        "Exit codes",
        "validate",
        "s-matrix",
        "dims",
        "generate",
        "--tol",
        "--jobs",
        "--machine",
    ] {
        assert!(s.contains(needle), "missing {needle}");
    }
    assert_eq!(
        run(&["--tol", "-1", "generate", "trivial"]).status.code(),
        Some(2)
    );
}
