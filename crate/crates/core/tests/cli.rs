use std::path::Path;
use std::process::{Command, Output};

use exforge::io;
use exforge::liealg::abelian;

fn exforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exforge"))
        .args(args)
        .current_dir(dir)
        .env("EXFORGE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_verify_identify_f4() {
    let dir = tempfile::tempdir().unwrap();
    let o = exforge(&["construct", "Os", "Js1", "--out", "f4.lie"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("dim 52"), "{s}");
    assert!(s.contains("checksum sha256:"), "{s}");
    assert!(dir.path().join("f4.meta.json").exists());

    let o = exforge(&["verify", "f4.lie", "--jacobi", "full"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("seed 1"));

    let o = exforge(&["identify", "f4.lie", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cell"], "Os/Js1");
    assert_eq!(v["dim"], 52);
    assert_eq!(v["delta"], 4);
    assert_eq!(v["label"], "f4s");
    assert_eq!(v["identification"]["root_count"], 48);
    for key in ["signature", "checks", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = exforge(&["construct", "Oc", "JII2", "--out", "a.lie"], dir.path());
    let b = exforge(&["construct", "-1,-1,-1", "JII2", "--out", "b.lie"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let fa = std::fs::read(dir.path().join("a.lie")).unwrap();
    let fb = std::fs::read(dir.path().join("b.lie")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn identify_labels() {
    let dir = tempfile::tempdir().unwrap();
    for (o, j, label) in [("Oc", "JII8", "e8s"), ("Os", "Jc2", "e6,4")] {
        let out = format!("{o}{j}.lie");
        assert_eq!(exforge(&["construct", o, j, "--out", &out], dir.path()).status.code(), Some(0));
        let r = exforge(&["identify", &out], dir.path());
        assert!(stdout(&r).contains(&format!("label: {label}\n")), "{}", stdout(&r));
        assert_eq!(r.status.code(), Some(0));
    }
}

#[test]
fn identify_abelian_reports_degenerate_killing_form() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ab.lie"), io::lie_to_json(&abelian(3))).unwrap();
    let r = exforge(&["identify", "ab.lie"], dir.path());
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).contains("degenerate"), "{}", stdout(&r));
}

#[test]
fn corrupted_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    exforge(&["construct", "Os", "Js1", "--out", "f4.lie"], dir.path());
    let text = std::fs::read_to_string(dir.path().join("f4.lie")).unwrap();
    let line = text.lines().nth(4).unwrap();
    let bad = text.replacen(line, &line.replace("\"2\"", "\"7\""), 1);
    assert_ne!(bad, text);
    std::fs::write(dir.path().join("f4.lie"), bad).unwrap();
    let r = exforge(&["verify", "f4.lie"], dir.path());
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).contains("basis triple ["), "{}", stdout(&r));
}

#[test]
fn import_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    exforge(&["construct", "Os", "Js1", "--out", "f4.lie"], dir.path());
    let text = std::fs::read_to_string(dir.path().join("f4.lie")).unwrap();
    let first = text.lines().nth(4).unwrap().trim().trim_end_matches(',').to_string();
    let second = text.lines().nth(5).unwrap().trim().trim_end_matches(',').to_string();

    let nonreduced = text.replacen(&first, &first.replace("\"2\"", "\"2/4\""), 1);
    std::fs::write(dir.path().join("r.lie"), nonreduced).unwrap();
    let r = exforge(&["import", "r.lie"], dir.path());
    assert_eq!(r.status.code(), Some(2));
    assert!(stdout(&r).contains("line 5"), "{}", stdout(&r));

    let dup = text.replacen(&second, &first, 1);
    std::fs::write(dir.path().join("d.lie"), dup).unwrap();
    let r = exforge(&["import", "d.lie"], dir.path());
    assert_eq!(r.status.code(), Some(2));
    let s = stdout(&r);
    assert!(s.contains("duplicate") && s.contains("line 6") && s.contains("entry 1"), "{s}");

    std::fs::write(dir.path().join("t.lie"), "{\"dim\": 2,\n  \"basis_names\": [").unwrap();
    assert_eq!(exforge(&["import", "t.lie"], dir.path()).status.code(), Some(2));
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["Os", "Jc2", "Os/Js1"] {
        let out = format!("{}.json", name.replace('/', "_"));
        assert_eq!(exforge(&["export", name, "--out", &out], dir.path()).status.code(), Some(0));
        let r = exforge(&["import", &out, "--out", "again.json"], dir.path());
        assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
        assert!(stdout(&r).contains("canonical: yes"));
        let a = std::fs::read(dir.path().join(&out)).unwrap();
        let b = std::fs::read(dir.path().join("again.json")).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn parameter_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let r = exforge(&["construct", "-1,0,1", "Jc1"], dir.path());
    assert_eq!(r.status.code(), Some(2));
    assert!(stdout(&r).contains("zero"));
    assert_eq!(exforge(&["verify", "missing.lie"], dir.path()).status.code(), Some(2));
    assert_eq!(exforge(&["verify", "x.lie", "--jacobi", "most"], dir.path()).status.code(), Some(2));
    assert_eq!(exforge(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn tables_reproduce_grid() {
    let dir = tempfile::tempdir().unwrap();
    let r = exforge(&["tables", "--jacobi", "sample:2000", "--seed", "9"], dir.path());
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    let s = stdout(&r);
    assert!(s.contains("seed 9"));
    let os: Vec<&str> = s.lines().find(|l| l.starts_with("Os ")).unwrap().split_whitespace().collect();
    assert_eq!(os, ["Os", "f4s", "f4s", "e6,4", "e6,4", "e6s", "e7,4", "e7,4", "e7s", "e8,4", "e8,4", "e8s"]);
    let dims: Vec<&str> = s.lines().skip(2).take(4).map(|l| l.split_whitespace().nth(2).unwrap()).collect();
    assert_eq!(dims, ["3", "8", "21", "52"]);
}

#[test]
fn large_sampled_verification_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    exforge(&["construct", "Oc", "Jc8", "--out", "e8.lie"], dir.path());
    let args = ["verify", "e8.lie", "--jacobi", "sample:1000000", "--seed", "42", "--format", "json"];
    let a = exforge(&args, dir.path());
    let b = exforge(&args, dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["dim"], 248);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["label"], "e8c");
}
