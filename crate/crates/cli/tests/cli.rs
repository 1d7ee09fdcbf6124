use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn seqent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqent"))
        .args(args)
        .env_remove("SEQENT_BUDGET_NODES")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn build(dir: &Path, args: &[&str]) {
    let mut all = vec!["build", "--out", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = seqent(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn builds_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        build(d, &["--family", "log-m", "--m", "2", "--kmax", "3", "--symbol-lines", "5000"]);
    }
    for f in ["manifest.txt", "symbols.tsv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let syms = fs::read_to_string(a.join("symbols.tsv")).unwrap();
    let first: Vec<&str> = syms
        .lines()
        .filter(|l| !l.starts_with('#'))
        .take(8)
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(first, ["a0", "a1", "a2", "a3", "a-3", "a-2", "a-1", "a0"]);
    assert!(syms.lines().find(|l| l.starts_with("0\t")).unwrap().ends_with("B1/P1/W1"));
}

#[test]
fn dense_manifest_lists_every_segment() {
    let tmp = tempfile::tempdir().unwrap();
    build(tmp.path(), &["--family", "log-infty", "--nmax", "2"]);
    let man = fs::read_to_string(tmp.path().join("manifest.txt")).unwrap();
    assert!(man.starts_with("format: 1\n"));
    let block2 = &man[man.find("block 2").expect("block 2 listed")..];
    assert!(block2.contains("segments: 27"), "{block2}");
}

#[test]
fn invalid_configs_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(code(&seqent(&["build", "--m", "1", "--out", out])), 2);
    assert_eq!(code(&seqent(&["build", "--kmax", "0", "--out", out])), 2);
}

#[test]
fn verify_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let d = dir.to_str().unwrap();
    build(dir, &["--m", "2", "--kmax", "2"]);

    let ok = seqent(&["verify", "-d", d, "--suite", "R1"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("overall: pass"));
    let report = fs::read_to_string(dir.join("reports/R1.txt")).unwrap();
    assert!(report.starts_with("format: 1"));

    // a suite for the other family is a usage error
    assert_eq!(code(&seqent(&["verify", "-d", d, "--suite", "section3"])), 2);

    let tight = seqent(&["verify", "-d", d, "--suite", "R2", "--budget-nodes", "10"]);
    assert_eq!(code(&tight), 3, "{}", stdout(&tight));

    let path = dir.join("symbols.tsv");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("4\ta-3\t", "4\ta-2\t", 1)).unwrap();
    let bad = seqent(&["verify", "-d", d, "--suite", "growth"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("expected=a-3 found=a-2"), "{}", stdout(&bad));
}

#[test]
fn budget_can_come_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().to_str().unwrap();
    build(tmp.path(), &["--m", "2", "--kmax", "2"]);
    let out = Command::new(env!("CARGO_BIN_EXE_seqent"))
        .args(["verify", "-d", d, "--suite", "R2"])
        .env("SEQENT_BUDGET_NODES", "10")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn certificates_replay() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let d = dir.to_str().unwrap();
    build(dir, &["--m", "2", "--kmax", "2"]);
    let out = seqent(&["verify", "-d", d, "--suite", "R2", "--r2-j", "a3,inf"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    for j in ["a3", "inf"] {
        let cert = dir.join(format!("reports/certificates/R2_{j}.txt"));
        let replay = seqent(&["replay", "-d", d, cert.to_str().unwrap()]);
        assert_eq!(code(&replay), 0, "{}", stdout(&replay));
    }
}

#[test]
fn entropy_evidence_for_three_centres() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().to_str().unwrap();
    build(tmp.path(), &["--m", "3", "--kmax", "2"]);
    let out = seqent(&["entropy", "-d", d, "--centers", "a0,a1,a2"]);
    assert_eq!(code(&out), 0);
    let report = fs::read_to_string(tmp.path().join("entropy.txt")).unwrap();
    assert!(report.contains("evidence: log 3\n"), "{report}");
}

#[test]
fn flower_values() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    let out = seqent(&["flower", "--petal", "log-m:2", "--petal", "log-m:3", "-o", o]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("\nvalue: log 3\n"));
    assert!(stdout(&out).contains("cross-petal: pass"));

    let frozen = seqent(&[
        "flower", "--petal", "log-m:2", "--petal", "log-m:3", "--modes", "frozen,frozen", "--declared-increasing",
        "2,3,5", "-o", o,
    ]);
    let text = fs::read_to_string(tmp.path().join("flower.txt")).unwrap();
    assert_eq!(text, stdout(&frozen));
    assert!(text.contains("\nvalue: 0\n"));
    assert!(text.contains("-> inf\n"));
}
