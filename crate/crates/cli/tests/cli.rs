use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn rtverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtverify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../machines")
}

#[test]
fn simulate_twin_with_fixed_coin() {
    let o = rtverify(&["simulate", "--machine", "twin-rt", "--input", "01#01", "--cert", "01", "--bits", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Accept"));
}

#[test]
fn simulate_without_bits_prints_probability() {
    let o = rtverify(&["simulate", "--machine", "twin-rt", "--input", "01#00", "--cert", "01"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().next(), Some("probability: 1/2^1"));
}

#[test]
fn simulate_automaton() {
    let o = rtverify(&["simulate", "--machine", "twin-1dfa2", "--input", "01#01"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Accept\noutcome: Accepted\n"));
    let o = rtverify(&["simulate", "--machine", "nonpal-1nfa2", "--input", "010"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nonpal_soundness_report() {
    let o = rtverify(&["check", "--verifier", "nonpal-rt", "--language", "nonpal", "--max-len", "8", "--soundness"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("worst-error: 1/2^1\n"), "{out}");
    assert!(out.contains("result: pass\n"));
}

#[test]
fn failing_completeness_exits_one() {
    // the twin verifier knows nothing about palindromes
    let o = rtverify(&["check", "--verifier", "twin-rt", "--language", "nonpal", "--max-len", "3", "--completeness"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("result: fail"));
}

#[test]
fn reports_are_byte_identical() {
    let args = |jobs: &'static str| {
        vec!["check", "--verifier", "lik-rt", "--language", "lik", "--max-len", "6", "--soundness", "--format", "tsv", "--jobs", jobs]
    };
    let first = rtverify(&args("1"));
    assert_eq!(first.status.code(), Some(0));
    for jobs in ["1", "3", "8"] {
        assert_eq!(rtverify(&args(jobs)).stdout, first.stdout, "--jobs {jobs}");
    }
    assert!(stdout(&first).contains("input\tmember\tprobability\twitness\n"));
}

#[test]
fn compiled_verifier_passes_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.txt");
    let out_s = out.to_str().unwrap();
    let o = rtverify(&["compile", "--construction", "thm2", "--machine", "twin-1dfa2", "--out", out_s]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for mode in ["--completeness", "--soundness"] {
        let o = rtverify(&["check", "--verifier", out_s, "--language", "twin", "--max-len", "4", mode]);
        assert_eq!(o.status.code(), Some(0), "{mode}: {}", stdout(&o));
    }
}

#[test]
fn certificates_feed_simulation() {
    let o = rtverify(&["certify", "--machine", "nonpal-rt", "--input", "001"]);
    assert_eq!(stdout(&o), "10\n");
    let o = rtverify(&["simulate", "--machine", "nonpal-rt", "--input", "001", "--cert", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("probability: 2/2^1\n"));

    let o = rtverify(&["certify", "--machine", "nonpal-1nfa2", "--input", "01"]);
    assert_eq!(o.status.code(), Some(0));
    let cert = stdout(&o);
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("h.txt");
    let v = v.to_str().unwrap();
    rtverify(&["compile", "--construction", "thm1-fwd", "--machine", "nonpal-1nfa2", "--out", v]);
    let o = rtverify(&["simulate", "--machine", v, "--input", "01", "--cert", cert.trim()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = rtverify(&["certify", "--machine", "nonpal-rt", "--input", "010"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn equivalence_counterexample() {
    let o = rtverify(&["equiv", "--a", "nonpal-1nfa2", "--b", "twin", "--max-len", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "counterexample: 01\n");
    let o = rtverify(&["equiv", "--a", "twin-1dfa2", "--b", "twin", "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rtverify(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rtverify(&["check", "--verifier", "twin-rt"]).status.code(), Some(2));
    assert_eq!(rtverify(&["simulate", "--machine", "no-such-machine"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "kind verifier\ninput rt\nalphabet a\ncert-alphabet x\nstates q acc rej\ncoin\nstart q\naccept acc\nreject rej\n").unwrap();
    let o = rtverify(&["simulate", "--machine", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing key: random-bits"), "{}", stderr(&o));

    std::fs::write(&f, "kind 1dfa\nheads 1\nalphabet a\nstates q acc rej\nstart q\naccept acc\nreject rej\ntrans q ^ acc +1\n").unwrap();
    let o = rtverify(&["simulate", "--machine", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 8"), "{}", stderr(&o));
}

#[test]
fn zoo_dump_matches_bundled_corpus() {
    let o = rtverify(&["zoo", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ln-rt:N"));

    let dir = tempfile::tempdir().unwrap();
    let o = rtverify(&["zoo", "--dump", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut n = 0;
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let p = e.unwrap().path();
        let bundled = corpus().join(p.file_name().unwrap());
        assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&bundled).unwrap(), "{}", bundled.display());
        n += 1;
    }
    assert_eq!(n, 8);
}

#[test]
fn bundled_files_validate() {
    for e in std::fs::read_dir(corpus()).unwrap() {
        let p = e.unwrap().path();
        let o = rtverify(&["zoo", "--show", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", p.display());
        assert_eq!(o.stdout, std::fs::read(&p).unwrap(), "{}", p.display());
    }
}
