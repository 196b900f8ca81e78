use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_regcount"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dump_sweep_matches_golden() {
    let vars = ["r,t"; 6].join(";");
    let o = run(&["dump-sweep", "--automaton", "catalog:RST", "--vars", &vars, "--counter", "0", "--mode", "max"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), include_str!("golden/rst_premax.txt"));
}

#[test]
fn dump_sweep_both_halves() {
    let o = run(&["dump-sweep", data("rst_n6.json").to_str().unwrap(), "--mode", "min", "--rows", "both"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let (pre, suf) = text.split_once("--\n").unwrap();
    assert_eq!(pre.lines().count(), 7);
    assert_eq!(suf.lines().count(), 7);
    assert!(pre.starts_with("0: eps=0\n"));
    assert!(suf.starts_with("1: eps="));
}

#[test]
fn exact_removes_last_two_on_b() {
    let o = run(&["propagate", data("b_strict.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "mode: exact\nstatus: fixpoint\nx5 != 2\npasses: 2\n");
}

#[test]
fn catalog_piped_into_propagate() {
    let json = run(&["catalog", "B"]).stdout;
    let o = run_stdin(
        &["propagate", "--automaton", "-", "--vars", "2;1,2;1;1,2;1,2", "--counter", "1", "--mode", "exact"],
        &json,
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("x5 != 2"));
}

#[test]
fn instance_from_stdin() {
    let json = fs::read(data("b_strict.json")).unwrap();
    let o = run_stdin(&["propagate", "-", "--mode", "decomposed"], &json);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("mode: decomposed"));
    assert!(!stdout(&o).contains("x5 != 2"));
}

#[test]
fn decomposition_misses_what_oracle_sees() {
    let path = data("b_counter.json");
    let p = run(&["propagate", path.to_str().unwrap(), "--mode", "decomposed"]);
    assert!(!stdout(&p).contains("N != 1"));
    let o = run(&["oracle", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("N != 1"));
    assert!(text.contains("supported: N = {0,2}"));
}

#[test]
fn oracle_flags_incomplete_pruning() {
    let path = data("b_incomplete.json");
    let p = run(&["propagate", path.to_str().unwrap()]);
    assert!(!stdout(&p).contains("x5 != 2"));
    let o = run(&["oracle", path.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("status: satisfiable"));
    assert!(text.contains("x5 != 2"));
    assert!(text.contains("solutions: 2"));
}

#[test]
fn propagate_failure_exits_one() {
    let o = run(&["propagate", "--automaton", "catalog:B", "--vars", "2;2", "--counter", "5", "--mode", "atleast"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status: failed"));
}

#[test]
fn among_instance_reports_native_values() {
    let path = data("among.json");
    let p = run(&["propagate", path.to_str().unwrap()]);
    let o = run(&["oracle", path.to_str().unwrap()]);
    let removals = |text: String| -> Vec<String> {
        text.lines().filter(|l| l.contains(" != ")).map(str::to_owned).collect()
    };
    let (a, b) = (removals(stdout(&p)), removals(stdout(&o)));
    assert_eq!(a, b);
    assert!(a.contains(&"x2 != 5".to_owned()));
}

#[test]
fn solve_counts_solutions() {
    let o = run(&["solve", data("b_incomplete.json").to_str().unwrap(), "--print-solutions"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("solutions: 2\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("solution: ")).count(), 2);
}

#[test]
fn validate_rejects_missing_transition() {
    let o = run(&["validate", data("broken_automaton.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing transition"));
}

#[test]
fn validate_accepts_catalog_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["AAB", "AMONG", "RST", "B"] {
        let path = dir.path().join(format!("{name}.json"));
        fs::write(&path, run(&["catalog", name]).stdout).unwrap();
        let o = run(&["validate", path.to_str().unwrap()]);
        assert!(o.status.success(), "{name}");
        assert!(stdout(&o).starts_with("ok: automaton"));
    }
}

#[test]
fn catalog_list_and_unknown() {
    let o = run(&["catalog", "--list"]);
    assert_eq!(stdout(&o), "AAB\nAMONG\nRST\nB\n");
    let o = run(&["catalog", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fuzz_is_clean_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("violations");
    let o = run(&["fuzz", "--seed", "42", "--count", "300", "--mode", "all", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("violations: 0"));
    let written = fs::read_dir(&out).map(|d| d.count()).unwrap_or(0);
    assert_eq!(written, 0);
}

#[test]
fn fuzz_is_reproducible() {
    let args = ["fuzz", "--seed", "7", "--count", "100", "--mode", "exact", "--threads", "1"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn bench_tsv_has_one_row_per_family() {
    let o = run(&["bench", "--catalog", "AAB,B,RST", "--count", "4", "--format", "tsv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("family\tinstances\t"));
    let families: Vec<&str> = lines[1..].iter().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(families, ["AAB", "B", "RST"]);
    for l in &lines[1..] {
        assert_eq!(l.split('\t').nth(1), Some("4"));
    }
}

#[test]
fn bench_reads_instance_directory() {
    // An explicit "family" field wins over the directory name.
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("bfam");
    fs::create_dir(&fam).unwrap();
    for f in ["b_strict.json", "b_incomplete.json"] {
        fs::copy(data(f), fam.join(f)).unwrap();
    }
    let o = run(&["bench", fam.to_str().unwrap(), "--format", "table"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("B ") && l.split_whitespace().nth(1) == Some("2")));
    let mut unnamed: serde_json::Value = serde_json::from_slice(&fs::read(data("b_counter.json")).unwrap()).unwrap();
    unnamed.as_object_mut().unwrap().remove("family");
    fs::write(fam.join("b_counter.json"), unnamed.to_string()).unwrap();
    let o = run(&["bench", fam.to_str().unwrap(), "--format", "tsv"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("bfam\t1\t")), "{text}");
}
