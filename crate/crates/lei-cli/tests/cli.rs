//! End-to-end tests of the `lei` binary: every subcommand, every exit
//! code, and the documented golden outcomes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lei::model::load_model;

fn lei() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lei"));
    // Tests pin seeds explicitly; the ambient environment must not leak in.
    cmd.env_remove("LEI_SEED");
    cmd
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../lei/fixtures")
        .join(rel)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn eval_reports_the_ternary_value_and_both_supports() {
    let out = lei()
        .args(["eval", "-w", "w0", "-f", "I p & I q & I r"])
        .arg("-m")
        .arg(fixture("models/m_star.model"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "True\nsat: true  sat_neg: false\n");

    let out = lei()
        .args(["eval", "-w", "w1", "-f", "I p"])
        .arg("-m")
        .arg(fixture("models/m_star.model"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "False\nsat: false  sat_neg: true\n");
}

#[test]
fn announcing_then_evaluating_reproduces_the_documented_outcome() {
    let dir = tempfile::tempdir().expect("tempdir");
    let updated = dir.path().join("updated.model");
    let out = lei()
        .args(["announce", "-w", "w0", "-f", "p"])
        .arg("-m")
        .arg(fixture("models/m2.model"))
        .arg("-o")
        .arg(&updated)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("new world w0@1"), "{}", stdout(&out));

    let out = lei()
        .args(["eval", "-w", "w0", "-f", "~I p & ~I q"])
        .arg("-m")
        .arg(&updated)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("True\n"), "{}", stdout(&out));
}

#[test]
fn announce_without_output_file_prints_a_loadable_model() {
    let out = lei()
        .args(["announce", "-w", "w0", "-f", "p"])
        .arg("-m")
        .arg(fixture("models/m2.model"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    let model = load_model(&stdout(&out)).expect("stdout is a model file");
    assert!(model.has_world("w0@1"));
    assert!(stderr(&out).contains("drift check"), "{}", stderr(&out));
}

#[test]
fn lying_announcements_are_refused() {
    let dir = tempfile::tempdir().expect("tempdir");
    let lie = dir.path().join("lie.model");
    std::fs::write(
        &lie,
        "model lie\nworld w0 { p=F }\nworld w1 { }\nedge w0 w1\n",
    )
    .expect("write model");
    let out = lei()
        .args(["announce", "-w", "w0", "-f", "p"])
        .arg("-m")
        .arg(&lie)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "INCONSISTENT\n");
}

#[test]
fn solve_finds_and_writes_witnesses() {
    let dir = tempfile::tempdir().expect("tempdir");
    let witness = dir.path().join("witness.model");
    let out = lei()
        .args(["solve", "-f", "I p", "-o"])
        .arg(&witness)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("SAT (point "), "{}", stdout(&out));
    let text = std::fs::read_to_string(&witness).expect("witness written");
    load_model(&text).expect("witness parses");

    let out = lei()
        .args(["solve", "-f", "p & ~p"])
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "UNSAT<=4\n");
}

#[test]
fn an_exhausted_search_budget_exits_three_unless_reporting() {
    let query = ["solve", "-f", "I p & I q & I r & I s", "-f", "~(I p)"];
    let out = lei()
        .args(query)
        .args(["--max-candidates", "10"])
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out), "UNKNOWN\n");

    let out = lei()
        .args(query)
        .args(["--max-candidates", "10", "--on-unknown", "report"])
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "UNKNOWN\n");
}

#[test]
fn undecided_updates_exit_three_unless_reporting() {
    let args = [
        "eval",
        "-w",
        "w0",
        "-f",
        "[p | q] I r",
        "--max-candidates",
        "3",
    ];
    let out = lei()
        .args(args)
        .arg("-m")
        .arg(fixture("models/m_star.model"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert_eq!(stdout(&out), "UNKNOWN\n");

    let out = lei()
        .args(args)
        .args(["--on-unknown", "report"])
        .arg("-m")
        .arg(fixture("models/m_star.model"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "UNKNOWN\n");
}

#[test]
fn check_proof_walks_the_script_line_by_line() {
    let out = lei()
        .arg("check-proof")
        .arg(fixture("proofs/announce_conj.proof"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("line 1: ok"), "{text}");
    assert!(
        text.trim_end().ends_with("derivation checks (20 lines)"),
        "{text}"
    );
}

#[test]
fn check_proof_flags_the_first_bad_line() {
    let dir = tempfile::tempdir().expect("tempdir");
    let script = dir.path().join("bad.proof");
    std::fs::write(
        &script,
        "1. (p & q) -> p  BY axiom:A1\n2. (p & q) -> q  BY axiom:A1\n",
    )
    .expect("write script");
    let out = lei()
        .arg("check-proof")
        .arg(&script)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("line 1: ok"), "{text}");
    assert!(text.contains("line 2: error:"), "{text}");
}

#[test]
fn malformed_scripts_are_usage_errors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let script = dir.path().join("garbled.proof");
    std::fs::write(&script, "this is not a derivation\n").expect("write script");
    let out = lei()
        .arg("check-proof")
        .arg(&script)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("script line 1"), "{}", stderr(&out));
}

#[test]
fn validate_is_seed_reproducible() {
    let run = || {
        lei()
            .args([
                "validate",
                "--suite",
                "equivalence",
                "--trials",
                "150",
                "--seed",
                "5",
            ])
            .output()
            .expect("spawn")
    };
    let first = run();
    let second = run();
    assert_eq!(code(&first), 0, "{}", stdout(&first));
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).contains("seed 5"), "{}", stdout(&first));
}

#[test]
fn the_seed_environment_variable_wins() {
    let out = lei()
        .args([
            "validate",
            "--suite",
            "equivalence",
            "--trials",
            "50",
            "--seed",
            "5",
        ])
        .env("LEI_SEED", "7")
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("seed 7"), "{}", stdout(&out));

    let out = lei()
        .args(["validate", "--suite", "equivalence", "--trials", "50"])
        .env("LEI_SEED", "junk")
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("LEI_SEED"), "{}", stderr(&out));
}

#[test]
fn every_documented_suite_name_is_accepted() {
    for suite in ["soundness", "equivalence", "update", "extmodel"] {
        let out = lei()
            .args(["validate", "--suite", suite, "--trials", "2", "--seed", "1"])
            .output()
            .expect("spawn");
        assert_eq!(code(&out), 0, "suite {suite}: {}", stdout(&out));
        assert!(stdout(&out).starts_with(&format!("suite {suite}: pass")));
    }
    let out = lei()
        .args(["validate", "--suite", "nonsense"])
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 2);
}

#[test]
fn dot_double_rings_the_requested_point() {
    let out = lei()
        .args(["dot", "-w", "w0"])
        .arg("-m")
        .arg(fixture("models/chocolate.model"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("digraph"), "{text}");
    assert!(text.contains("peripheries=2"), "{text}");

    let out = lei()
        .args(["dot", "-w", "nowhere"])
        .arg("-m")
        .arg(fixture("models/chocolate.model"))
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 2);
}

#[test]
fn figures_replays_the_whole_gallery() {
    let out = lei().arg("figures").output().expect("spawn");
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.matches("\nok    ").count() >= 39, "{text}");
    assert!(text.trim_end().ends_with("0 failures"), "{text}");
}

#[test]
fn missing_inputs_are_usage_errors() {
    let out = lei()
        .args(["eval", "-m", "no_such.model", "-w", "w0", "-f", "p"])
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no_such.model"), "{}", stderr(&out));

    let out = lei().arg("nonsense").output().expect("spawn");
    assert_eq!(code(&out), 2);
}
