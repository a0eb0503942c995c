//! Black-box tests of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mbqc-adders"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn generate_then_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    for adder in ["qcla", "vbe"] {
        let path = dir.path().join(format!("{adder}.json"));
        let path = path.to_str().unwrap();
        let gen = run(&["generate", "--adder", adder, "--bits", "4", "--out", path]);
        assert!(gen.status.success(), "generate failed: {gen:?}");
        assert!(Path::new(path).exists());

        let verify = run(&["verify", "--circuit", path, "--bits", "4", "--exhaustive"]);
        assert!(verify.status.success(), "verify failed: {verify:?}");
        let text = stdout(&verify);
        assert!(text.contains("256"), "expected 256 cases in: {text}");
        assert!(!text.contains("FAIL"), "unexpected failure in: {text}");
    }
}

#[test]
fn verify_sampled_and_cross_check() {
    let out = run(&["verify", "--adder", "qcla", "--bits", "12", "--samples", "50", "--seed", "7"]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("50"));

    let cross = run(&["verify", "--adder", "cross", "--bits", "10", "--samples", "50"]);
    assert!(cross.status.success(), "{cross:?}");
}

#[test]
fn exit_code_discipline() {
    // invalid width
    let out = run(&["generate", "--adder", "qcla", "--bits", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // exhaustive sweep refused above 8 bits
    let out = run(&["verify", "--adder", "vbe", "--bits", "9", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown subcommand / bad flags come from the argument parser
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // formula domain starts at 3 bits
    let out = run(&["estimate", "--bits", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed forced outcomes
    let out = run(&[
        "simulate-pattern",
        "--gate",
        "cnot",
        "--force-outcomes",
        "0,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn estimate_reports_model_numbers() {
    let out = run(&["estimate", "--bits", "10"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains('9'), "missing depth in: {text}");
    assert!(text.contains("16830"), "missing size in: {text}");
    assert!(text.contains("3040"), "missing ripple size in: {text}");
}

#[test]
fn compare_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("compare.csv");
    let csv_path = csv_path.to_str().unwrap();
    let out = run(&["compare", "--bits-from", "3", "--bits-to", "12", "--csv", csv_path]);
    assert!(out.status.success(), "{out:?}");
    let csv = std::fs::read_to_string(csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,qcla_depth_formula,qcla_size_formula,vbe_depth_model,vbe_size_formula,\
         measured_qcla_depth,measured_qcla_sites,measured_vbe_depth,measured_vbe_sites"
    );
    assert_eq!(lines.count(), 10);
    assert!(stdout(&out).to_lowercase().contains("crossover"));
}

#[test]
fn compare_measure_fills_columns_and_reconciles() {
    let out = run(&["compare", "--bits-from", "3", "--bits-to", "6", "--measure"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let row = text
        .lines()
        .find(|l| l.starts_with("6,"))
        .expect("row for n=6");
    assert_eq!(row.split(',').count(), 9);
    assert!(row.split(',').all(|f| !f.is_empty()));
}

#[test]
fn layout_rendering_is_deterministic() {
    let a = run(&["layout", "--adder", "qcla", "--bits", "4", "--format", "ascii"]);
    let b = run(&["layout", "--adder", "qcla", "--bits", "4", "--format", "ascii"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("P1"));

    let svg = run(&["layout", "--adder", "vbe", "--bits", "3", "--format", "svg"]);
    assert!(svg.status.success());
    assert!(stdout(&svg).starts_with("<svg"));
}

#[test]
fn simulate_pattern_reports_rounds_and_fidelity() {
    let out = run(&["simulate-pattern", "--gate", "cnot", "--trials", "5", "--seed", "3"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("rounds: 1"), "{text}");

    let out = run(&["simulate-pattern", "--gate", "toffoli-phase", "--trials", "2"]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("rounds: 2"));

    let out = run(&["simulate-pattern", "--gate", "wire", "--wire-length", "7"]);
    assert!(out.status.success(), "{out:?}");
}
