use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use specalg::audit::parse_witness;
use specalg::cli::run;
use specalg::format::{parse_spec, SpecValue};
use specalg::ia::IaTheory;
use specalg::{law_predicate, LawId, Verdict};
use tempfile::NamedTempFile;

const AUTOMATA: &str = "\
spec Star
theory nfa
alphabet a
states s0
initial s0
accepting s0
t s0 a s0
end

spec Even
theory nfa
alphabet a
states s0,s1
initial s0
accepting s0
t s0 a s1
t s1 a s0
end

spec Other
theory nfa
alphabet a,b
states s0
initial s0
accepting s0
end
";

const MODAL: &str = "\
spec Loop
theory mts
alphabet a
states s0
initial s0
must s0 a s0
end

spec Top
theory mts
alphabet a
states u
initial u
may u a u
end
";

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/pq.spec").display().to_string()
}

fn call(args: &[&str]) -> specalg::cli::Outcome {
    run(std::iter::once("specalg").chain(args.iter().copied()))
}

#[test]
fn refine_reports_through_exit_code() {
    let f = file(AUTOMATA);
    let path = f.path().to_str().unwrap();
    assert_eq!(call(&["refine", path, "--left", "Even", "--right", "Star"]).code, 0);
    assert_eq!(call(&["refine", path, "--left", "Star", "--right", "Even"]).code, 1);
    assert_eq!(call(&["refine", path, "--left", "Star", "--right", "Other"]).code, 4);
    assert_eq!(call(&["refine", path, "--left", "Star", "--right", "Missing"]).code, 2);
}

#[test]
fn binary_operations_write_parseable_results() {
    let f = file(AUTOMATA);
    let path = f.path().to_str().unwrap();
    let out = NamedTempFile::new().unwrap();
    let out_path = out.path().to_str().unwrap();
    let o = call(&["conjoin", path, "--left", "Star", "--right", "Even", "-o", out_path]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let written = std::fs::read_to_string(out_path).unwrap();
    assert!(matches!(parse_spec(&written).unwrap().get("Star_and_Even"), Some(SpecValue::Nfa(_))));

    for (cmd, name) in [("compose", "Star_par_Even"), ("disjoin", "Star_or_Even")] {
        let o = call(&[cmd, path, "--left", "Star", "--right", "Even"]);
        assert_eq!(o.code, 0);
        assert!(parse_spec(&o.stdout).unwrap().get(name).is_some(), "{}", o.stdout);
    }
    let o = call(&["quotient", path, "--left", "Even", "--right", "Star", "--kind", "conj"]);
    assert!(parse_spec(&o.stdout).unwrap().get("Even_by_Star").is_some());
}

#[test]
fn quotient_is_unsupported_outside_automata() {
    let f = file(MODAL);
    let path = f.path().to_str().unwrap();
    assert_eq!(call(&["quotient", path, "--left", "Loop", "--right", "Top", "--kind", "par"]).code, 4);
    assert_eq!(call(&["compose", path, "--left", "Loop", "--right", "Top", "--mts-rule", "join"]).code, 0);
}

#[test]
fn parse_errors_exit_three_with_line_number() {
    let f = file("spec X\ntheory nfa\nalphabet a\nstates s0\ninitial s9\nend\n");
    let o = call(&["refine", f.path().to_str().unwrap(), "--left", "X", "--right", "X"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("line 5"), "{}", o.stderr);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["audit"]).code, 2);
    assert_eq!(call(&["audit", "--theory", "fa", "--max-states", "0"]).code, 2);
    assert_eq!(call(&["audit", "--theory", "fa", "--mode", "exhaustive", "--max-states", "3"]).code, 2);
    assert_eq!(call(&["frobnicate"]).code, 2);
}

#[test]
fn compat_with_ready_receiver_and_clashing_outputs() {
    let path = fixture();
    let o = call(&["compat", &path, "--left", "P", "--right", "Qready", "--mode", "pessimistic"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = call(&["compat", &path, "--left", "P", "--right", "Q", "--mode", "pessimistic"]);
    assert_eq!((o.code, o.stdout.trim()), (1, "incompatible"));
    assert_eq!(call(&["compat", &path, "--left", "P", "--right", "P", "--mode", "optimistic"]).code, 4);
}

#[test]
fn ia_audit_reports_partial_composition_with_sound_witness() {
    let o = call(&["audit", "--theory", "ia", "--samples", "500", "--seed", "7", "--format", "json"]);
    assert_eq!(o.code, 1, "{}", o.stderr);
    let report: Value = serde_json::from_str(&o.stdout).unwrap();
    let verdicts = report["verdicts"].as_array().unwrap();
    let total = verdicts.iter().find(|v| v["law"] == "PAR_TOTAL").unwrap();
    assert_eq!(total["status"], "fails");
    assert_eq!(verdicts.iter().find(|v| v["law"] == "UNIV").unwrap()["status"], "inapplicable");

    let theory = IaTheory::new(2);
    let witness: Vec<String> =
        total["witness"].as_array().unwrap().iter().map(|w| w.as_str().unwrap().to_string()).collect();
    let args = parse_witness(&theory, &witness).unwrap();
    assert_eq!(law_predicate(&theory, LawId::ParTotal, &args).unwrap(), Verdict::False);
}

#[test]
fn every_reported_witness_falsifies_its_law() {
    let o = call(&["audit", "--theory", "mts", "--mts-rule", "meet", "--samples", "300", "--seed", "2", "--format", "json"]);
    let report: Value = serde_json::from_str(&o.stdout).unwrap();
    let theory = specalg::mts::MtsTheory::new(
        specalg::alphabet::Alphabet::letters(2).unwrap(),
        specalg::mts::ComposeRule::Meet,
    );
    let mut seen = 0;
    for v in report["verdicts"].as_array().unwrap().iter().filter(|v| v["status"] == "fails") {
        let law: LawId = v["law"].as_str().unwrap().parse().unwrap();
        let witness: Vec<String> = v["witness"].as_array().unwrap().iter().map(|w| w.as_str().unwrap().into()).collect();
        let args = parse_witness(&theory, &witness).unwrap();
        assert_eq!(law_predicate(&theory, law, &args).unwrap(), Verdict::False, "{law}");
        seen += 1;
    }
    assert!(seen >= 1);
}

#[test]
fn enumerate_and_no_universal_commands() {
    let o = call(&["enumerate", "--theory", "fa"]);
    assert_eq!(o.code, 0);
    assert_eq!(parse_spec(&o.stdout).unwrap().blocks.len(), 4);
    let o = call(&["no-universal", "--max-states", "1", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let table: Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(!table["rows"].as_array().unwrap().is_empty());
}

#[test]
fn binary_runs_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_specalg"))
        .args(["compat", &fixture(), "--left", "P", "--right", "Q", "--mode", "optimistic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("theory ia"), "{text}");
}
