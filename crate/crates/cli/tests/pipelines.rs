use std::path::{Path, PathBuf};
use std::process::Command;

use cfk_cli::commands::{reports, Cli};
use cfk_cli::document::parse_document;
use cfk_cli::pipeline::{custom_pipeline, theorem_pipeline, thin_knot_pipeline, Options, PipelineError};
use cfk_cli::report::Format;
use clap::Parser;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn no_files(_: &str) -> cfk_cli::pipeline::Result<(String, cfk_cli::document::ComplexDocument)> {
    Err(PipelineError::Stage { stage: "load".into(), message: "no files in this test".into() })
}

fn cfk(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cfk")).args(args).output().unwrap()
}

#[test]
fn doubled_unknot_is_inconclusive() {
    let ops = ["double(unknot)".to_string(), "obstruct".to_string()];
    let r = custom_pipeline(&ops, &ops, &no_files, Options::default()).unwrap();
    assert_eq!(r.verdict.as_ref().unwrap().status(), "INCONCLUSIVE");
    assert!(r.all_certificates_pass());
}

#[test]
fn empty_custom_pipeline_is_header_only() {
    let r = custom_pipeline(&["custom".into()], &[], &no_files, Options::default()).unwrap();
    assert!(r.steps.is_empty() && r.verdict.is_none());
    assert_eq!(r.to_text(false), "cfk pipeline custom  [report/v1]\n");
}

#[test]
fn unknown_operation_aborts() {
    let err = custom_pipeline(&[], &["frobnicate".into()], &no_files, Options::default()).unwrap_err();
    assert!(err.to_string().contains("frobnicate"));
}

#[test]
fn thin_knot_with_identity_maps_reproduces_the_figure_eight_run() {
    let doc = parse_document(include_str!("../corpus/fig8.cfk")).unwrap();
    let thin = thin_knot_pipeline(&[], &doc, None, None, Options::default()).unwrap();
    let fig8 = theorem_pipeline(Options::default()).unwrap();
    assert!(thin.all_certificates_pass());
    let from_double = |r: &cfk_cli::report::Report| {
        let k = r.steps.iter().position(|s| s.operation == "double").unwrap();
        r.steps[k..].to_vec()
    };
    assert_eq!(from_double(&thin), from_double(&fig8));
    assert_eq!(thin.verdict, fig8.verdict);
    assert_eq!(thin.verdict.unwrap().status(), "OBSTRUCTED");
}

#[test]
fn maps_that_are_not_local_are_rejected() {
    let doc = parse_document(include_str!("../corpus/fig8.cfk")).unwrap();
    let zero = cfk_cli::document::parse_map_document("name zero\n").unwrap();
    let err = thin_knot_pipeline(&[], &doc, Some(&zero), None, Options::default()).unwrap_err();
    assert!(err.to_string().contains("not ι-local"), "{err}");
}

#[test]
fn both_conventions_obstruct() {
    use cfk_core::Convention;
    for convention in [Convention::Thm31, Convention::Remark32] {
        let r = theorem_pipeline(Options { convention }).unwrap();
        assert_eq!(r.verdict.as_ref().unwrap().status(), "OBSTRUCTED");
        assert!(r.all_certificates_pass(), "{:?}", r.failed_certificates());
    }
}

#[test]
fn golden_reports_are_current() {
    let r = theorem_pipeline(Options::default()).unwrap();
    assert_eq!(r.to_machine(), std::fs::read_to_string(corpus("theorem-1.1.json")).unwrap());
    assert_eq!(r.to_text(false), std::fs::read_to_string(corpus("theorem-1.1.txt")).unwrap());
}

#[test]
fn obstructed_is_a_successful_exit() {
    let out = cfk(&["obstruct", corpus("fig8-double.cfk").to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: OBSTRUCTED"));
}

#[test]
fn failed_stages_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfk");
    std::fs::write(&bad, "ring F2[U,V]\ngenerator a 0 0\ndifferential a -> (q, 1, 0)\n").unwrap();
    let out = cfk(&["validate", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`q`"));
    let out = cfk(&["double", corpus("fig8-double.cfk").to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn parallel_batches_keep_input_order() {
    let files = ["fig8.cfk", "unknot.cfk", "fig8-double.cfk", "unknot.cfk"].map(|f| corpus(f).display().to_string());
    let run = |jobs: &str| {
        let mut args = vec!["cfk", "obstruct", "--format", "machine", "--jobs", jobs];
        args.extend(files.iter().map(String::as_str));
        let cli = Cli::try_parse_from(args).unwrap();
        cfk_cli::commands::render(&reports(&cli).unwrap(), Format::Machine, false)
    };
    let sequential = run("1");
    assert_eq!(run("4"), sequential);
    let parsed: serde_json::Value = serde_json::from_str(&sequential).unwrap();
    let statuses: Vec<&str> =
        parsed.as_array().unwrap().iter().map(|r| r["verdict"]["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["OBSTRUCTED", "INCONCLUSIVE", "OBSTRUCTED", "INCONCLUSIVE"]);
}

#[test]
fn written_documents_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let a0 = dir.path().join("a0.cfk");
    let out = cfk(&["a0", corpus("fig8.cfk").to_str().unwrap(), "--document", a0.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = parse_document(&std::fs::read_to_string(&a0).unwrap()).unwrap();
    assert!(matches!(doc.load().unwrap(), cfk_cli::document::Loaded::Surgery(_)));
    let out = cfk(&["obstruct", a0.to_str().unwrap(), "--format", "machine"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"]["status"], "OBSTRUCTED");
}

#[test]
fn cobordism_flags_even_n() {
    let r = cfk_cli::commands::cobordism_report(6).unwrap();
    let shift = r.step("grading-shift").unwrap();
    assert_eq!(shift.outputs["shift"], "5/4");
    assert!(shift.outputs["warning"].is_string());
    let r = cfk_cli::commands::cobordism_report(7).unwrap();
    assert!(r.step("grading-shift").unwrap().outputs["warning"].is_null());
    assert!(r.all_certificates_pass());
}
