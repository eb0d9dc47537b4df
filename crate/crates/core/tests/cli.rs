use std::sync::Arc;

use doctrines::cli::run;
use doctrines::constructions::add_axiom;
use doctrines::doctrine::single_table_mutations;
use doctrines::io::{serialize_doctrine, subsets_fixture};
use serde_json::Value;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn doctrines(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("doctrines").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let o = doctrines(&full);
    (o.code, serde_json::from_str(&o.out).unwrap_or_else(|e| panic!("{e}: {}{}", o.out, o.err)))
}

fn check_named<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}: {report}"))
}

fn write_doc(dir: &tempfile::TempDir, file: &str, text: &str) -> String {
    let path = dir.path().join(file);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn check_subsets_passes() {
    let (code, report) = structured(&["check", "fixture:subsets"]);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "pass");
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass", "{c}");
    }
}

#[test]
fn check_mutated_document_fails_with_counterexample() {
    let d = subsets_fixture();
    let dir = tempfile::tempdir().unwrap();
    let mutations = single_table_mutations(&d, 4);
    assert!(!mutations.is_empty());
    for (i, m) in mutations.iter().enumerate().step_by(7) {
        let mutated = m.apply(&d).expect("mutation applies");
        let path = write_doc(&dir, &format!("m{i}.json"), &serialize_doctrine(&mutated));
        let (code, report) = structured(&["check", &path]);
        assert_eq!(code, 1, "{m} survived");
        assert_eq!(report["status"], "fail");
        let has_example = report["data"]["counterexamples"].as_array().is_some_and(|v| !v.is_empty());
        let witness_failure = report["checks"].as_array().unwrap().iter().any(|c| c["name"] == "witnesses");
        assert!(has_example || witness_failure, "{m}: {report}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let missing = doctrines(&["check", "/nonexistent/doctrine.json"]);
    assert_eq!(missing.code, 2);
    assert!(missing.err.starts_with("error:"), "{}", missing.err);

    let dir = tempfile::tempdir().unwrap();
    let garbage = write_doc(&dir, "bad.json", "{ not json");
    assert_eq!(doctrines(&["check", &garbage]).code, 2);

    assert_eq!(doctrines(&["construct", "fixture:subsets", "add-constant", "no-such-object"]).code, 2);
    assert_eq!(doctrines(&["construct", "fixture:subsets", "add-axiom", "no-such-element"]).code, 2);
    assert_eq!(doctrines(&["frobnicate"]).code, 2);
    assert_eq!(doctrines(&["check", "fixture:no-such-fixture"]).code, 2);
    assert_eq!(doctrines(&["--help"]).code, 0);
}

#[test]
fn add_axiom_top_reports_isomorphism() {
    let d = subsets_fixture();
    let t = d.terminal_fiber();
    let top = t.name(t.top().unwrap()).to_string();
    let (code, report) = structured(&["construct", "fixture:subsets", "add-axiom", &top]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(check_named(&report, "isomorphism")["detail"], "yes");
}

#[test]
fn henkin_construct_writes_a_checkable_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("henkin.json");
    let out = out.to_string_lossy();
    let (code, report) = structured(&["construct", "fixture:subsets", "henkin", "{0,1}", "{0}", "--out", &out]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(check_named(&report, "axiom inequality")["status"], "pass");
    assert_eq!(check_named(&report, "equality")["detail"], "yes");
    let (code, checked) = structured(&["check", &out]);
    assert_eq!(code, 0, "{checked}");
}

#[test]
fn model_of_subsets_reproduces_its_sets() {
    let (code, report) = structured(&["model", "fixture:subsets"]);
    assert_eq!(code, 0, "{report}");
    let objects = report["data"]["model"]["objects"].as_object().unwrap();
    let d = subsets_fixture();
    for a in d.base.objects() {
        let name = d.base.object_name(a);
        if name.contains('×') {
            continue;
        }
        let carrier = objects[name]["carrier"].as_array().unwrap();
        // Subsets of an n-element set: n atoms, so the carrier has n points.
        let atoms = (d.fiber(a).len() as f64).log2().round() as usize;
        assert_eq!(carrier.len(), atoms, "{name}");
    }
    for law in ["top", "bottom", "meet", "implication", "exists"] {
        assert_eq!(check_named(&report, &format!("preserves {law}"))["status"], "pass");
    }
}

#[test]
fn elementary_model_reports_diagonal_preservation() {
    let o = doctrines(&["model", "fixture:subsets", "--elementary"]);
    assert_eq!(o.code, 0, "{}", o.out);
    assert!(o.out.lines().any(|l| l.starts_with("pass") && l.contains("preserves diagonal")), "{}", o.out);
}

#[test]
fn model_of_inconsistent_document_fails_the_gate() {
    let p = Arc::new(subsets_fixture());
    let bottom = p.terminal_fiber().bottom().unwrap();
    let absurd = add_axiom(&p, bottom).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(&dir, "absurd.json", &serialize_doctrine(&absurd.doctrine));
    let o = doctrines(&["model", &path]);
    assert_eq!(o.code, 1, "{}{}", o.out, o.err);
    assert!(o.out.contains("inconsistent"), "{}", o.out);
}

#[test]
fn structured_reports_are_byte_identical() {
    let commands: [&[&str]; 4] = [
        &["check", "fixture:subsets"],
        &["saturate", "fixture:subterminal"],
        &["ultrafilter", "fixture:chain"],
        &["model", "fixture:subsets"],
    ];
    for args in commands {
        let mut full = vec!["--format", "structured"];
        full.extend_from_slice(args);
        let first = doctrines(&full);
        let second = doctrines(&full);
        assert!(!first.out.is_empty());
        assert_eq!(first.out, second.out, "{args:?}");
        assert_eq!(first.code, second.code);
    }
}

#[test]
fn ultrafilter_on_the_chain() {
    let (code, report) = structured(&["ultrafilter", "fixture:chain"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(check_named(&report, "ultra iff maximal")["status"], "pass");
    assert_eq!(report["data"]["ultrafilter"], serde_json::json!(["½", "1"]));
}

#[test]
fn text_and_structured_agree_on_status() {
    let text = doctrines(&["ultrafilter", "fixture:chain"]);
    let (code, report) = structured(&["ultrafilter", "fixture:chain"]);
    assert_eq!(text.code, code);
    let last = text.out.lines().last().unwrap();
    assert!(last.starts_with(&format!("result: {}", report["status"].as_str().unwrap())), "{last}");
}
