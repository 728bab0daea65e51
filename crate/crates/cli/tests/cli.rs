use std::path::{Path, PathBuf};
use std::process::Command;

use nodesum_cli::{run, CliError, ExitStatus};
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn invoke(args: &[&str]) -> (ExitStatus, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nodesum").chain(args.iter().copied());
    let status = run(argv, &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Value after `label = ` in a text report.
fn text_value<'a>(text: &'a str, label: &str) -> Option<&'a str> {
    let prefix = format!("{label} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .map(|v| v.split_whitespace().next().unwrap())
}

#[test]
fn simplex_report() {
    let (status, out, _) = invoke(&["analyze", s(&corpus("simplex2.json"))]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.contains("D_closure = 2"));
    assert!(out.lines().all(|l| l == l.trim_end()));
}

#[test]
fn chi_command() {
    let (status, out, _) = invoke(&["chi", "--sequence", "8,4,2,1"]);
    assert_eq!(status, ExitStatus::Success);
    assert_eq!(out, "N=44 chi=-80 delta=44\n");
    let (status, _, err) = invoke(&["chi", "--sequence", "8,3,1"]);
    assert_eq!(status, ExitStatus::InputError);
    assert!(err.starts_with("error: "));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let collinear = write(dir.path(), "line.json", r#"{"points": [[0,0,0],[1,1,1],[2,2,2]]}"#);
    let (status, _, err) = invoke(&["analyze", s(&collinear)]);
    assert_eq!(status, ExitStatus::InputError);
    assert!(err.contains("degenerate support set"));
    assert_eq!(err.lines().count(), 1);

    let garbled = write(dir.path(), "bad.json", "{\"points\": [[0,0,");
    assert_eq!(invoke(&["analyze", s(&garbled)]).0, ExitStatus::InputError);
    let missing = dir.path().join("missing.json");
    assert_eq!(invoke(&["analyze", s(&missing)]).0, ExitStatus::InputError);
    let short = write(dir.path(), "short.json", r#"{"points": [[0,0],[1,0],[0,1]]}"#);
    assert_eq!(invoke(&["check", s(&short)]).0, ExitStatus::InputError);
    assert_eq!(invoke(&["frobnicate"]).0, ExitStatus::InputError);
}

#[test]
fn strict_mode_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // ind_v = 2
    let stretched = write(dir.path(), "stretched.json", r#"{"points": [[0,0,0],[2,0,0],[0,1,0],[0,0,1]]}"#);
    assert_eq!(invoke(&["analyze", s(&stretched)]).0, ExitStatus::Success);
    let (status, out, err) = invoke(&["analyze", s(&stretched), "--strict"]);
    assert_eq!(status, ExitStatus::AssumptionViolation);
    assert!(out.contains("D_closure"));
    assert!(err.contains("ind_v"));
    // horizontal facet x = 0 with nothing at x = 1
    let gapped = write(dir.path(), "gapped.json", r#"{"points": [[0,0,0],[0,1,0],[0,0,1],[2,0,0],[3,0,0]]}"#);
    let (_, out, _) = invoke(&["analyze", s(&gapped)]);
    assert!(out.contains("D_punctured = blocked"));
    assert_eq!(invoke(&["analyze", s(&gapped), "--strict", "--formula", "closure"]).0, ExitStatus::Success);
    assert_eq!(invoke(&["analyze", s(&gapped), "--strict"]).0, ExitStatus::AssumptionViolation);
    assert_eq!(invoke(&["analyze", s(&corpus("simplex3.json")), "--strict"]).0, ExitStatus::Success);
}

#[test]
fn consistency_failures_map_to_three() {
    let e = CliError::Core(nodesum_core::Error::Consistency("odd numerator".into()));
    assert_eq!(e.status(), ExitStatus::ConsistencyFailure);
    assert_eq!(e.status().code(), 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nodesum");
    let ok = Command::new(bin).args(["analyze", s(&corpus("simplex2.json"))]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["analyze", "/nonexistent/file.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error: "));
}

#[test]
fn json_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    // the degree-2 simplex with fiber coordinates scaled by 10^15; numbers
    // are given both as JSON numbers and as strings
    let k = "1000000000000000";
    let two_k = "2000000000000000";
    let doc = format!(
        r#"{{"name": "far", "points": [[0,0,0],[1,0,0],[2,0,0],[0,{k},0],[1,{k},0],[0,"{two_k}",0],
            [0,0,{k}],[1,0,"{k}"],[0,{k},{k}],[0,0,{two_k}]]}}"#
    );
    let far = write(dir.path(), "far.json", &doc);
    let (status, out, _) = invoke(&["analyze", s(&far), "--json"]);
    assert_eq!(status, ExitStatus::Success);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["name"], "far");
    // D scales with the square of the fiber factor
    assert_eq!(v["D"]["closure"].to_string(), format!("2{}", "0".repeat(30)));
    assert_eq!(v["volume"].to_string(), format!("8{}", "0".repeat(30)));
    assert!(v["D"]["closure"].is_number());
    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(reparsed, v);
}

#[test]
fn json_and_text_agree() {
    for name in ["simplex3.json", "line_full.json", "line_gap.json", "tropical_section.json", "cube.json"] {
        let path = corpus(name);
        let (_, text, _) = invoke(&["analyze", s(&path)]);
        let (_, json, _) = invoke(&["analyze", s(&path), "--json"]);
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(text_value(&text, "Vol(Delta)"), Some(v["volume"].to_string().as_str()), "{name}");
        assert_eq!(text_value(&text, "Area(P)"), Some(v["fiber_area"].to_string().as_str()), "{name}");
        assert_eq!(text_value(&text, "chi_curve"), Some(v["chi_curve"].to_string().as_str()), "{name}");
        for key in ["closure", "punctured", "conjecture"] {
            let shown = text_value(&text, &format!("D_{key}"));
            match v["D"].get(key) {
                Some(d) => assert_eq!(shown, Some(d.to_string().as_str()), "{name} {key}"),
                None => assert_eq!(shown, Some("blocked:"), "{name} {key}"),
            }
        }
    }
}

#[test]
fn formula_selection() {
    let path = corpus("line_full.json");
    let (_, text, _) = invoke(&["analyze", s(&path), "--formula", "punctured"]);
    assert_eq!(text_value(&text, "D_punctured"), Some("1"));
    assert_eq!(text_value(&text, "D_closure"), None);
    let (_, json, _) = invoke(&["analyze", s(&path), "--formula", "closure", "--json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["D"].as_object().unwrap().keys().collect::<Vec<_>>(), vec!["closure"]);
}

#[test]
fn svg_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    let input = corpus("tropical_section.json");
    assert_eq!(invoke(&["analyze", s(&input), "--svg", s(&a)]).0, ExitStatus::Success);
    assert_eq!(invoke(&["analyze", s(&input), "--svg", s(&b)]).0, ExitStatus::Success);
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let svg = String::from_utf8(first).unwrap();
    assert!(svg.contains(">(2,1)<"));
    let unwritable = dir.path().join("no/such/dir/p.svg");
    assert_eq!(invoke(&["analyze", s(&input), "--svg", s(&unwritable)]).0, ExitStatus::InputError);
}

#[test]
fn batch_matches_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["tropical_section.json", "simplex2.json", "line_gap.json"] {
        std::fs::copy(corpus(name), dir.path().join(name)).unwrap();
    }
    write(dir.path(), "zz_broken.json", "[");
    write(dir.path(), "notes.txt", "ignored");

    let (status, out, _) = invoke(&["batch", s(dir.path())]);
    assert_eq!(status, ExitStatus::InputError);
    let sections: Vec<&str> = out.split("== ").skip(1).collect();
    let names: Vec<&str> = sections.iter().map(|x| x.split(" ==").next().unwrap()).collect();
    assert_eq!(names, ["line_gap.json", "simplex2.json", "tropical_section.json", "zz_broken.json"]);
    for (name, section) in names.iter().zip(&sections).take(3) {
        let (_, single, _) = invoke(&["analyze", s(&dir.path().join(name))]);
        let body = section.split_once(" ==\n").unwrap().1;
        assert_eq!(body.trim_end(), single.trim_end(), "{name}");
    }

    let (_, out, _) = invoke(&["batch", s(dir.path()), "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    for (name, report) in names.iter().zip(reports).take(3) {
        let (_, single, _) = invoke(&["analyze", s(&dir.path().join(name)), "--json"]);
        assert_eq!(report, &serde_json::from_str::<Value>(&single).unwrap(), "{name}");
    }
    assert_eq!(reports[3]["exit_code"], 1);
}

#[test]
fn other_commands() {
    let (status, out, _) = invoke(&["check", s(&corpus("primitive_fail.json"))]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.contains("primitive_ok     no"));
    let (_, out, _) = invoke(&["check", s(&corpus("primitive_fixed.json"))]);
    assert!(out.contains("primitive_ok     yes"));

    let (_, out, _) = invoke(&["fiber", s(&corpus("line_full.json"))]);
    assert!(out.contains("P vertices: (0,0) (3,0) (0,3)"));
    assert!(out.contains("Area(P) = 9"));

    let dir = tempfile::tempdir().unwrap();
    let mv = write(dir.path(), "mv.json", r#"{"polytopes": [[[0,0],[1,0],[0,1]], [[0,0],["2",0],[0,2]]]}"#);
    let (status, out, _) = invoke(&["mixedvol", s(&mv)]);
    assert_eq!(status, ExitStatus::Success);
    assert_eq!(out, "normalized mixed volume = 2\n");
    let wrong = write(dir.path(), "wrong.json", r#"{"polytopes": [[[0,0],[1,0]]]}"#);
    assert_eq!(invoke(&["mixedvol", s(&wrong)]).0, ExitStatus::InputError);
}
