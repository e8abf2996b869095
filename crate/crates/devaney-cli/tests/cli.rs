//! End-to-end checks of the binary: exit codes, map-file handling, report
//! and SVG output.

use std::path::Path;
use std::process::{Command, Output};

fn devaney(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_devaney"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_builtin() {
    let out = devaney(&["eval", "builtin:example-3-2", "--at", "5/8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3/4");
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["eval", "builtin:nosuch", "--at", "1/2"],
        vec!["eval", "builtin:tent", "--at", "3/2"],
        vec!["eval", "builtin:tent", "--at", "not-a-rational"],
        vec!["check", "nosuch-property", "builtin:tent"],
        vec!["eval", "/nonexistent/map.plm", "--at", "1/2"],
        vec!["frobnicate"],
    ] {
        let out = devaney(&args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
}

#[test]
fn help_exits_0() {
    let out = devaney(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn plm_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fourpiece.plm");
    std::fs::write(
        &path,
        "# four-piece map\nplmap\ndomain 0 1\n0 1\n1/6 2/3\n1/3 1\n2/3 0\n1 1/3\n",
    )
    .unwrap();
    let out = devaney(&[
        "hull",
        path.to_str().unwrap(),
        "--seed",
        "1/3:4/9",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("hull: [0,4/9] ∪ [2/3,1]"), "got: {text}");
    assert!(text.contains("converged: yes"));
}

#[test]
fn plm_parse_error_reports_line_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.plm");
    std::fs::write(&path, "plmap\ndomain 0 1\n0 0\n1/2 1\n1/4 0\n1 0\n").unwrap();
    let out = devaney(&["eval", path.to_str().unwrap(), "--at", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "stderr: {err}");
}

#[test]
fn analyze_writes_report_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let svg = dir.path().join("sets.svg");
    let out = devaney(&[
        "analyze",
        "builtin:example-3-1",
        "--resolution",
        "8",
        "--report",
        report.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["transitivity"]["status"], "fails");
    assert_eq!(json["transitivity"]["certified"], true);
    // witness rationals are strings, never floats
    let seed = &json["transitivity"]["witness"]["seed"][0];
    assert_eq!(seed["lo"], "1/3");
    assert_eq!(seed["hi"], "4/9");
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("<title>[0,1/3]</title>"));
    // no stray temp files left behind
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains("tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let out = devaney(&[
            "analyze",
            "builtin:example-3-2",
            "--resolution",
            "5",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        texts.push(serde_json::to_string_pretty(&v).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn exit_code_2_never_occurs_on_the_corpus() {
    for map in [
        "builtin:tent",
        "builtin:example-3-1",
        "builtin:example-3-2",
        "builtin:identity",
        "builtin:constant:1/2",
    ] {
        let out = devaney(&["analyze", map, "--resolution", "6", "--max-period", "8"]);
        assert_eq!(out.status.code(), Some(0), "map {map}");
        let out = devaney(&["check", "devaney", map, "--resolution", "5", "--max-period", "6"]);
        assert_eq!(out.status.code(), Some(0), "check devaney on {map}");
    }
}

#[test]
fn decompose_example_3_1() {
    let out = devaney(&["decompose", "builtin:example-3-1", "--resolution", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("n = 2"));
    assert!(text.contains("J_0 = [0,1/3]"));
    assert!(text.contains("J_1 = [2/3,1]"));
}

#[test]
fn render_cobweb_file() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("cobweb.svg");
    let out = devaney(&[
        "render",
        "builtin:tent",
        "--svg",
        svg.to_str().unwrap(),
        "--seed",
        "1/3",
        "--steps",
        "20",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<polyline"));
    assert!(text.contains("9 significant digits"));
}

#[test]
fn unwritable_svg_path_exits_1() {
    let out = devaney(&[
        "render",
        "builtin:tent",
        "--svg",
        "/nonexistent-dir/out.svg",
        "--seed",
        "1/3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

/// The report's transitivity witness re-parses into exact rationals that
/// independently re-fail the property through the library.
#[test]
fn report_witness_re_checks_via_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = devaney(&[
        "analyze",
        "builtin:example-3-1",
        "--resolution",
        "6",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report =
        devaney::AnalysisReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let m = devaney::builtin("example-3-1", None).unwrap();
    match &report.transitivity.witness {
        Some(devaney::Witness::ProperInvariantHull { seed, hull }) => {
            let re = devaney::forward_hull(&m, seed, &devaney::Budget::default()).unwrap();
            assert!(re.converged);
            assert_eq!(&re.hull, hull);
            assert!(hull.contains(&m.image_set(hull).unwrap()));
        }
        other => panic!("unexpected witness {other:?}"),
    }
    assert!(Path::new(path.to_str().unwrap()).exists());
}
