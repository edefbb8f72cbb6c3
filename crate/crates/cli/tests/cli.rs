use std::path::PathBuf;
use std::process::{Command, Output};

use vortex_core::atlas::{load_catalog, EntryStatus};
use vortex_core::numeric::synthetic_sequence;

fn vortex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vortex")).args(args).env_remove("VORTEX_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vortex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn catalog_diagram(figure: &str) -> PathBuf {
    let e = load_catalog().unwrap().into_iter().find(|e| e.figure_ref == figure).unwrap();
    scratch(&format!("{}.json", figure.replace([':', '=', ' ', '#'], "_")), &serde_json::to_string(&e.diagram).unwrap())
}

#[test]
fn enumerate_prints_histogram_and_total() {
    let o = vortex(&["enumerate", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("histogram {0:4, 2:1, 3:0, 4:10, 5:5, 6:8, 7:1, 8:2}"), "{out}");
    assert!(out.lines().any(|l| l == "total 31"), "{out}");
}

#[test]
fn enumerate_report_round_trips_through_catalog_diff() {
    let report = scratch("report.json", "");
    let o = vortex(&["enumerate", "--n", "5", "--workers", "2", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = vortex(&["catalog", "--diff", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // drop one survivor from the report: the diff must notice
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    v["survivors"].as_array_mut().unwrap().pop();
    let broken = scratch("broken.json", &v.to_string());
    let o = vortex(&["catalog", "--diff", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("missing"));
}

#[test]
fn check_explains_exclusions() {
    let o = vortex(&["check", catalog_diagram("fig:C=3 #2").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("RuleIV Γ2+Γ3=0 vs CorSumT12 nonzero"), "{}", stdout(&o));

    let o = vortex(&["check", catalog_diagram("fig:C=2 #2").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status    possible"));
}

#[test]
fn check_reports_rule_failures_and_bad_json() {
    let p = scratch(
        "r1a.json",
        r#"{"n":5,"z_strokes":[[1,2],[1,3],[2,3]],"w_strokes":[[1,2]],"z_circles":[1,2,3],"w_circles":[]}"#,
    );
    let o = vortex(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("R1a"));

    let p = scratch("bad.json", "{not json");
    let o = vortex(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("z_strokes"));
}

#[test]
fn render_formats() {
    let p = catalog_diagram("fig:C=2 #2");
    for (fmt, marker) in [("dot", "graph diagram"), ("svg", "<svg"), ("tikz", "\\begin{tikzpicture}")] {
        let o = vortex(&["render", p.to_str().unwrap(), "--format", fmt]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(marker), "{fmt}");
    }
    let o = vortex(&["render", p.to_str().unwrap(), "--format", "png"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_success_and_failure() {
    let o = vortex(&["solve", "--gamma", "1,1,1,-2,0.5", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["identities"]["pass"], true);
    assert!(v["identities"]["residual"].as_f64().unwrap() < 1e-12);

    let o = vortex(&["solve", "--gamma", "1,-1", "--lambda", "1", "--attempts", "4"]);
    assert_eq!(o.status.code(), Some(1));

    let o = vortex(&["solve", "--gamma", "1,1", "--lambda", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn probe_reads_samples() {
    let e = load_catalog().unwrap().into_iter().find(|e| e.c_class == 2 && e.status == EntryStatus::Possible).unwrap();
    let seq = synthetic_sequence(&e.diagram, 4..=12);
    let body: Vec<String> = seq.samples.iter().map(|s| serde_json::to_string(s).unwrap()).collect();
    let p = scratch("samples.jsonl", &body.join("\n"));
    let o = vortex(&["probe", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["key"], serde_json::to_value(e.key()).unwrap());
}

#[test]
fn verify_groebner_passes() {
    let o = vortex(&["verify-groebner"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("member    yes"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(vortex(&["enumerate", "--n", "9"]).status.code(), Some(2));
    assert_eq!(vortex(&["frobnicate"]).status.code(), Some(2));
}
