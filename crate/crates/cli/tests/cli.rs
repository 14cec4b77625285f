use std::process::{Command, Output};

use gamma_torsion::ComputationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamma-torsion"))
        .args(args)
        .env_remove("GAMMA_TORSION_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_json_round_trips() {
    let o = run(&[
        "compute", "--group", "C4xC2xC2", "--side", "ker", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let report = ComputationReport::from_json(&text).unwrap();
    assert_eq!(report.group, "C4xC2xC2");
    assert_eq!(report.order, 16);
    assert_eq!(report.ker.as_ref().unwrap().h0, [2, 2]);
    assert!(report.coker.is_none());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["ker"]["zrank"], 63);
    assert_eq!(
        ComputationReport::from_json(&report.to_json().unwrap()).unwrap(),
        report
    );
}

#[test]
fn compute_text_both_sides() {
    let o = run(&["compute", "--group", "C2xC2", "--side", "both"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("ker d2") && text.contains("coker d2"));
}

#[test]
fn group_file_input() {
    let dir = std::env::temp_dir().join(format!("gamma-torsion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c3.json");
    std::fs::write(
        &path,
        r#"{"name": "Z3", "order": 3, "cayley": [[0,1,2],[1,2,0],[2,0,1]],
            "generators": [{"name": "t", "element": 1}], "relators": [[["t", 3]]]}"#,
    )
    .unwrap();
    let arg = format!("@{}", path.display());
    let o = run(&[
        "compute", "--group", &arg, "--side", "both", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = ComputationReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.ker.unwrap().zrank, 2);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["compute", "--group", "C4yC2"]).status.code(), Some(2));
    assert_eq!(
        run(&["compute", "--group", "C2", "--side", "left"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["compute", "--group", "C8", "--max-order", "4"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["table", "--max-order", "64"]).status.code(), Some(3));
    assert_eq!(
        run(&["verify", "--suite", "nonsense"]).status.code(),
        Some(2)
    );
}

#[test]
fn environment_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_gamma-torsion"))
        .args(["compute", "--group", "C8"])
        .env("GAMMA_TORSION_MAX_ORDER", "6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn small_table() {
    let o = run(&["table", "--max-order", "4", "--format", "json"]);
    assert!(o.status.success());
    let reports: Vec<ComputationReport> = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r.group.as_str()).collect();
    assert_eq!(names, ["C1", "C2", "C3", "C4", "C2xC2"]);
    assert!(reports
        .iter()
        .all(|r| r.ker.as_ref().unwrap().h0.is_empty()));
}

#[test]
fn verify_suite_passes() {
    let o = run(&["verify", "--suite", "prop-6-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
}
