use std::path::PathBuf;
use std::process::{Command, Output};

use kstab::report::{to_json, DecomposeJson, PointJson, SeriesJson, VerifyReport};

fn kstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kstab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scenario_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "scenarios", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("kstab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_all_matches_and_exits_zero() {
    let out = kstab(&["verify", "--all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("0 mismatch, 0 error"), "{text}");
}

#[test]
fn verify_json_is_ordered_and_re_renders_identically() {
    let out = kstab(&["verify", "--all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let report: VerifyReport = serde_json::from_str(&text).unwrap();
    let ids: Vec<&str> = report.scenarios.iter().map(|s| s.report.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    // Timing fields differ between runs, so compare a re-render of the parsed report.
    assert_eq!(to_json(&report), text);
}

#[test]
fn wrong_expectation_is_a_mismatch() {
    let text = std::fs::read_to_string(scenario_path("2-4-cusp.json")).unwrap();
    let wrong = text.replacen("\"173/40\"", "\"173/41\"", 1);
    assert_ne!(wrong, text);
    let path = temp_file("wrong.json", &wrong);
    let out = kstab(&["verify", &path]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout(&out);
    assert!(report.contains("MISMATCH"), "{report}");
    assert!(report.contains("173/40"), "{report}");
}

#[test]
fn malformed_scenario_exits_two() {
    let path = temp_file("broken.json", "{ \"id\": \"x\", ");
    let out = kstab(&["verify", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error"), "{}", stderr(&out));

    let bad_gram = std::fs::read_to_string(scenario_path("2-6-smooth.json")).unwrap().replacen("[\"4\", \"0\"]", "[\"5\", \"0\"]", 1);
    let path = temp_file("asym.json", &bad_gram);
    assert_eq!(kstab(&["verify", &path]).status.code(), Some(2));
}

#[test]
fn decompose_cusp_has_three_chambers() {
    let out = kstab(&["decompose", "2-4-cusp", "--family", "f", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table: DecomposeJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(table.pieces.len(), 1);
    assert_eq!(table.pieces[0].chambers.len(), 3);
    assert_eq!(to_json(&table), stdout(&out));
}

#[test]
fn decompose_at_origin_has_zero_negative_part() {
    let out = kstab(&["decompose", "2-4-cusp", "--family", "f", "--at", "u=0,v=0", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let point: PointJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(point.negative.iter().all(|[_, c]| c == "0"), "{:?}", point.negative);
}

#[test]
fn decompose_outside_domain_is_an_error() {
    let out = kstab(&["decompose", "2-4-cusp", "--family", "f", "--at", "u=2,v=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("outside parameter domain"), "{}", stderr(&out));
    let out = kstab(&["decompose", "2-4-cusp", "--family", "f", "--at", "u=1/2,v=100"]);
    assert!(stderr(&out).contains("outside parameter domain"), "{}", stderr(&out));
}

#[test]
fn series_labels_the_tail_heuristic() {
    let out = kstab(&["series", "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("HEURISTIC"));
    let out = kstab(&["--json", "series", "--max-n", "2"]);
    let text = stdout(&out);
    let parsed: SeriesJson = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.ledger.len(), 3);
    assert_eq!(to_json(&parsed), text);
}

#[test]
fn list_names_every_builtin() {
    let out = kstab(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for id in ["2-1-A-d1", "2-4-cusp", "2-6-blowup", "2-7-series"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let one = stdout(&kstab(&["--threads", "1", "verify", "--all", "--json"]));
    let two = stdout(&kstab(&["--threads", "2", "verify", "--all", "--json"]));
    let strip = |s: &str| -> VerifyReport {
        let mut r: VerifyReport = serde_json::from_str(s).unwrap();
        r.scenarios.iter_mut().for_each(|s| s.elapsed_ms = 0);
        r
    };
    assert_eq!(strip(&one), strip(&two));
}
