use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use steinitz::corpus;
use steinitz::io::{PolytopeDocument, RunReport};
use steinitz::planar_map::RawMap;
use tempfile::TempDir;

fn write_map(dir: &Path, name: &str, raw: &RawMap) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, raw.to_json()).unwrap();
    path
}

fn realize(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realize"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tetrahedron_off_on_stdout() {
    let dir = TempDir::new().unwrap();
    let input = write_map(dir.path(), "tetra.json", &corpus::tetrahedron());
    let out = realize(&[s(&input)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..2], &["OFF", "4 4 6"]);
    let mut xy: Vec<(i64, i64)> = lines[2..6]
        .iter()
        .map(|l| {
            let v: Vec<i64> = l.split(' ').map(|t| t.parse().unwrap()).collect();
            (v[0], v[1])
        })
        .collect();
    xy.sort();
    assert_eq!(xy, vec![(0, 0), (0, 3), (1, 1), (3, 0)]);
}

#[test]
fn dodecahedron_report() {
    let dir = TempDir::new().unwrap();
    let input = write_map(dir.path(), "dodeca.json", &corpus::dodecahedron());
    let report = dir.path().join("out.json");
    let out = realize(&[s(&input), "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0));
    let off = String::from_utf8(out.stdout).unwrap();
    assert_eq!(off.lines().nth(1).unwrap(), "20 12 30");
    let rep: RunReport = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep.det_reduced_laplacian, "403202");
    assert_eq!(rep.case_type, "5A");
    assert_eq!(rep.s_x, "1264158727403904");
    assert_eq!(rep.s_y, "26069428512");
    assert!(rep.certificate.unwrap().all_ok());
}

#[test]
fn two_connected_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let input = write_map(dir.path(), "broken.json", &corpus::two_connected_example());
    let out = realize(&[s(&input)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotThreeConnected"));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad.json");
    fs::write(&input, "{\"vertices\": 4, \"faces\": [[0, 1]").unwrap();
    let out = realize(&[s(&input)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Parse"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let input = write_map(dir.path(), "tetra.json", &corpus::tetrahedron());
    assert_eq!(realize(&[s(&input), "--placement", "hexagon"]).status.code(), Some(1));
    assert_eq!(realize(&[s(&input), "--format", "both"]).status.code(), Some(1));
    let out = realize(&[s(&input), "--placement", "type4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("StrategyNotApplicable"));
    assert_eq!(realize(&[s(&input), "--outer-face", "9"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write_map(dir.path(), "map.json", &corpus::random_pentagon_map(22, 5));
    let run = |tag: &str| {
        let off = dir.path().join(format!("{tag}.off"));
        let rep = dir.path().join(format!("{tag}.report.json"));
        let out = realize(&[s(&input), "--reduce", "-o", s(&off), "--report", s(&rep)]);
        assert_eq!(out.status.code(), Some(0));
        let mut report: RunReport = serde_json::from_str(&fs::read_to_string(rep).unwrap()).unwrap();
        report.timings_us.clear();
        (fs::read(off).unwrap(), report)
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn both_formats_agree() {
    let dir = TempDir::new().unwrap();
    let input = write_map(dir.path(), "cube.json", &corpus::cube());
    let stem = dir.path().join("cube_out");
    let out = realize(&[s(&input), "--format", "both", "-o", s(&stem)]);
    assert_eq!(out.status.code(), Some(0));
    let off = fs::read_to_string(stem.with_extension("off")).unwrap();
    let doc = PolytopeDocument::parse(&fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    let from_off: Vec<Vec<String>> = off
        .lines()
        .skip(2)
        .take(8)
        .map(|l| l.split(' ').map(String::from).collect())
        .collect();
    let from_json: Vec<Vec<String>> = doc.vertices.iter().map(|v| v.to_vec()).collect();
    assert_eq!(from_off, from_json);
}

#[test]
fn forced_placement_and_outer_face() {
    let dir = TempDir::new().unwrap();
    let raw = corpus::prism(5);
    let pent = raw.faces.iter().position(|f| f.len() == 5).unwrap();
    let input = write_map(dir.path(), "prism.json", &raw);
    let report = dir.path().join("r.json");
    let face = pent.to_string();
    let out = realize(&[s(&input), "--outer-face", &face, "--report", s(&report), "--no-verify"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: RunReport = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep.outer_face, pent);
    assert!(rep.generic_bounds);
    assert!(rep.certificate.is_none());
}
