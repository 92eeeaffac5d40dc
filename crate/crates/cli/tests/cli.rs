use std::process::{Command, Output};

use serde_json::Value;

fn genround(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genround")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = genround(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn ok_csv(args: &[&str]) -> Vec<csv::StringRecord> {
    let out = genround(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    csv_records(&out.stdout)
}

fn csv_records(bytes: &[u8]) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new().has_headers(false).from_reader(bytes).records().map(Result::unwrap).collect()
}

const LINE: &str = r#"{"labels":["0","1","2"],"dist":[[0,1,2],[1,0,1],[2,1,0]]}"#;
const PATH3: &str = r#"{"vertices":["a","b","c"],"edges":[{"u":"a","v":"b","w":1},{"u":"b","v":"c","w":1}]}"#;

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn gen_sst_has_thirteen_vertices() {
    let t = ok_json(&["gen", "sst", r#"{"degrees":[3,3],"lengths":[1,1]}"#]);
    assert_eq!(t["vertices"].as_array().unwrap().len(), 13);
    assert_eq!(t["edges"].as_array().unwrap().len(), 12);
}

#[test]
fn gen_lp_gives_l1_distances() {
    let s = ok_json(&["gen", "lp", r#"{"points":[[0,0],[1,0],[0,1]],"p":1}"#]);
    let d: Vec<Vec<f64>> = serde_json::from_value(s["dist"].clone()).unwrap();
    assert_eq!(d, vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 2.0], vec![1.0, 2.0, 0.0]]);
}

#[test]
fn generated_comb_round_trips_into_roundness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.json");
    let p = path.to_str().unwrap();
    let out = genround(&["gen", "comb", r#"{"m":4,"f":"constant(1)"}"#, "--output", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let est = ok_json(&["roundness", p]);
    let (lo, hi) = (num(&est["lower"]), num(&est["upper"]));
    assert!(1.0 < lo && hi < 2.0 && hi - lo <= 1e-6, "{est}");
}

#[test]
fn two_points_are_infinitely_round() {
    let est = ok_json(&["roundness", r#"{"labels":["a","b"],"dist":[[0,3],[3,0]]}"#]);
    assert_eq!(est["infinite"], true);
    assert!(est.get("lower").is_none());
}

#[test]
fn line_bracket_contains_two() {
    let rows = ok_csv(&["roundness", LINE, "--format", "csv"]);
    assert_eq!(&rows[0], &csv::StringRecord::from(vec!["lower", "upper", "infinite", "iterations"]));
    let lo: f64 = rows[1][0].parse().unwrap();
    let hi: f64 = rows[1][1].parse().unwrap();
    assert!(lo <= 2.0 && 2.0 <= hi && hi - lo <= 1e-6);
}

#[test]
fn negtype_and_simplex_on_the_line() {
    let r = ok_json(&["negtype", LINE, "--p", "1"]);
    assert_eq!((r["holds"].as_bool(), r["strict"].as_bool()), (Some(true), Some(true)));
    let s = ok_json(&["simplex", LINE, "--p", "2.1", "--a", "0,2", "--b", "1,1"]);
    assert!((num(&s["gap"]) - (4.0 - 2f64.powf(2.1))).abs() < 1e-12);
    assert_eq!(s["violation"], true);
    let found = ok_json(&["simplex", LINE, "--p", "1.5", "--search"]);
    assert_eq!(found["violation"], false);
    assert!(found.get("simplex").is_none());
}

#[test]
fn bound_csv_row() {
    let spec = r#"{"degrees":[3,3,3,3,3,3,3,3,3,3],"lengths":[1,1,1,1,1,1,1,1,1,1]}"#;
    let rows = ok_csv(&["bound", spec, "--format", "csv"]);
    assert_eq!(&rows[0], &csv::StringRecord::from(vec!["spec_hash", "n", "m_index", "best"]));
    assert_eq!(rows[1][0].len(), 16);
    assert_eq!(&rows[1][1], "10");
    assert_eq!(&rows[1][2], "4");
    assert!((rows[1][3].parse::<f64>().unwrap() - 1.37963).abs() < 1e-4);
    assert_eq!(ok_csv(&["bound", spec, "--format", "csv"]), rows);
}

#[test]
fn scaleiso_subcommands() {
    let c = ok_json(&["scaleiso", "comb", "--f", "poly(1,1)", "--m", "1", "--eps", "0.1"]);
    assert_eq!(c["n0"], 9);
    assert_eq!(c["certificate"]["valid"], true);
    let w = ok_json(&["scaleiso", "window", "--f", "geometric(2)", "--eps", "0.1"]);
    assert!(w["windows"][0]["n0"].is_null());
    let d = ok_json(&["scaleiso", "distortion", PATH3, "--rho", "1,1.1"]);
    assert!((num(&d["min_distortion"]) - 0.1 / 2.1).abs() < 1e-12);
    let ok = ok_json(&["scaleiso", "certify", PATH3, "--rho", "1,1.1", "--eps", "0.05"]);
    assert_eq!(ok["valid"], true);
    assert_eq!(ok["pairwise_verified"], true);
    let bad = ok_json(&["scaleiso", "certify", PATH3, "--rho", "1,1.1", "--eps", "0.04"]);
    assert_eq!(bad["valid"], false);
}

#[test]
fn embed_outputs_labeled_coordinates() {
    let rows = ok_csv(&["embed", LINE, "--p", "1", "--format", "csv"]);
    assert_eq!(&rows[0], &csv::StringRecord::from(vec!["label", "x1", "x2"]));
    assert_eq!(rows.len(), 4);
    let e = ok_json(&["embed", LINE, "--p", "3"]);
    assert_eq!(e["outcome"], "not_embeddable");
    assert!(num(&e["form_value"]) > 0.0);
}

#[test]
fn comb_convergence_rows() {
    let rows = ok_csv(&["experiment", "comb-convergence", "--format", "csv"]);
    let header: Vec<&str> = rows[0].iter().collect();
    assert_eq!(
        header,
        ["experiment", "descriptor", "param", "vertices", "scope", "lower", "upper", "infinite", "bound", "gap", "runtime_ms"]
    );
    assert_eq!(rows.len(), 7);
    let lowers: Vec<f64> = rows[1..].iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(lowers.windows(2).all(|w| w[1] <= w[0] + 1e-6));
    assert!(lowers.iter().all(|&l| l > 1.0));
    assert!(rows[1..].iter().enumerate().all(|(i, r)| r[2] == (i + 1).to_string() && r[10].is_empty()));
}

#[test]
fn sst_sweep_stays_under_the_bound() {
    let rows = ok_csv(&["experiment", "sst-sweep", "--n-max", "6", "--format", "csv"]);
    assert_eq!(rows.len(), 6);
    for r in &rows[1..] {
        assert!(&r[4] == "full" || &r[4] == "star");
        if !r[8].is_empty() {
            let (lower, bound): (f64, f64) = (r[5].parse().unwrap(), r[8].parse().unwrap());
            assert!(lower <= bound + 1e-6, "{r:?}");
        }
    }
    assert_eq!(&rows[5][4], "star");
}

#[test]
fn bound_tightness_reports_the_hand_value() {
    let rows = ok_csv(&["experiment", "bound-tightness", "--format", "csv"]);
    let bound: f64 = rows[1][8].parse().unwrap();
    assert!((bound - 1.37963).abs() < 1e-4);
}

#[test]
fn cap_exceeded_leaves_a_marker_row() {
    let out = genround(&["experiment", "sst-sweep", "--n-max", "5", "--vertex-cap", "100", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = csv_records(&out.stdout);
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[3][4], "cap_exceeded");
    assert_eq!(&rows[3][3], "121");
}

#[test]
fn experiments_are_deterministic() {
    let args = ["experiment", "comb-convergence", "--m-max", "4", "--format", "csv"];
    assert_eq!(genround(&args).stdout, genround(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(genround(&["roundness", "{not json"]).status.code(), Some(1));
    assert_eq!(genround(&["roundness", r#"{"labels":["a","b"],"dist":[[0,1],[2,0]]}"#]).status.code(), Some(1));
    assert_eq!(genround(&["roundness", "--no-such-flag", LINE]).status.code(), Some(1));
    let near_ultra = r#"{"labels":["a","b","c"],"dist":[[0,1,1],[1,0,1.01],[1,1.01,0]]}"#;
    assert_eq!(genround(&["roundness", near_ultra, "--p-cap", "4"]).status.code(), Some(2));
}
