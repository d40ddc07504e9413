use std::process::{Command, Output};

use symapolar::betti::BettiTable;
use symapolar::cubic::{classify, BettiComparison, ClassificationReport, PlanePoint};
use symapolar::generic_rank::H4Report;
use symapolar::{DualPolynomial, PowerSumCertificate};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symapolar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn hilbert_of_h_3_4() {
    let o = run(&["hilbert", "--n", "3", "--form", "h:4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), r#"{"hf":[1,3,6,3,1]}"#);
}

#[test]
fn classify_tangent_line_point() {
    let o = run(&["classify-cubic", "--n", "4", "--point", "1,1,0"]);
    assert_eq!(code(&o), 0);
    let r: ClassificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((r.waring_rank, r.cactus_rank), (6, 5));
    assert_eq!(r, classify(4, &PlanePoint::from_ints(1, 1, 0).unwrap()).unwrap());
}

#[test]
fn decomposition_of_h_5_5_is_exact() {
    let o = run(&["verify-decomposition", "--n", "5", "--degree", "5"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "exact-equal");
    let cert: PowerSumCertificate = serde_json::from_value(v).unwrap();
    assert_eq!(cert.target, DualPolynomial::complete_symmetric(5, 5));
}

#[test]
fn injected_faults_exit_one() {
    for args in [
        &["verify-decomposition", "--n", "3", "--degree", "4"][..],
        &["quartic13"],
        &["waring-cert", "--n", "4", "--point", "1,1,0"],
        &["cactus-cert", "--n", "4", "--point", "1,1,0"],
        &["ann-structure", "--n", "3", "--degree", "4"],
        &["betti", "--n", "3", "--form", "h:3"],
        &["verify-betti", "--n", "4", "--point", "1,0,0"],
        &["generic-rank", "--n", "5", "--degree", "4", "--samples", "3"],
        &["hilbert", "--n", "3", "--form", "h:4"],
    ] {
        assert_eq!(code(&run(args)), 0, "{args:?} clean");
        let mut faulty = args.to_vec();
        faulty.push("--inject-fault");
        assert_eq!(code(&run(&faulty)), 1, "{args:?} with fault");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["nonsense"][..],
        &["hilbert", "--n", "3", "--form", "h:x"],
        &["hilbert", "--n", "3", "--form", "q:4"],
        &["hilbert", "--form", "h:4"],
        &["hilbert", "--n", "99", "--form", "h:2"],
        &["hilbert", "--n", "3", "--form", "raw:@/does/not/exist.json"],
        &["classify-cubic", "--n", "4", "--point", "0,0,0"],
        &["classify-cubic", "--n", "4", "--point", "1,2"],
        &["classify-cubic", "--n", "2", "--point", "1,1,0"],
        &["cactus-cert", "--n", "4", "--point", "1,0,0"],
        &["verify-betti", "--n", "6", "--point", "1,0,0"],
        &["atlas-plot", "--format", "csv"],
        &["dims", "--degree", "0"],
        &["classify-cubic", "--n", "4", "--grid", "9"],
        &["hilbert", "--n", "3", "--form", "h:4", "--format", "yaml"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}");
        let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert!(err["error"].is_string(), "{args:?}");
    }
}

#[test]
fn raw_form_from_file() {
    let dir = std::env::temp_dir().join(format!("symapolar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.json");
    std::fs::write(&path, serde_json::to_string(&DualPolynomial::complete_symmetric(3, 4)).unwrap()).unwrap();
    let spec = format!("raw:@{}", path.display());
    let o = run(&["hilbert", "--form", &spec]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), r#"{"hf":[1,3,6,3,1]}"#);
    assert_eq!(code(&run(&["hilbert", "--n", "4", "--form", &spec])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn betti_table_round_trips_and_renders() {
    let o = run(&["betti", "--n", "4", "--point", "1,0,0"]);
    assert_eq!(code(&o), 0);
    let t: BettiTable = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t.get(0, 0), 1);
    assert_eq!(t.get(4, 7), 1);
    let text = stdout(&run(&["betti", "--n", "4", "--point", "1,0,0", "--format", "text"]));
    assert!(text.contains("total:"));
}

#[test]
fn grid_csv_has_a_row_per_point() {
    let o = run(&["classify-cubic", "--n", "5", "--grid", "1", "--format", "csv"]);
    let out = stdout(&o);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let rows = reader.records().count();
    assert_eq!(rows, symapolar::cubic::sweep_points(1).len());
    let json = run(&["classify-cubic", "--n", "5", "--grid", "1"]);
    let reports: Vec<ClassificationReport> = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(reports.len(), rows);
}

#[test]
fn case_v_mismatch_is_reported() {
    let o = run(&["verify-betti", "--n", "4", "--point", "1,-3,1"]);
    assert_eq!(code(&o), 1);
    let c: BettiComparison = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!c.equal);
}

#[test]
fn atlas_plot_writes_svg() {
    let path = std::env::temp_dir().join(format!("symapolar-atlas-{}.svg", std::process::id()));
    let o = run(&["atlas-plot", "--n", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(svg.contains("<svg") && svg.contains("version=\"1.1\""));
    assert!(svg.contains("id=\"l2\"") && svg.contains("id=\"Q\""));
}

#[test]
fn generic_rank_is_seed_deterministic() {
    let a = run(&["generic-rank", "--n", "6", "--degree", "5", "--seed", "7", "--samples", "4"]);
    let b = run(&["generic-rank", "--n", "6", "--degree", "5", "--seed", "7", "--samples", "4"]);
    let c = run(&["generic-rank", "--n", "6", "--degree", "5", "--seed", "8", "--samples", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn solve_h4_reports_round_trip() {
    let o = run(&["solve-h4", "--n", "14"]);
    assert_eq!(code(&o), 0);
    let r: H4Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.alpha2_degenerate && r.solution.is_none());
    assert_eq!(r.expected_quartic_rank, 170);
}

#[test]
fn dims_of_sextics() {
    let o = run(&["dims", "--degree", "6"]);
    assert_eq!(stdout(&o).trim(), r#"{"degree":6,"affine":11,"projective":10}"#);
}
