use clap::Parser;
use specmat::cli::{execute, run, Cli};

fn output(args: &[&str]) -> String {
    let cli = Cli::try_parse_from(std::iter::once("specmat").chain(args.iter().copied())).unwrap();
    let mut buf = Vec::new();
    execute(cli, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("specmat").chain(args.iter().copied()))
}

#[test]
fn classify_reports_region_and_certificates() {
    let v: serde_json::Value = serde_json::from_str(&output(&["classify", "--a4", "1", "4"])).unwrap();
    assert_eq!(v["region"]["tag"], "R3");
    assert!(v["certificates"].is_array());
    assert_eq!(v["eigen"]["kind"], "Distinct");
}

#[test]
fn negative_entries_parse() {
    let v: serde_json::Value = serde_json::from_str(&output(&["classify", "--a4", "-0.5", "-3"])).unwrap();
    assert_eq!(v["canonical"]["a"], -0.5);
    let v: serde_json::Value = serde_json::from_str(&output(&["classify", "--real", "-1", "0", "0", "-2"])).unwrap();
    assert_eq!(v["matrix"]["a"][0], -1.0);
}

#[test]
fn ev_at_a_point() {
    // identity: EV ∝ sin²λ
    let ev = |at: &str| {
        let text = output(&["ev", "--real", "1", "0", "0", "1", "--at", at]);
        let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        row[2] * row[6].exp()
    };
    let ratio = ev("1.0,0") / 1f64.sin().powi(2);
    assert!((ev("2.0,0") / 2f64.sin().powi(2) - ratio).abs() < 1e-12);
    assert!(ev("3.141592653589793,0").abs() < 1e-12);
}

#[test]
fn ev_grid_has_one_row_per_point() {
    let text = output(&["ev", "--a4", "0", "2", "--grid", "0:3:4,-1:1:3"]);
    assert_eq!(text.lines().count(), 1 + 12);
}

#[test]
fn spectrum_of_the_identity() {
    let text = output(&["--format", "csv", "spectrum", "--real", "1", "0", "0", "1", "--count", "3"]);
    assert!(text.lines().nth(1).unwrap().starts_with("0.0,0.0,1,"));
    let first: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((first[0].parse::<f64>().unwrap() - pi2).abs() < 1e-8 * pi2);
    assert_eq!(first[2], "2");
}

#[test]
fn files_land_in_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let printed = output(&["--out", d, "sweep", "--segment", "0,1,0,2", "--steps", "2", "--count", "3"]);
    assert!(printed.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("step,"));
    output(&["--out", d, "--format", "svg", "sweep", "--segment", "0,1,0,2", "--steps", "2", "--count", "3"]);
    assert!(dir.path().join("sweep.svg").exists());
}

#[test]
fn cheb_point_and_sweep() {
    let text = output(&["cheb", "--alpha", "2", "--sign", "+", "--a", "-0.5", "--nmax", "2"]);
    assert!(text.lines().count() > 2);
    let text = output(&["cheb", "--alpha", "3/2", "--sweep", "-0.5:0.5:3", "--nmax", "1"]);
    assert!(text.starts_with("a,d,"));
}

#[test]
fn growth_rows() {
    let text = output(&["growth", "--a4", "0", "2", "--rmax", "3", "-n", "80"]);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["spectrum", "--real", "1", "2", "2", "4"]), 4);
    assert_eq!(code(&["classify", "--real", "1", "2", "2", "4"]), 0);
    assert_eq!(code(&["classify", "--real", "1", "2"]), 2);
    assert_eq!(code(&["spectrum", "--a4", "0", "2", "--rect", "nope"]), 2);
    assert_eq!(code(&["--tol=-1", "classify", "--a4", "0", "2"]), 2);
    assert_eq!(code(&["sweep", "--segment", "0,1,0,2", "--steps", "1"]), 2);
    assert_eq!(code(&["track-negative", "--a", "1", "--d-range", "4:5", "--steps", "3"]), 3);
    assert_eq!(code(&["--help"]), 0);
}
