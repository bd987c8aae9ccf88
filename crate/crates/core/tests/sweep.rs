use std::f64::consts::PI;

use specmat::canonical::classify_region;
use specmat::chebpath::Ratio;
use specmat::sweep::{
    match_tracks, negative_eigenvalue, run_sweep, svg, track_negative_eigenvalue, write_csv, write_json,
    write_negative_csv, SvgLayout, SweepMethod, SweepPath, SweepRecord, SweepSpec, CSV_HEADER,
};
use specmat::{c64, Error};

fn ratios(list: &[&str]) -> Vec<Ratio> {
    list.iter().map(|s| Ratio::parse(s).unwrap()).collect()
}

fn negative_branch_spec() -> SweepSpec {
    let path = SweepPath::FixedA { a: -0.5, sign: 1, alphas: ratios(&["2", "8/5", "4/3", "5/4", "7/6", "9/8"]) };
    SweepSpec::new(path, SweepMethod::Chebyshev, 12)
}

fn csv_bytes(records: &[SweepRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(records, &mut out).unwrap();
    out
}

#[test]
fn negative_branch_sweep_has_one_growing_negative_eigenvalue() {
    let recs = run_sweep(&negative_branch_spec()).unwrap();
    assert!((recs.last().unwrap().d - 1.5035).abs() < 5e-5);
    let mut prev = 0.0;
    for r in &recs {
        let neg: Vec<f64> = r
            .eigenvalues
            .iter()
            .filter(|e| e.value.re < 0.0 && e.value.im.abs() <= 1e-9 * e.value.norm())
            .map(|e| e.value.re)
            .collect();
        assert_eq!(neg.len(), 1, "step {}", r.step);
        assert!(neg[0].abs() > prev);
        prev = neg[0].abs();
    }
}

#[test]
fn zero_a_sweep_endpoints() {
    let path = SweepPath::FixedA { a: 0.0, sign: 1, alphas: ratios(&["3", "5/2", "9/4", "2", "9/5", "3/2", "5/4", "9/8"]) };
    let recs = run_sweep(&SweepSpec::new(path, SweepMethod::Chebyshev, 8)).unwrap();
    assert!((recs[0].d - 10.0 / 3.0).abs() < 1e-4);
    assert!((recs.last().unwrap().d - 2.0139).abs() < 1e-4);
}

#[test]
fn verify_flag_reports_small_deviation() {
    let mut spec = negative_branch_spec();
    spec.verify = true;
    for r in run_sweep(&spec).unwrap() {
        assert!(r.verify_deviation.unwrap() <= 1e-6);
    }
}

#[test]
fn determinism_and_region_consistency() {
    let path = SweepPath::Segment { a0: 0.0, d0: 0.5, a1: 0.0, d1: 3.0, steps: 4 };
    let mut spec = SweepSpec::new(path, SweepMethod::Secular, 6);
    spec.seed = 11;
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
    for r in &a {
        assert_eq!(r.region, classify_region(r.a, r.d).tag);
    }
}

#[test]
fn csv_shape_and_json_round_trip() {
    let path = SweepPath::Segment { a0: 1.0, d0: 4.0, a1: 1.0, d1: 5.0, steps: 2 };
    let recs = run_sweep(&SweepSpec::new(path, SweepMethod::Secular, 5)).unwrap();
    let text = String::from_utf8(csv_bytes(&recs[..1])).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert_eq!(lines.len(), 1 + recs[0].eigenvalues.len());

    let mut json = Vec::new();
    write_json(&recs, &mut json).unwrap();
    let back: Vec<SweepRecord> = serde_json::from_slice(&json).unwrap();
    assert_eq!(back, recs);
}

#[test]
fn r6_steps_carry_a_sentinel() {
    let path = SweepPath::Segment { a0: -1.0, d0: 0.5, a1: -1.0, d1: 1.0, steps: 3 };
    let recs = run_sweep(&SweepSpec::new(path, SweepMethod::Secular, 4)).unwrap();
    let last = recs.last().unwrap();
    assert!(last.whole_plane && last.eigenvalues.is_empty());
    let text = String::from_utf8(csv_bytes(&recs)).unwrap();
    assert!(text.lines().last().unwrap().ends_with("R6,,,,,"));
}

#[test]
fn svg_layouts() {
    let recs = run_sweep(&negative_branch_spec()).unwrap();
    let panels = svg(&recs, SvgLayout::Panels);
    assert!(panels.starts_with("<svg") && panels.trim_end().ends_with("</svg>"));
    assert_eq!(panels.matches(r#"stroke="gray""#).count(), 6);
    assert_eq!(panels.matches("<text").count(), 6);
    let sup = svg(&recs, SvgLayout::Superimposed);
    assert!(sup.matches("<circle").count() >= recs.iter().map(|r| r.eigenvalues.len()).sum::<usize>());
}

#[test]
fn invalid_specs() {
    let short = SweepPath::Segment { a0: 0.0, d0: 0.0, a1: 1.0, d1: 1.0, steps: 1 };
    assert!(matches!(run_sweep(&SweepSpec::new(short, SweepMethod::Secular, 3)), Err(Error::InvalidInput(_))));
    let seg = SweepPath::Segment { a0: 0.0, d0: 3.0, a1: 1.0, d1: 4.0, steps: 3 };
    assert!(matches!(run_sweep(&SweepSpec::new(seg, SweepMethod::Chebyshev, 3)), Err(Error::InvalidInput(_))));
}

#[test]
fn matching_respects_the_cap() {
    let prev = [c64(0.0, 0.0), c64(10.0, 0.0), c64(20.0, 0.0)];
    let cur = [c64(0.1, 0.0), c64(10.1, 0.0), c64(500.0, 0.0)];
    let m = match_tracks(&prev, &cur);
    assert_eq!(m[0], Some(0));
    assert_eq!(m[1], Some(1));
    assert_eq!(m[2], None);
}

#[test]
fn negative_eigenvalue_track_is_monotone() {
    let rows = track_negative_eigenvalue(-0.5, 1.5012, 1.62, 100).unwrap();
    assert!(rows.windows(2).all(|w| w[0].lambda2 < w[1].lambda2));
    let mut out = Vec::new();
    write_negative_csv(&rows, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 101);
}

#[test]
fn negative_eigenvalue_on_the_real_curve() {
    // (−1, 0) is on a² − ad − 1 = 0: λ² = −4π²/3
    let row = negative_eigenvalue(-1.0, 0.0).unwrap();
    let expect = -4.0 * PI * PI / 3.0;
    assert!((row.lambda2 - expect).abs() < 1e-8 * expect.abs());
}

#[test]
fn positive_spectrum_has_no_imaginary_axis_zero() {
    assert!(matches!(negative_eigenvalue(1.0, 4.0), Err(Error::NoSignChange)));
}
