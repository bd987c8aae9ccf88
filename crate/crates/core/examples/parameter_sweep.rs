// Spectra along a path of A4 matrices, written as CSV and SVG.

use specmat::chebpath::Ratio;
use specmat::sweep::{run_sweep, svg, write_csv, SvgLayout, SweepMethod, SweepPath, SweepSpec};

pub fn run_example() -> specmat::Result<()> {
    let alphas = ["2", "8/5", "4/3", "5/4", "7/6", "9/8"]
        .iter()
        .map(|s| Ratio::parse(s))
        .collect::<specmat::Result<Vec<_>>>()?;
    let mut spec = SweepSpec::new(SweepPath::FixedA { a: -0.5, sign: 1, alphas }, SweepMethod::Chebyshev, 12);
    spec.verify = true;
    let records = run_sweep(&spec)?;
    for r in &records {
        let neg: Vec<f64> = r
            .eigenvalues
            .iter()
            .filter(|e| e.value.re < 0.0 && e.value.im.abs() < 1e-9 * e.value.norm())
            .map(|e| e.value.re)
            .collect();
        println!(
            "d = {:.5}  {}  negative {:?}  verify {:.1e}",
            r.d,
            r.region,
            neg,
            r.verify_deviation.unwrap_or(0.0)
        );
    }
    let mut csv = Vec::new();
    write_csv(&records, &mut csv)?;
    let doc = svg(&records, SvgLayout::Superimposed);
    println!("{} CSV bytes, {} SVG bytes", csv.len(), doc.len());

    let seg = SweepSpec::new(
        SweepPath::Segment { a0: 0.0, d0: 0.5, a1: 0.0, d1: 3.0, steps: 5 },
        SweepMethod::Secular,
        6,
    );
    for r in run_sweep(&seg)? {
        println!("d = {:.3}  {}  {} eigenvalues", r.d, r.region, r.eigenvalues.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
