// A complex matrix whose spectrum has a closed form in terms of arccos.

use std::f64::consts::PI;

use specmat::mat2::CMatrix2;
use specmat::rootfind::spectrum_count;
use specmat::c64;

pub fn run_example() -> specmat::Result<()> {
    let m = CMatrix2::new(
        c64(0.4, 0.3),
        c64(0.6, -0.3),
        c64(0.15, 0.3),
        c64(0.85, -0.3),
    )?;
    let s = spectrum_count(&m, 10, 1e-12, 0)?;
    let lp = c64(-0.5, 0.5).acos();
    let lm = c64(-0.5, -0.5).acos();
    println!("arccos(-1/2 ± i/2) = {lp:.12}, {lm:.12}");
    let pi2 = PI * PI;
    for e in &s.eigenvalues {
        println!("  λ²/π² = {:>10.6}  mult {}", e.value / pi2, e.multiplicity);
    }
    // every entry is 4k²π² or (λ± + 2kπ)²
    for e in &s.eigenvalues {
        let closest = (-4..=4)
            .flat_map(|k| {
                let s = 2.0 * PI * k as f64;
                [c64(s * s, 0.0), (lp + s).powi(2), (lm + s).powi(2)]
            })
            .map(|c| (c - e.value).norm() / (1.0 + e.value.norm()))
            .fold(f64::INFINITY, f64::min);
        assert!(closest < 1e-8, "{} off the closed form by {closest:e}", e.value);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
