// On the curve a² − ad − 1 = 0 the spectrum is real and negative.

use std::f64::consts::PI;

use specmat::canonical::{a4, classify_region};
use specmat::rootfind::spectrum_count;

pub fn run_example() -> specmat::Result<()> {
    let (a, d) = (-1.0, 0.0);
    println!("region {}", classify_region(a, d).tag);
    let s = spectrum_count(&a4(a, d), 6, 1e-12, 0)?;
    for (k, e) in s.eigenvalues.iter().enumerate() {
        let expect = -4.0 * PI * PI / 3.0 * (k * k) as f64;
        println!("  {:>14.8}  expected {:>14.8}  mult {}", e.value.re, expect, e.multiplicity);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
