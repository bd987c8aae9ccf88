// For triangular A the spectrum is the union of two lattices aπ²n² and dπ²n².

use std::f64::consts::PI;

use specmat::mat2::CMatrix2;
use specmat::rootfind::spectrum_count;

pub fn run_example() -> specmat::Result<()> {
    let (a, d) = (1.0, 2.5);
    let m = CMatrix2::real(a, 0.0, 1.0, d);
    let s = spectrum_count(&m, 8, 1e-12, 0)?;
    for e in &s.eigenvalues {
        let n_a = (e.value.re / (a * PI * PI)).sqrt();
        let n_d = (e.value.re / (d * PI * PI)).sqrt();
        println!(
            "  λ² = {:>12.6}  mult {}  n_a = {:.4}  n_d = {:.4}",
            e.value.re, e.multiplicity, n_a, n_d
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
