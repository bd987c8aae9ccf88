// Finite-difference eigenvalues with Richardson error estimates.

use specmat::mat2::CMatrix2;
use specmat::oracle::{discretize, oracle_spectrum};
use specmat::rootfind::spectrum_count;

pub fn run_example() -> specmat::Result<()> {
    let m = CMatrix2::real(2.0, 0.0, 1.0, 1.0);
    let exact = spectrum_count(&m, 6, 1e-12, 0)?;
    for n in [50, 100, 200] {
        let s = oracle_spectrum(&discretize(&m, n)?, 6)?;
        println!("n = {n}");
        for (e, x) in s.eigenvalues.iter().zip(&exact.eigenvalues) {
            println!(
                "  {:>12.6}  est. err {:.2e}  true err {:.2e}",
                e.value.re,
                e.error_estimate.unwrap_or(f64::NAN),
                (e.value - x.value).norm()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
