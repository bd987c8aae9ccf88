// The single negative eigenvalue for a = −1/2 as d decreases to 3/2.

use std::f64::consts::PI;

use specmat::sweep::{negative_eigenvalue, track_negative_eigenvalue};

pub fn run_example() -> specmat::Result<()> {
    let row = negative_eigenvalue(-0.5, 1.6)?;
    println!("d = 1.6: λ = {:.8}i, λ² = {:.6} π²", row.t, row.lambda2 / (PI * PI));
    let rows = track_negative_eigenvalue(-0.5, 1.5012, 1.62, 12)?;
    for r in &rows {
        println!("  d = {:.5}  t = {:.5}  λ² = {:.6}", r.d, r.t, r.lambda2);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
