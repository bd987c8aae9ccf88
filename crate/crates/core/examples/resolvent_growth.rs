// Resolvent norm growth along a parabola for a defective versus a diagonal matrix.

use specmat::mat2::CMatrix2;
use specmat::oracle::{discretize, growth_probe, growth_slopes, resolvent_norm, ShiftMode};
use specmat::c64;

pub fn run_example() -> specmat::Result<()> {
    let disc = discretize(&CMatrix2::identity(), 100)?;
    println!("‖(M - (-1))⁻¹‖ for A = I: {:.4}", resolvent_norm(&disc, c64(-1.0, 0.0))?);

    let r: Vec<u32> = (2..=6).collect();
    for (name, m) in [
        ("jordan (1,0;1,1)", CMatrix2::real(1.0, 0.0, 1.0, 1.0)),
        ("diagonal", CMatrix2::real(1.0, 0.0, 0.0, 2.0)),
    ] {
        let rows = growth_probe(&m, 1.0, &r, 150, ShiftMode::ModeMatched)?;
        let (s1, s2) = growth_slopes(&rows);
        println!("{name}: log-log slope {s1:.3} (n=150), {s2:.3} (n=300)");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
