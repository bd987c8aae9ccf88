// Region map of the A4 family and the predicted spectral locus per region.

use specmat::canonical::{classify_region, predict_a4};

pub fn run_example() -> specmat::Result<()> {
    let points = [
        (0.5, -1.5),
        (0.0, 2.0),
        (1.0, 4.0),
        (-0.5, 1.6),
        (-1.0, 0.0),
        (0.0, 0.5),
        (-1.0, 1.0),
        (2.0, -2.0),
    ];
    for (a, d) in points {
        let r = classify_region(a, d);
        let p = predict_a4(a, d);
        println!("(a, d) = ({a:5.2}, {d:5.2})  {}  {}", r.tag, r.detail);
        println!("    locus {:?}", p.locus);
        if let Some(s) = p.sector {
            println!("    sector dir {:.3} half-angle {:.3} double {}", s.direction, s.omega, s.double);
        }
        if !p.theorems.is_empty() {
            println!("    by {}", p.theorems.join(", "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
