// The secular function EV, its zeros and the 4×4 boundary determinant.

use specmat::mat2::CMatrix2;
use specmat::rootfind::{isolate_zeros, winding_count, Rect};
use specmat::secular::{boundary_determinant, build, geometric_multiplicity};
use specmat::c64;

pub fn run_example() -> specmat::Result<()> {
    let m = CMatrix2::real(1.0, 0.0, 1.0, 4.0);
    let f = build(&m)?;
    println!("kind {:?}, sqrt a± = {:.4}, {:.4}", f.kind, f.sqrt_a_plus, f.sqrt_a_minus);

    for x in [c64(0.5, 0.0), c64(1.0, 2.0), c64(3.0, -1.0)] {
        let ev = f.eval(x);
        let det = boundary_determinant(&f.eigen, x)?;
        println!("  EV({x:.2}) = {ev:.6e}   boundary det = {det:.6e}");
    }

    let rect = Rect::new(0.5, 10.0, -1.0, 1.0)?;
    let n = winding_count(&f, rect)?;
    println!("zeros of EV in {rect:?}: {n}");
    for z in isolate_zeros(&f, rect, 1e-12)? {
        let g = geometric_multiplicity(&m, z.z)?;
        println!("  λ = {:.10}  order {}  kernel dim {}", z.z, z.multiplicity, g);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
