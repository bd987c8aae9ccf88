// Exact spectra on the curves √(b₊/b₋) = p/q from a Chebyshev polynomial.

use specmat::chebpath::{build_g, cheb_spectrum, cheb_sweep, g_roots, lambda_curve, ChebOptions, Ratio};
use specmat::rootfind::spectrum_seeded;
use specmat::rootfind::Rect;

pub fn run_example() -> specmat::Result<()> {
    let pt = lambda_curve(Ratio::new(3, 2)?, 1, -0.5)?;
    println!("point (a, d) = ({}, {:.6}), b± = {:.4}, {:.4}", pt.a, pt.d, pt.b_plus, pt.b_minus);
    let g = build_g(&pt)?;
    println!("G has degree {}; roots:", g.degree());
    for r in g_roots(&g)? {
        println!("  w = {:.8}  mult {}", r.w, r.multiplicity);
    }

    let opts = ChebOptions::default();
    let cheb = cheb_spectrum(&pt, opts)?;
    let first: Vec<_> = cheb.eigenvalues.iter().filter(|e| e.value.norm() <= 200.0).collect();
    let sec = spectrum_seeded(&pt.matrix(), Rect::new(-1.0, 15.0, -15.0, 15.0)?, 1e-12, 0)?;
    for e in first {
        let near = sec
            .eigenvalues
            .iter()
            .map(|s| (s.value - e.value).norm())
            .fold(f64::INFINITY, f64::min);
        println!("  λ² = {:.8}  secular deviation {near:.2e}", e.value);
    }

    let rows = cheb_sweep(Ratio::new(2, 1)?, 1, -0.9, 0.9, 4, opts)?;
    println!("sweep along 2/1: {} rows", rows.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
