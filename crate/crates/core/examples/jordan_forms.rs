// Eigenstructure, numerical range and canonical reduction of a 2×2 matrix.

use specmat::canonical::{reduce_real, similarity_certificates};
use specmat::mat2::{eig2, numerical_range, CMatrix2};

pub fn run_example() -> specmat::Result<()> {
    let mats = [
        CMatrix2::real(1.0, 1.0, 0.5, 1.0),
        CMatrix2::real(1.0, 0.0, 1.0, 1.0),
        CMatrix2::real(0.0, -1.0, 1.0, 2.0),
        CMatrix2::real(2.0, -3.0, 1.0, -1.0),
    ];
    for m in &mats {
        let e = eig2(m);
        let w = numerical_range(m);
        println!("A = ({:?}, {:?}; {:?}, {:?})", m.a.re, m.b.re, m.c.re, m.d.re);
        println!("  {:?}: a+ = {:.4}, a- = {:.4}", e.kind, e.a_plus, e.a_minus);
        println!(
            "  W(A): axes {:.4} x {:.4}, contains 0: {}",
            w.major_axis_length, w.minor_axis_length, w.contains_origin
        );
        let c = reduce_real(m)?;
        println!("  canonical {:?} alpha={:.4} a={:.4} d={:.4} r={:.4}", c.family, c.alpha, c.a, c.d, c.r);
        let back = c.reconstruct();
        assert!(back.sub(m).norm() < 1e-12 * m.norm());
        for cert in similarity_certificates(m)? {
            println!("  certificate: {cert:?}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
