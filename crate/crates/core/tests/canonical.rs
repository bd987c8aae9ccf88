use std::f64::consts::PI;

use proptest::prelude::*;
use specmat::c64;
use specmat::canonical::{
    a4, a4_eigs, classify_region, perturbation_coeffs, predict, predict_a4, reduce_real, similarity_certificates,
    Certificate, Family, Locus, RegionTag,
};
use specmat::mat2::CMatrix2;
use specmat::Error;

#[test]
fn streater_matrix_reduces_to_a1() {
    let m = CMatrix2::real(1.0, 1.0, 0.5, 1.0);
    let c = reduce_real(&m).unwrap();
    assert_eq!(c.family, Family::A1);
    let s2 = 2f64.sqrt();
    assert!((c.alpha - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((c.a - s2).abs() < 1e-14 && (c.d - s2).abs() < 1e-14);
    assert!((c.r - s2).abs() < 1e-14);
    assert!(c.reconstruct().sub(&m).norm() < 1e-12 * m.norm());
}

#[test]
fn diagonal_reduces_to_a0() {
    let c = reduce_real(&CMatrix2::real(3.0, 0.0, 0.0, -2.0)).unwrap();
    assert_eq!((c.family, c.alpha, c.a, c.d), (Family::A0, 1.0, 3.0, -2.0));
}

#[test]
fn rotation_reduces_to_a4() {
    let c = reduce_real(&CMatrix2::real(0.0, -1.0, 1.0, 0.0)).unwrap();
    assert_eq!((c.family, c.alpha, c.a, c.d, c.sign), (Family::A4, 1.0, 0.0, 0.0, 1.0));
}

#[test]
fn complex_input_is_rejected() {
    let m = CMatrix2::new(c64(0.0, 1.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)).unwrap();
    assert!(matches!(reduce_real(&m), Err(Error::NonRealInput)));
}

#[test]
fn region_examples() {
    assert_eq!(classify_region(0.0, 2.0).tag, RegionTag::R1);
    assert_eq!(classify_region(-1.0, 1.0).tag, RegionTag::R6);
    assert_eq!(classify_region(3.0, 2.0).tag, RegionTag::R5);
    assert_eq!(classify_region(2.0, -2.0).tag, RegionTag::R2);
    assert_eq!(classify_region(1.0, 4.0).tag, RegionTag::R3);
    assert_eq!(classify_region(-1.0, -4.0).tag, RegionTag::R4);
    assert!(classify_region(-1.0, 0.0).on_real_curve);
}

#[test]
fn a4_eigenvalue_examples() {
    let (p, m) = a4_eigs(0.0, 2.0);
    assert!((p - 1.0).norm() < 1e-15 && (m - 1.0).norm() < 1e-15);
    let (p, m) = a4_eigs(-1.0, 0.0);
    let h = 3f64.sqrt() / 2.0;
    assert!((p - c64(-0.5, h)).norm() < 1e-15 && (m - c64(-0.5, -h)).norm() < 1e-15);
    let (p, m) = a4_eigs(0.0, 0.0);
    assert_eq!((p, m), (c64(0.0, 1.0), c64(0.0, -1.0)));
}

#[test]
fn prediction_examples() {
    let p = predict(&CMatrix2::real(1.0, 0.0, 1.0, 4.0)).unwrap();
    match p.locus {
        Locus::Lattice { steps } => {
            assert!((steps[0] - PI * PI).abs() < 1e-12 && (steps[1] - 4.0 * PI * PI).abs() < 1e-12)
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(predict_a4(0.5, -1.5).locus, Locus::Singleton0);
    match predict_a4(-1.0, 0.0).locus {
        Locus::RealWithFormula { step } => assert!((step + 4.0 * PI * PI / 3.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    assert_eq!(predict(&CMatrix2::real(1.0, 1.0, 1.0, 1.0)).unwrap().locus, Locus::WholePlane);
}

#[test]
fn real_curve_formula_is_branch_invariant() {
    // [Im(b^{-1/2})]² is the same for either square root of b
    for a in [-1.5, -1.0, -0.7, 0.6] {
        let d = a - 1.0 / a;
        let (bp, _) = a4_eigs(a, d);
        let w = bp.sqrt().inv();
        assert!(((-w).im.powi(2) - w.im.powi(2)).abs() < 1e-15);
        let w2 = (bp.sqrt() * -1.0).inv();
        assert!((w2.im.powi(2) - w.im.powi(2)).abs() < 1e-14);
    }
}

#[test]
fn perturbation_examples() {
    let (m1, m2) = perturbation_coeffs(&CMatrix2::identity()).unwrap();
    assert!((m1 - 1.0).norm() < 1e-15 && m2.is_none());
    let (m1, _) = perturbation_coeffs(&CMatrix2::real(1.0, 1.0, 0.5, 1.0)).unwrap();
    assert!((m1 - 2.0).norm() < 1e-14);
    let (m1, m2) = perturbation_coeffs(&CMatrix2::real(0.0, 1.0, 1.0, 0.0)).unwrap();
    assert_eq!(m1, c64(0.0, 0.0));
    assert!((m2.unwrap() + 1.0 / 12.0).norm() < 1e-12);
    assert!(matches!(perturbation_coeffs(&CMatrix2::real(1.0, 2.0, 1.0, 2.0)), Err(Error::SingularMatrix)));
}

#[test]
fn certificates_for_symmetrizable_and_triangular() {
    let m = CMatrix2::real(1.0, 1.0, 0.5, 1.0);
    let certs = similarity_certificates(&m).unwrap();
    let herm = certs.iter().find_map(|c| match c {
        Certificate::DiagonalSymmetrizable { hermitian, .. } => Some(*hermitian),
        _ => None,
    });
    let h = herm.expect("symmetrizable");
    assert!((h.b - h.c.conj()).norm() < 1e-14);
    assert!((h.b.re - 0.5f64.sqrt()).abs() < 1e-14);

    let certs = similarity_certificates(&CMatrix2::real(3.0, 0.0, 0.0, 2.0)).unwrap();
    assert!(certs.iter().any(|c| matches!(c, Certificate::DiagonalSymmetrizable { r, .. } if (*r - 1.0).abs() < 1e-15)));

    let certs = similarity_certificates(&CMatrix2::real(1.0, 0.0, 1.0, -2.0)).unwrap();
    let omega = certs
        .iter()
        .find_map(|c| match c {
            Certificate::NearReal { omega, .. } => Some(*omega),
            _ => None,
        })
        .expect("near-real certificate");
    assert!(omega < 0.1);
}

/// The region definitions, written out independently.
fn region_oracle(a: f64, d: f64) -> RegionTag {
    let gap = (a - d).abs();
    if a * d == -1.0 {
        RegionTag::R6
    } else if gap == 2.0 {
        RegionTag::R1
    } else if a * d < -1.0 {
        RegionTag::R2
    } else if gap > 2.0 && a + d > 0.0 {
        RegionTag::R3
    } else if gap > 2.0 && a + d < 0.0 {
        RegionTag::R4
    } else {
        RegionTag::R5
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100_000))]

    #[test]
    fn regions_partition_the_plane(a in -5.0f64..5.0, d in -5.0f64..5.0) {
        let near_edge = ((a * d + 1.0).abs() < 1e-8) || (((a - d).abs() - 2.0).abs() < 1e-8);
        prop_assume!(!near_edge);
        prop_assert_eq!(classify_region(a, d).tag, region_oracle(a, d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduction_round_trip(v in prop::array::uniform4(-4.0f64..4.0)) {
        let m = CMatrix2::real(v[0], v[1], v[2], v[3]);
        let c = reduce_real(&m).unwrap();
        prop_assert!(c.reconstruct().sub(&m).norm() <= 1e-12 * m.norm());
        if matches!(c.family, Family::A1 | Family::A4) {
            prop_assert!(c.alpha > 0.0);
        } else {
            prop_assert_eq!(c.alpha, 1.0);
        }
    }

    #[test]
    fn a4_eigenvalue_product(a in -5.0f64..5.0, d in -5.0f64..5.0) {
        let (p, m) = a4_eigs(a, d);
        prop_assert!((p * m - (a * d + 1.0)).norm() <= 1e-12 * (1.0 + a * a + d * d));
        if p.im == 0.0 {
            prop_assert!(m.re <= p.re);
        }
    }

    #[test]
    fn prediction_symmetry(a in -5.0f64..5.0, d in -5.0f64..5.0) {
        let p = predict_a4(a, d);
        let q = predict_a4(-a, -d);
        // compare through the distance function on probe points
        for z in [c64(3.0, 1.0), c64(-3.0, 1.0), c64(10.0, -4.0), c64(-7.0, 0.0), c64(0.0, 2.0)] {
            prop_assert!((p.locus.distance(z) - q.locus.distance(-z)).abs() < 1e-9);
        }
    }

    #[test]
    fn mu1_is_a_over_det(v in prop::array::uniform8(-2.0f64..2.0)) {
        let m = CMatrix2::new(c64(v[0], v[1]), c64(v[2], v[3]), c64(v[4], v[5]), c64(v[6], v[7])).unwrap();
        prop_assume!(!m.is_singular() && m.det().norm() > 1e-3);
        let (mu1, _) = perturbation_coeffs(&m).unwrap();
        prop_assert!((mu1 - m.a / m.det()).norm() <= 1e-12 * (1.0 + mu1.norm()));
    }
}

#[test]
fn a4_matrix_shape() {
    let m = a4(2.0, 3.0);
    assert_eq!(m, CMatrix2::real(2.0, -1.0, 1.0, 3.0));
}
