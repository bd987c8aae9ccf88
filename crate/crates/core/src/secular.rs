//! The secular function `EV(λ)`: an entire, even function whose zeros are
//! exactly the `λ` with `λ²` an eigenvalue of `AD`.
//!
//! Write `A = V C V⁻¹` with `V = (v1 v2; v3 v4)`. Eigenfunctions are
//! `f = V g` where `−C g'' = λ² g`, and the boundary conditions become
//! `Ψ Y(0) = Ψ Y(1) = 0` for `Y = (g, g')` and `Ψ = (v1 v2 0 0; 0 0 v3 v4)`.
//! With `Y(1) = exp(B_λ) Y(0)`, `B_λ = (0 I; −λ²C⁻¹ 0)`, the spectrum is
//! the zero set of `det [Ψ; Ψ exp(B_λ)]`.
//!
//! For diagonal `C = diag(a₊, a₋)`, expanding that determinant gives
//!
//! ```text
//! EV(λ) = k1 (1 − cos(λ/√a₊) cos(λ/√a₋)) − k2 sin(λ/√a₊) sin(λ/√a₋)
//! k1 = 2 v1 v2 v3 v4,   k2 = v1² v4² √(a₊/a₋) + v2² v3² √(a₋/a₊)
//! ```
//!
//! and for the Jordan block `C = (b, 0; 1, b)`
//!
//! ```text
//! EV(λ) = v2² v4² λ² / (4 b³) − (det V + v2 v4 / (2b))² sin²(λ/√b).
//! ```
//!
//! Both equal `−det [Ψ; Ψ exp(B_λ)]`. Eigenvectors are normalized as in
//! [`crate::mat2`], which fixes the overall constant.

use nalgebra::{Matrix4, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mat2::{defective_gap, eig2, jordan_defective, principal_sqrt, CMatrix2, Eigen2, JordanKind};
use crate::rootfind::{winding_count, Analytic, Rect, Scaled};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SecularKind {
    Diagonalizable,
    Defective,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
enum Form {
    /// `EV = −(k2−k1) sin²(σλ/2) + (k1+k2) sin²(δλ/2)` with
    /// `σ = 1/√a₊ + 1/√a₋`, `δ = 1/√a₊ − 1/√a₋`.
    Diag { k1: Complex64, k2: Complex64, sigma: Complex64, delta: Complex64 },
    /// `EV = q λ² − l sin²(λ s)` with `s = 1/√b`.
    Jordan { q: Complex64, l: Complex64, s: Complex64 },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SecularFn {
    pub kind: SecularKind,
    pub matrix: CMatrix2,
    pub eigen: Eigen2,
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub sqrt_a_plus: Complex64,
    pub sqrt_a_minus: Complex64,
    pub det_v: Complex64,
    /// The eigenvalue gap is within 10× the defective threshold.
    pub near_defective: bool,
    form: Form,
}

/// `(sin w, cos w)` multiplied by `e^{−|Im w|}`.
pub(crate) fn scaled_trig(w: Complex64) -> (Complex64, Complex64) {
    let y = w.im;
    let ay = y.abs();
    let e1 = Complex64::from_polar((-y - ay).exp(), w.re);
    let e2 = Complex64::from_polar((y - ay).exp(), -w.re);
    let sin = (e1 - e2) / Complex64::new(0.0, 2.0);
    let cos = (e1 + e2) / 2.0;
    (sin, cos)
}

/// `u − sin u`, accurate for small `u`.
fn u_minus_sin(u: Complex64) -> Complex64 {
    if u.norm() > 1.0 {
        return u - u.sin();
    }
    let u2 = u * u;
    let mut term = u * u2 / 6.0;
    let mut sum = term;
    for k in 2..30 {
        let k = k as f64;
        term = -term * u2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// `w² − sin² w` and its derivative `2w − sin 2w`.
fn sq_minus_sin_sq(w: Complex64) -> (Complex64, Complex64) {
    let r = u_minus_sin(w);
    (r * (2.0 * w - r), u_minus_sin(2.0 * w))
}

/// Below this argument size `EV` is evaluated as its `x²` term plus
/// cancellation-free remainders.
const SMALL_ARG: f64 = 1.0;

impl SecularFn {
    fn from_eigen(m: &CMatrix2, e: Eigen2) -> Self {
        let v = e.v;
        let (v1, v2, v3, v4) = (v.a, v.b, v.c, v.d);
        let det_v = v.det();
        let sp = principal_sqrt(e.a_plus);
        let sm = principal_sqrt(e.a_minus);
        let (kind, form) = match e.kind {
            JordanKind::Defective => {
                let b = e.a_plus;
                let q = v2 * v2 * v4 * v4 / (4.0 * b * b * b);
                let t = det_v + v2 * v4 / (2.0 * b);
                (SecularKind::Defective, Form::Jordan { q, l: t * t, s: sp.inv() })
            }
            _ => {
                let k1 = 2.0 * v1 * v2 * v3 * v4;
                let k2 = v1 * v1 * v4 * v4 * (sp / sm) + v2 * v2 * v3 * v3 * (sm / sp);
                let (al, be) = (sp.inv(), sm.inv());
                (SecularKind::Diagonalizable, Form::Diag { k1, k2, sigma: al + be, delta: al - be })
            }
        };
        SecularFn {
            kind,
            matrix: *m,
            eigen: e,
            a_plus: e.a_plus,
            a_minus: e.a_minus,
            sqrt_a_plus: sp,
            sqrt_a_minus: sm,
            det_v,
            near_defective: false,
            form,
        }
    }

    /// `EV(x)` as `(mantissa, derivative mantissa, log scale)`.
    pub fn eval_parts(&self, x: Complex64) -> Scaled {
        match self.form {
            Form::Diag { k1, k2, sigma, delta } => {
                let w1 = sigma * x / 2.0;
                let w2 = delta * x / 2.0;
                if w1.norm().max(w2.norm()) < SMALL_ARG {
                    let c2 = (-(k2 - k1) * sigma * sigma + (k1 + k2) * delta * delta) / 4.0;
                    let (h1, dh1) = sq_minus_sin_sq(w1);
                    let (h2, dh2) = sq_minus_sin_sq(w2);
                    let value = c2 * x * x + (k2 - k1) * h1 - (k1 + k2) * h2;
                    let deriv = 2.0 * c2 * x + (k2 - k1) * sigma / 2.0 * dh1 - (k1 + k2) * delta / 2.0 * dh2;
                    return Scaled { value, deriv, log_scale: 0.0 };
                }
                let (s1, c1) = scaled_trig(w1);
                let (s2, c2) = scaled_trig(w2);
                let e1 = 2.0 * w1.im.abs();
                let e2 = 2.0 * w2.im.abs();
                let big = e1.max(e2);
                let f1 = (e1 - big).exp();
                let f2 = (e2 - big).exp();
                let value = -(k2 - k1) * s1 * s1 * f1 + (k1 + k2) * s2 * s2 * f2;
                let deriv = -(k2 - k1) * sigma * s1 * c1 * f1 + (k1 + k2) * delta * s2 * c2 * f2;
                Scaled { value, deriv, log_scale: big }
            }
            Form::Jordan { q, l, s } => {
                let w = s * x;
                if w.norm() < SMALL_ARG {
                    let c2 = q - l * s * s;
                    let (h, dh) = sq_minus_sin_sq(w);
                    let value = c2 * x * x + l * h;
                    let deriv = 2.0 * c2 * x + l * s * dh;
                    return Scaled { value, deriv, log_scale: 0.0 };
                }
                let (sn, cs) = scaled_trig(w);
                let big = 2.0 * w.im.abs();
                let f = (-big).exp();
                let value = q * x * x * f - l * sn * sn;
                let deriv = 2.0 * q * x * f - l * 2.0 * s * sn * cs;
                Scaled { value, deriv, log_scale: big }
            }
        }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let p = self.eval_parts(x);
        p.value * p.log_scale.exp()
    }

    pub fn eval_deriv(&self, x: Complex64) -> Complex64 {
        let p = self.eval_parts(x);
        p.deriv * p.log_scale.exp()
    }

    /// The constants `(k1, k2)` of the diagonalizable form.
    pub fn k_constants(&self) -> Option<(Complex64, Complex64)> {
        match self.form {
            Form::Diag { k1, k2, .. } => Some((k1, k2)),
            Form::Jordan { .. } => None,
        }
    }

    /// The multiplier `c` with `EV_ref = c · EV`, where `EV_ref` is built from
    /// the transform `reference` (columns proportional to those of `V`, in the
    /// same order).
    pub fn gauge_constant(&self, reference: &CMatrix2) -> Result<Complex64> {
        let ratio = |ours: [Complex64; 2], theirs: [Complex64; 2]| -> Result<Complex64> {
            let i = if ours[0].norm() >= ours[1].norm() { 0 } else { 1 };
            let s = theirs[i] / ours[i];
            let scale = theirs[0].norm() + theirs[1].norm();
            if (theirs[0] - s * ours[0]).norm() + (theirs[1] - s * ours[1]).norm() > 1e-8 * scale {
                return Err(Error::InvalidInput("reference columns are not proportional".into()));
            }
            Ok(s)
        };
        let v = self.eigen.v;
        match self.kind {
            SecularKind::Diagonalizable => {
                let s1 = ratio(v.col(0), reference.col(0))?;
                let s2 = ratio(v.col(1), reference.col(1))?;
                Ok(s1 * s1 * s2 * s2)
            }
            SecularKind::Defective => {
                let s = ratio(v.col(1), reference.col(1))?;
                Ok(s * s * s * s)
            }
        }
    }
}

impl Analytic for SecularFn {
    fn eval_scaled(&self, z: Complex64) -> Scaled {
        self.eval_parts(z)
    }
}

/// Build `EV` for a non-singular matrix.
///
/// Close to the defective threshold both formulas are built and their zero
/// counts compared on a probe rectangle; a disagreement is reported as
/// `IllConditioned`.
pub fn build(m: &CMatrix2) -> Result<SecularFn> {
    if m.is_singular() {
        return Err(Error::SingularMatrix);
    }
    let e = eig2(m);
    let mut s = SecularFn::from_eigen(m, e);
    if e.kind == JordanKind::Distinct
        && (e.a_plus - e.a_minus).norm() <= 10.0 * defective_gap(m)
    {
        s.near_defective = true;
        let alt = SecularFn::from_eigen(m, jordan_defective(m, m.trace() / 2.0));
        let scale = principal_sqrt(alt.a_plus).norm();
        let probe = Rect::new(0.3 * scale, 12.0 * scale, -3.0 * scale, 3.0 * scale)?;
        let n1 = winding_count(&s, probe)?;
        let n2 = winding_count(&alt, probe)?;
        if n1 != n2 {
            return Err(Error::IllConditioned(format!(
                "near-defective matrix: zero counts {n1} and {n2} disagree"
            )));
        }
    }
    Ok(s)
}

fn check_jordan(c: &CMatrix2) -> Result<bool> {
    let zero = |z: Complex64| z.norm() == 0.0;
    if zero(c.b) && zero(c.c) {
        if zero(c.a) || zero(c.d) {
            return Err(Error::SingularJordan);
        }
        Ok(false)
    } else if zero(c.b) && c.c == Complex64::new(1.0, 0.0) && c.a == c.d {
        if zero(c.a) {
            return Err(Error::SingularJordan);
        }
        Ok(true)
    } else {
        Err(Error::InvalidInput("C must be diagonal or (mu, 0; 1, mu)".into()))
    }
}

/// `f(C)` for diagonal `C` or the lower Jordan block.
fn matfun(c: &CMatrix2, jordan: bool, f: impl Fn(Complex64) -> (Complex64, Complex64)) -> CMatrix2 {
    if jordan {
        let (v, dv) = f(c.a);
        CMatrix2 { a: v, b: 0.0.into(), c: dv, d: v }
    } else {
        CMatrix2::diag(f(c.a).0, f(c.d).0)
    }
}

/// `exp(B_λ x)` as a 4×4 matrix in block form
/// `(cos(λC^{-1/2}x), λ⁻¹C^{1/2} sin(λC^{-1/2}x); −λC^{-1/2} sin(λC^{-1/2}x), cos(λC^{-1/2}x))`.
pub fn fundamental_matrix(c: &CMatrix2, lambda: Complex64, x: f64) -> Result<Matrix4<Complex64>> {
    let jordan = check_jordan(c)?;
    let (b11, b12, b21) = if lambda == Complex64::new(0.0, 0.0) {
        let one = CMatrix2::identity();
        (one, one.scale(x.into()), CMatrix2::diag(0.0.into(), 0.0.into()))
    } else {
        let lx = lambda * x;
        let cosf = |m: Complex64| {
            let r = principal_sqrt(m);
            let th = lx / r;
            (th.cos(), lx / (2.0 * m * r) * th.sin())
        };
        let sinf = |m: Complex64| {
            let r = principal_sqrt(m);
            let th = lx / r;
            let v = r * th.sin() / lambda;
            let dv = th.sin() / (2.0 * lambda * r) - x * th.cos() / (2.0 * m);
            (v, dv)
        };
        let msin = |m: Complex64| {
            let r = principal_sqrt(m);
            let th = lx / r;
            let v = -lambda / r * th.sin();
            let dv = lambda / (2.0 * m * r) * th.sin() + lambda * lx / (2.0 * m * m) * th.cos();
            (v, dv)
        };
        (matfun(c, jordan, cosf), matfun(c, jordan, sinf), matfun(c, jordan, msin))
    };
    let mut out = Matrix4::zeros();
    for (bi, bj, blk) in [(0, 0, b11), (0, 2, b12), (2, 0, b21), (2, 2, b11)] {
        out[(bi, bj)] = blk.a;
        out[(bi, bj + 1)] = blk.b;
        out[(bi + 1, bj)] = blk.c;
        out[(bi + 1, bj + 1)] = blk.d;
    }
    Ok(out)
}

/// `[Ψ; Ψ exp(B_λ)]` for the Jordan data of `A`.
pub fn boundary_matrix(e: &Eigen2, lambda: Complex64) -> Result<Matrix4<Complex64>> {
    let v = e.v;
    let z = Complex64::new(0.0, 0.0);
    let psi = nalgebra::Matrix2x4::new(v.a, v.b, z, z, z, z, v.c, v.d);
    let bottom = psi * fundamental_matrix(&e.c, lambda, 1.0)?;
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 4>(0, 0).copy_from(&psi);
    m.fixed_view_mut::<2, 4>(2, 0).copy_from(&bottom);
    Ok(m)
}

/// `det [Ψ; Ψ exp(B_λ)]`, equal to `−EV(λ)`.
pub fn boundary_determinant(e: &Eigen2, lambda: Complex64) -> Result<Complex64> {
    Ok(boundary_matrix(e, lambda)?.determinant())
}

/// Dimension of the eigenspace of `λ²`: the kernel dimension of the
/// boundary matrix (rows normalized, relative rank threshold `1e-7`).
pub fn geometric_multiplicity(m: &CMatrix2, lambda: Complex64) -> Result<usize> {
    if m.is_singular() {
        return Err(Error::SingularMatrix);
    }
    let e = eig2(m);
    let mut b = boundary_matrix(&e, lambda)?;
    for mut row in b.row_iter_mut() {
        let n = row.norm();
        if n > 0.0 {
            row /= Complex64::from(n);
        }
    }
    let sv = SVD::new(b, false, false).singular_values;
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > 1e-7 * smax).count();
    Ok(4 - rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn scaled_trig_matches_plain_trig() {
        let w = c64(0.7, -1.3);
        let (s, c) = scaled_trig(w);
        let f = (w.im.abs()).exp();
        assert!((s * f - w.sin()).norm() < 1e-14);
        assert!((c * f - w.cos()).norm() < 1e-14);
    }

    #[test]
    fn huge_imaginary_argument_stays_finite() {
        let s = build(&CMatrix2::real(1.0, 0.0, 1.0, 4.0)).unwrap();
        let p = s.eval_parts(c64(3.0, 1400.0));
        assert!(p.value.norm().is_finite() && p.value.norm() > 0.0);
        assert!(p.log_scale > 700.0);
    }
}
