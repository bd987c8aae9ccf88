//! 2×2 complex linear algebra: eigenstructure, Jordan form, the adjoint
//! boundary projection and the elliptical numerical range.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Vec2 = [Complex64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Principal square root with `√(-x) = +i√x` for `x ≥ 0`, regardless of
/// the sign of a zero imaginary part.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    z.sqrt()
}

/// Row-major complex 2×2 matrix `(a b; c d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl CMatrix2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = CMatrix2 { a, b, c, d };
        if m.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(m)
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Real matrix. Panics on non-finite input; use [`CMatrix2::new`] for
    /// untrusted data.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into()).expect("finite entries")
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        CMatrix2 { a, b: ZERO, c: ZERO, d }
    }

    /// Matrix with columns `u` and `v`.
    pub fn from_columns(u: Vec2, v: Vec2) -> Self {
        CMatrix2 { a: u[0], b: v[0], c: u[1], d: v[1] }
    }

    /// Parse `re(a),im(a),re(b),im(b),re(c),im(c),re(d),im(d)`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("not a number: {p}")))
            })
            .collect::<Result<_>>()?;
        if parts.len() != 8 {
            return Err(Error::InvalidInput(format!(
                "expected 8 numbers for a complex 2x2 matrix, got {}",
                parts.len()
            )));
        }
        let z = |i: usize| Complex64::new(parts[2 * i], parts[2 * i + 1]);
        Self::new(z(0), z(1), z(2), z(3))
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn col(&self, j: usize) -> Vec2 {
        if j == 0 {
            [self.a, self.c]
        } else {
            [self.b, self.d]
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.entries().iter().all(|z| z.im == 0.0)
    }

    /// `|det A| ≤ 1e-14 ‖A‖²`: the operator is not closed.
    pub fn is_singular(&self) -> bool {
        self.det().norm() <= 1e-14 * self.norm().powi(2)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_singular() {
            return Err(Error::SingularMatrix);
        }
        let det = self.det();
        Ok(CMatrix2 { a: self.d / det, b: -self.b / det, c: -self.c / det, d: self.a / det })
    }

    pub fn mul(&self, o: &Self) -> Self {
        CMatrix2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        CMatrix2 { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CMatrix2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix2 { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    pub fn adjoint(&self) -> Self {
        CMatrix2 { a: self.a.conj(), b: self.c.conj(), c: self.b.conj(), d: self.d.conj() }
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Spectral condition number (infinite for singular matrices).
    pub fn cond(&self) -> f64 {
        let (smax, smin) = self.singular_values();
        if smin == 0.0 {
            f64::INFINITY
        } else {
            smax / smin
        }
    }

    /// `(σ_max, σ_min)`.
    pub fn singular_values(&self) -> (f64, f64) {
        let f2 = self.norm().powi(2);
        let d = self.det().norm();
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        let smax2 = 0.5 * (f2 + disc);
        let smax = smax2.sqrt();
        let smin = if smax > 0.0 { d / smax } else { 0.0 };
        (smax, smin)
    }
}

pub fn vnorm(v: Vec2) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// Unit norm, first nonzero component real positive.
fn normalize(v: Vec2) -> Vec2 {
    let n = vnorm(v);
    let lead = if v[0].norm() > 1e-300 { v[0] } else { v[1] };
    let phase = lead.conj() / lead.norm();
    [v[0] * phase / n, v[1] * phase / n]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JordanKind {
    Distinct,
    Scalar,
    Defective,
}

/// Eigenstructure `A = V C V⁻¹`.
///
/// For `Defective`, `C = (μ, 0; 1, μ)` and the second column of `V` is the
/// eigenvector; `v_plus` and `v_minus` both hold it.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Eigen2 {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub v_plus: Vec2,
    pub v_minus: Vec2,
    pub kind: JordanKind,
    pub v: CMatrix2,
    pub c: CMatrix2,
}

impl Eigen2 {
    /// `V C V⁻¹`.
    pub fn reconstruct(&self) -> CMatrix2 {
        let vinv = self.v.inverse().expect("V is invertible");
        self.v.mul(&self.c).mul(&vinv)
    }

    /// `|a₊ − a₋|` relative to the defective threshold of `A`.
    pub fn gap_ratio(&self, a: &CMatrix2) -> f64 {
        (self.a_plus - self.a_minus).norm() / defective_gap(a)
    }
}

pub(crate) fn defective_gap(a: &CMatrix2) -> f64 {
    1e-8 * (1.0 + a.norm())
}

fn eigvec_for(m: &CMatrix2, mu: Complex64) -> Vec2 {
    let u = [m.b, mu - m.a];
    let w = [mu - m.d, m.c];
    if vnorm(u) >= vnorm(w) {
        u
    } else {
        w
    }
}

/// Eigenvalues, eigenvectors and Jordan structure of a 2×2 matrix.
pub fn eig2(m: &CMatrix2) -> Eigen2 {
    let norm = m.norm();
    let t = m.trace() / 2.0;
    let h = (m.a - m.d) / 2.0;
    let s = principal_sqrt(h * h + m.b * m.c);
    let det = m.det();
    // the larger root first, the other from the product to avoid cancellation
    let (a_plus, a_minus) = if (t + s).norm() >= (t - s).norm() {
        let p = t + s;
        let q = if p.norm() > 0.0 { det / p } else { t - s };
        (p, q)
    } else {
        let q = t - s;
        (det / q, q)
    };
    // real distinct pairs are ordered a₋ < a₊
    let real = a_plus.im.abs() <= 1e-14 * norm && a_minus.im.abs() <= 1e-14 * norm;
    let (a_plus, a_minus) = if real && a_plus.re < a_minus.re { (a_minus, a_plus) } else { (a_plus, a_minus) };

    let tol_scalar = 1e-12 * (1.0 + norm);
    let near_equal = (a_plus - a_minus).norm() <= defective_gap(m);
    if near_equal {
        let mu = t;
        let shifted = m.sub(&CMatrix2::diag(mu, mu));
        if shifted.norm() <= tol_scalar {
            let e1 = [ONE, ZERO];
            let e2 = [ZERO, ONE];
            return Eigen2 {
                a_plus: mu,
                a_minus: mu,
                v_plus: e1,
                v_minus: e2,
                kind: JordanKind::Scalar,
                v: CMatrix2::identity(),
                c: CMatrix2::diag(mu, mu),
            };
        }
        let vp = normalize(eigvec_for(m, a_plus));
        let vm = normalize(eigvec_for(m, a_minus));
        if CMatrix2::from_columns(vp, vm).cond() > 1e8 {
            return jordan_defective(m, mu);
        }
    }

    let vp = normalize(eigvec_for(m, a_plus));
    let vm = normalize(eigvec_for(m, a_minus));
    Eigen2 {
        a_plus,
        a_minus,
        v_plus: vp,
        v_minus: vm,
        kind: JordanKind::Distinct,
        v: CMatrix2::from_columns(vp, vm),
        c: CMatrix2::diag(a_plus, a_minus),
    }
}

/// Jordan data for a matrix treated as defective with eigenvalue `μ`.
///
/// `N = A − μI` is (close to) nilpotent of rank one, `N = e uᵀ` with
/// `uᵀe = 0`. Take `w = ū/|u|²`, so `Nw = e` and `w ⟂ e`; then
/// `A (w e) = (w e) C`.
pub fn jordan_defective(m: &CMatrix2, mu: Complex64) -> Eigen2 {
    let n = &m.sub(&CMatrix2::diag(mu, mu));
    // the larger of the two columns of N spans its range
    let col = if vnorm(n.col(0)) >= vnorm(n.col(1)) { n.col(0) } else { n.col(1) };
    let e = normalize(col);
    // u_j = N_{ij}/e_i using the larger component of e
    let i = if e[0].norm() >= e[1].norm() { 0 } else { 1 };
    let row = |jj: usize| if i == 0 { n.col(jj)[0] } else { n.col(jj)[1] };
    let u = [row(0) / e[i], row(1) / e[i]];
    let un = u[0].norm_sqr() + u[1].norm_sqr();
    let w = [u[0].conj() / un, u[1].conj() / un];
    Eigen2 {
        a_plus: mu,
        a_minus: mu,
        v_plus: e,
        v_minus: e,
        kind: JordanKind::Defective,
        v: CMatrix2::from_columns(w, e),
        c: CMatrix2 { a: mu, b: ZERO, c: ONE, d: mu },
    }
}

/// Rank-one projection `P̂` with `range P̂ = range(A(I−P))^⊥` and
/// `range(I−P̂) = range(AP)^⊥`, where `P = diag(1, 0)`.
pub fn adjoint_projection(m: &CMatrix2) -> Result<CMatrix2> {
    if m.is_singular() {
        return Err(Error::SingularMatrix);
    }
    // range(A(I-P)) = span(b, d); range(AP) = span(a, c)
    let u = [m.d.conj(), -m.b.conj()];
    let w = [m.c.conj(), -m.a.conj()];
    // gᵀw = 0 and gᵀu = 1
    let g = [w[1], -w[0]];
    let gu = g[0] * u[0] + g[1] * u[1];
    let g = [g[0] / gu, g[1] / gu];
    Ok(CMatrix2 { a: u[0] * g[0], b: u[0] * g[1], c: u[1] * g[0], d: u[1] * g[1] })
}

/// The numerical range of a 2×2 matrix: a closed elliptical disc with
/// foci at the eigenvalues.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Ellipse {
    pub focus1: Complex64,
    pub focus2: Complex64,
    pub major_axis_length: f64,
    pub minor_axis_length: f64,
    pub contains_origin: bool,
}

pub fn numerical_range(m: &CMatrix2) -> Ellipse {
    let e = eig2(m);
    // sqrt(tr(A*A) − |a₊|² − |a₋|²) is the off-diagonal of the Schur form
    // Q*AQ with Q = (q, q⊥), q a unit eigenvector
    let q = e.v_plus;
    let qp = [-q[1].conj(), q[0].conj()];
    let aq = m.apply(qp);
    let minor = (q[0].conj() * aq[0] + q[1].conj() * aq[1]).norm();
    let gap = (e.a_plus - e.a_minus).norm();
    let major = (minor * minor + gap * gap).sqrt();
    let contains_origin = e.a_plus.norm() + e.a_minus.norm() <= major * (1.0 + 1e-14);
    Ellipse {
        focus1: e.a_plus,
        focus2: e.a_minus,
        major_axis_length: major,
        minor_axis_length: minor,
        contains_origin,
    }
}

fn cross(x: Complex64, y: Complex64) -> f64 {
    (x.conj() * y).im
}

impl Ellipse {
    pub fn center(&self) -> Complex64 {
        (self.focus1 + self.focus2) / 2.0
    }

    /// Boundary parameterization `c + u cos θ + v sin θ`.
    fn axes(&self) -> (Complex64, Complex64) {
        let gap = self.focus1 - self.focus2;
        let dir = if gap.norm() > 0.0 { gap / gap.norm() } else { ONE };
        let u = dir * (self.major_axis_length / 2.0);
        let v = dir * Complex64::i() * (self.minor_axis_length / 2.0);
        (u, v)
    }

    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        let (u, v) = self.axes();
        self.center() + u * theta.cos() + v * theta.sin()
    }

    /// Arguments `(α, β)` of the smallest sector with vertex at the origin
    /// containing the ellipse, `None` when the origin is inside.
    pub fn enclosing_sector(&self) -> Option<(f64, f64)> {
        if self.contains_origin {
            return None;
        }
        let c = self.center();
        let (u, v) = self.axes();
        // tangency from the origin: cross(z, z') = 0
        let ca = cross(c, v);
        let cb = -cross(c, u);
        let cc = cross(u, v);
        let r = ca.hypot(cb);
        let base = c.arg();
        if r <= 1e-300 {
            return Some((base, base));
        }
        let phi0 = cb.atan2(ca);
        let delta = (-cc / r).clamp(-1.0, 1.0).acos();
        let mut offs = [phi0 + delta, phi0 - delta]
            .map(|th| (self.boundary_point(th) / c).arg());
        offs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        Some((base + offs[0], base + offs[1]))
    }
}
