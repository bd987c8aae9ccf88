//! Reduction of real matrices to the canonical families `A0..A4`, the
//! region map of the `A4` family and theorem-backed spectral predictions.
//!
//! The families are
//!
//! ```text
//! A0 = (a 0; 0 d)   A1 = (a 1; 1 d)   A2 = (a 0; 1 d)
//! A3 = (a 1; 0 d)   A4 = (a -1; 1 d)
//! ```
//!
//! and every real `A` satisfies `A = B⁻¹ (sign·α·A_j(a, d)) B` with
//! `B = diag(1, r)`. A diagonal similarity commutes with the boundary
//! conditions, so `AD` and `sign·α·A_j D` share their spectrum.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mat2::{numerical_range, principal_sqrt, CMatrix2};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A0,
    A1,
    A2,
    A3,
    A4,
}

impl Family {
    pub fn matrix(self, a: f64, d: f64) -> CMatrix2 {
        match self {
            Family::A0 => CMatrix2::real(a, 0.0, 0.0, d),
            Family::A1 => CMatrix2::real(a, 1.0, 1.0, d),
            Family::A2 => CMatrix2::real(a, 0.0, 1.0, d),
            Family::A3 => CMatrix2::real(a, 1.0, 0.0, d),
            Family::A4 => CMatrix2::real(a, -1.0, 1.0, d),
        }
    }
}

/// Shorthand for the `A4` family matrix `(a -1; 1 d)`.
pub fn a4(a: f64, d: f64) -> CMatrix2 {
    Family::A4.matrix(a, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub family: Family,
    pub alpha: f64,
    pub a: f64,
    pub d: f64,
    /// `B = diag(1, r)`.
    pub r: f64,
    pub sign: f64,
}

impl CanonicalForm {
    /// `sign·α·A_family(a, d)`.
    pub fn matrix(&self) -> CMatrix2 {
        self.family.matrix(self.a, self.d).scale((self.sign * self.alpha).into())
    }

    pub fn similarity(&self) -> CMatrix2 {
        CMatrix2::real(1.0, 0.0, 0.0, self.r)
    }

    /// `B⁻¹ (sign·α·A_j) B`, which equals the reduced matrix.
    pub fn reconstruct(&self) -> CMatrix2 {
        let b = self.similarity();
        let binv = CMatrix2::real(1.0, 0.0, 0.0, 1.0 / self.r);
        binv.mul(&self.matrix()).mul(&b)
    }
}

fn real_entries(m: &CMatrix2) -> Result<[f64; 4]> {
    if !m.is_real() {
        return Err(Error::NonRealInput);
    }
    Ok([m.a.re, m.b.re, m.c.re, m.d.re])
}

/// Canonical form of a real matrix.
pub fn reduce_real(m: &CMatrix2) -> Result<CanonicalForm> {
    let [at, b, c, dt] = real_entries(m)?;
    let form = |family, alpha, a, d, r, sign| CanonicalForm { family, alpha, a, d, r, sign };
    Ok(if b == 0.0 && c == 0.0 {
        form(Family::A0, 1.0, at, dt, 1.0, 1.0)
    } else if b == 0.0 {
        form(Family::A2, 1.0, at, dt, 1.0 / c, 1.0)
    } else if c == 0.0 {
        form(Family::A3, 1.0, at, dt, b, 1.0)
    } else if b * c > 0.0 {
        let alpha = (b * c).sqrt();
        let r = (b / c).sqrt();
        let sign = b.signum();
        form(Family::A1, alpha, sign * at / alpha, sign * dt / alpha, r, sign)
    } else {
        let alpha = (-b * c).sqrt();
        let r = (-b / c).sqrt();
        let sign = -b.signum();
        form(Family::A4, alpha, sign * at / alpha, sign * dt / alpha, r, sign)
    })
}

pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    Boundary,
}

impl std::fmt::Display for RegionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub tag: RegionTag,
    pub detail: String,
    /// `a² − ad − 1 = 0` within tolerance (only meaningful in `R5`).
    pub on_real_curve: bool,
}

/// Region of `(a, d)` for the `A4` family.
///
/// The equalities `|a−d| = 2` and `ad = −1` are tested with an absolute
/// tolerance of [`BOUNDARY_TOL`]. The two points `(1, 3)` and `(−1, −3)`
/// lie on `|a−d| = 2` with `a = ±1` but not on `ad = −1`, so no region
/// covers them; they are tagged `Boundary`.
pub fn classify_region(a: f64, d: f64) -> Region {
    let tol = BOUNDARY_TOL;
    let on_curve = (a * a - a * d - 1.0).abs() <= tol;
    let region = |tag, detail: &str| Region { tag, detail: detail.to_string(), on_real_curve: false };
    if (a * d + 1.0).abs() <= tol {
        return region(RegionTag::R6, "ad = -1");
    }
    let gap = (a - d).abs();
    if (gap - 2.0).abs() <= tol {
        if (a.abs() - 1.0).abs() <= tol {
            return region(RegionTag::Boundary, "|a-d| = 2 with a = +-1 outside ad = -1");
        }
        return region(RegionTag::R1, "|a-d| = 2, a != +-1");
    }
    if a * d < -1.0 {
        return region(RegionTag::R2, "ad < -1");
    }
    if gap > 2.0 {
        if a + d > 0.0 {
            return region(RegionTag::R3, "ad > -1, |a-d| > 2, a+d > 0");
        }
        return region(RegionTag::R4, "ad > -1, |a-d| > 2, a+d < 0");
    }
    Region {
        tag: RegionTag::R5,
        detail: if on_curve { "|a-d| < 2 on a^2-ad-1 = 0" } else { "|a-d| < 2" }.to_string(),
        on_real_curve: on_curve,
    }
}

/// Eigenvalues `b± = (a+d ± √((a−d)²−4))/2` of `A4(a, d)`.
pub fn a4_eigs(a: f64, d: f64) -> (Complex64, Complex64) {
    let s = principal_sqrt(Complex64::from((a - d) * (a - d) - 4.0));
    let t = Complex64::from(a + d);
    ((t + s) / 2.0, (t - s) / 2.0)
}

/// The sets that can carry the spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Locus {
    WholePlane,
    RealLine,
    NonnegativeHalfLine,
    NonpositiveHalfLine,
    /// `{s·k² : k ≥ 0, s ∈ steps}`.
    Lattice { steps: Vec<f64> },
    /// `{(r + i y0)² : r ∈ ℝ} + [0, ∞)`, negated when `sign < 0`.
    ParabolicBand { sign: f64, y0: Option<f64> },
    Singleton0,
    /// `{step·k² : k ≥ 0}` from the closed form on `a² − ad − 1 = 0`.
    RealWithFormula { step: f64 },
    /// Infinite, meeting the real line in finitely many points.
    InfiniteFinitelyManyReal,
}

/// `{z : |arg(z/dir) | ≤ ω}`, optionally together with its negative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub direction: f64,
    pub omega: f64,
    pub double: bool,
}

impl Sector {
    pub fn distance(&self, z: Complex64) -> f64 {
        let one = |dir: f64| {
            let rel = (z * Complex64::from_polar(1.0, -dir)).arg().abs();
            let excess = rel - self.omega;
            if excess <= 0.0 {
                0.0
            } else if excess >= PI / 2.0 {
                z.norm()
            } else {
                z.norm() * excess.sin()
            }
        };
        let d = one(self.direction);
        if self.double {
            d.min(one(self.direction + PI))
        } else {
            d
        }
    }

    fn scaled(&self, s: f64) -> Sector {
        let direction = if s < 0.0 { (self.direction + PI) % (2.0 * PI) } else { self.direction };
        Sector { direction, ..*self }
    }
}

/// Region of the plane outside which `‖(AD − z)⁻¹‖ ≤ k/|z|` is predicted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventSector {
    pub alpha: f64,
    pub beta: f64,
    pub double: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPrediction {
    pub locus: Locus,
    pub sector: Option<Sector>,
    pub theorems: Vec<String>,
    pub resolvent_bound: Option<ResolventSector>,
}

impl Locus {
    fn scaled(&self, s: f64) -> Locus {
        match self {
            Locus::NonnegativeHalfLine if s < 0.0 => Locus::NonpositiveHalfLine,
            Locus::NonpositiveHalfLine if s < 0.0 => Locus::NonnegativeHalfLine,
            Locus::Lattice { steps } => Locus::Lattice { steps: steps.iter().map(|x| x * s).collect() },
            Locus::ParabolicBand { sign, y0 } => Locus::ParabolicBand {
                sign: sign * s.signum(),
                y0: y0.map(|y| y * s.abs().sqrt()),
            },
            Locus::RealWithFormula { step } => Locus::RealWithFormula { step: step * s },
            other => other.clone(),
        }
    }

    /// Distance from `z` to the set (a conservative overestimate for the
    /// parabolic band).
    pub fn distance(&self, z: Complex64) -> f64 {
        match self {
            Locus::WholePlane | Locus::InfiniteFinitelyManyReal => 0.0,
            Locus::RealLine => z.im.abs(),
            Locus::NonnegativeHalfLine => half_line_distance(z),
            Locus::NonpositiveHalfLine => half_line_distance(-z),
            Locus::Singleton0 => z.norm(),
            Locus::Lattice { steps } => steps
                .iter()
                .map(|&s| lattice_distance(z, s))
                .fold(f64::INFINITY, f64::min),
            Locus::RealWithFormula { step } => lattice_distance(z, *step),
            Locus::ParabolicBand { sign, y0 } => match y0 {
                None => 0.0,
                Some(y0) => {
                    let w = z * *sign;
                    let edge = w.im * w.im / (4.0 * y0 * y0) - y0 * y0;
                    (edge - w.re).max(0.0)
                }
            },
        }
    }

    /// Finite part of a lattice-type locus with `|λ| ≤ lambda_max`.
    pub fn materialize(&self, lambda_max: f64) -> Vec<f64> {
        let steps: Vec<f64> = match self {
            Locus::Lattice { steps } => steps.clone(),
            Locus::RealWithFormula { step } => vec![*step],
            Locus::Singleton0 => return vec![0.0],
            _ => return Vec::new(),
        };
        let mut out = vec![0.0];
        for s in steps {
            if s == 0.0 {
                continue;
            }
            let mut k = 1.0_f64;
            while (s * k * k).abs() <= lambda_max {
                out.push(s * k * k);
                k += 1.0;
            }
        }
        out.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap().then(x.partial_cmp(y).unwrap()));
        out.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + x.abs()));
        out
    }
}

fn half_line_distance(z: Complex64) -> f64 {
    if z.re >= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

fn lattice_distance(z: Complex64, s: f64) -> f64 {
    if s == 0.0 {
        return z.norm();
    }
    let t = z.re / s;
    let k = t.max(0.0).sqrt().floor();
    [0.0, k, k + 1.0]
        .iter()
        .map(|&k| (z - s * k * k).norm())
        .fold(f64::INFINITY, f64::min)
}

impl SpectralPrediction {
    fn new(locus: Locus, theorem: &str) -> Self {
        SpectralPrediction {
            locus,
            sector: None,
            theorems: vec![theorem.to_string()],
            resolvent_bound: None,
        }
    }

    /// Distance from `z` to the predicted set.
    pub fn distance(&self, z: Complex64) -> f64 {
        let s = self.sector.map_or(0.0, |s| s.distance(z));
        self.locus.distance(z).max(s)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.distance(z) <= tol * (1.0 + z.norm())
    }

    fn scaled(self, s: f64) -> Self {
        SpectralPrediction {
            locus: self.locus.scaled(s),
            sector: self.sector.map(|x| x.scaled(s)),
            theorems: self.theorems,
            resolvent_bound: self.resolvent_bound,
        }
    }

    /// The prediction for `(−a, −d)`, i.e. the reflection through 0.
    pub fn negated(self) -> Self {
        self.scaled(-1.0)
    }
}

/// Prediction for `A4(a, d)`.
pub fn predict_a4(a: f64, d: f64) -> SpectralPrediction {
    let region = classify_region(a, d);
    if region.tag == RegionTag::R6 {
        return SpectralPrediction::new(Locus::WholePlane, "singular-not-closed");
    }
    if a + d < 0.0 && region.tag != RegionTag::R4 {
        // the (a,d) ↦ (−a,−d) symmetry negates the spectrum
        let mut p = predict_a4(-a, -d).negated();
        p.theorems.push("a4-symmetry".to_string());
        return p;
    }
    let mut p = match region.tag {
        RegionTag::R2 => SpectralPrediction::new(Locus::RealLine, "a4-r2-similar-self-adjoint"),
        RegionTag::R3 => SpectralPrediction::new(
            Locus::ParabolicBand { sign: 1.0, y0: None },
            "a4-band",
        ),
        RegionTag::R4 => {
            return SpectralPrediction::new(Locus::ParabolicBand { sign: -1.0, y0: None }, "a4-band")
        }
        RegionTag::R5 if region.on_real_curve => {
            let (bp, _) = a4_eigs(a, d);
            let w = principal_sqrt(bp).inv();
            if a - d < 0.0 {
                SpectralPrediction::new(
                    Locus::RealWithFormula { step: -PI * PI / (w.im * w.im) },
                    "a4-r5-real-curve-negative",
                )
            } else {
                SpectralPrediction::new(
                    Locus::RealWithFormula { step: PI * PI / (w.re * w.re) },
                    "a4-r5-real-curve-positive",
                )
            }
        }
        RegionTag::R5 => SpectralPrediction::new(Locus::InfiniteFinitelyManyReal, "a4-r5-finitely-many-real"),
        RegionTag::R1 => {
            // only (±1/2, ∓3/2) have vanishing coefficient of the sine term
            if (a.abs() - 0.5).abs() <= BOUNDARY_TOL && (d + 3.0 * a).abs() <= BOUNDARY_TOL {
                SpectralPrediction::new(Locus::Singleton0, "a4-defective-singleton")
            } else {
                SpectralPrediction::new(Locus::InfiniteFinitelyManyReal, "a4-defective-finitely-many-real")
            }
        }
        RegionTag::Boundary => {
            let mut p = SpectralPrediction::new(
                Locus::InfiniteFinitelyManyReal,
                "a4-defective-finitely-many-real",
            );
            p.theorems.push("boundary-neighbours:R1,R3,R5".to_string());
            p
        }
        RegionTag::R6 => unreachable!(),
    };
    if a > 0.0 && d > 0.0 {
        p.sector = Some(Sector { direction: 0.0, omega: (1.0 / (a * d + 1.0).sqrt()).asin(), double: false });
        p.theorems.push("a4-numerical-range-sector".to_string());
    }
    p
}

/// Theorem-backed locus of the spectrum of `AD` for a real matrix.
pub fn predict(m: &CMatrix2) -> Result<SpectralPrediction> {
    real_entries(m)?;
    if m.is_singular() {
        return Ok(SpectralPrediction::new(Locus::WholePlane, "singular-not-closed"));
    }
    let cf = reduce_real(m)?;
    let (a, d) = (cf.a, cf.d);
    let p = match cf.family {
        Family::A0 => SpectralPrediction::new(
            Locus::Lattice { steps: vec![a * PI * PI, d * PI * PI] },
            "diagonal-lattice",
        ),
        Family::A2 | Family::A3 => SpectralPrediction::new(
            Locus::Lattice { steps: vec![a * PI * PI, d * PI * PI] },
            "triangular-lattice",
        ),
        Family::A1 => {
            if a * d > 1.0 && a > 0.0 {
                SpectralPrediction::new(Locus::NonnegativeHalfLine, "a1-similar-nonnegative")
            } else if a * d > 1.0 {
                SpectralPrediction::new(Locus::NonpositiveHalfLine, "a1-similar-nonpositive")
            } else {
                SpectralPrediction::new(Locus::RealLine, "a1-real-spectrum")
            }
        }
        Family::A4 => predict_a4(a, d),
    };
    let mut p = p.scaled(cf.sign * cf.alpha);
    p.resolvent_bound = resolvent_sector(m);
    Ok(p)
}

fn resolvent_sector(m: &CMatrix2) -> Option<ResolventSector> {
    let certs = similarity_certificates(m).ok()?;
    let sector = certs.iter().find_map(|c| match c {
        Certificate::SectorBound { alpha, beta, .. } => {
            Some(ResolventSector { alpha: *alpha, beta: *beta, double: false })
        }
        _ => None,
    });
    sector.or_else(|| {
        certs.iter().find_map(|c| match c {
            Certificate::NearReal { omega, .. } => {
                Some(ResolventSector { alpha: -omega, beta: *omega, double: true })
            }
            _ => None,
        })
    })
}

/// First two Rayleigh–Schrödinger coefficients of the eigenvalue branch
/// through 0 for `A + D`-type perturbations.
///
/// `μ₁ = (A⁻¹)₂₂ = a/det A`; when it vanishes,
/// `μ₂ = −(8/(bcπ⁴)) Σ (2m−1)⁻⁴`.
pub fn perturbation_coeffs(m: &CMatrix2) -> Result<(Complex64, Option<Complex64>)> {
    let inv = m.inverse()?;
    let mu1 = inv.d;
    if mu1.norm() > 1e-12 {
        return Ok((mu1, None));
    }
    // tail Σ_{m>M} (2m−1)⁻⁴ ≤ 1/(6(2M−1)³) < 1e-14
    let mut big_m = 1u64;
    while 1.0 / (6.0 * ((2 * big_m - 1) as f64).powi(3)) >= 1e-14 {
        big_m *= 2;
    }
    let sum: f64 = (1..=big_m).rev().map(|k| ((2 * k - 1) as f64).powi(-4)).sum();
    let mu2 = -(8.0 / PI.powi(4)) * sum / (m.b * m.c);
    Ok((mu1, Some(mu2)))
}

/// Sufficient-condition certificates for sector and similarity statements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// `B = diag(1, r)` with `B⁻¹AB` Hermitian positive definite.
    DiagonalSymmetrizable { r: f64, hermitian: CMatrix2 },
    /// `W(B⁻¹AB) ⊂ S(alpha, beta)` with `B = diag(1, r)`.
    SectorBound { alpha: f64, beta: f64, r: f64 },
    /// `‖A(r)B − I‖ = sin ω` with `A(r) = diag(1,r) A diag(1,1/r)` and
    /// `B = diag(b0, b1)` real.
    NearReal { r: f64, b: (f64, f64), omega: f64 },
}

/// Log grid of 200 points in `[1e-3, 1e3]`.
pub fn similarity_grid() -> Vec<f64> {
    (0..200).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 199.0)).collect()
}

fn similar(m: &CMatrix2, r: f64) -> CMatrix2 {
    // diag(1,r)⁻¹ A diag(1,r)
    CMatrix2 { a: m.a, b: m.b * r, c: m.c / r, d: m.d }
}

pub fn similarity_certificates(m: &CMatrix2) -> Result<Vec<Certificate>> {
    if m.is_singular() {
        return Err(Error::SingularMatrix);
    }
    let mut out = Vec::new();

    let tiny = 1e-14 * m.norm();
    let real_diag = m.a.im.abs() <= tiny && m.d.im.abs() <= tiny;
    if real_diag {
        let bc = m.b * m.c;
        if m.b.norm() <= tiny && m.c.norm() <= tiny {
            if m.a.re > 0.0 && m.d.re > 0.0 {
                out.push(Certificate::DiagonalSymmetrizable { r: 1.0, hermitian: *m });
            }
        } else if m.b.norm() > tiny && bc.im.abs() <= 1e-12 * bc.norm() && bc.re > 0.0 {
            let r = (m.c.norm() / m.b.norm()).sqrt();
            let h = similar(m, r);
            if m.a.re > 0.0 && m.a.re * m.d.re > bc.re {
                out.push(Certificate::DiagonalSymmetrizable { r, hermitian: h });
            }
        }
    }

    let mut best: Option<(f64, f64, f64)> = None;
    for r in similarity_grid() {
        if let Some((lo, hi)) = numerical_range(&similar(m, r)).enclosing_sector() {
            if hi - lo < PI && best.is_none_or(|(bl, bh, _)| hi - lo < bh - bl) {
                best = Some((lo, hi, r));
            }
        }
    }
    if let Some((alpha, beta, r)) = best {
        out.push(Certificate::SectorBound { alpha, beta, r });
    }

    let (ar, dr) = (m.a.re, m.d.re);
    if ar != 0.0 && dr != 0.0 {
        let bdiag = CMatrix2::real(1.0 / ar, 0.0, 0.0, 1.0 / dr);
        let mut rs = similarity_grid();
        if m.b.norm() > 0.0 && m.c.norm() > 0.0 {
            // balances |b|/(r|d|) against r|c|/|a|
            rs.push(((m.b.norm() * ar.abs()) / (m.c.norm() * dr.abs())).sqrt());
        }
        let mut best: Option<(f64, f64)> = None;
        for r in rs {
            // A(r) = diag(1,r) A diag(1,1/r)
            let ar_m = CMatrix2 { a: m.a, b: m.b / r, c: m.c * r, d: m.d };
            let dev = ar_m.mul(&bdiag).sub(&CMatrix2::identity()).singular_values().0;
            if dev < 1.0 && best.is_none_or(|(_, bd)| dev < bd) {
                best = Some((r, dev));
            }
        }
        if let Some((r, dev)) = best {
            out.push(Certificate::NearReal { r, b: (1.0 / ar, 1.0 / dr), omega: dev.asin() });
        }
    }
    Ok(out)
}
