//! Exact spectra of `A4(a, d)` on the curves `Λ±(p/q)`, where
//! `√(b₊/b₋) = p/q` is rational.
//!
//! Put `z = λ/(q√b₊)`. Then `λ/√b₊ = qz` and `λ/√b₋ = pz`, and
//!
//! ```text
//! EV = k1 (1 − cos qz cos pz) − k2 sin qz sin pz
//!    = k1 + (k2−k1)/2 cos((p+q)z) − (k1+k2)/2 cos((p−q)z)
//!    = G(cos z),   G = k1 + (k2−k1)/2 T_{p+q} − (k1+k2)/2 T_{p−q}.
//! ```
//!
//! With eigenvectors `(γ±, 2)`, `γ± = a − d ± √((a−d)² − 4)`, one has
//! `γ₊γ₋ = 4`, so `k1 = 8γ₊γ₋ = 32` and `k2 = 4(γ₊² p/q + γ₋² q/p)`.
//! The secular function in the normalized gauge is `scale · G(cos z)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::canonical::{a4, a4_eigs, classify_region, RegionTag};
use crate::mat2::CMatrix2;
use crate::rootfind::{polyroots, Eigenvalue, Method, Spectrum, MAX_POLY_DEGREE};
use crate::secular;
use crate::{Error, Result};

/// Degree cap for `G` unless explicitly overridden.
pub const DEFAULT_MAX_DEGREE: usize = 20;

/// A reduced fraction `p/q > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub p: u32,
    pub q: u32,
}

impl Ratio {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if q == 0 || p <= q {
            return Err(Error::OutOfDomain(format!("need p > q >= 1, got {p}/{q}")));
        }
        let g = p.gcd(&q);
        Ok(Ratio { p: p / g, q: q / g })
    }

    /// Parse `p/q` or an integer `p`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("not a fraction: {s}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Ratio::new(p, q)
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A point of `Λ±(p/q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebPoint {
    pub a: f64,
    pub d: f64,
    pub p: u32,
    pub q: u32,
    /// `+1` for `Λ₊`, `−1` for `Λ₋`.
    pub sign: i8,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl ChebPoint {
    pub fn matrix(&self) -> CMatrix2 {
        a4(self.a, self.d)
    }

    pub fn ratio(&self) -> Ratio {
        Ratio { p: self.p, q: self.q }
    }
}

/// `d±(a)` on the level curve `√(b₊/b₋) = α`.
pub fn curve_d(alpha: f64, sign: i8, a: f64) -> f64 {
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let root = ((a4 - 1.0).powi(2) * a * a + 4.0 * a2 * (a2 + 1.0).powi(2)).sqrt();
    let s = sign as f64;
    if a * s >= 0.0 {
        return (a * (a4 + 1.0) + s * root) / (2.0 * a2);
    }
    // the two branches multiply to a² − (α²+1)²/α²; divide by the one that
    // does not cancel
    let other = (a * (a4 + 1.0) - s * root) / (2.0 * a2);
    (a * a - (a2 + 1.0).powi(2) / a2) / other
}

/// The point of `Λ±(alpha)` above `a`.
pub fn lambda_curve(alpha: Ratio, sign: i8, a: f64) -> Result<ChebPoint> {
    let alpha = Ratio::new(alpha.p, alpha.q)?;
    let ok = match sign {
        1 => a > -1.0,
        -1 => a > 1.0,
        _ => return Err(Error::InvalidInput("sign must be +1 or -1".into())),
    };
    if !ok || !a.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "a = {a} is outside the domain of the {} curve",
            if sign > 0 { "+" } else { "-" }
        )));
    }
    let d = curve_d(alpha.value(), sign, a);
    let (bp, bm) = a4_eigs(a, d);
    // b₋ from the product b₊b₋ = ad + 1; the difference formula cancels near R6
    let b_plus = bp.re;
    let b_minus = (a * d + 1.0) / b_plus;
    let ratio = (b_plus / b_minus).sqrt();
    if bp.im != 0.0 || bm.im != 0.0 || b_minus <= 0.0 || (ratio - alpha.value()).abs() > 1e-10 * alpha.value() {
        return Err(Error::OutOfDomain(format!("({a}, {d}) is not on the curve")));
    }
    if classify_region(a, d).tag != RegionTag::R3 {
        return Err(Error::OutOfDomain(format!("({a}, {d}) is outside R3")));
    }
    Ok(ChebPoint { a, d, p: alpha.p, q: alpha.q, sign, b_plus, b_minus })
}

/// Coefficients of `T_m` in ascending order.
pub fn chebyshev_t(m: usize) -> Result<Vec<f64>> {
    if m > MAX_POLY_DEGREE {
        return Err(Error::DegreeTooHigh { degree: m, max: MAX_POLY_DEGREE });
    }
    let mut prev = vec![1.0];
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = vec![0.0, 1.0];
    for _ in 1..m {
        let mut next = vec![0.0; cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += 2.0 * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Evaluate a real polynomial (ascending coefficients) at a complex point.
pub fn poly_eval(coeffs: &[f64], w: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GPoly {
    /// Ascending monomial coefficients, degree `p + q`.
    pub coeffs: Vec<f64>,
    pub k1: f64,
    pub k2: f64,
    /// `EV(x) = scale · G(cos(x/(q√b₊)))` for the normalized secular function.
    pub scale: Complex64,
    pub point: ChebPoint,
}

impl GPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        poly_eval(&self.coeffs, w)
    }

    /// `z = x/(q√b₊)`.
    pub fn z_of(&self, x: Complex64) -> Complex64 {
        x / (self.point.q as f64 * self.point.b_plus.sqrt())
    }
}

pub fn build_g(pt: &ChebPoint) -> Result<GPoly> {
    let (p, q) = (pt.p as usize, pt.q as usize);
    let s = ((pt.a - pt.d).powi(2) - 4.0).sqrt();
    let g_plus = pt.a - pt.d + s;
    let g_minus = pt.a - pt.d - s;
    let ratio = p as f64 / q as f64;
    let k1 = 32.0;
    let k2 = 4.0 * (g_plus * g_plus * ratio + g_minus * g_minus / ratio);
    let t_hi = chebyshev_t(p + q)?;
    let t_lo = chebyshev_t(p - q)?;
    let mut coeffs = vec![0.0; p + q + 1];
    coeffs[0] = k1;
    for (k, c) in t_hi.iter().enumerate() {
        coeffs[k] += (k2 - k1) / 2.0 * c;
    }
    for (k, c) in t_lo.iter().enumerate() {
        coeffs[k] -= (k1 + k2) / 2.0 * c;
    }
    // G(1) = 0 exactly; T_m(1) = 1 makes this a rounding-level correction.
    coeffs[0] = -coeffs[1..].iter().sum::<f64>();

    let f = secular::build(&pt.matrix())?;
    let reference = CMatrix2::real(g_plus, g_minus, 2.0, 2.0);
    let scale = f.gauge_constant(&reference)?.inv();
    Ok(GPoly { coeffs, k1, k2, scale, point: *pt })
}

#[derive(Clone, Copy, Debug)]
pub struct ChebOptions {
    pub n_max: usize,
    /// Maximum degree `p + q`; the default guards against the ill-conditioning
    /// of high-degree monomial polynomials.
    pub max_degree: usize,
}

impl Default for ChebOptions {
    fn default() -> Self {
        ChebOptions { n_max: 3, max_degree: DEFAULT_MAX_DEGREE }
    }
}

/// A root of `G` with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GRoot {
    pub w: Complex64,
    pub multiplicity: usize,
}

impl ChebOptions {
    /// Options whose window `|n| ≤ n_max` covers every eigenvalue with
    /// `|λ²| ≤ lambda2_max`.
    pub fn covering(pt: &ChebPoint, lambda2_max: f64) -> Self {
        let unit = pt.q as f64 * pt.b_plus.sqrt();
        // |Re λ| ≤ (2n_max + 1)π·unit bounds the window; |λ| ≥ |Re λ|
        let n = ((lambda2_max.sqrt() / (PI * unit) - 1.0) / 2.0).ceil().max(0.0) as usize + 1;
        ChebOptions { n_max: n, ..Default::default() }
    }
}

/// Roots of `G`, clustered (within `1e-5`) and snapped to `±1`.
pub fn g_roots(g: &GPoly) -> Result<Vec<GRoot>> {
    let c: Vec<Complex64> = g.coeffs.iter().map(|&x| x.into()).collect();
    let raw = polyroots(&c)?;
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for w in raw {
        match out.iter_mut().find(|(o, m)| (*o / *m as f64 - w).norm() <= 1e-5 * (1.0 + w.norm())) {
            Some((o, m)) => {
                *o += w;
                *m += 1;
            }
            None => out.push((w, 1)),
        }
    }
    let derivative = |c: &[f64]| -> Vec<f64> { c.iter().enumerate().skip(1).map(|(k, x)| k as f64 * x).collect() };
    Ok(out
        .into_iter()
        .map(|(sum, m)| {
            let mut w = sum / m as f64;
            // A root of multiplicity m is a simple root of G^(m-1).
            let mut h = g.coeffs.clone();
            for _ in 1..m {
                h = derivative(&h);
            }
            let dh = derivative(&h);
            for _ in 0..4 {
                let d = poly_eval(&dh, w);
                if d.norm() > 0.0 {
                    let step = poly_eval(&h, w) / d;
                    if step.norm() < 1e-5 * (1.0 + w.norm()) {
                        w -= step;
                    }
                }
            }
            for target in [1.0, -1.0] {
                if (w - target).norm() < 1e-9 {
                    w = target.into();
                }
            }
            if w.im.abs() < 1e-14 * (1.0 + w.norm()) {
                w.im = 0.0;
            }
            GRoot { w, multiplicity: m }
        })
        .collect())
}

/// Eigenvalues `[(±arccos w₀ + 2nπ) q√b₊]²` for the roots `w₀` of `G`.
pub fn cheb_spectrum(pt: &ChebPoint, opts: ChebOptions) -> Result<Spectrum> {
    let degree = (pt.p + pt.q) as usize;
    if degree > opts.max_degree {
        return Err(Error::DegreeTooHigh { degree, max: opts.max_degree });
    }
    if opts.n_max > 10_000 {
        return Err(Error::InvalidInput("n_max is limited to 10^4".into()));
    }
    let g = build_g(pt)?;
    let roots = g_roots(&g)?;
    let unit = pt.q as f64 * pt.b_plus.sqrt();
    let mut eigs: Vec<Eigenvalue> = Vec::new();
    let mut order_at_zero = None;
    for r in &roots {
        let theta = r.w.acos();
        let at_pm1 = r.w.im == 0.0 && r.w.re.abs() == 1.0;
        let mult = if at_pm1 { 2 * r.multiplicity } else { r.multiplicity };
        let n = opts.n_max as i64;
        for k in -n..=n {
            for sgn in [1.0, -1.0] {
                let lam = (theta * sgn + 2.0 * PI * k as f64) * unit;
                let value = lam * lam;
                if value.norm() == 0.0 {
                    order_at_zero = Some(mult);
                    continue;
                }
                match eigs.iter_mut().find(|e| (e.value - value).norm() <= 1e-10 * (1.0 + value.norm())) {
                    Some(e) => e.multiplicity = e.multiplicity.max(mult),
                    None => eigs.push(Eigenvalue { value, multiplicity: mult, residual: 0.0, error_estimate: None }),
                }
            }
        }
    }
    eigs.push(Eigenvalue { value: 0.0.into(), multiplicity: 1, residual: 0.0, error_estimate: None });
    let mut spec = Spectrum {
        eigenvalues: eigs,
        method: Method::Chebyshev,
        search_region: None,
        matrix: pt.matrix(),
        analytic_order_at_zero: order_at_zero,
        complete_radius: Some(((2 * opts.n_max + 1) as f64 * PI * unit).powi(2)),
        flags: Vec::new(),
    };
    spec.sort();
    Ok(spec)
}

/// One row of a sweep along a `Λ` curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebSweepRow {
    pub a: f64,
    pub d: f64,
    pub root_index: usize,
    pub lambda2: Complex64,
}

/// Eigenvalues along `Λ±(alpha)` for `a` from `a0` to `a1`.
pub fn cheb_sweep(alpha: Ratio, sign: i8, a0: f64, a1: f64, steps: usize, opts: ChebOptions) -> Result<Vec<ChebSweepRow>> {
    if steps < 2 {
        return Err(Error::InvalidInput("a sweep needs at least 2 steps".into()));
    }
    let mut rows = Vec::new();
    for i in 0..steps {
        let a = a0 + (a1 - a0) * i as f64 / (steps - 1) as f64;
        let pt = lambda_curve(alpha, sign, a)?;
        let spec = cheb_spectrum(&pt, opts)?;
        rows.extend(spec.eigenvalues.iter().enumerate().map(|(k, e)| ChebSweepRow {
            a,
            d: pt.d,
            root_index: k,
            lambda2: e.value,
        }));
    }
    Ok(rows)
}
