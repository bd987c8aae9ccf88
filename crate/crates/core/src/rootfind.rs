//! Zeros of entire functions in rectangles by the argument principle, and
//! the spectrum of `AD` assembled from the zeros of `EV`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::mat2::{principal_sqrt, CMatrix2};
use crate::secular;
use crate::{Error, Result};

/// `value · e^{log_scale}` and `deriv · e^{log_scale}` are `f` and `f'`.
#[derive(Clone, Copy, Debug)]
pub struct Scaled {
    pub value: Complex64,
    pub deriv: Complex64,
    pub log_scale: f64,
}

/// An entire function with derivative, evaluated in scaled form so that
/// large imaginary arguments do not overflow.
pub trait Analytic: Sync {
    fn eval_scaled(&self, z: Complex64) -> Scaled;
}

impl<F: Fn(Complex64) -> (Complex64, Complex64) + Sync> Analytic for F {
    fn eval_scaled(&self, z: Complex64) -> Scaled {
        let (value, deriv) = self(z);
        Scaled { value, deriv, log_scale: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite())
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(Error::InvalidInput(format!(
                "bad rectangle [{re_min}, {re_max}]x[{im_min}, {im_max}]"
            )));
        }
        Ok(Rect { re_min, re_max, im_min, im_max })
    }

    /// Parse `re_min,re_max,im_min,im_max`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("not a number: {p}"))))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::InvalidInput("rectangle needs 4 numbers".into()));
        }
        Rect::new(v[0], v[1], v[2], v[3])
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new((self.re_min + self.re_max) / 2.0, (self.im_min + self.im_max) / 2.0)
    }

    pub fn diam(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// Scaled about the center by `factor`.
    pub fn dilate(&self, factor: f64) -> Rect {
        let c = self.center();
        let hw = (self.re_max - self.re_min) / 2.0 * factor;
        let hh = (self.im_max - self.im_min) / 2.0 * factor;
        Rect { re_min: c.re - hw, re_max: c.re + hw, im_min: c.im - hh, im_max: c.im + hh }
    }

    fn split(&self, x: f64, y: f64) -> [Rect; 4] {
        [
            Rect { re_max: x, im_max: y, ..*self },
            Rect { re_min: x, im_max: y, ..*self },
            Rect { re_min: x, im_min: y, ..*self },
            Rect { re_max: x, im_min: y, ..*self },
        ]
    }
}

/// Sample cap per contour integral.
const MAX_SAMPLES: usize = 1 << 20;

struct Sample {
    /// `f'/f`
    g: Complex64,
    /// `f/|f|`
    phase: Complex64,
}

fn sample<F: Analytic + ?Sized>(f: &F, z: Complex64, near: f64) -> Result<Sample> {
    let s = f.eval_scaled(z);
    let vn = s.value.norm();
    if vn == 0.0 || vn < near * s.deriv.norm() || !vn.is_finite() {
        return Err(Error::BoundaryZero);
    }
    Ok(Sample { g: s.deriv / s.value, phase: s.value / vn })
}

/// Largest phase jump allowed between neighbouring samples.
const MAX_PHASE_STEP: f64 = PI / 3.0;

fn max_phase_step(samples: &[Sample]) -> f64 {
    samples
        .windows(2)
        .map(|w| (w[1].phase * w[0].phase.conj()).arg().abs())
        .fold(0.0, f64::max)
}

/// `∫ g dz` and `∫ z g dz` along a segment by the trapezoid rule with
/// doubling.
fn edge_integral<F: Analytic + ?Sized>(
    f: &F,
    z0: Complex64,
    z1: Complex64,
    near: f64,
    budget: &mut usize,
    force_level: usize,
) -> Result<(Complex64, Complex64)> {
    let dz = z1 - z0;
    let at = |t: f64| z0 + dz * t;
    let mut n = 16usize;
    let mut pts: Vec<Sample> = (0..=n).map(|k| sample(f, at(k as f64 / n as f64), near)).collect::<Result<_>>()?;
    *budget += n + 1;
    let trap = |pts: &[Sample], n: usize| {
        let mut i = Complex64::new(0.0, 0.0);
        let mut m = Complex64::new(0.0, 0.0);
        for (k, p) in pts.iter().enumerate() {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            i += p.g * w;
            m += at(k as f64 / n as f64) * p.g * w;
        }
        (i * dz / n as f64, m * dz / n as f64)
    };
    let mut prev = trap(&pts, n);
    let mut level = 0;
    loop {
        let mut next = Vec::with_capacity(2 * n + 1);
        for k in 0..n {
            let mid = sample(f, at((2 * k + 1) as f64 / (2 * n) as f64), near)?;
            next.push(std::mem::replace(&mut pts[k], Sample { g: 0.0.into(), phase: 1.0.into() }));
            next.push(mid);
        }
        next.push(pts.pop().unwrap());
        *budget += n;
        n *= 2;
        pts = next;
        level += 1;
        let cur = trap(&pts, n);
        let diff = (cur.0 - prev.0).norm();
        let converged = diff <= 1e-5 + 1e-8 * cur.0.norm() && max_phase_step(&pts) < MAX_PHASE_STEP;
        if converged && level >= force_level.max(1) {
            return Ok(cur);
        }
        if *budget > MAX_SAMPLES {
            return Err(Error::NonConvergent("contour refinement cap reached".into()));
        }
        prev = cur;
    }
}

/// Zero count and first moment `Σ zeros` over a rectangle.
fn rect_integrals<F: Analytic + ?Sized>(f: &F, r: &Rect) -> Result<(usize, Complex64)> {
    let near = 1e-9 * r.diam();
    let c = r.corners();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    for force in 0..4 {
        let mut budget = 0usize;
        let mut total = Complex64::new(0.0, 0.0);
        let mut moment = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            let (i, m) = edge_integral(f, c[k], c[(k + 1) % 4], near, &mut budget, force * 2)?;
            total += i;
            moment += m;
        }
        let count = total / two_pi_i;
        let rounded = count.re.round();
        if (count.re - rounded).abs() < 1e-3 && count.im.abs() < 1e-3 && rounded >= 0.0 {
            return Ok((rounded as usize, moment / two_pi_i));
        }
    }
    Err(Error::NonConvergent("winding number is not close to an integer".into()))
}

/// Zero count and first moment over a circle (spectrally accurate).
fn circle_integrals<F: Analytic + ?Sized>(f: &F, c: Complex64, rho: f64) -> Result<(usize, Complex64)> {
    let near = 1e-9 * rho;
    let mut n = 32usize;
    let mut prev: Option<(Complex64, Complex64)> = None;
    loop {
        let mut samples = Vec::with_capacity(n + 1);
        let mut i = Complex64::new(0.0, 0.0);
        let mut m = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            let u = Complex64::from_polar(rho, 2.0 * PI * k as f64 / n as f64);
            let s = sample(f, c + u, near)?;
            if k < n {
                i += s.g * u;
                m += (c + u) * s.g * u;
            }
            samples.push(s);
        }
        let cur = (i / n as f64, m / n as f64);
        if let Some(p) = prev {
            let count = cur.0;
            let rounded = count.re.round();
            let integral = (count.re - rounded).abs() < 1e-3 && count.im.abs() < 1e-3 && rounded >= 0.0;
            let stable = (cur.0 - p.0).norm() < 1e-6
                && (cur.1 - p.1).norm() <= 1e-8 * (c.norm() + 1.0) * rounded.max(1.0);
            if integral && stable && max_phase_step(&samples) < MAX_PHASE_STEP {
                return Ok((rounded as usize, cur.1));
            }
        }
        if n >= 1 << 14 {
            return Err(Error::NonConvergent("circle integral did not converge".into()));
        }
        prev = Some(cur);
        n *= 2;
    }
}

/// Number of zeros (with multiplicity) of `f` inside `rect`.
///
/// The rectangle is dilated by `1 + 1e-3·u` (up to five times) when a zero
/// sits on the contour.
pub fn winding_count<F: Analytic + ?Sized>(f: &F, rect: Rect) -> Result<usize> {
    Ok(winding_count_seeded(f, rect, 0)?.0)
}

/// Like [`winding_count`] and also returns the rectangle actually used.
pub fn winding_count_seeded<F: Analytic + ?Sized>(f: &F, rect: Rect, seed: u64) -> Result<(usize, Rect)> {
    let (n, _, r) = top_level(f, rect, &mut ChaCha8Rng::seed_from_u64(seed))?;
    Ok((n, r))
}

fn top_level<F: Analytic + ?Sized>(f: &F, rect: Rect, rng: &mut ChaCha8Rng) -> Result<(usize, Complex64, Rect)> {
    let mut r = rect;
    let mut last = Error::BoundaryZero;
    for _ in 0..=5 {
        match rect_integrals(f, &r) {
            Ok((n, m)) => return Ok((n, m, r)),
            Err(e @ (Error::BoundaryZero | Error::NonConvergent(_))) => {
                last = e;
                r = r.dilate(1.0 + 1e-3 * rng.gen::<f64>());
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// A zero with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub z: Complex64,
    pub multiplicity: usize,
    /// Relative Newton step `|f/f'|/(1+|z|)` for simple zeros; for multiple
    /// zeros the spread of the centroid between the two probe circles.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct IsolateOptions {
    pub tol: f64,
    pub seed: u64,
}

impl Default for IsolateOptions {
    fn default() -> Self {
        IsolateOptions { tol: 1e-10, seed: 0 }
    }
}

fn newton<F: Analytic + ?Sized>(f: &F, z0: Complex64) -> Option<(Complex64, f64)> {
    let mut z = z0;
    for _ in 0..80 {
        let s = f.eval_scaled(z);
        if s.deriv.norm() == 0.0 {
            return if s.value.norm() == 0.0 { Some((z, 0.0)) } else { None };
        }
        let step = s.value / s.deriv;
        z -= step;
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let s = f.eval_scaled(z);
    let res = if s.deriv.norm() > 0.0 { (s.value / s.deriv).norm() / (1.0 + z.norm()) } else { f64::INFINITY };
    Some((z, res))
}

/// Multiple-zero probe: the same count on circles of radius `1e-4` and
/// `1e-5` (relative to `max(1, |c|)`) around the centroid.
fn probe_cluster<F: Analytic + ?Sized>(f: &F, c: Complex64, n: usize) -> Option<Zero> {
    let scale = c.norm().max(1.0);
    let (n1, m1) = circle_integrals(f, c, 1e-4 * scale).ok()?;
    if n1 != n {
        return None;
    }
    let c1 = m1 / n as f64;
    let (n2, m2) = circle_integrals(f, c1, 1e-5 * scale).ok()?;
    if n2 != n {
        return None;
    }
    let c2 = m2 / n as f64;
    Some(Zero { z: c1, multiplicity: n, residual: (c2 - c1).norm() / (1.0 + c1.norm()) })
}

/// All zeros of `f` in `rect`, with multiplicities summing to the winding
/// count.
pub fn isolate_zeros<F: Analytic + ?Sized>(f: &F, rect: Rect, tol: f64) -> Result<Vec<Zero>> {
    isolate_zeros_with(f, rect, IsolateOptions { tol, ..Default::default() }).map(|(z, _)| z)
}

/// [`isolate_zeros`] with explicit options; also returns the (possibly
/// dilated) rectangle that was searched.
pub fn isolate_zeros_with<F: Analytic + ?Sized>(f: &F, rect: Rect, opts: IsolateOptions) -> Result<(Vec<Zero>, Rect)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (n0, m0, rect) = top_level(f, rect, &mut rng)?;
    let mut out = Vec::new();
    let mut stack = vec![(rect, n0, m0)];
    while let Some((r, n, moment)) = stack.pop() {
        if n == 0 {
            continue;
        }
        let centroid = moment / n as f64;
        if n == 1 {
            if let Some((z, res)) = newton(f, centroid) {
                if r.dilate(1.0 + 1e-9).contains(z) && res <= opts.tol.max(1e-13) * 10.0 {
                    out.push(Zero { z, multiplicity: 1, residual: res });
                    continue;
                }
            }
        } else if let Some(zero) = probe_cluster(f, centroid, n) {
            out.push(zero);
            continue;
        }
        let scale = r.center().norm().max(1.0);
        if r.diam() < 1e-3 * scale {
            if let Ok((k, m)) = circle_integrals(f, r.center(), r.diam()) {
                if k == n {
                    let z = m / n as f64;
                    out.push(Zero { z, multiplicity: n, residual: r.diam() / (1.0 + z.norm()) });
                    continue;
                }
            }
        }
        if r.diam() < 1e-5 * scale {
            out.push(Zero { z: centroid, multiplicity: n, residual: r.diam() / (1.0 + centroid.norm()) });
            continue;
        }
        let children = split_conserving(f, &r, n, &mut rng)?;
        stack.extend(children.into_iter().rev());
    }
    let mut out = merge_close(out);
    out.sort_by(|a, b| canonical_order(a.z, b.z));
    Ok((out, rect))
}

/// Zeros closer than the outer probe radius are one cluster: evaluation
/// noise splits a multiple zero into a tight group of simple ones.
fn merge_close(mut zs: Vec<Zero>) -> Vec<Zero> {
    let mut out: Vec<Zero> = Vec::with_capacity(zs.len());
    zs.sort_by(|a, b| a.z.re.partial_cmp(&b.z.re).unwrap());
    for z in zs {
        let radius = |w: Complex64| 1e-4 * w.norm().max(1.0);
        match out.iter_mut().find(|o| (o.z - z.z).norm() <= radius(o.z)) {
            Some(o) => {
                let total = (o.multiplicity + z.multiplicity) as f64;
                let merged = (o.z * o.multiplicity as f64 + z.z * z.multiplicity as f64) / total;
                o.residual = o.residual.max(z.residual).max((o.z - z.z).norm() / (1.0 + merged.norm()));
                o.z = merged;
                o.multiplicity += z.multiplicity;
            }
            None => out.push(z),
        }
    }
    out
}

fn split_conserving<F: Analytic + ?Sized>(
    f: &F,
    r: &Rect,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(Rect, usize, Complex64)>> {
    let mut last = Error::NonConvergent("subdivision did not conserve the zero count".into());
    for _ in 0..6 {
        let tx = 0.5 + 0.1 * (rng.gen::<f64>() - 0.5);
        let ty = 0.5 + 0.1 * (rng.gen::<f64>() - 0.5);
        let x = r.re_min + tx * (r.re_max - r.re_min);
        let y = r.im_min + ty * (r.im_max - r.im_min);
        let kids = r.split(x, y);
        let mut res = Vec::with_capacity(4);
        let mut failed = false;
        for k in kids {
            match rect_integrals(f, &k) {
                Ok((c, m)) => res.push((k, c, m)),
                Err(e @ (Error::BoundaryZero | Error::NonConvergent(_))) => {
                    last = e;
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !failed && res.iter().map(|x| x.1).sum::<usize>() == n {
            return Ok(res);
        }
    }
    Err(last)
}

fn canonical_order(a: Complex64, b: Complex64) -> std::cmp::Ordering {
    a.norm()
        .partial_cmp(&b.norm())
        .unwrap()
        .then(a.arg().partial_cmp(&b.arg()).unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SecularRoots,
    Chebyshev,
    Oracle,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumFlag {
    /// The matrix is singular; the discretization does not stabilize.
    NotClosed,
    /// The eigenvalue gap of `A` is within 10× the defective threshold.
    NearDefective,
    /// Fewer eigenvalues than requested were found within the search limit.
    Incomplete,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: Complex64,
    /// Order of the zero of `EV` at `±√value` (1 for the eigenvalue 0).
    pub multiplicity: usize,
    pub residual: f64,
    pub error_estimate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Eigenvalue>,
    pub method: Method,
    pub search_region: Option<Rect>,
    pub matrix: CMatrix2,
    pub analytic_order_at_zero: Option<usize>,
    /// Every eigenvalue with `|value| ≤ complete_radius` is listed.
    pub complete_radius: Option<f64>,
    pub flags: Vec<SpectrumFlag>,
}

impl Spectrum {
    pub fn values(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }

    /// Values repeated by multiplicity (0 counted once).
    pub fn values_with_multiplicity(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    pub fn sort(&mut self) {
        self.eigenvalues.sort_by(|a, b| canonical_order(a.value, b.value));
    }
}

/// Representative of `±z` with `Re > 0`, or `Re = 0` and `Im ≥ 0`.
pub fn representative(z: Complex64) -> Complex64 {
    let on_axis = z.re.abs() <= 1e-10 * (1.0 + z.norm());
    if (on_axis && z.im < 0.0) || (!on_axis && z.re < 0.0) {
        -z
    } else {
        z
    }
}

/// Eigenvalues `λ²` from the zeros of `EV` in `lambda_rect`.
pub fn spectrum(m: &CMatrix2, lambda_rect: Rect, tol: f64) -> Result<Spectrum> {
    spectrum_seeded(m, lambda_rect, tol, 0)
}

pub fn spectrum_seeded(m: &CMatrix2, lambda_rect: Rect, tol: f64, seed: u64) -> Result<Spectrum> {
    let s = secular::build(m)?;
    let (zeros, used) = isolate_zeros_with(&s, lambda_rect, IsolateOptions { tol, seed })?;
    let mut spec = zeros_to_spectrum(m, &zeros);
    spec.search_region = Some(used);
    if s.near_defective {
        spec.flags.push(SpectrumFlag::NearDefective);
    }
    Ok(spec)
}

fn zeros_to_spectrum(m: &CMatrix2, zeros: &[Zero]) -> Spectrum {
    let zero_tol = 1e-7;
    let mut order_at_zero = None;
    let mut reps: Vec<Zero> = Vec::new();
    for z in zeros {
        if z.z.norm() <= zero_tol {
            order_at_zero = Some(order_at_zero.unwrap_or(0).max(z.multiplicity));
            continue;
        }
        let r = representative(z.z);
        match reps.iter_mut().find(|o| (o.z - r).norm() <= 1e-7 * (1.0 + r.norm())) {
            Some(o) => o.multiplicity = o.multiplicity.max(z.multiplicity),
            None => reps.push(Zero { z: r, ..*z }),
        }
    }
    let mut eigenvalues: Vec<Eigenvalue> = reps
        .iter()
        .map(|z| Eigenvalue { value: z.z * z.z, multiplicity: z.multiplicity, residual: z.residual, error_estimate: None })
        .collect();
    if order_at_zero.is_some() {
        eigenvalues.push(Eigenvalue { value: 0.0.into(), multiplicity: 1, residual: 0.0, error_estimate: None });
    }
    let mut spec = Spectrum {
        eigenvalues,
        method: Method::SecularRoots,
        search_region: None,
        matrix: *m,
        analytic_order_at_zero: order_at_zero,
        complete_radius: None,
        flags: Vec::new(),
    };
    spec.sort();
    spec
}

/// The `count` eigenvalues of smallest modulus, growing the search region
/// until enough are found.
pub fn spectrum_count(m: &CMatrix2, count: usize, tol: f64, seed: u64) -> Result<Spectrum> {
    if m.is_singular() {
        return Err(Error::SingularMatrix);
    }
    let e = crate::mat2::eig2(m);
    let spacing = PI * principal_sqrt(e.a_plus).norm().max(principal_sqrt(e.a_minus).norm());
    let mut rho = spacing * ((count as f64) / 2.0 + 1.0);
    let mut last: Option<Spectrum> = None;
    for _ in 0..8 {
        let margin = 1.02 * rho;
        let rect = Rect::new(-0.05 * rho - 0.1, margin, -margin, margin)?;
        let mut spec = match (spectrum_seeded(m, rect, tol, seed), &last) {
            (Ok(s), _) => s,
            // A larger region failed; keep what is complete so far.
            (Err(_), Some(_)) => break,
            (Err(e), None) => return Err(e),
        };
        spec.eigenvalues.retain(|ev| ev.value.norm().sqrt() <= rho);
        spec.complete_radius = Some(rho * rho);
        if spec.eigenvalues.len() >= count {
            spec.eigenvalues.truncate(count);
            spec.complete_radius = spec.eigenvalues.last().map(|e| e.value.norm());
            return Ok(spec);
        }
        last = Some(spec);
        rho *= 1.6;
    }
    let mut spec = last.expect("at least one pass");
    spec.flags.push(SpectrumFlag::Incomplete);
    Ok(spec)
}

/// All eigenvalues with `|λ²| ≤ radius`.
pub fn spectrum_radius(m: &CMatrix2, radius: f64, tol: f64, seed: u64) -> Result<Spectrum> {
    let rho = radius.sqrt();
    let margin = 1.02 * rho;
    let rect = Rect::new(-0.05 * rho - 0.1, margin, -margin, margin)?;
    let mut spec = spectrum_seeded(m, rect, tol, seed)?;
    spec.eigenvalues.retain(|ev| ev.value.norm() <= radius);
    spec.complete_radius = Some(radius);
    Ok(spec)
}

pub const MAX_POLY_DEGREE: usize = 64;

fn horner(c: &[Complex64], w: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let wn = w.norm();
    for &ck in c.iter().rev() {
        dp = dp * w + p;
        p = p * w + ck;
        scale = scale * wn + ck.norm();
    }
    (p, dp, scale)
}

/// Roots of `Σ coeffs[k] wᵏ` (ascending order) by Aberth–Ehrlich iteration,
/// falling back to companion-matrix eigenvalues.
pub fn polyroots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg > MAX_POLY_DEGREE {
        return Err(Error::DegreeTooHigh { degree: deg, max: MAX_POLY_DEGREE });
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    let ok = |roots: &[Complex64]| {
        roots.iter().all(|&w| {
            let (p, _, s) = horner(coeffs, w);
            p.norm() <= 1e-10 * s.max(f64::MIN_POSITIVE)
        })
    };
    let roots = aberth(coeffs);
    if ok(&roots) {
        return Ok(roots);
    }
    let roots = companion_roots(coeffs);
    if ok(&roots) {
        return Ok(roots);
    }
    Err(Error::NonConvergent("polynomial roots failed the residual check".into()))
}

fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let r0 = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let r0 = if r0.is_finite() && r0 > 0.0 { r0 } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp, _) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved <= 1e-15 {
            break;
        }
    }
    z
}

fn companion_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let (_, t) = m.schur().unpack();
    t.diagonal().iter().copied().collect()
}
