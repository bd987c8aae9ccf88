//! Parameter sweeps of `A4(a, d)`, eigenvalue tracks across steps, and
//! CSV/JSON/SVG output.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{a4, classify_region, RegionTag};
use crate::chebpath::{cheb_spectrum, curve_d, lambda_curve, ChebOptions, Ratio};
use crate::oracle::{discretize, oracle_spectrum};
use crate::rootfind::{spectrum_count, Spectrum};
use crate::secular;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SweepPath {
    /// Straight segment from `(a0, d0)` to `(a1, d1)`.
    Segment { a0: f64, d0: f64, a1: f64, d1: f64, steps: usize },
    /// `Λ±(alpha)` for `a` from `a0` to `a1`.
    Lambda { alpha: Ratio, sign: i8, a0: f64, a1: f64, steps: usize },
    /// Fixed `a`, one step per curve `Λ±(alpha)`.
    FixedA { a: f64, sign: i8, alphas: Vec<Ratio> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMethod {
    Secular,
    Chebyshev,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub path: SweepPath,
    pub method: SweepMethod,
    /// Eigenvalues per step.
    pub count: usize,
    pub tol: f64,
    pub seed: u64,
    /// Recompute Chebyshev steps with the secular method and compare.
    pub verify: bool,
    /// Resolution for the oracle method.
    pub oracle_n: usize,
}

impl SweepSpec {
    pub fn new(path: SweepPath, method: SweepMethod, count: usize) -> Self {
        SweepSpec { path, method, count, tol: 1e-10, seed: 0, verify: false, oracle_n: 200 }
    }
}

/// A step location; `alpha` is set on `Λ` paths.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Step {
    a: f64,
    d: f64,
    alpha: Option<(Ratio, i8)>,
}

fn steps_of(path: &SweepPath) -> Result<Vec<Step>> {
    let lin = |x0: f64, x1: f64, i: usize, n: usize| x0 + (x1 - x0) * i as f64 / (n - 1) as f64;
    let steps: Vec<Step> = match path {
        SweepPath::Segment { a0, d0, a1, d1, steps } => {
            if *steps < 2 {
                return Err(Error::InvalidInput("a sweep needs at least 2 steps".into()));
            }
            (0..*steps).map(|i| Step { a: lin(*a0, *a1, i, *steps), d: lin(*d0, *d1, i, *steps), alpha: None }).collect()
        }
        SweepPath::Lambda { alpha, sign, a0, a1, steps } => {
            if *steps < 2 {
                return Err(Error::InvalidInput("a sweep needs at least 2 steps".into()));
            }
            (0..*steps)
                .map(|i| {
                    let a = lin(*a0, *a1, i, *steps);
                    Step { a, d: curve_d(alpha.value(), *sign, a), alpha: Some((*alpha, *sign)) }
                })
                .collect()
        }
        SweepPath::FixedA { a, sign, alphas } => {
            if alphas.len() < 2 {
                return Err(Error::InvalidInput("a sweep needs at least 2 steps".into()));
            }
            alphas.iter().map(|al| Step { a: *a, d: curve_d(al.value(), *sign, *a), alpha: Some((*al, *sign)) }).collect()
        }
    };
    Ok(steps)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackedEigenvalue {
    pub track: usize,
    pub value: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub step: usize,
    pub a: f64,
    pub d: f64,
    pub region: RegionTag,
    /// Set inside R6, where the spectrum is the whole plane and no list is
    /// computed.
    pub whole_plane: bool,
    pub eigenvalues: Vec<TrackedEigenvalue>,
    /// Largest relative deviation from the secular recomputation.
    pub verify_deviation: Option<f64>,
    pub elapsed_ms: f64,
}

fn step_spectrum(spec: &SweepSpec, s: &Step) -> Result<(Spectrum, Option<f64>)> {
    let m = a4(s.a, s.d);
    let spectrum = match spec.method {
        SweepMethod::Secular => spectrum_count(&m, spec.count, spec.tol, spec.seed)?,
        SweepMethod::Oracle => oracle_spectrum(&discretize(&m, spec.oracle_n)?, spec.count)?,
        SweepMethod::Chebyshev => {
            let (alpha, sign) = s
                .alpha
                .ok_or_else(|| Error::InvalidInput("the chebyshev method needs a curve path".into()))?;
            let pt = lambda_curve(alpha, sign, s.a)?;
            let mut sp = cheb_spectrum(&pt, ChebOptions { n_max: spec.count.max(1), ..Default::default() })?;
            sp.eigenvalues.truncate(spec.count);
            sp
        }
    };
    let deviation = if spec.verify && spec.method == SweepMethod::Chebyshev {
        let check = spectrum_count(&m, spec.count, spec.tol, spec.seed)?;
        let limit = spectrum.eigenvalues.last().map(|e| e.value.norm()).unwrap_or(0.0);
        let dev = check
            .eigenvalues
            .iter()
            .filter(|e| e.value.norm() < limit * (1.0 - 1e-9))
            .map(|e| {
                spectrum.eigenvalues.iter().map(|c| (c.value - e.value).norm()).fold(f64::INFINITY, f64::min)
                    / (1.0 + e.value.norm())
            })
            .fold(0.0, f64::max);
        if dev > 1e-6 {
            return Err(Error::NonConvergent(format!(
                "chebyshev and secular spectra differ by {dev:e} at (a, d) = ({}, {})",
                s.a, s.d
            )));
        }
        Some(dev)
    } else {
        None
    };
    Ok((spectrum, deviation))
}

/// Greedy nearest-neighbour matching; pairs farther than five times the
/// median nearest distance stay unmatched. Returns, for each current value,
/// the index of its partner in `prev`.
pub fn match_tracks(prev: &[Complex64], cur: &[Complex64]) -> Vec<Option<usize>> {
    let mut out = vec![None; cur.len()];
    if prev.is_empty() || cur.is_empty() {
        return out;
    }
    let mut nearest: Vec<f64> =
        cur.iter().map(|c| prev.iter().map(|p| (p - c).norm()).fold(f64::INFINITY, f64::min)).collect();
    nearest.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = nearest[nearest.len() / 2];
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(prev.len() * cur.len());
    for (i, c) in cur.iter().enumerate() {
        for (j, p) in prev.iter().enumerate() {
            pairs.push(((p - c).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used = vec![false; prev.len()];
    for (dist, i, j) in pairs {
        let cap = (5.0 * median).max(1e-9 * (1.0 + cur[i].norm()));
        if dist > cap {
            continue;
        }
        if out[i].is_none() && !used[j] {
            out[i] = Some(j);
            used[j] = true;
        }
    }
    out
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    if spec.count == 0 {
        return Err(Error::InvalidInput("count must be positive".into()));
    }
    if spec.method == SweepMethod::Chebyshev && matches!(spec.path, SweepPath::Segment { .. }) {
        return Err(Error::InvalidInput("the chebyshev method needs a curve path".into()));
    }
    let steps = steps_of(&spec.path)?;
    let computed: Vec<Result<SweepRecord>> = steps
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let start = Instant::now();
            let region = classify_region(s.a, s.d).tag;
            let mut rec = SweepRecord {
                step: k,
                a: s.a,
                d: s.d,
                region,
                whole_plane: region == RegionTag::R6,
                eigenvalues: Vec::new(),
                verify_deviation: None,
                elapsed_ms: 0.0,
            };
            if !rec.whole_plane {
                let (sp, dev) = step_spectrum(spec, s)?;
                rec.verify_deviation = dev;
                rec.eigenvalues = sp
                    .eigenvalues
                    .iter()
                    .map(|e| TrackedEigenvalue { track: 0, value: e.value, multiplicity: e.multiplicity, residual: e.residual })
                    .collect();
            }
            rec.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(rec)
        })
        .collect();
    let mut records = computed.into_iter().collect::<Result<Vec<_>>>()?;
    let mut next_id = 0;
    let mut prev: Vec<TrackedEigenvalue> = Vec::new();
    for rec in &mut records {
        let pv: Vec<Complex64> = prev.iter().map(|e| e.value).collect();
        let cv: Vec<Complex64> = rec.eigenvalues.iter().map(|e| e.value).collect();
        let matches = match_tracks(&pv, &cv);
        for (e, m) in rec.eigenvalues.iter_mut().zip(matches) {
            e.track = match m {
                Some(j) => prev[j].track,
                None => {
                    next_id += 1;
                    next_id - 1
                }
            };
        }
        prev = rec.eigenvalues.clone();
    }
    Ok(records)
}

/// Shortest round-trip form, switching to exponent notation for tiny and
/// huge magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

pub const CSV_HEADER: [&str; 9] = ["step", "a", "d", "region", "track", "re_lambda2", "im_lambda2", "multiplicity", "residual"];

/// One row per eigenvalue; whole-plane steps get a single row with empty
/// eigenvalue columns.
pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let head = [r.step.to_string(), num(r.a), num(r.d), r.region.to_string()];
        if r.whole_plane {
            w.write_record(head.iter().map(String::as_str).chain(["", "", "", "", ""]))?;
            continue;
        }
        for e in &r.eigenvalues {
            let tail = [
                e.track.to_string(),
                num(e.value.re),
                num(e.value.im),
                e.multiplicity.to_string(),
                num(e.residual),
            ];
            w.write_record(head.iter().chain(tail.iter()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, records)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SvgLayout {
    /// All steps in one plot, coloured by step.
    Superimposed,
    /// One small plot per step.
    Panels,
}

fn ramp(t: f64) -> String {
    let r = (40.0 + 200.0 * t) as u8;
    let b = (220.0 - 200.0 * t) as u8;
    format!("rgb({r},60,{b})")
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    re: (f64, f64),
    im: (f64, f64),
}

impl Frame {
    fn map(&self, z: Complex64) -> (f64, f64) {
        let x = self.x0 + (z.re - self.re.0) / (self.re.1 - self.re.0) * self.w;
        let y = self.y0 + self.h - (z.im - self.im.0) / (self.im.1 - self.im.0) * self.h;
        (x, y)
    }

    fn axes(&self, s: &mut String) {
        let _ = writeln!(s, r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="gray"/>"#, self.x0, self.y0, self.w, self.h);
        if self.im.0 < 0.0 && self.im.1 > 0.0 {
            let (_, y) = self.map(Complex64::new(self.re.0, 0.0));
            let _ = writeln!(s, r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="lightgray"/>"#, self.x0, self.x0 + self.w);
        }
        if self.re.0 < 0.0 && self.re.1 > 0.0 {
            let (x, _) = self.map(Complex64::new(0.0, self.im.0));
            let _ = writeln!(s, r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="lightgray"/>"#, self.y0, self.y0 + self.h);
        }
    }
}

fn bounds<'a>(values: impl Iterator<Item = &'a Complex64>) -> ((f64, f64), (f64, f64)) {
    let (mut r0, mut r1, mut i0, mut i1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for z in values {
        r0 = r0.min(z.re);
        r1 = r1.max(z.re);
        i0 = i0.min(z.im);
        i1 = i1.max(z.im);
    }
    let pad = |lo: f64, hi: f64| {
        let w = (hi - lo).max(1.0);
        (lo - 0.05 * w, hi + 0.05 * w)
    };
    (pad(r0, r1), pad(i0, i1))
}

/// Scatter of the `λ²`-plane.
pub fn svg(records: &[SweepRecord], layout: SvgLayout) -> String {
    let mut s = String::new();
    let n = records.len().max(1);
    let (re, im) = bounds(records.iter().flat_map(|r| r.eigenvalues.iter().map(|e| &e.value)));
    let (cols, panel) = match layout {
        SvgLayout::Superimposed => (1, 600.0),
        SvgLayout::Panels => (((n as f64).sqrt().ceil() as usize).max(1), 260.0),
    };
    let rows = match layout {
        SvgLayout::Superimposed => 1,
        SvgLayout::Panels => n.div_ceil(cols),
    };
    let (width, height) = (cols as f64 * (panel + 20.0) + 20.0, rows as f64 * (panel + 40.0) + 20.0);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, r) in records.iter().enumerate() {
        let (cx, cy) = match layout {
            SvgLayout::Superimposed => (0, 0),
            SvgLayout::Panels => (k % cols, k / cols),
        };
        let frame = Frame {
            x0: 20.0 + cx as f64 * (panel + 20.0),
            y0: 30.0 + cy as f64 * (panel + 40.0),
            w: panel,
            h: panel,
            re,
            im,
        };
        if layout == SvgLayout::Panels || k == 0 {
            frame.axes(&mut s);
        }
        if layout == SvgLayout::Panels {
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">a={:.4} d={:.4} {}</text>"#, frame.x0, frame.y0 - 6.0, r.a, r.d, r.region);
        }
        let color = ramp(k as f64 / (n.max(2) - 1) as f64);
        for e in &r.eigenvalues {
            let (x, y) = frame.map(e.value);
            let radius = 2.0 + e.multiplicity.min(4) as f64;
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius:.1}" fill="{color}" fill-opacity="0.7"/>"#);
        }
    }
    if layout == SvgLayout::Superimposed {
        let _ = writeln!(s, r#"<text x="20" y="18">λ² plane, {} steps (blue first, red last)</text>"#, records.len());
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeRow {
    pub a: f64,
    pub d: f64,
    /// The zero `λ = it` of `EV` on the positive imaginary axis.
    pub t: f64,
    pub lambda2: f64,
}

/// The eigenvalue `λ² = −t²` from the smallest zero `λ = it` of `EV` on the
/// positive imaginary axis.
pub fn negative_eigenvalue(a: f64, d: f64) -> Result<NegativeRow> {
    let t = imaginary_axis_zero(a, d)?;
    Ok(NegativeRow { a, d, t, lambda2: -t * t })
}

/// Scan of `t ↦ EV(it)` (made real by a fixed phase) with bisection and
/// Newton refinement. Touching minima are accepted as double zeros.
fn imaginary_axis_zero(a: f64, d: f64) -> Result<f64> {
    let f = secular::build(&a4(a, d))?;
    let freq = f.sqrt_a_plus.inv().norm().max(f.sqrt_a_minus.inv().norm());
    let dt = 0.05 / freq;
    let eval = |t: f64| f.eval_parts(Complex64::new(0.0, t));
    // Fix the phase from a sample well away from the origin.
    let probe = eval(7.3 / freq).value;
    let phase = if probe.norm() > 0.0 { probe.conj() / probe.norm() } else { 1.0.into() };
    let g = |t: f64| (eval(t).value * phase).re;
    // d/dt of the mantissa, same scaling, through f'(it)·i
    let dg = |t: f64| {
        let p = eval(t);
        (p.deriv * Complex64::new(0.0, 1.0) * phase).re
    };
    let t_max = 2.0e4 / freq;
    let mut t = dt;
    let mut g_prev = g(t);
    let mut g_prev2 = f64::NAN;
    let mut t_prev = t;
    while t < t_max {
        let t_next = t + dt;
        let g_next = g(t_next);
        if g_next == 0.0 {
            return Ok(t_next);
        }
        if g_prev.signum() != g_next.signum() {
            return Ok(refine(&g, &dg, t, t_next));
        }
        // touching minimum of |g|
        if g_prev2.is_finite() && g_prev.abs() < g_prev2.abs() && g_prev.abs() < g_next.abs() {
            if let Some(root) = touching_zero(&g, t_prev, t_next) {
                return Ok(root);
            }
        }
        g_prev2 = g_prev;
        g_prev = g_next;
        t_prev = t;
        t = t_next;
    }
    Err(Error::NoSignChange)
}

fn refine(g: &dyn Fn(f64) -> f64, dg: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-6 * hi {
            break;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..5 {
        let d = dg(t);
        if d == 0.0 {
            break;
        }
        let next = t - g(t) / d;
        if !(lo..=hi).contains(&next) {
            break;
        }
        t = next;
    }
    t
}

/// Golden-section minimum of `|g|` on `[lo, hi]`; a zero if the minimum is
/// negligible against the bracket values.
fn touching_zero(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let scale = g(lo).abs().max(g(hi).abs());
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (g(x1).abs(), g(x2).abs());
    for _ in 0..100 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = g(x1).abs();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = g(x2).abs();
        }
    }
    let t = 0.5 * (lo + hi);
    (g(t).abs() <= 1e-7 * scale).then_some(t)
}

/// `λ² = −t²` along `d` from `d0` to `d1` at fixed `a`.
pub fn track_negative_eigenvalue(a: f64, d0: f64, d1: f64, steps: usize) -> Result<Vec<NegativeRow>> {
    if steps < 2 {
        return Err(Error::InvalidInput("a sweep needs at least 2 steps".into()));
    }
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let d = d0 + (d1 - d0) * i as f64 / (steps - 1) as f64;
            negative_eigenvalue(a, d)
        })
        .collect()
}

pub fn write_negative_csv<W: Write>(rows: &[NegativeRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a", "d", "t", "lambda2"])?;
    for r in rows {
        w.write_record([num(r.a), num(r.d), num(r.t), num(r.lambda2)])?;
    }
    w.flush()?;
    Ok(())
}
