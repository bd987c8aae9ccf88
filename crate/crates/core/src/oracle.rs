//! Finite-difference check of the spectrum and resolvent of `AD`.
//!
//! Unknowns are `φ₁…φ_n` (Dirichlet values `φ₀ = φ_{n+1} = 0` are dropped)
//! and `γ₀…γ_{n+1}`. Interior rows apply the 3-point stencil; `γ' = 0` is
//! imposed with mirror ghosts, and `−φ''` at the two `γ` boundary rows uses
//! the one-sided stencil `(2φ₀ − 5φ₁ + 4φ₂ − φ₃)/h²`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::mat2::CMatrix2;
use crate::rootfind::{Eigenvalue, Method, Spectrum, SpectrumFlag};
use crate::{Error, Result};

pub const MIN_RESOLUTION: usize = 8;

/// A row of the discrete operator: `(column, coefficient)` pairs.
type Row = Vec<(usize, Complex64)>;

#[derive(Clone, Debug)]
pub struct Discretization {
    pub n: usize,
    pub h: f64,
    /// Rows in the natural layout `(φ₁…φ_n, γ₀…γ_{n+1})`.
    rows: Vec<Row>,
    pub matrix: CMatrix2,
    pub not_closed: bool,
}

impl Discretization {
    pub fn size(&self) -> usize {
        2 * self.n + 2
    }

    fn phi(&self, j: usize) -> usize {
        j - 1
    }

    fn gamma(&self, j: usize) -> usize {
        self.n + j
    }

    /// The dense matrix `M`.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let s = self.size();
        let mut m = DMatrix::zeros(s, s);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Eigenvalues of `M`, unsorted.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        if self.matrix.is_real() {
            let m = self.dense().map(|z| z.re);
            m.complex_eigenvalues().iter().copied().collect()
        } else {
            let (_, t) = self.dense().schur().unpack();
            t.diagonal().iter().copied().collect()
        }
    }

    /// Position of natural unknown `k` in the interleaved band ordering
    /// `γ₀, φ₁, γ₁, φ₂, …, γ_{n+1}`.
    fn band_index(&self, k: usize) -> usize {
        if k < self.n {
            2 * (k + 1) - 1
        } else if k < 2 * self.n + 1 {
            2 * (k - self.n)
        } else {
            2 * self.n + 1
        }
    }
}

pub fn discretize(m: &CMatrix2, n: usize) -> Result<Discretization> {
    if n < MIN_RESOLUTION {
        return Err(Error::ResolutionTooLow { n });
    }
    if !m.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let h = 1.0 / (n as f64 + 1.0);
    let ih2 = 1.0 / (h * h);
    let mut disc = Discretization { n, h, rows: Vec::new(), matrix: *m, not_closed: m.is_singular() };
    let phi = |j: usize| disc.phi(j);
    let gamma = |j: usize| disc.gamma(j);

    // −φ'' and −γ'' at node j as sparse rows.
    let neg_phi2 = |j: usize| -> Row {
        if j == 0 || j == n + 1 {
            // one-sided, φ at the endpoint is zero
            let (s1, s2, s3) = if j == 0 { (1, 2, 3) } else { (n, n - 1, n - 2) };
            vec![(phi(s1), (5.0 * ih2).into()), (phi(s2), (-4.0 * ih2).into()), (phi(s3), ih2.into())]
        } else {
            let mut r = vec![(phi(j), (2.0 * ih2).into())];
            if j > 1 {
                r.push((phi(j - 1), (-ih2).into()));
            }
            if j < n {
                r.push((phi(j + 1), (-ih2).into()));
            }
            r
        }
    };
    let neg_gamma2 = |j: usize| -> Row {
        if j == 0 {
            vec![(gamma(0), (2.0 * ih2).into()), (gamma(1), (-2.0 * ih2).into())]
        } else if j == n + 1 {
            vec![(gamma(n + 1), (2.0 * ih2).into()), (gamma(n), (-2.0 * ih2).into())]
        } else {
            vec![(gamma(j), (2.0 * ih2).into()), (gamma(j - 1), (-ih2).into()), (gamma(j + 1), (-ih2).into())]
        }
    };
    let combine = |x: Complex64, rx: Row, y: Complex64, ry: Row| -> Row {
        rx.into_iter().map(|(c, v)| (c, v * x)).chain(ry.into_iter().map(|(c, v)| (c, v * y))).collect()
    };
    let mut rows = Vec::with_capacity(2 * n + 2);
    for j in 1..=n {
        rows.push(combine(m.a, neg_phi2(j), m.b, neg_gamma2(j)));
    }
    for j in 0..=n + 1 {
        rows.push(combine(m.c, neg_phi2(j), m.d, neg_gamma2(j)));
    }
    disc.rows = rows;
    Ok(disc)
}

fn smallest_by_modulus(mut v: Vec<Complex64>, k: usize) -> Vec<Complex64> {
    v.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap().then(a.arg().partial_cmp(&b.arg()).unwrap()));
    v.truncate(k);
    v
}

/// Safety factor of the two-grid convergence index.
pub const RICHARDSON_SAFETY: f64 = 3.0;

/// The `k` eigenvalues of `M` of smallest modulus, each with a Richardson
/// error bar from the discretization at `n/2`.
///
/// The bar is the two-grid convergence index: the O(h²) Richardson estimate
/// times [`RICHARDSON_SAFETY`], since higher-order terms are not negligible
/// for the upper modes at `n/2`.
pub fn oracle_spectrum(disc: &Discretization, k: usize) -> Result<Spectrum> {
    if k > disc.size() / 4 {
        return Err(Error::InvalidInput(format!("k = {k} exceeds the trusted range {}", disc.size() / 4)));
    }
    let fine = smallest_by_modulus(disc.eigenvalues(), k);
    let half = (disc.n / 2).max(MIN_RESOLUTION);
    let coarse_disc = discretize(&disc.matrix, half)?;
    let coarse = smallest_by_modulus(coarse_disc.eigenvalues(), (2 * k).min(coarse_disc.size()));
    let ratio = ((disc.n as f64 + 1.0) / (half as f64 + 1.0)).powi(2);
    let mut eigenvalues: Vec<Eigenvalue> = Vec::new();
    for z in fine {
        let nearest = coarse.iter().map(|c| (c - z).norm()).fold(f64::INFINITY, f64::min);
        let err = RICHARDSON_SAFETY * nearest / (ratio - 1.0);
        match eigenvalues.iter_mut().find(|e| (e.value - z).norm() <= 1e-8 * (1.0 + z.norm())) {
            Some(e) => e.multiplicity += 1,
            None => eigenvalues.push(Eigenvalue { value: z, multiplicity: 1, residual: 0.0, error_estimate: Some(err) }),
        }
    }
    let mut spec = Spectrum {
        eigenvalues,
        method: Method::Oracle,
        search_region: None,
        matrix: disc.matrix,
        analytic_order_at_zero: None,
        complete_radius: None,
        flags: Vec::new(),
    };
    if disc.not_closed {
        spec.flags.push(SpectrumFlag::NotClosed);
    }
    spec.sort();
    Ok(spec)
}

/// LU factorization with partial pivoting of a band matrix, column-major band
/// storage with `kl` extra rows for fill-in.
struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    data: Vec<Complex64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        BandLu { n, kl, ku, ld, data: vec![Complex64::new(0.0, 0.0); ld * n], piv: vec![0; n] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ld + (self.kl + self.ku + i - j)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[self.idx(i, j)]
    }

    fn add(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i + self.ku >= j && j + self.kl >= i);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    fn factor(&mut self) -> Result<()> {
        let n = self.n;
        let w = self.kl + self.ku;
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).norm();
            for i in k + 1..=last {
                let v = self.get(i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::NearSpectrum);
            }
            self.piv[k] = p;
            let jlast = (k + w).min(n - 1);
            if p != k {
                for j in k..=jlast {
                    let (a, b) = (self.idx(k, j), self.idx(p, j));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.get(k, k);
            for i in k + 1..=last {
                let ik = self.idx(i, k);
                let l = self.data[ik] / pivot;
                self.data[ik] = l;
                if l.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..=jlast {
                    let kj = self.get(k, j);
                    let ij = self.idx(i, j);
                    self.data[ij] -= l * kj;
                }
            }
        }
        Ok(())
    }

    fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
            let bk = b[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                b[i] -= self.get(i, k) * bk;
            }
        }
        let w = self.kl + self.ku;
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + w).min(n - 1) {
                s -= self.get(k, j) * b[j];
            }
            b[k] = s / self.get(k, k);
        }
    }
}

/// Bands of `M` in the interleaved ordering.
const KL: usize = 6;
const KU: usize = 5;

fn shifted_band(disc: &Discretization, z: Complex64, adjoint: bool) -> BandLu {
    let s = disc.size();
    let (kl, ku) = if adjoint { (KU, KL) } else { (KL, KU) };
    let mut lu = BandLu::new(s, kl, ku);
    for (i, row) in disc.rows.iter().enumerate() {
        let bi = disc.band_index(i);
        for &(j, v) in row {
            let bj = disc.band_index(j);
            if adjoint {
                lu.add(bj, bi, v.conj());
            } else {
                lu.add(bi, bj, v);
            }
        }
        let shift = if adjoint { z.conj() } else { z };
        lu.add(bi, bi, -shift);
    }
    lu
}

/// `1/σ_min(M − z)`, a discretization-level proxy for `‖(AD − z)⁻¹‖`.
pub fn resolvent_norm(disc: &Discretization, z: Complex64) -> Result<f64> {
    let mut fwd = shifted_band(disc, z, false);
    fwd.factor()?;
    let mut adj = shifted_band(disc, z, true);
    adj.factor()?;
    let s = disc.size();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut x: Vec<Complex64> = (0..s).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let norm = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let n0 = norm(&x);
    x.iter_mut().for_each(|c| *c /= n0);
    let mut est = 0.0;
    for _ in 0..500 {
        let mut y = x.clone();
        fwd.solve(&mut y);
        adj.solve(&mut y);
        // y = ((M−z)^H (M−z))⁻¹ x; its Rayleigh quotient tends to 1/σ_min².
        let rq: f64 = x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum();
        let ny = norm(&y);
        if !ny.is_finite() {
            return Err(Error::NearSpectrum);
        }
        x = y.iter().map(|c| c / ny).collect();
        let done = (rq - est).abs() <= 1e-10 * rq.abs();
        est = rq;
        if done {
            break;
        }
    }
    let sigma_min = est.sqrt().recip();
    if !(sigma_min >= 1e-10) {
        return Err(Error::NearSpectrum);
    }
    Ok(1.0 / sigma_min)
}

/// Where the growth probe places `z(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftMode {
    /// `(4a/h²) sin²(πrh) + iε`: the discrete eigenvalue of mode `2r`.
    ModeMatched,
    /// `4aπ²r² + iε` as in the continuous problem.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub r: u32,
    pub z_n: Complex64,
    pub norm_n: f64,
    pub z_2n: Complex64,
    pub norm_2n: f64,
}

pub fn growth_shift(a: Complex64, eps: f64, r: u32, h: f64, mode: ShiftMode) -> Complex64 {
    let pi = std::f64::consts::PI;
    let re = match mode {
        ShiftMode::ModeMatched => a * 4.0 / (h * h) * (pi * r as f64 * h).sin().powi(2),
        ShiftMode::Literal => a * 4.0 * pi * pi * (r as f64).powi(2),
    };
    re + Complex64::new(0.0, eps)
}

/// Resolvent norms along `z(r)` at resolutions `n` and `2n`.
pub fn growth_probe(m: &CMatrix2, eps: f64, r_list: &[u32], n: usize, mode: ShiftMode) -> Result<Vec<GrowthRow>> {
    let d1 = discretize(m, n)?;
    let d2 = discretize(m, 2 * n)?;
    r_list
        .iter()
        .map(|&r| {
            let z_n = growth_shift(m.a, eps, r, d1.h, mode);
            let z_2n = growth_shift(m.a, eps, r, d2.h, mode);
            Ok(GrowthRow { r, z_n, norm_n: resolvent_norm(&d1, z_n)?, z_2n, norm_2n: resolvent_norm(&d2, z_2n)? })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Slopes at the two resolutions of a growth table.
pub fn growth_slopes(rows: &[GrowthRow]) -> (f64, f64) {
    let r: Vec<f64> = rows.iter().map(|g| g.r as f64).collect();
    let n1: Vec<f64> = rows.iter().map(|g| g.norm_n).collect();
    let n2: Vec<f64> = rows.iter().map(|g| g.norm_2n).collect();
    (loglog_slope(&r, &n1), loglog_slope(&r, &n2))
}
