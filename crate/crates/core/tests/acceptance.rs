//! Acceptance checks, one line per criterion. Run with
//! `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specmat::canonical::{a4, classify_region, perturbation_coeffs, Family, RegionTag};
use specmat::chebpath::{cheb_spectrum, lambda_curve, ChebOptions, Ratio};
use specmat::mat2::CMatrix2;
use specmat::oracle::{discretize, growth_probe, growth_slopes, oracle_spectrum, ShiftMode};
use specmat::rootfind::{isolate_zeros, spectrum_count, spectrum_seeded, winding_count, Rect};
use specmat::secular::build;
use specmat::c64;

const PI2: f64 = PI * PI;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn nearest(v: Complex64, set: &[Complex64]) -> f64 {
    set.iter().map(|w| (w - v).norm()).fold(f64::INFINITY, f64::min)
}

fn by_modulus(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    v
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// arccos by Newton on `cos λ = w` from the principal-log formula, both
/// written out here rather than taken from the library.
fn arccos_newton(w: Complex64) -> Complex64 {
    let i = c64(0.0, 1.0);
    let mut z = -i * (w + i * (1.0 - w * w).sqrt()).ln();
    for _ in 0..4 {
        z += (z.cos() - w) / z.sin();
    }
    z
}

fn complex_example() -> Outcome {
    let t = Instant::now();
    let m = CMatrix2::new(c64(0.4, 0.3), c64(0.6, -0.3), c64(0.15, 0.3), c64(0.85, -0.3)).map_err(|e| e.to_string())?;
    let lp = arccos_newton(c64(-0.5, 0.5));
    let lm = arccos_newton(c64(-0.5, -0.5));
    let lib = c64(-0.5, 0.5).acos();
    let arccos_err = (lp - lib).norm();
    let cos_err = (lp.cos() - c64(-0.5, 0.5)).norm();

    let mut reference = Vec::new();
    for k in -6i32..=6 {
        let s = 2.0 * PI * k as f64;
        reference.push(c64(s * s, 0.0));
        for l in [lp, lm] {
            reference.push((l + s) * (l + s));
        }
    }
    reference.dedup_by(|a, b| (*a - *b).norm() < 1e-9);
    let reference = by_modulus(reference);

    let s = spectrum_count(&m, 10, 1e-12, 0).map_err(|e| e.to_string())?;
    let got: Vec<Complex64> = by_modulus(s.values()).into_iter().take(10).collect();
    let mut worst: f64 = 0.0;
    for g in &got {
        worst = worst.max(nearest(*g, &reference) / (1.0 + g.norm()));
    }
    let radius = got.last().map(|g| g.norm()).unwrap_or(0.0);
    let missing = reference.iter().filter(|r| r.norm() < radius * (1.0 - 1e-9) && nearest(**r, &got) > 1e-8 * (1.0 + r.norm())).count();
    let secs = t.elapsed().as_secs_f64();
    check(
        got.len() == 10 && arccos_err < 1e-9 && cos_err < 1e-14 && worst < 1e-8 && missing == 0 && secs < 5.0,
        format!(
            "lambda+ = {:.6}{:+.6}i, |arccos diff| {arccos_err:.1e}, worst rel dev {worst:.1e}, missing {missing}, {secs:.2}s",
            lp.re, lp.im
        ),
    )
}

fn triangular_lattice() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut draw = || {
            let x: f64 = rng.gen_range(0.2..3.0);
            if rng.gen_bool(0.5) { x } else { -x }
        };
        let (a, d) = (draw(), draw());
        let mut lattice = vec![c64(0.0, 0.0)];
        for k in 1..=12 {
            let k2 = (k * k) as f64 * PI2;
            lattice.push(c64(a * k2, 0.0));
            lattice.push(c64(d * k2, 0.0));
        }
        let lattice: Vec<Complex64> = by_modulus(lattice).into_iter().take(12).collect();
        let s = spectrum_count(&Family::A2.matrix(a, d), 12, 1e-12, 0).map_err(|e| e.to_string())?;
        let got: Vec<Complex64> = by_modulus(s.values_with_multiplicity()).into_iter().take(12).collect();
        if got.len() < 12 {
            return Err(format!("({a:.3}, {d:.3}): only {} eigenvalues", got.len()));
        }
        for (g, l) in got.iter().zip(&lattice) {
            worst = worst.max((g - l).norm() / (1.0 + l.norm()));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(worst < 1e-8 && secs < 10.0, format!("20 matrices, worst rel dev {worst:.1e}, {secs:.2}s"))
}

fn real_curve() -> Outcome {
    let t = Instant::now();
    let s = spectrum_count(&a4(-1.0, 0.0), 6, 1e-12, 0).map_err(|e| e.to_string())?;
    let got: Vec<Complex64> = by_modulus(s.values()).into_iter().take(6).collect();
    // −k²π²/Im(b₊^{−1/2})² with b₊ = e^{2πi/3}
    let bp = c64(-0.5, 3f64.sqrt() / 2.0);
    let step = -PI2 / bp.powf(-0.5).im.powi(2);
    let expect: Vec<f64> = (0..6).map(|k| step * (k * k) as f64).collect();
    let mut worst: f64 = 0.0;
    for (g, e) in got.iter().zip(&expect) {
        worst = worst.max((g - e).norm() / e.abs().max(1.0));
    }
    check(
        got.len() == 6 && worst < 1e-7,
        format!("step {step:.6} (−4π²/3 = {:.6}), worst rel dev {worst:.1e}, {:.2}s", -4.0 * PI2 / 3.0, t.elapsed().as_secs_f64()),
    )
}

fn defective_cases() -> Outcome {
    let t = Instant::now();
    let err = |e: specmat::Error| e.to_string();
    let f = build(&a4(0.5, -1.5)).map_err(err)?;
    let total = winding_count(&f, Rect::new(-0.5, 50.0, -20.0, 20.0).map_err(err)?).map_err(err)?;
    let at_zero = winding_count(&f, Rect::new(-0.5, 0.5, -0.5, 0.5).map_err(err)?).map_err(err)?;
    let singleton = total - at_zero;

    let g = build(&a4(0.0, 2.0)).map_err(err)?;
    let real = isolate_zeros(&g, Rect::new(0.25, 30.0, -0.05, 0.05).map_err(err)?, 1e-10).map_err(err)?;
    let at_zero2 = winding_count(&g, Rect::new(-0.25, 0.25, -0.05, 0.05).map_err(err)?).map_err(err)?;
    let upper = winding_count(&g, Rect::new(0.0, 30.0, 0.1, 20.0).map_err(err)?).map_err(err)?;
    check(
        singleton == 0 && real.is_empty() && at_zero2 > 0 && upper >= 3,
        format!(
            "(1/2,−3/2): {singleton} zeros besides the origin; (0,2): {} real zeros besides 0, {upper} in the upper strip, {:.2}s",
            real.len(),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn chebyshev_equivalence() -> Outcome {
    let t = Instant::now();
    let points = [
        ("2", 1, -0.5),
        ("3", 1, 0.0),
        ("3/2", 1, 0.5),
        ("4/3", 1, 1.0),
        ("5/2", 1, -0.3),
        ("5/3", 1, 2.0),
        ("5/4", 1, 0.2),
        ("7/2", 1, 1.5),
        ("5", 1, -0.7),
        ("2", -1, 1.2),
    ];
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for (alpha, sign, a) in points {
        let err = |e: specmat::Error| format!("{alpha} {sign} {a}: {e}");
        let c = lambda_curve(Ratio::parse(alpha).map_err(err)?, sign, a).map_err(err)?;
        let cheb = cheb_spectrum(&c, ChebOptions::covering(&c, 200.0)).map_err(err)?.values();
        let r = 200f64.sqrt() * 1.3;
        let sec = spectrum_seeded(&c.matrix(), Rect::new(-0.7, r, -r, r).map_err(err)?, 1e-12, 0).map_err(err)?.values();
        for (from, to) in [(&cheb, &sec), (&sec, &cheb)] {
            for v in from.iter().filter(|v| v.norm() <= 200.0) {
                worst = worst.max(nearest(*v, to) / (1.0 + v.norm()));
                compared += 1;
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(worst <= 1e-7 && secs < 30.0, format!("10 points, {compared} comparisons, worst rel dev {worst:.1e}, {secs:.2}s"))
}

/// Corpus spanning R1 to R5, six points each, off the real curve.
fn corpus() -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut out = Vec::new();
    for tag in [RegionTag::R1, RegionTag::R2, RegionTag::R3, RegionTag::R4, RegionTag::R5] {
        let mut n = 0;
        while n < 6 {
            let a: f64 = rng.gen_range(-3.0..3.0);
            let d = match tag {
                RegionTag::R1 => a + if rng.gen_bool(0.5) { 2.0 } else { -2.0 },
                _ => rng.gen_range(-3.0..3.0),
            };
            let r = classify_region(a, d);
            let degenerate = (a.abs() - 1.0).abs() < 0.1 || (a - 0.5).abs() < 0.1 && (d + 1.5).abs() < 0.1;
            if r.tag == tag && !degenerate && (a * a - a * d - 1.0).abs() > 0.3 && (a * d + 1.0).abs() > 0.3 {
                out.push((a, d));
                n += 1;
            }
        }
    }
    out
}

fn discretization_convergence() -> Outcome {
    let t = Instant::now();
    let mut ratios = Vec::new();
    for (a, c, d) in [(1.0, 0.0, 2.0), (2.0, 1.0, 3.0)] {
        let m = CMatrix2::real(a, 0.0, c, d);
        let mut exact: Vec<f64> = vec![0.0];
        for k in 1..=6 {
            exact.push(a * PI2 * (k * k) as f64);
            exact.push(d * PI2 * (k * k) as f64);
        }
        exact.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let values = |n| -> Result<Vec<Complex64>, String> {
            let disc = discretize(&m, n).map_err(|e| e.to_string())?;
            Ok(oracle_spectrum(&disc, 6).map_err(|e| e.to_string())?.values_with_multiplicity())
        };
        let (e100, e200) = (values(100)?, values(200)?);
        for j in 1..6 {
            ratios.push((e100[j] - exact[j]).norm() / (e200[j] - exact[j]).norm());
        }
    }
    let ratio_ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));

    let mut failures = Vec::new();
    let corpus = corpus();
    for &(a, d) in &corpus {
        let m = a4(a, d);
        let disc = discretize(&m, 200).map_err(|e| e.to_string())?;
        let fd = oracle_spectrum(&disc, 6).map_err(|e| e.to_string())?;
        let sec = spectrum_count(&m, 16, 1e-12, 0).map_err(|e| e.to_string())?.values();
        for e in &fd.eigenvalues {
            let dev = nearest(e.value, &sec);
            let est = e.error_estimate.unwrap_or(0.0);
            if dev > est.max(1e-8 * (1.0 + e.value.norm())) {
                failures.push(format!("({a:.3},{d:.3}) {:.4}: dev {dev:.1e} > est {est:.1e}", e.value));
            }
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0f64), |(l, h), r| (l.min(*r), h.max(*r)));
    check(
        ratio_ok && failures.is_empty(),
        format!(
            "Richardson ratios in [{lo:.3}, {hi:.3}]; {} corpus matrices, {} eigenvalues outside the estimate{}; {:.2}s",
            corpus.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn resolvent_growth() -> Outcome {
    let t = Instant::now();
    let r: Vec<u32> = (2..=6).collect();
    let slopes = |m: &CMatrix2, mode| -> Result<(f64, f64), String> {
        Ok(growth_slopes(&growth_probe(m, 1.0, &r, 300, mode).map_err(|e| e.to_string())?))
    };
    let jordan = CMatrix2::real(1.0, 0.0, 1.0, 1.0);
    let (s1, s2) = slopes(&jordan, ShiftMode::ModeMatched)?;
    let (d1, d2) = slopes(&CMatrix2::real(1.0, 0.0, 0.0, 2.0), ShiftMode::ModeMatched)?;
    let (l1, l2) = slopes(&jordan, ShiftMode::Literal)?;
    let agree = (s1 - s2).abs() <= 0.1 * s1.abs().max(s2.abs());
    check(
        s1 >= 0.4 && s2 >= 0.4 && agree && d1.abs() <= 0.05 && d2.abs() <= 0.05,
        format!(
            "Jordan slope n=300 {s1:.3}, n=600 {s2:.3}; diagonal {d1:.3}, {d2:.3}; literal z = 4π²r²+i gives {l1:.3}, {l2:.3}; {:.2}s",
            t.elapsed().as_secs_f64()
        ),
    )
}

fn perturbation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 100 {
        let mut z = || c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, b, c, d) = (z(), z(), z(), z());
        let det = a * d - b * c;
        if det.norm() < 0.1 {
            continue;
        }
        let m = CMatrix2::new(a, b, c, d).map_err(|e| e.to_string())?;
        // lower-right entry of the adjugate over det
        let inv22 = a / det;
        let (mu1, _) = perturbation_coeffs(&m).map_err(|e| e.to_string())?;
        worst = worst.max((mu1 - inv22).norm() / (1.0 + inv22.norm()));
        n += 1;
    }
    let mut worst2: f64 = 0.0;
    for (b, c) in [(1.0, 1.0), (-2.0, 0.5), (3.0, -1.5), (0.7, 0.9)] {
        let m = CMatrix2::real(0.0, b, c, 1.0);
        let (_, mu2) = perturbation_coeffs(&m).map_err(|e| e.to_string())?;
        let mu2 = mu2.ok_or("μ₂ missing for a = 0")?;
        let closed = -1.0 / (12.0 * b * c);
        let mut sum = 0.0;
        let mut k = 1.0f64;
        while 1.0 / (6.0 * (2.0 * k - 1.0).powi(3)) >= 1e-15 {
            sum += (2.0 * k - 1.0).powi(-4);
            k += 1.0;
        }
        let series = -8.0 * sum / (b * c * PI2 * PI2);
        worst2 = worst2.max((mu2 - closed).norm()).max((mu2 - series).norm());
    }
    check(worst < 1e-12 && worst2 < 1e-12, format!("μ₁ worst {worst:.1e} over 100 matrices; μ₂ worst {worst2:.1e}"))
}

fn fixed_a_sweeps() -> Outcome {
    use specmat::secular::geometric_multiplicity;
    use specmat::sweep::{run_sweep, SweepMethod, SweepPath, SweepSpec};
    let t = Instant::now();
    let ratios = |l: &[&str]| l.iter().map(|s| Ratio::parse(s)).collect::<specmat::Result<Vec<_>>>();
    let err = |e: specmat::Error| e.to_string();

    let negative_branch = SweepPath::FixedA { a: -0.5, sign: 1, alphas: ratios(&["2", "8/5", "4/3", "5/4", "7/6", "9/8"]).map_err(err)? };
    let recs = run_sweep(&SweepSpec::new(negative_branch, SweepMethod::Chebyshev, 12)).map_err(err)?;
    let mut moduli = Vec::new();
    let mut one_each = true;
    for r in &recs {
        let neg: Vec<f64> = r
            .eigenvalues
            .iter()
            .filter(|e| e.value.re < 0.0 && e.value.im.abs() <= 1e-9 * e.value.norm())
            .map(|e| e.value.re.abs())
            .collect();
        one_each &= neg.len() == 1;
        moduli.extend(neg.first().copied());
    }
    let increasing = moduli.windows(2).all(|w| w[1] > w[0]);
    let d_falls = recs.windows(2).all(|w| w[1].d < w[0].d) && recs.last().map(|r| r.d > 1.5).unwrap_or(false);

    // a = 0: real double eigenvalues at α = 3 split by α = 9/8
    let probe = |alpha: &str| -> Result<(usize, usize), String> {
        let c = lambda_curve(Ratio::parse(alpha).map_err(err)?, 1, 0.0).map_err(err)?;
        let s = cheb_spectrum(&c, ChebOptions::covering(&c, 400.0)).map_err(err)?;
        let mut doubles = 0;
        let mut pairs = 0;
        for e in s.eigenvalues.iter().filter(|e| e.value.norm() > 1e-8 && e.value.norm() <= 400.0) {
            let real = e.value.im.abs() <= 1e-9 * e.value.norm();
            let g = geometric_multiplicity(&c.matrix(), e.value.sqrt()).map_err(err)?;
            if real && g == 2 {
                doubles += 1;
            }
            if !real && e.value.im > 0.0 && g == 1 {
                pairs += 1;
            }
        }
        Ok((doubles, pairs))
    };
    let (d3, p3) = probe("3")?;
    let (d98, p98) = probe("9/8")?;
    check(
        one_each && increasing && d_falls && d3 >= 3 && d98 == 0 && p98 >= d3,
        format!(
            "a = -1/2: {} steps, |negative| {:?}; a = 0: α=3 has {d3} real doubles ({p3} pairs), α=9/8 has {d98} doubles and {p98} simple conjugate pairs; {:.2}s",
            recs.len(),
            moduli.iter().map(|m| (m * 1e3).round() / 1e3).collect::<Vec<_>>(),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("complex example spectrum", complex_example),
        ("triangular lattice", triangular_lattice),
        ("a4-r5 real curve", real_curve),
        ("a4-r1 defective cases", defective_cases),
        ("chebyshev vs secular", chebyshev_equivalence),
        ("discretization convergence", discretization_convergence),
        ("resolvent growth exponent", resolvent_growth),
        ("perturbation coefficients", perturbation),
        ("fixed-a sweep properties", fixed_a_sweeps),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
