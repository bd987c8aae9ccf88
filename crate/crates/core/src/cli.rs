//! The `specmat` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::canonical::{self, a4, classify_region};
use crate::chebpath::{self, cheb_spectrum, cheb_sweep, lambda_curve, ChebOptions, Ratio};
use crate::mat2::{eig2, numerical_range, CMatrix2};
use crate::oracle::{self, discretize, growth_probe, oracle_spectrum, resolvent_norm, ShiftMode};
use crate::rootfind::{spectrum_count, spectrum_seeded, Rect, Spectrum};
use crate::secular;
use crate::sweep::{self, run_sweep, SvgLayout, SweepMethod, SweepPath, SweepSpec};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "specmat", version, about = "Spectra of -A d²/dx² with mixed Dirichlet/Neumann conditions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Relative tolerance for zero polishing.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for the contour jitter.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct MatrixArgs {
    /// Eight comma-separated numbers: re(a),im(a),re(b),im(b),re(c),im(c),re(d),im(d).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["real", "a4"])]
    pub matrix: Option<String>,
    /// A real matrix given row-wise as four numbers.
    #[arg(long, num_args = 4, allow_hyphen_values = true, value_names = ["A", "B", "C", "D"])]
    pub real: Option<Vec<f64>>,
    /// The A4 family matrix (a -1; 1 d).
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["A", "D"])]
    pub a4: Option<Vec<f64>>,
}

impl MatrixArgs {
    pub fn resolve(&self) -> Result<CMatrix2> {
        if let Some(s) = &self.matrix {
            return CMatrix2::parse(s);
        }
        if let Some(v) = &self.real {
            let m = CMatrix2::real(v[0], v[1], v[2], v[3]);
            return CMatrix2::new(m.a, m.b, m.c, m.d);
        }
        if let Some(v) = &self.a4 {
            let m = a4(v[0], v[1]);
            return CMatrix2::new(m.a, m.b, m.c, m.d);
        }
        Err(Error::InvalidInput("give one of --matrix, --real or --a4".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

impl SignArg {
    fn value(self) -> i8 {
        match self {
            SignArg::Plus => 1,
            SignArg::Minus => -1,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jordan data, canonical form, region and spectral prediction.
    Classify {
        #[command(flatten)]
        m: MatrixArgs,
    },
    /// Evaluate the secular function EV.
    Ev {
        #[command(flatten)]
        m: MatrixArgs,
        /// Point `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Grid `re0:re1:n,im0:im1:m`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Eigenvalues from the zeros of EV.
    Spectrum {
        #[command(flatten)]
        m: MatrixArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Search rectangle in the λ-plane `re_min,re_max,im_min,im_max`.
        #[arg(long, allow_hyphen_values = true)]
        rect: Option<String>,
    },
    /// Exact spectrum on a curve where √(b₊/b₋) = p/q.
    Cheb {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "+")]
        sign: SignArg,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// `a0:a1:steps`
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
        /// Allow polynomial degrees above the default cap.
        #[arg(long, default_value_t = chebpath::DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Finite-difference eigenvalues.
    Oracle {
        #[command(flatten)]
        m: MatrixArgs,
        #[arg(short, default_value_t = 200)]
        n: usize,
        #[arg(short, default_value_t = 8)]
        k: usize,
    },
    /// Resolvent norm proxy 1/σ_min(M − z).
    Resolvent {
        #[command(flatten)]
        m: MatrixArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(short, default_value_t = 300)]
        n: usize,
    },
    /// Resolvent norms along z(r) = 4aπ²r² + iε.
    Growth {
        #[command(flatten)]
        m: MatrixArgs,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 6)]
        rmax: u32,
        #[arg(short, default_value_t = 300)]
        n: usize,
        /// Use 4aπ²r² literally instead of the matching discrete eigenvalue.
        #[arg(long)]
        literal: bool,
    },
    /// Spectra along a path in the (a, d) plane of the A4 family.
    Sweep {
        /// Segment `a0,d0,a1,d1`.
        #[arg(long, allow_hyphen_values = true)]
        segment: Option<String>,
        /// Curve ratio `p/q` (with --a-range) .
        #[arg(long)]
        curve: Option<String>,
        /// `a0:a1`
        #[arg(long, allow_hyphen_values = true)]
        a_range: Option<String>,
        /// Fixed `a` (with --alphas).
        #[arg(long, allow_hyphen_values = true)]
        fixed_a: Option<f64>,
        /// Comma-separated ratios, e.g. `2,8/5,4/3`.
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long, value_enum, default_value = "+")]
        sign: SignArg,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value = "secular")]
        method: MethodArg,
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value = "panels")]
        layout: LayoutArg,
    },
    /// The negative eigenvalue along a segment of fixed a.
    TrackNegative {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// `d0:d1`
        #[arg(long)]
        d_range: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Secular,
    Chebyshev,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Superimposed,
    Panels,
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("not a number: {s}")))
}

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>> {
    let v = s.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
    if v.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} comma-separated numbers, got {s}")));
    }
    Ok(v)
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let v = parse_list(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

/// `x0:x1` or `x0:x1:n`.
fn parse_range(s: &str) -> Result<(f64, f64, Option<usize>)> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_f64(a)?, parse_f64(b)?, None)),
        [a, b, n] => {
            let n = n.trim().parse().map_err(|_| Error::InvalidInput(format!("bad count in {s}")))?;
            Ok((parse_f64(a)?, parse_f64(b)?, Some(n)))
        }
        _ => Err(Error::InvalidInput(format!("bad range: {s}"))),
    }
}

#[derive(Serialize)]
struct Classification {
    matrix: CMatrix2,
    eigen: crate::mat2::Eigen2,
    canonical: Option<canonical::CanonicalForm>,
    region: Option<canonical::Region>,
    prediction: Option<canonical::SpectralPrediction>,
    numerical_range: crate::mat2::Ellipse,
    certificates: Vec<canonical::Certificate>,
}

/// Output sink: stdout or a file in `--out`.
struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    fn emit(&self, name: &str, format: Format, body: &[u8], stdout: &mut dyn Write) -> Result<()> {
        match &self.dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join(format!("{name}.{}", format.ext())), body)?;
            }
            None => stdout.write_all(body)?,
        }
        Ok(())
    }
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

fn spectrum_csv(s: &Spectrum) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["re_lambda2", "im_lambda2", "multiplicity", "residual", "error_estimate"])?;
    for e in &s.eigenvalues {
        w.write_record([
            format!("{:?}", e.value.re),
            format!("{:?}", e.value.im),
            e.multiplicity.to_string(),
            format!("{:?}", e.residual),
            e.error_estimate.map(|x| format!("{x:?}")).unwrap_or_default(),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn emit_spectrum(sink: &Sink, name: &str, format: Option<Format>, s: &Spectrum, out: &mut dyn Write) -> Result<()> {
    match format.unwrap_or(Format::Json) {
        Format::Csv => sink.emit(name, Format::Csv, &spectrum_csv(s)?, out),
        Format::Json => sink.emit(name, Format::Json, &json(s)?, out),
        Format::Svg => Err(Error::InvalidInput("svg output is only available for sweeps".into())),
    }
}

/// Execute a parsed command line, writing to `out` unless `--out` is set.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let sink = Sink { dir: cli.out.clone() };
    match cli.command {
        Command::Classify { m } => {
            let m = m.resolve()?;
            let canonical = if m.is_real() { canonical::reduce_real(&m).ok() } else { None };
            let region = canonical
                .as_ref()
                .filter(|c| c.family == canonical::Family::A4)
                .map(|c| classify_region(c.a, c.d));
            let c = Classification {
                matrix: m,
                eigen: eig2(&m),
                canonical,
                region,
                prediction: canonical::predict(&m).ok(),
                numerical_range: numerical_range(&m),
                certificates: canonical::similarity_certificates(&m).unwrap_or_default(),
            };
            sink.emit("classify", Format::Json, &json(&c)?, out)
        }
        Command::Ev { m, at, grid } => {
            let f = secular::build(&m.resolve()?)?;
            let points: Vec<Complex64> = match (at, grid) {
                (Some(at), None) => vec![parse_complex(&at)?],
                (None, Some(grid)) => {
                    let (re, im) = grid
                        .split_once(',')
                        .ok_or_else(|| Error::InvalidInput("grid is re0:re1:n,im0:im1:m".into()))?;
                    let (r0, r1, nr) = parse_range(re)?;
                    let (i0, i1, ni) = parse_range(im)?;
                    let (nr, ni) = (nr.unwrap_or(11).max(2), ni.unwrap_or(11).max(2));
                    let mut v = Vec::with_capacity(nr * ni);
                    for j in 0..ni {
                        for i in 0..nr {
                            let x = r0 + (r1 - r0) * i as f64 / (nr - 1) as f64;
                            let y = i0 + (i1 - i0) * j as f64 / (ni - 1) as f64;
                            v.push(Complex64::new(x, y));
                        }
                    }
                    v
                }
                _ => return Err(Error::InvalidInput("give exactly one of --at or --grid".into())),
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["re_lambda", "im_lambda", "re_ev", "im_ev", "re_dev", "im_dev", "log_scale"])?;
            for z in points {
                let p = f.eval_parts(z);
                w.write_record(
                    [z.re, z.im, p.value.re, p.value.im, p.deriv.re, p.deriv.im, p.log_scale].map(|x| format!("{x:?}")),
                )?;
            }
            let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            sink.emit("ev", Format::Csv, &body, out)
        }
        Command::Spectrum { m, count, rect } => {
            let m = m.resolve()?;
            let s = match rect {
                Some(r) => spectrum_seeded(&m, Rect::parse(&r)?, cli.tol, cli.seed)?,
                None => spectrum_count(&m, count, cli.tol, cli.seed)?,
            };
            emit_spectrum(&sink, "spectrum", cli.format, &s, out)
        }
        Command::Cheb { alpha, sign, a, nmax, sweep, max_degree } => {
            let alpha = Ratio::parse(&alpha)?;
            let opts = ChebOptions { n_max: nmax, max_degree };
            match (a, sweep) {
                (Some(a), None) => {
                    let pt = lambda_curve(alpha, sign.value(), a)?;
                    let s = cheb_spectrum(&pt, opts)?;
                    emit_spectrum(&sink, "cheb", Some(cli.format.unwrap_or(Format::Csv)), &s, out)
                }
                (None, Some(sw)) => {
                    let (a0, a1, steps) = parse_range(&sw)?;
                    let rows = cheb_sweep(alpha, sign.value(), a0, a1, steps.unwrap_or(20), opts)?;
                    if cli.format == Some(Format::Json) {
                        return sink.emit("cheb", Format::Json, &json(&rows)?, out);
                    }
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["a", "d", "re_lambda2", "im_lambda2", "root_index"])?;
                    for r in rows {
                        w.write_record([
                            format!("{:?}", r.a),
                            format!("{:?}", r.d),
                            format!("{:?}", r.lambda2.re),
                            format!("{:?}", r.lambda2.im),
                            r.root_index.to_string(),
                        ])?;
                    }
                    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                    sink.emit("cheb", Format::Csv, &body, out)
                }
                _ => Err(Error::InvalidInput("give exactly one of --a or --sweep".into())),
            }
        }
        Command::Oracle { m, n, k } => {
            let s = oracle_spectrum(&discretize(&m.resolve()?, n)?, k)?;
            emit_spectrum(&sink, "oracle", cli.format, &s, out)
        }
        Command::Resolvent { m, z, n } => {
            let z = parse_complex(&z)?;
            let norm = resolvent_norm(&discretize(&m.resolve()?, n)?, z)?;
            #[derive(Serialize)]
            struct R {
                z: Complex64,
                n: usize,
                norm: f64,
                note: &'static str,
            }
            let r = R { z, n, norm, note: "discretization proxy 1/sigma_min(M - z)" };
            sink.emit("resolvent", Format::Json, &json(&r)?, out)
        }
        Command::Growth { m, eps, rmax, n, literal } => {
            if rmax < 2 {
                return Err(Error::InvalidInput("rmax must be at least 2".into()));
            }
            let mode = if literal { ShiftMode::Literal } else { ShiftMode::ModeMatched };
            let r: Vec<u32> = (1..=rmax).collect();
            let rows = growth_probe(&m.resolve()?, eps, &r, n, mode)?;
            if cli.format == Some(Format::Json) {
                return sink.emit("growth", Format::Json, &json(&rows)?, out);
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "re_z", "im_z", "norm_n", "norm_2n"])?;
            for g in &rows {
                w.write_record([
                    g.r.to_string(),
                    format!("{:?}", g.z_n.re),
                    format!("{:?}", g.z_n.im),
                    format!("{:?}", g.norm_n),
                    format!("{:?}", g.norm_2n),
                ])?;
            }
            let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            let (s1, s2) = oracle::growth_slopes(&rows);
            eprintln!("log-log slope: n={n}: {s1:.4}, n={}: {s2:.4}", 2 * n);
            sink.emit("growth", Format::Csv, &body, out)
        }
        Command::Sweep { segment, curve, a_range, fixed_a, alphas, sign, steps, method, count, verify, layout } => {
            let path = match (segment, curve, fixed_a) {
                (Some(s), None, None) => {
                    let v = parse_list(&s, 4)?;
                    SweepPath::Segment { a0: v[0], d0: v[1], a1: v[2], d1: v[3], steps }
                }
                (None, Some(c), None) => {
                    let (a0, a1, _) = parse_range(
                        a_range.as_deref().ok_or_else(|| Error::InvalidInput("--curve needs --a-range".into()))?,
                    )?;
                    SweepPath::Lambda { alpha: Ratio::parse(&c)?, sign: sign.value(), a0, a1, steps }
                }
                (None, None, Some(a)) => {
                    let list = alphas.ok_or_else(|| Error::InvalidInput("--fixed-a needs --alphas".into()))?;
                    let alphas = list.split(',').map(Ratio::parse).collect::<Result<Vec<_>>>()?;
                    SweepPath::FixedA { a, sign: sign.value(), alphas }
                }
                _ => return Err(Error::InvalidInput("give exactly one of --segment, --curve or --fixed-a".into())),
            };
            let method = match method {
                MethodArg::Secular => SweepMethod::Secular,
                MethodArg::Chebyshev => SweepMethod::Chebyshev,
                MethodArg::Oracle => SweepMethod::Oracle,
            };
            let mut spec = SweepSpec::new(path, method, count);
            spec.tol = cli.tol;
            spec.seed = cli.seed;
            spec.verify = verify;
            let records = run_sweep(&spec)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    sweep::write_csv(&records, &mut buf)?;
                    sink.emit("sweep", Format::Csv, &buf, out)
                }
                Format::Json => {
                    let mut buf = Vec::new();
                    sweep::write_json(&records, &mut buf)?;
                    buf.push(b'\n');
                    sink.emit("sweep", Format::Json, &buf, out)
                }
                Format::Svg => {
                    let layout = match layout {
                        LayoutArg::Superimposed => SvgLayout::Superimposed,
                        LayoutArg::Panels => SvgLayout::Panels,
                    };
                    sink.emit("sweep", Format::Svg, sweep::svg(&records, layout).as_bytes(), out)
                }
            }
        }
        Command::TrackNegative { a, d_range, steps } => {
            let (d0, d1, _) = parse_range(&d_range)?;
            let rows = sweep::track_negative_eigenvalue(a, d0, d1, steps)?;
            let mut buf = Vec::new();
            sweep::write_negative_csv(&rows, &mut buf)?;
            sink.emit("track-negative", Format::Csv, &buf, out)
        }
    }
}

/// Parse arguments, run, and map the outcome to a process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
