//! kpb drives the kpbloch library from the shell: solve periodic waves,
//! classify Floquet-Bloch spectra, sweep stability grids, locate thresholds,
//! bubbles and collisions, sample dispersion curves and run the verification
//! suite, all with deterministic CSV or JSON output.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpbloch::asymptotics::{ell_mp_sq, eps_a};
use kpbloch::scanner::{
    collision_locator, dispersion_curve, find_bubble, find_critical_ell, record_at, scan,
    DEFAULT_BISECT_TOL, DEFAULT_SPECTRUM_N_TRUNC,
};
use kpbloch::spectra::DEFAULT_RE_TOL;
use kpbloch::verify;
use kpbloch::waves::{solve_wave, Wave, DEFAULT_TOL};

use config::{require, Config};
use output::{f64s, json_nums, json_pairs, json_rows, make_writer, JsonObject};

#[derive(Parser)]
#[command(
    name = "kpb",
    version,
    about = "Transverse spectral stability of periodic KP waves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a periodic traveling wave and print its cosine coefficients.
    Wave(WaveArgs),
    /// Classify the Floquet-Bloch spectrum at one (gamma, ell) point.
    Spectrum(SpectrumArgs),
    /// Sweep a (gamma, ell) stability grid.
    Scan(ScanArgs),
    /// Bisect a stability boundary in the transverse wavenumber.
    Boundary(BoundaryArgs),
    /// Measure the KP-I instability bubble near the mode collision.
    Bubble(BubbleArgs),
    /// Locate KP-II dispersion collisions.
    Collisions(CollisionsArgs),
    /// Sample the linear dispersion relation.
    Dispersion(DispersionArgs),
    /// Run the built-in verification suite.
    Verify(VerifyArgs),
}

/// Output format; each command has its natural default.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Read defaults from a key = value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct WaveArgs {
    /// Wave amplitude, |a| <= 0.3.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Galerkin truncation of the wave solve.
    #[arg(long = "n-trunc")]
    n_trunc: Option<usize>,
    /// Newton convergence tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    io: OutputArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Wave amplitude, |a| <= 0.3.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Dispersion sign: +1 for KP-I, -1 for KP-II.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<i32>,
    /// Floquet exponent, 0 or in [0.05, 0.5].
    #[arg(long)]
    gamma: Option<f64>,
    /// Transverse wavenumber.
    #[arg(long)]
    ell: Option<f64>,
    /// Galerkin truncation for the wave and the operators.
    #[arg(long = "n-trunc")]
    n_trunc: Option<usize>,
    /// Instability threshold on real parts.
    #[arg(long = "re-tol")]
    re_tol: Option<f64>,
    #[command(flatten)]
    io: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Wave amplitude, |a| <= 0.3.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Dispersion sign: +1 for KP-I, -1 for KP-II.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<i32>,
    /// Single Floquet exponent (default 0).
    #[arg(long, conflicts_with = "gamma_range")]
    gamma: Option<f64>,
    /// Floquet exponent grid lo:hi:count.
    #[arg(long = "gamma-range", value_parser = parse_range)]
    gamma_range: Option<RangeSpec>,
    /// Transverse wavenumber grid lo:hi:count.
    #[arg(long = "ell-range", value_parser = parse_range)]
    ell_range: Option<RangeSpec>,
    /// Galerkin truncation for the wave and the operators.
    #[arg(long = "n-trunc")]
    n_trunc: Option<usize>,
    /// Instability threshold on real parts.
    #[arg(long = "re-tol")]
    re_tol: Option<f64>,
    #[command(flatten)]
    io: OutputArgs,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Wave amplitude, |a| <= 0.3.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Dispersion sign: +1 for KP-I, -1 for KP-II.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<i32>,
    /// Floquet exponent, 0 or in [0.05, 0.5].
    #[arg(long)]
    gamma: Option<f64>,
    /// Bisection bracket lo:hi in ell.
    #[arg(long = "ell-range", value_parser = parse_range)]
    ell_range: Option<RangeSpec>,
    /// Bisection width in ell.
    #[arg(long = "bisect-tol")]
    bisect_tol: Option<f64>,
    #[command(flatten)]
    io: OutputArgs,
}

#[derive(Args)]
struct BubbleArgs {
    /// Wave amplitude, |a| <= 0.3.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Floquet exponent in [0.05, 0.5].
    #[arg(long)]
    gamma: Option<f64>,
    /// Coarse step in ell^2 (default: an eighth of the predicted half-width).
    #[arg(long)]
    step: Option<f64>,
    #[command(flatten)]
    io: OutputArgs,
}

#[derive(Args)]
struct CollisionsArgs {
    /// Mode pairs as m:p[,m:p...] (default 1:1,2:1,3:1,2:2).
    #[arg(long)]
    pairs: Option<String>,
    #[command(flatten)]
    io: OutputArgs,
}

#[derive(Args)]
struct DispersionArgs {
    /// Dispersion sign: +1 for KP-I, -1 for KP-II.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<i32>,
    /// Transverse wavenumber.
    #[arg(long)]
    ell: Option<f64>,
    /// Longitudinal wavenumber grid lo:hi:count (default 0.1:2.5:256).
    #[arg(long = "k-range", value_parser = parse_range, allow_hyphen_values = true)]
    k_range: Option<RangeSpec>,
    #[command(flatten)]
    io: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Reduced grids and sample counts (same tolerances).
    #[arg(long)]
    quick: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read defaults from a key = value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// lo:hi or lo:hi:count grid argument.
#[derive(Clone, Debug)]
struct RangeSpec {
    lo: f64,
    hi: f64,
    count: Option<usize>,
}

impl RangeSpec {
    fn points(&self, name: &str) -> Result<Vec<f64>, String> {
        let count = self
            .count
            .ok_or_else(|| format!("{name} needs lo:hi:count"))?;
        match count {
            0 => Err(format!("{name}: count must be positive")),
            1 => Ok(vec![self.lo]),
            _ => Ok((0..count)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (count - 1) as f64)
                .collect()),
        }
    }

    fn bracket(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

fn parse_range(s: &str) -> Result<RangeSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err(format!("expected lo:hi or lo:hi:count, got {s:?}"));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| format!("bad range start {:?}", parts[0]))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| format!("bad range end {:?}", parts[1]))?;
    let count = match parts.get(2) {
        None => None,
        Some(c) => Some(c.parse().map_err(|_| format!("bad range count {c:?}"))?),
    };
    Ok(RangeSpec { lo, hi, count })
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(format!("expected csv or json, got {s:?}")),
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(u32, u32)>, String> {
    s.split(',')
        .map(|item| {
            let (m, p) = item
                .split_once(':')
                .ok_or_else(|| format!("expected m:p, got {item:?}"))?;
            let m = m.parse().map_err(|_| format!("bad mode {m:?}"))?;
            let p = p.parse().map_err(|_| format!("bad mode {p:?}"))?;
            Ok((m, p))
        })
        .collect()
}

/// Exit code 1 for computational failures, 2 for configuration problems;
/// a closed output pipe ends the program quietly.
enum CliError {
    Compute(String),
    Config(String),
    Pipe,
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Config(msg)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::Pipe
        } else {
            CliError::Compute(format!("output failed: {e}"))
        }
    }
}

fn lib_err(e: kpbloch::Error) -> CliError {
    use kpbloch::Error::*;
    match e {
        OutOfRange { .. } | InvalidAmplitude { .. } | ParamMismatch | SingularSymbol { .. } => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Compute(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(()) | Err(CliError::Pipe) => ExitCode::SUCCESS,
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Cap BLAS at one thread (parallelism lives in rayon) and honor
/// KPB_THREADS for the rayon pool size.
fn init_threads() -> Result<(), CliError> {
    if std::env::var_os("OPENBLAS_NUM_THREADS").is_none() {
        std::env::set_var("OPENBLAS_NUM_THREADS", "1");
    }
    if let Ok(v) = std::env::var("KPB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("KPB_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Wave(args) => run_wave(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Scan(args) => run_scan(args),
        Command::Boundary(args) => run_boundary(args),
        Command::Bubble(args) => run_bubble(args),
        Command::Collisions(args) => run_collisions(args),
        Command::Dispersion(args) => run_dispersion(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn load_config(io: &OutputArgs) -> Result<Config, CliError> {
    Ok(match &io.config {
        Some(path) => Config::load(path)?,
        None => Config::empty(),
    })
}

fn resolve_format(
    cfg: &mut Config,
    flag: Option<Format>,
    default: Format,
) -> Result<Format, String> {
    Ok(cfg
        .resolve_with(flag, "format", parse_format)?
        .unwrap_or(default))
}

fn solve(a: f64, n_trunc: usize, tol: f64) -> Result<Wave, CliError> {
    solve_wave(a, n_trunc, tol).map_err(lib_err)
}

fn run_wave(args: WaveArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.io)?;
    let a = require(cfg.resolve(args.a, "a")?, "--a", "a")?;
    let n_trunc = cfg
        .resolve(args.n_trunc, "n_trunc")?
        .unwrap_or(kpbloch::waves::DEFAULT_N_TRUNC);
    let tol = cfg.resolve(args.tol, "tol")?.unwrap_or(DEFAULT_TOL);
    let format = resolve_format(&mut cfg, args.io.format, Format::Json)?;
    cfg.finish()?;

    let w = solve(a, n_trunc, tol)?;
    let mut out = make_writer(&args.io.out)?;
    match format {
        Format::Json => {
            let doc = JsonObject::new()
                .num("a", w.a)
                .int("n_trunc", w.n_trunc as i64)
                .num("k_sq", w.k_sq)
                .num("residual", w.residual)
                .raw("cosine", json_nums(w.cosine_amplitudes()));
            writeln!(out, "{}", doc.render())?;
        }
        Format::Csv => {
            writeln!(
                out,
                "# kpb wave: a={} n_trunc={} k_sq={} residual={}",
                f64s(w.a),
                w.n_trunc,
                f64s(w.k_sq),
                f64s(w.residual)
            )?;
            writeln!(out, "n,amplitude")?;
            for (n, amp) in w.cosine_amplitudes().into_iter().enumerate() {
                writeln!(out, "{n},{}", f64s(amp))?;
            }
        }
    }
    Ok(out.flush()?)
}

fn sorted_eigenvalues(report: &kpbloch::spectra::SpectrumReport) -> Vec<(f64, f64)> {
    let mut eigs: Vec<(f64, f64)> = report.eigenvalues.iter().map(|z| (z.re, z.im)).collect();
    eigs.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
    eigs
}

fn run_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.io)?;
    let a = require(cfg.resolve(args.a, "a")?, "--a", "a")?;
    let sigma = cfg.resolve(args.sigma, "sigma")?.unwrap_or(1);
    let gamma = cfg.resolve(args.gamma, "gamma")?.unwrap_or(0.0);
    let ell = require(cfg.resolve(args.ell, "ell")?, "--ell", "ell")?;
    let n_trunc = cfg
        .resolve(args.n_trunc, "n_trunc")?
        .unwrap_or(DEFAULT_SPECTRUM_N_TRUNC);
    let re_tol = cfg.resolve(args.re_tol, "re_tol")?.unwrap_or(DEFAULT_RE_TOL);
    let format = resolve_format(&mut cfg, args.io.format, Format::Json)?;
    cfg.finish()?;

    let w = solve(a, n_trunc, DEFAULT_TOL)?;
    let (rec, report) = record_at(&w, sigma, gamma, ell, n_trunc, re_tol).map_err(lib_err)?;
    let eigs = sorted_eigenvalues(&report);
    let mut out = make_writer(&args.io.out)?;
    match format {
        Format::Json => {
            let doc = JsonObject::new()
                .num("a", a)
                .int("sigma", sigma as i64)
                .num("gamma", gamma)
                .num("ell", ell)
                .int("n_trunc", n_trunc as i64)
                .num("re_tol", re_tol)
                .num("max_real_part", rec.max_real_part)
                .int("unstable_count", rec.unstable_count as i64)
                .int("negative_count", rec.negative_count as i64)
                .bool("l_invertible", rec.l_invertible)
                .bool("krein_ok", rec.krein_ok)
                .num(
                    "symmetry_residual_imag_axis",
                    report.symmetry_residual_imag_axis,
                )
                .opt_num(
                    "symmetry_residual_real_axis",
                    report.symmetry_residual_real_axis,
                )
                .raw("eigenvalues", json_pairs(eigs.iter().copied()));
            writeln!(out, "{}", doc.render())?;
        }
        Format::Csv => {
            writeln!(
                out,
                "# kpb spectrum: a={} sigma={sigma} gamma={} ell={} n_trunc={n_trunc}",
                f64s(a),
                f64s(gamma),
                f64s(ell)
            )?;
            writeln!(
                out,
                "# max_re={} k_u={} n_L={} l_invertible={} krein_ok={}",
                f64s(rec.max_real_part),
                rec.unstable_count,
                rec.negative_count,
                rec.l_invertible,
                rec.krein_ok
            )?;
            writeln!(out, "re,im")?;
            for &(re, im) in &eigs {
                writeln!(out, "{},{}", f64s(re), f64s(im))?;
            }
        }
    }
    Ok(out.flush()?)
}

fn run_scan(args: ScanArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.io)?;
    let a = require(cfg.resolve(args.a, "a")?, "--a", "a")?;
    let sigma = cfg.resolve(args.sigma, "sigma")?.unwrap_or(1);
    let gamma = cfg.resolve(args.gamma, "gamma")?;
    let gamma_range = cfg.resolve_with(args.gamma_range, "gamma_range", parse_range)?;
    let ell_range = require(
        cfg.resolve_with(args.ell_range, "ell_range", parse_range)?,
        "--ell-range",
        "ell_range",
    )?;
    let n_trunc = cfg
        .resolve(args.n_trunc, "n_trunc")?
        .unwrap_or(DEFAULT_SPECTRUM_N_TRUNC);
    let re_tol = cfg.resolve(args.re_tol, "re_tol")?.unwrap_or(DEFAULT_RE_TOL);
    let format = resolve_format(&mut cfg, args.io.format, Format::Csv)?;
    cfg.finish()?;

    let gammas = match (gamma, gamma_range) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "gamma and gamma_range both given; choose one".to_string(),
            ))
        }
        (_, Some(r)) => r.points("gamma-range")?,
        (g, None) => vec![g.unwrap_or(0.0)],
    };
    let ells = ell_range.points("ell-range")?;
    let w = solve(a, n_trunc, DEFAULT_TOL)?;
    let mut out = make_writer(&args.io.out)?;

    match format {
        Format::Csv => {
            writeln!(
                out,
                "# kpb scan: a={} sigma={sigma} n_trunc={n_trunc} re_tol={}",
                f64s(a),
                f64s(re_tol)
            )?;
            writeln!(out, "gamma,ell,max_re,k_u,n_L,krein_ok")?;
            // One gamma chunk at a time, flushed as soon as it is done, so
            // long sweeps stream and a late failure keeps earlier rows.
            for &g in &gammas {
                match scan(&w, sigma, &[g], &ells, n_trunc, re_tol) {
                    Ok(records) => {
                        for r in records {
                            writeln!(
                                out,
                                "{},{},{},{},{},{}",
                                f64s(r.gamma),
                                f64s(r.ell),
                                f64s(r.max_real_part),
                                r.unstable_count,
                                r.negative_count,
                                r.krein_ok
                            )?;
                        }
                        out.flush()?;
                    }
                    Err(e) => {
                        writeln!(out, "# error: {e}")?;
                        out.flush()?;
                        return Err(lib_err(e));
                    }
                }
            }
        }
        Format::Json => {
            let records = scan(&w, sigma, &gammas, &ells, n_trunc, re_tol).map_err(lib_err)?;
            let rows = json_rows(records.iter().map(|r| {
                JsonObject::new()
                    .num("gamma", r.gamma)
                    .num("ell", r.ell)
                    .num("max_re", r.max_real_part)
                    .int("k_u", r.unstable_count as i64)
                    .int("n_L", r.negative_count as i64)
                    .bool("l_invertible", r.l_invertible)
                    .bool("krein_ok", r.krein_ok)
                    .render()
            }));
            let doc = JsonObject::new()
                .num("a", a)
                .int("sigma", sigma as i64)
                .int("n_trunc", n_trunc as i64)
                .num("re_tol", re_tol)
                .raw("records", rows);
            writeln!(out, "{}", doc.render())?;
        }
    }
    Ok(out.flush()?)
}

fn run_boundary(args: BoundaryArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.io)?;
    let a = require(cfg.resolve(args.a, "a")?, "--a", "a")?;
    let sigma = cfg.resolve(args.sigma, "sigma")?.unwrap_or(1);
    let gamma = cfg.resolve(args.gamma, "gamma")?.unwrap_or(0.0);
    let bracket = require(
        cfg.resolve_with(args.ell_range, "ell_range", parse_range)?,
        "--ell-range",
        "ell_range",
    )?
    .bracket();
    let bisect_tol = cfg
        .resolve(args.bisect_tol, "bisect_tol")?
        .unwrap_or(DEFAULT_BISECT_TOL);
    let format = resolve_format(&mut cfg, args.io.format, Format::Json)?;
    cfg.finish()?;

    let w = solve(a, DEFAULT_SPECTRUM_N_TRUNC, DEFAULT_TOL)?;
    let r = find_critical_ell(&w, sigma, gamma, bracket, bisect_tol).map_err(lib_err)?;
    let mut out = make_writer(&args.io.out)?;
    match format {
        Format::Json => {
            let doc = JsonObject::new()
                .num("a", a)
                .int("sigma", sigma as i64)
                .num("gamma", gamma)
                .num("critical_ell", r.critical_ell)
                .num("bracket_lo", r.bracket.0)
                .num("bracket_hi", r.bracket.1)
                .int("iterations", r.iterations as i64)
                .num("predictor", r.predictor)
                .num("relative_gap", r.relative_gap);
            writeln!(out, "{}", doc.render())?;
        }
        Format::Csv => {
            writeln!(out, "critical_ell,bracket_lo,bracket_hi,iterations,predictor,relative_gap")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                f64s(r.critical_ell),
                f64s(r.bracket.0),
                f64s(r.bracket.1),
                r.iterations,
                f64s(r.predictor),
                f64s(r.relative_gap)
            )?;
        }
    }
    Ok(out.flush()?)
}

fn run_bubble(args: BubbleArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.io)?;
    let a = require(cfg.resolve(args.a, "a")?, "--a", "a")?;
    let gamma = require(cfg.resolve(args.gamma, "gamma")?, "--gamma", "gamma")?;
    let step = cfg.resolve(args.step, "step")?;
    let format = resolve_format(&mut cfg, args.io.format, Format::Json)?;
    cfg.finish()?;

    let step = match step {
        Some(s) => s,
        None => eps_a(gamma, a).map_err(lib_err)? / 8.0,
    };
    let w = solve(a, DEFAULT_SPECTRUM_N_TRUNC, DEFAULT_TOL)?;
    let b = find_bubble(&w, 1, gamma, step).map_err(lib_err)?;
    let mut out = make_writer(&args.io.out)?;
    match format {
        Format::Json => {
            let doc = JsonObject::new()
                .num("a", a)
                .num("gamma", gamma)
                .num("step", step)
                .num("ell_sq_lo", b.ell_sq_lo)
                .num("ell_sq_hi", b.ell_sq_hi)
                .num("center_ell_sq", b.center_ell_sq)
                .num("half_width_ell_sq", b.half_width_ell_sq)
                .num("predicted_center_ell_sq", b.prediction.center_ell_sq)
                .num(
                    "predicted_half_width_ell_sq",
                    b.prediction.half_width_ell_sq,
                )
                .num("center_rel_gap", b.center_rel_gap)
                .num("half_width_rel_gap", b.half_width_rel_gap);
            writeln!(out, "{}", doc.render())?;
        }
        Format::Csv => {
            writeln!(
                out,
                "ell_sq_lo,ell_sq_hi,center_ell_sq,half_width_ell_sq,center_rel_gap,half_width_rel_gap"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                f64s(b.ell_sq_lo),
                f64s(b.ell_sq_hi),
                f64s(b.center_ell_sq),
                f64s(b.half_width_ell_sq),
                f64s(b.center_rel_gap),
                f64s(b.half_width_rel_gap)
            )?;
        }
    }
    Ok(out.flush()?)
}

fn run_collisions(args: CollisionsArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.io)?;
    let pairs = cfg
        .resolve(args.pairs, "pairs")?
        .unwrap_or_else(|| "1:1,2:1,3:1,2:2".to_string());
    let format = resolve_format(&mut cfg, args.io.format, Format::Csv)?;
    cfg.finish()?;

    let pairs = parse_pairs(&pairs)?;
    let mut rows = Vec::new();
    for &(m, p) in &pairs {
        let predicted_sq = ell_mp_sq(m, p);
        let bracket = if predicted_sq == 0.0 {
            (0.0, 1.0)
        } else {
            let target = predicted_sq.sqrt();
            (0.5 * target, 1.5 * target)
        };
        let ell = collision_locator(m, p, bracket, -1).map_err(lib_err)?;
        rows.push((m, p, ell, predicted_sq));
    }
    let mut out = make_writer(&args.io.out)?;
    match format {
        Format::Csv => {
            writeln!(out, "m,p,ell,ell_sq,predicted_ell_sq")?;
            for (m, p, ell, predicted_sq) in rows {
                writeln!(
                    out,
                    "{m},{p},{},{},{}",
                    f64s(ell),
                    f64s(ell * ell),
                    f64s(predicted_sq)
                )?;
            }
        }
        Format::Json => {
            let items = json_rows(rows.iter().map(|&(m, p, ell, predicted_sq)| {
                JsonObject::new()
                    .int("m", m as i64)
                    .int("p", p as i64)
                    .num("ell", ell)
                    .num("ell_sq", ell * ell)
                    .num("predicted_ell_sq", predicted_sq)
                    .render()
            }));
            let doc = JsonObject::new().raw("collisions", items);
            writeln!(out, "{}", doc.render())?;
        }
    }
    Ok(out.flush()?)
}

fn run_dispersion(args: DispersionArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.io)?;
    let sigma = cfg.resolve(args.sigma, "sigma")?.unwrap_or(1);
    let ell = require(cfg.resolve(args.ell, "ell")?, "--ell", "ell")?;
    let k_range = cfg
        .resolve_with(args.k_range, "k_range", parse_range)?
        .unwrap_or(RangeSpec {
            lo: 0.1,
            hi: 2.5,
            count: Some(256),
        });
    let format = resolve_format(&mut cfg, args.io.format, Format::Csv)?;
    cfg.finish()?;

    let samples = k_range
        .count
        .ok_or_else(|| "k-range needs lo:hi:count".to_string())?;
    let rows = dispersion_curve(sigma, ell, k_range.bracket(), samples).map_err(lib_err)?;
    let mut out = make_writer(&args.io.out)?;
    match format {
        Format::Csv => {
            writeln!(out, "# kpb dispersion: sigma={sigma} ell={}", f64s(ell))?;
            writeln!(out, "k,omega,mu")?;
            for (k, omega, mu) in rows {
                writeln!(out, "{},{},{}", f64s(k), f64s(omega), f64s(mu))?;
            }
        }
        Format::Json => {
            let items = json_rows(
                rows.iter()
                    .map(|&(k, om, mu)| format!("[{}, {}, {}]", f64s(k), f64s(om), f64s(mu))),
            );
            let doc = JsonObject::new()
                .int("sigma", sigma as i64)
                .num("ell", ell)
                .raw("rows", items);
            writeln!(out, "{}", doc.render())?;
        }
    }
    Ok(out.flush()?)
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::empty(),
    };
    let quick = cfg.resolve_switch(args.quick, "quick")?;
    cfg.finish()?;

    let criteria = verify::run_all(quick);
    let mut out = make_writer(&args.out)?;
    for c in &criteria {
        writeln!(out, "{}", c.line())?;
    }
    out.flush()?;
    if verify::all_passed(&criteria) {
        Ok(())
    } else {
        let failed = criteria.iter().filter(|c| !c.passed).count();
        Err(CliError::Compute(format!(
            "{failed} of {} criteria failed",
            criteria.len()
        )))
    }
}
