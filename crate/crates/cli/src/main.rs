//! `polycld`: validate meshes, measure them, and compute γ″(r) curves.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use polycld::engine::{
    bin_averages, cld, default_grid, gamma_reconstruct, geometric_breakpoints, CldCurve, EngineOptions, Method,
};
use polycld::export::{curve_csv, estimate_csv, gamma_csv, to_json, write_atomic, Header};
use polycld::mesh::{load_mesh, MeshFormat};
use polycld::oracle::{check_histogram, mc_chords, HistogramCheck};
use polycld::{MeshStats, Polyhedron};

use config::{Failure, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "polycld", version, about = "Chord-length distribution γ″(r) of polyhedra")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "POLYCLD_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a mesh is a watertight, planar, outward-oriented polyhedron.
    Validate {
        path: PathBuf,
        #[arg(long)]
        format: Option<String>,
    },
    /// Print volume, surface area and diameter as JSON.
    Measure {
        path: PathBuf,
        #[arg(long)]
        format: Option<String>,
    },
    /// Compute γ″(r) on an r-grid.
    Compute(RunArgs),
    /// Run every method on the same grid and report the largest deviations.
    Compare(RunArgs),
    /// Rebuild γ(r) from γ″(r) and report γ(0).
    Gamma(RunArgs),
}

/// Flags shared by the curve commands; any of them may come from `--config`.
#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Mesh file (OFF or OBJ).
    pub input: Option<PathBuf>,
    /// key=value file supplying defaults for the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Mesh format: off | obj (default: from the extension).
    #[arg(long)]
    pub format: Option<String>,
    /// mc | direct2d | reduced1d | analytic | auto
    #[arg(long)]
    pub method: Option<String>,
    /// Number of grid points.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub r_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r_max: Option<f64>,
    /// Insert grid points on both sides of every geometric breakpoint.
    #[arg(long)]
    pub auto_breakpoints: Option<bool>,
    /// Monte Carlo chord count.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    pub output_format: Option<String>,
    /// Relative tolerance between deterministic methods in `compare`.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn start_pool(threads: Option<usize>) -> Result<(), Failure> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Run(format!("cannot start worker pool: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let resolve = |args| -> Result<RunConfig, Failure> {
        let cfg = RunConfig::resolve(args, cli.threads)?;
        start_pool(cfg.threads)?;
        Ok(cfg)
    };
    match cli.command {
        Command::Validate { path, format } => validate(&path, config::parse_format(format.as_deref())?),
        Command::Measure { path, format } => measure(&path, config::parse_format(format.as_deref())?),
        Command::Compute(args) => compute(&resolve(args)?),
        Command::Compare(args) => compare(&resolve(args)?),
        Command::Gamma(args) => gamma(&resolve(args)?),
    }
}

fn validate(path: &Path, format: Option<MeshFormat>) -> Result<ExitCode, Failure> {
    match load_mesh(path, format) {
        Ok(p) => {
            let s = p.stats();
            println!(
                "valid: {} vertices, {} facets, {}; V={} S={} D={}",
                p.vertices().len(),
                p.facets().len(),
                if p.is_convex() { "convex" } else { "non-convex" },
                sig8(s.volume),
                sig8(s.surface),
                sig8(s.diameter)
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("invalid: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

/// Decimal rounded to 8 significant digits, trailing zeros dropped.
fn sig8(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 7 - x.abs().log10().floor() as i32;
    let s = if digits > 0 { format!("{:.*}", digits as usize, x) } else { format!("{:.0}", x) };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn stats_json(s: &MeshStats) -> String {
    format!("{{\"V\":{},\"S\":{},\"D\":{}}}", sig8(s.volume), sig8(s.surface), sig8(s.diameter))
}

fn measure(path: &Path, format: Option<MeshFormat>) -> Result<ExitCode, Failure> {
    let p = load_mesh(path, format).map_err(|e| Failure::Run(e.to_string()))?;
    println!("{}", stats_json(&p.stats()));
    Ok(ExitCode::SUCCESS)
}

fn load(cfg: &RunConfig) -> Result<Polyhedron, Failure> {
    load_mesh(&cfg.input, cfg.format).map_err(|e| Failure::Run(format!("{}: {e}", cfg.input.display())))
}

fn grid(cfg: &RunConfig, p: &Polyhedron) -> Result<Vec<f64>, Failure> {
    let d = p.stats().diameter;
    let bps = if cfg.auto_breakpoints { geometric_breakpoints(p) } else { Vec::new() };
    if cfg.r_min.is_none() && cfg.r_max.is_none() {
        return Ok(default_grid(d, cfg.points, &bps));
    }
    let lo = cfg.r_min.unwrap_or(0.0);
    let hi = cfg.r_max.unwrap_or(d);
    if hi <= lo {
        return Err(Failure::Usage(format!("r_max ({hi}) must exceed r_min ({lo})")));
    }
    let n = cfg.points;
    let mut g: Vec<f64> = if n == 1 {
        vec![hi]
    } else if lo == 0.0 {
        // r = 0 itself is excluded; γ″ is only defined for r > 0
        (1..=n).map(|k| hi * k as f64 / n as f64).collect()
    } else {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    };
    for b in bps {
        for x in [b - 1e-6 * d, b + 1e-6 * d] {
            if x > lo && x < hi {
                g.push(x);
            }
        }
    }
    g.sort_by(f64::total_cmp);
    g.dedup_by(|b, a| *b - *a <= 1e-12 * d);
    Ok(g)
}

fn header(cfg: &RunConfig, command: &str, stats: &MeshStats) -> Header {
    let mut h = vec![
        ("tool".to_string(), format!("polycld {}", env!("CARGO_PKG_VERSION"))),
        ("command".to_string(), command.to_string()),
        ("config_hash".to_string(), cfg.hash()),
    ];
    h.extend(cfg.pairs());
    h.push(("mesh".to_string(), stats_json(stats)));
    h
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.output {
        Some(path) => write_atomic(path, text).map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn engine_options(cfg: &RunConfig, method: Method) -> EngineOptions {
    let mut o = EngineOptions::with_method(method);
    o.mc_chords = cfg.samples;
    o.mc_seed = cfg.seed;
    o
}

fn run_err(e: polycld::Error) -> Failure {
    Failure::Run(e.to_string())
}

fn report_diagnostics(curve: &CldCurve) {
    for d in &curve.diagnostics {
        eprintln!("note: {}", d.message);
    }
}

fn compute(cfg: &RunConfig) -> Result<ExitCode, Failure> {
    let p = load(cfg)?;
    let stats = p.stats();
    let g = grid(cfg, &p)?;
    let curve = cld(&p, &g, &engine_options(cfg, cfg.method)).map_err(run_err)?;
    report_diagnostics(&curve);
    let h = header(cfg, "compute", &stats);
    let text = match cfg.output_format {
        OutputFormat::Csv => curve_csv(&curve, &h),
        OutputFormat::Json => to_json(&curve, &h).map_err(run_err)? + "\n",
    };
    emit(cfg, &text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Deviation {
    method: &'static str,
    reference: &'static str,
    max_scaled: f64,
    at_r: f64,
}

#[derive(Serialize)]
struct McSummary {
    bins: usize,
    excluded: usize,
    within_3se: usize,
    fraction: f64,
    max_z: f64,
}

#[derive(Serialize)]
struct Comparison {
    r: Vec<f64>,
    curves: Vec<CldCurve>,
    deviations: Vec<Deviation>,
    mc: Option<McSummary>,
    passed: bool,
}

/// max over r of |a − b| / max(1, |b|).
fn deviation(a: &CldCurve, b: &CldCurve) -> (f64, f64) {
    let mut worst = (0.0, a.r.first().copied().unwrap_or(0.0));
    for i in 0..a.r.len() {
        let dev = (a.values[i] - b.values[i]).abs() / b.values[i].abs().max(1.0);
        if dev > worst.0 {
            worst = (dev, a.r[i]);
        }
    }
    worst
}

const MC_FRACTION: f64 = 0.95;

fn compare(cfg: &RunConfig) -> Result<ExitCode, Failure> {
    let p = load(cfg)?;
    let stats = p.stats();
    let g = grid(cfg, &p)?;
    let methods = [Method::Analytic, Method::Reduced1d, Method::Direct2d];
    let mut curves = Vec::new();
    for m in methods {
        let c = cld(&p, &g, &engine_options(cfg, m)).map_err(run_err)?;
        report_diagnostics(&c);
        curves.push(c);
    }
    let mut deviations = Vec::new();
    let mut passed = true;
    for (k, reference) in [(0, 1), (1, 2)] {
        let (dev, at_r) = deviation(&curves[k], &curves[reference]);
        passed &= dev <= cfg.tolerance;
        deviations.push(Deviation { method: methods[k].as_str(), reference: methods[reference].as_str(), max_scaled: dev, at_r });
    }
    let mut mc = None;
    let mut mc_text = String::new();
    if p.is_convex() {
        let edges = bin_edges(&g, stats.diameter);
        let est = mc_chords(&p, cfg.samples, &edges, cfg.seed).map_err(run_err)?;
        let reference = bin_averages(&p, &edges, &EngineOptions::default()).map_err(run_err)?;
        let scale = stats.surface / (4.0 * stats.volume);
        let chk: HistogramCheck = check_histogram(&est, &reference, scale, &geometric_breakpoints(&p), 3.0);
        passed &= chk.fraction() >= MC_FRACTION;
        mc_text = estimate_csv(&est, "mc", &Vec::new());
        mc = Some(McSummary {
            bins: chk.bins,
            excluded: chk.excluded,
            within_3se: chk.within,
            fraction: chk.fraction(),
            max_z: chk.max_z,
        });
    } else {
        eprintln!("note: chord sampling skipped for a non-convex body");
    }

    for d in &deviations {
        eprintln!("{} vs {}: max scaled deviation {:.3e} at r = {}", d.method, d.reference, d.max_scaled, d.at_r);
    }
    if let Some(m) = &mc {
        eprintln!(
            "mc vs analytic bin means: {}/{} bins within 3 SE ({} excluded at breakpoints)",
            m.within_3se,
            m.bins - m.excluded,
            m.excluded
        );
    }
    eprintln!("{}", if passed { "compare: PASS" } else { "compare: FAIL" });

    let mut h = header(cfg, "compare", &stats);
    h.push(("passed".to_string(), passed.to_string()));
    let text = match cfg.output_format {
        OutputFormat::Csv => {
            let mut s = curve_csv(&curves[0], &h);
            for c in &curves[1..] {
                s.push_str(body_only(&curve_csv(c, &Vec::new())));
            }
            s.push_str(body_only(&mc_text));
            s
        }
        OutputFormat::Json => to_json(&Comparison { r: g.clone(), curves, deviations, mc, passed }, &h).map_err(run_err)? + "\n",
    };
    emit(cfg, &text)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Drop the column line so several curves share one table.
fn body_only(csv: &str) -> &str {
    csv.split_once('\n').map(|(_, rest)| rest).unwrap_or("")
}

/// Histogram edges centred on the grid points, clipped to [0, D].
fn bin_edges(g: &[f64], d: f64) -> Vec<f64> {
    let pts: Vec<f64> = g.iter().copied().filter(|r| *r > 0.0 && *r < d).collect();
    let mut e = vec![0.0];
    e.extend(pts.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    e.push(d);
    e.dedup();
    e
}

fn gamma(cfg: &RunConfig) -> Result<ExitCode, Failure> {
    if cfg.r_min.is_some() || cfg.r_max.is_some() {
        return Err(Failure::Usage("gamma integrates over the whole range (0, D); drop r_min/r_max".into()));
    }
    let p = load(cfg)?;
    let stats = p.stats();
    let g = grid(cfg, &p)?;
    let method = if cfg.method == Method::Mc { Method::Auto } else { cfg.method };
    let curve = cld(&p, &g, &engine_options(cfg, method)).map_err(run_err)?;
    report_diagnostics(&curve);
    let rebuilt = gamma_reconstruct(&curve, &stats);
    for w in &rebuilt.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "gamma(0) = {:.8} (expected 1); gamma'(0) = {:.8} (expected {:.8})",
        rebuilt.gamma_at_zero,
        rebuilt.slope_at_zero,
        -stats.surface / (4.0 * stats.volume)
    );
    let mut h = header(cfg, "gamma", &stats);
    h.push(("gamma_at_zero".to_string(), format!("{:.12}", rebuilt.gamma_at_zero)));
    let text = match cfg.output_format {
        OutputFormat::Csv => gamma_csv(&rebuilt, &h),
        OutputFormat::Json => to_json(&rebuilt, &h).map_err(run_err)? + "\n",
    };
    emit(cfg, &text)?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_significant_digits() {
        assert_eq!(sig8(1.0), "1");
        assert_eq!(sig8(6.0), "6");
        assert_eq!(sig8(3f64.sqrt()), "1.7320508");
        assert_eq!(sig8(0.000123456789), "0.00012345679");
        assert_eq!(sig8(123456789.0), "123456789");
    }

    #[test]
    fn edges_cover_the_range() {
        let e = bin_edges(&[0.25, 0.5, 0.75], 1.0);
        assert_eq!(e, vec![0.0, 0.375, 0.625, 1.0]);
    }
}
