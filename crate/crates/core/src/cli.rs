//! `solve`, `probe` and `bench` commands behind the `fracdiff` binary.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical rejection,
//! 4 probe failure, 1 for I/O failures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    alpha_limit_probe, contraction_probe, envelope_probe, format_float, max_principle_probe, max_principle_sweep,
    regularity_probe, rl_limit_probe, ProbeReport, Window,
};
use crate::barriers::{barrier_envelope, EnvelopeOptions};
use crate::config::{ConfigError, ProbeKind, RunConfig};
use crate::error::Error;
use crate::grid::{Field, Grid1D};
use crate::problem::ProblemSpec;
use crate::solver::{build_weights, solve_with, ApplyMode, OperatorWeights, RunMeta, SolutionRecord};

#[derive(Debug, Parser)]
#[command(name = "fracdiff", version, about = "Space-fractional diffusion solver and probes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve to the horizon; writes solution.csv and meta.json.
    Solve(RunArgs),
    /// Run the configured probes; writes one CSV per probe.
    Probe(RunArgs),
    /// Time naive against fast operator application; writes bench.csv.
    Bench(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `output.dir`.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical rejection: {0}")]
    Numerical(Error),
    #[error("invalid problem: {0}")]
    Problem(Error),
    #[error("{0}")]
    ProbeFailure(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) | CliError::Problem(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::ProbeFailure(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Unstable { .. } | Error::NotMonotone { .. } | Error::NonFinite { .. } | Error::Degenerate(_) => {
                CliError::Numerical(e)
            }
            _ => CliError::Problem(e),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => load(a).and_then(|c| cmd_solve(&c)),
        Command::Probe(a) => load(a).and_then(|c| cmd_probe(&c)),
        Command::Bench(a) => load(a).and_then(|c| cmd_bench(&c)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Reads the config and applies command-line overrides.
pub fn load(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::from_path(&args.config)?;
    if let Some(dir) = &args.output_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn setup(cfg: &RunConfig) -> Result<(ProblemSpec, OperatorWeights), CliError> {
    let spec = cfg.problem.build()?;
    let grid = Grid1D::new(spec.length(), cfg.n_cells)?;
    let w = build_weights(&grid, spec.order())?.with_mode(cfg.apply_mode);
    Ok((spec, w))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(contents.as_bytes()).map_err(io_err(path))
}

/// `t,x,u` rows, time-major.
pub fn solution_csv(rec: &SolutionRecord) -> String {
    let mut out = String::from("t,x,u\n");
    let nodes = rec.grid().nodes();
    for (t, u) in rec.times().iter().zip(rec.frames()) {
        for (x, v) in nodes.iter().zip(u.values()) {
            out.push_str(&format!("{},{},{}\n", format_float(*t), format_float(*x), format_float(*v)));
        }
    }
    out
}

#[derive(Serialize)]
struct SolveMeta<'a> {
    #[serde(flatten)]
    run: &'a RunMeta,
    seed: u64,
    sup_norm: f64,
}

/// Solves the configured problem and writes `solution.csv` and `meta.json`.
pub fn cmd_solve(cfg: &RunConfig) -> Result<(), CliError> {
    let (spec, w) = setup(cfg)?;
    let rec = solve_with(&spec, &w, cfg.dt_safety)?;
    let dir = &cfg.output_dir;
    write_file(&dir.join("solution.csv"), &solution_csv(&rec))?;
    let meta = SolveMeta {
        run: rec.meta(),
        seed: cfg.seed,
        sup_norm: rec.sup_norm(),
    };
    let json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    write_file(&dir.join("meta.json"), &(json + "\n"))?;
    println!(
        "solved {} (alpha = {}, N = {}, {} steps) -> {}",
        spec.name(),
        spec.alpha(),
        cfg.n_cells,
        rec.meta().n_steps,
        dir.display()
    );
    Ok(())
}

/// Runs every configured probe; fails with exit code 4 if any probe fails.
pub fn cmd_probe(cfg: &RunConfig) -> Result<(), CliError> {
    let reports = run_probes(cfg)?;
    let mut failed = Vec::new();
    for mut r in reports {
        r.write_csv(&cfg.output_dir).map_err(io_err(&cfg.output_dir))?;
        let verdict = match (&r.skipped, r.passed()) {
            (Some(why), _) => format!("SKIP ({why})"),
            (None, true) => "PASS".into(),
            (None, false) => "FAIL".into(),
        };
        println!("{:<24} {verdict}", r.name);
        if !r.passed() {
            failed.push(r.name.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ProbeFailure(format!("probes failed: {}", failed.join(", "))))
    }
}

/// Reports of the configured probes, in configuration order.
pub fn run_probes(cfg: &RunConfig) -> Result<Vec<ProbeReport>, CliError> {
    let (spec, w) = setup(cfg)?;
    let grid = w.grid().clone();
    let mut solution: Option<SolutionRecord> = None;
    let mut reports = Vec::new();
    for &probe in &cfg.probes {
        match probe {
            ProbeKind::MaxPrinciple => {
                let r = match &cfg.probe.max_principle_field {
                    Some(e) => max_principle_probe(&grid.sample(|x| e.eval(x, 0.0))?, spec.order())?,
                    None => max_principle_sweep(&grid, spec.order(), cfg.probe.max_principle_samples, cfg.seed)?,
                };
                reports.push(r);
            }
            ProbeKind::Contraction => {
                let mut other = cfg.problem.clone();
                if cfg.probe.contraction_source.is_some() {
                    other.source = cfg.probe.contraction_source.clone();
                }
                if cfg.probe.contraction_boundary.is_some() {
                    other.boundary = cfg.probe.contraction_boundary.clone();
                }
                let spec2 = other.build()?;
                reports.push(contraction_probe(&spec, &spec2, &grid, cfg.dt_safety)?);
            }
            ProbeKind::AlphaLimit => {
                for &reference in &cfg.probe.alpha_limit_references {
                    let alphas = match reference {
                        crate::analysis::LimitReference::Advection => &cfg.probe.alpha_limit_to_zero,
                        crate::analysis::LimitReference::Heat => &cfg.probe.alpha_limit_to_one,
                    };
                    reports.push(alpha_limit_probe(
                        &spec,
                        alphas,
                        reference,
                        &grid,
                        Window::default(),
                        cfg.dt_safety,
                    )?);
                }
            }
            ProbeKind::RlLimit => {
                reports.push(rl_limit_probe(
                    cfg.probe.rl_function,
                    &grid,
                    &cfg.probe.rl_to_zero,
                    &cfg.probe.rl_to_one,
                )?);
            }
            ProbeKind::Regularity => {
                let rec = cached_solution(&mut solution, &spec, &w, cfg.dt_safety)?;
                reports.push(regularity_probe(rec, &spec, cfg.probe.regularity_tolerance)?);
            }
            ProbeKind::Envelope => {
                let rec = cached_solution(&mut solution, &spec, &w, cfg.dt_safety)?;
                let (lower, upper) = barrier_envelope(&spec, &w, rec.times(), &EnvelopeOptions::default())?;
                reports.push(envelope_probe(rec, &lower, &upper)?);
            }
        }
    }
    Ok(reports)
}

fn cached_solution<'a>(
    slot: &'a mut Option<SolutionRecord>,
    spec: &ProblemSpec,
    w: &OperatorWeights,
    dt_safety: f64,
) -> Result<&'a SolutionRecord, CliError> {
    if slot.is_none() {
        *slot = Some(solve_with(spec, w, dt_safety)?);
    }
    Ok(slot.as_ref().expect("filled above"))
}

/// One `bench.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n_cells: usize,
    pub mode: ApplyMode,
    pub median_ns: u128,
    pub checksum: f64,
}

/// Times naive and fast application on a seeded random field per size.
/// The checksum is `Σ_i |(W u)_i|`.
pub fn run_bench(cfg: &RunConfig) -> Result<Vec<BenchRow>, CliError> {
    let spec = cfg.problem.build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for &n in &cfg.bench.sizes {
        let grid = Grid1D::new(spec.length(), n)?;
        let w = build_weights(&grid, spec.order())?;
        let values: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let u = Field::new(grid, values)?;
        for mode in [ApplyMode::Naive, ApplyMode::Fast] {
            let mut times = Vec::with_capacity(cfg.bench.repeats);
            let mut out = None;
            for _ in 0..cfg.bench.repeats {
                let start = Instant::now();
                let r = match mode {
                    ApplyMode::Fast => w.apply_fast(&u)?,
                    _ => w.apply_naive(&u)?,
                };
                times.push(start.elapsed().as_nanos());
                out = Some(r);
            }
            times.sort_unstable();
            let checksum = out.expect("at least one repeat").values().iter().map(|v| v.abs()).sum();
            rows.push(BenchRow {
                n_cells: n,
                mode,
                median_ns: times[times.len() / 2],
                checksum,
            });
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("N,mode,median_ns,checksum\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n_cells,
            r.mode.name(),
            r.median_ns,
            format_float(r.checksum)
        ));
    }
    out
}

/// Least-squares slope of `log median_ns` against `log N` for one mode.
pub fn complexity_slope(rows: &[BenchRow], mode: ApplyMode) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.mode == mode && r.median_ns > 0)
        .map(|r| ((r.n_cells as f64).ln(), (r.median_ns as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}

/// Largest relative checksum gap between modes over all sizes.
pub fn checksum_gap(rows: &[BenchRow]) -> f64 {
    let mut gap = 0.0f64;
    for r in rows.iter().filter(|r| r.mode == ApplyMode::Naive) {
        for s in rows.iter().filter(|s| s.n_cells == r.n_cells && s.mode != ApplyMode::Naive) {
            gap = gap.max((r.checksum - s.checksum).abs() / r.checksum.abs().max(f64::MIN_POSITIVE));
        }
    }
    gap
}

/// Writes `bench.csv` and `bench_fit.csv`; fails with exit code 4 when the
/// checksums of the two modes differ by more than `1e-10` relative.
pub fn cmd_bench(cfg: &RunConfig) -> Result<(), CliError> {
    const CHECKSUM_TOL: f64 = 1e-10;
    let rows = run_bench(cfg)?;
    let dir = &cfg.output_dir;
    write_file(&dir.join("bench.csv"), &bench_csv(&rows))?;
    let (naive, fast) = (
        complexity_slope(&rows, ApplyMode::Naive),
        complexity_slope(&rows, ApplyMode::Fast),
    );
    let gap = checksum_gap(&rows);
    write_file(
        &dir.join("bench_fit.csv"),
        &format!(
            "mode,loglog_slope\nnaive,{}\nfast,{}\n",
            format_float(naive),
            format_float(fast)
        ),
    )?;
    for r in &rows {
        println!("N = {:>6}  {:<5}  {:>12} ns", r.n_cells, r.mode.name(), r.median_ns);
    }
    println!("log-log slope: naive {naive:.2}, fast {fast:.2}; checksum gap {gap:.2e}");
    if gap > CHECKSUM_TOL {
        return Err(CliError::ProbeFailure(format!(
            "checksums differ across modes by {gap:.3e} (tolerance {CHECKSUM_TOL:e})"
        )));
    }
    Ok(())
}
