//! `mbrlab`: ground-state sweeps, tomography simulation, MUB checks, bound
//! calculators and the self-test suite.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mbr_core::analysis::{
    depth_bounds, gaussian_volume_approx, haar_volume_mc, lcu_simulate, lcu_success_bound, sparse_volume_prob,
    DepthParams, LcuInstance, LcuMode, VolumeQuery,
};
use mbr_core::groundstate::{linspace, tfim_sweep, ExactMethod, GraphSpec, PipelineOptions};
use mbr_core::mbrstate::{assemble, load_mbr, random_mbr, MbrState};
use mbr_core::mub::verify_mub;
use mbr_core::qcore::{parse_circuit, Circuit};
use mbr_core::selftest::{run_all, SuiteMode};
use mbr_core::tomography::{tomography_pipeline, GramMode, TomographyConfig};
use serde_json::json;

use output::{csv, emit, json, num};

#[derive(Parser, Debug)]
#[command(name = "mbrlab", version, about = "Multiple-basis representation toolkit")]
struct Cli {
    /// Master seed for every stochastic step (decimal or 0x-prefixed hex).
    #[arg(long, global = true, value_parser = parse_seed, default_value = "0xA11CE")]
    seed: u64,
    /// Progress messages on standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// TFIM ground-state sweep over the transverse field.
    Groundstate(GroundArgs),
    /// Simulated tomography of an MBR state.
    Tomography(TomoArgs),
    /// Mutually unbiased basis utilities.
    Mub {
        #[command(subcommand)]
        cmd: MubCmd,
    },
    /// Bound calculators.
    Analysis {
        #[command(subcommand)]
        cmd: AnalysisCmd,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Reduced sizes, skipping the long ground-state sweeps.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args, Debug)]
struct GroundArgs {
    /// Graph file: `nodes N` then one `u v` edge per line.
    #[arg(long, conflicts_with = "lattice", required_unless_present = "lattice")]
    graph: Option<PathBuf>,
    /// Open-boundary square lattice such as `4x4`.
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    j: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    h_min: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    h_max: f64,
    #[arg(long, default_value_t = 25)]
    h_steps: usize,
    /// Hamming radius, or a comma-separated list of radii.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    dh: Vec<usize>,
    /// Per-basis support cap.
    #[arg(long, default_value_t = 4096)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = ExactArg::Auto)]
    exact: ExactArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExactArg {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Args, Debug)]
struct TomoArgs {
    /// MBR JSON file holding the true state.
    #[arg(long, conflicts_with = "random_mbr", required_unless_present = "random_mbr")]
    state: Option<PathBuf>,
    /// Random truth `n,B,K,seed`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    random_mbr: Option<Vec<u64>>,
    /// Directory of circuit files, taken in file-name order. Defaults to the truth's own bases.
    #[arg(long)]
    bases: Option<PathBuf>,
    #[arg(long = "M", default_value_t = 100_000)]
    m: u64,
    #[arg(long = "MH", default_value_t = 1_000_000)]
    m_h: u64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::ExactF)]
    mode: ModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    #[value(name = "exact-F")]
    ExactF,
    #[value(name = "noisy-F")]
    NoisyF,
}

#[derive(Subcommand, Debug)]
enum MubCmd {
    /// Check whether two circuits define mutually unbiased bases.
    Verify {
        #[arg(long)]
        circuit_a: PathBuf,
        #[arg(long)]
        circuit_b: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum AnalysisCmd {
    /// Sparse-approximation volume: beta function, Gaussian and Monte-Carlo.
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        k: usize,
        /// `lo:hi:count`.
        #[arg(long, default_value = "0:1:50")]
        eps_grid: String,
        /// Zero skips the Monte-Carlo columns.
        #[arg(long, default_value_t = 20_000)]
        mc_trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// LCU success probability of an MBR file and its bounds.
    Lcu {
        #[arg(long)]
        mbr: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gate-count and depth estimates.
    Depth {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("bad seed {s:?}: {e}"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn groundstate(a: &GroundArgs, verbose: bool) -> Result<()> {
    let graph = match (&a.graph, &a.lattice) {
        (Some(p), _) => GraphSpec::parse(&read(p)?)?,
        (None, Some(l)) => GraphSpec::lattice_from_label(l)?,
        (None, None) => bail!("one of --graph or --lattice is required"),
    };
    if a.h_steps == 0 {
        bail!("--h-steps must be positive");
    }
    let hs = linspace(a.h_min, a.h_max, a.h_steps);
    let exact = match a.exact {
        ExactArg::Auto => ExactMethod::Auto,
        ExactArg::Dense => ExactMethod::Dense,
        ExactArg::Lanczos => ExactMethod::Lanczos,
    };
    let opts = PipelineOptions { cap: a.cap, exact, ..PipelineOptions::default() };
    if verbose {
        eprintln!("sweeping {} field values on {} nodes", hs.len(), graph.n_nodes());
    }
    let recs = tfim_sweep(&graph, a.j, &hs, &a.dh, &opts)?;
    if recs.iter().any(|r| r.truncated) {
        eprintln!("warning: some Hamming balls were truncated at --cap {}", a.cap);
    }
    let rows = recs.iter().map(|r| {
        vec![num(r.h), num(r.j), r.dh.to_string(), r.subspace_dim.to_string(), num(r.e_mbr), num(r.e_exact), num(r.gap.abs())]
    });
    let text = csv(&["h", "J", "dh", "subspace_dim", "e_mbr", "e_exact", "abs_gap"], None, rows);
    emit(a.out.as_deref(), &text)
}

fn load_bases(dir: &Path) -> Result<Vec<Circuit>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    if files.is_empty() {
        bail!("no circuit files in {}", dir.display());
    }
    files.iter().map(|p| parse_circuit(&read(p)?).with_context(|| format!("parsing {}", p.display()))).collect()
}

fn tomography(a: &TomoArgs, seed: u64) -> Result<()> {
    let truth: MbrState = match (&a.state, &a.random_mbr) {
        (Some(p), _) => load_mbr(&read(p)?)?,
        (None, Some(v)) => {
            let [n, b, k, s] = v[..] else { bail!("--random-mbr expects n,B,K,seed") };
            random_mbr(n as usize, b as usize, k as usize, s)?
        }
        (None, None) => bail!("one of --state or --random-mbr is required"),
    };
    let bases = match &a.bases {
        Some(dir) => load_bases(dir)?,
        None => truth.bases().to_vec(),
    };
    let state = assemble(&truth)?.normalize()?;
    let mode = match a.mode {
        ModeArg::ExactF => GramMode::ExactF,
        ModeArg::NoisyF => GramMode::NoisyF,
    };
    let cfg = TomographyConfig { m: a.m, m_h: a.m_h, eps: a.eps, delta: a.delta, seed, mode };
    let report = tomography_pipeline(&state, &bases, &cfg)?;
    if report.supports_certified.iter().any(|c| !c) {
        eprintln!("warning: some supports were not certified at delta = {}", a.delta);
    }
    emit(a.out.as_deref(), &json(&report.to_json())?)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, count] = parts[..] else { bail!("--eps-grid must look like lo:hi:count, got {spec:?}") };
    let (lo, hi): (f64, f64) = (lo.parse()?, hi.parse()?);
    let count: usize = count.parse()?;
    if count == 0 || !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) {
        bail!("--eps-grid needs 0 <= lo, hi <= 1 and a positive count");
    }
    Ok(linspace(lo, hi, count))
}

fn analysis(cmd: &AnalysisCmd, seed: u64) -> Result<()> {
    match cmd {
        AnalysisCmd::Volume { n, k, eps_grid, mc_trials, out } => {
            let grid = parse_grid(eps_grid)?;
            let rows = grid
                .iter()
                .enumerate()
                .map(|(i, &eps)| {
                    let q = VolumeQuery::new(*n, *k, eps)?;
                    let mut row = vec![num(eps), num(sparse_volume_prob(&q)?), num(gaussian_volume_approx(&q)?)];
                    if *mc_trials > 0 {
                        let mc = haar_volume_mc(&q, *mc_trials, mbr_core::rng::derive_seed(seed, &[i as u64]), false)?;
                        row.extend([num(mc.fraction), num(mc.stderr)]);
                    } else {
                        row.extend([String::new(), String::new()]);
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?;
            let seed_line = (*mc_trials > 0).then_some(seed);
            emit(out.as_deref(), &csv(&["eps", "beta", "gauss", "mc", "mc_stderr"], seed_line, rows))
        }
        AnalysisCmd::Lcu { mbr, out } => {
            let m = load_mbr(&read(mbr)?)?;
            let inst = LcuInstance::from_mbr(&m)?;
            let v = json!({
                "simulated": lcu_simulate(&m)?,
                "bound_general": lcu_success_bound(&inst, LcuMode::General),
                "bound_mub": lcu_success_bound(&inst, LcuMode::Mub),
                "max_offdiag_norm": inst.max_offdiag_norm(),
                "n": inst.n_qubits,
                "K": inst.k,
                "B": inst.n_bases(),
            });
            emit(out.as_deref(), &json(&v)?)
        }
        AnalysisCmd::Depth { params, out } => {
            let p: DepthParams = serde_json::from_str(&read(params)?)?;
            let d = depth_bounds(&p)?;
            let v = json!({
                "order_estimate": {
                    "m_sparse": d.m_sparse,
                    "d_sparse": d.d_sparse,
                    "m_lower": d.m_lower,
                    "d_lower": d.d_lower,
                },
                "d_upper": d.d_upper,
                "params": p,
            });
            emit(out.as_deref(), &json(&v)?)
        }
    }
}

fn mub(cmd: &MubCmd) -> Result<()> {
    match cmd {
        MubCmd::Verify { circuit_a, circuit_b, tol } => {
            let a = parse_circuit(&read(circuit_a)?)?;
            let b = parse_circuit(&read(circuit_b)?)?;
            let r = verify_mub(&a, &b, *tol)?;
            println!("{} max_dev={}", if r.unbiased { "UNBIASED" } else { "NOT_UNBIASED" }, num(r.max_dev));
            Ok(())
        }
    }
}

/// Returns whether every criterion passed.
fn selftest(quick: bool) -> bool {
    let mode = if quick { SuiteMode::Quick } else { SuiteMode::Full };
    let outcomes = run_all(mode);
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria failed", failed, outcomes.len());
    failed == 0
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("MBRLAB_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| anyhow!("MBRLAB_THREADS must be a nonnegative integer, got {v:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<mbr_core::Error>() {
        Some(err) if err.is_numerical() => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    let verbose = cli.verbose > 0;
    if verbose {
        eprintln!("seed {:#x}", cli.seed);
    }
    match &cli.cmd {
        Cmd::Groundstate(a) => groundstate(a, verbose)?,
        Cmd::Tomography(a) => tomography(a, cli.seed)?,
        Cmd::Mub { cmd } => mub(cmd)?,
        Cmd::Analysis { cmd } => analysis(cmd, cli.seed)?,
        Cmd::Selftest { quick } => return Ok(selftest(*quick)),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
