//! The acceptance suite as library code, shared by the `acceptance` test
//! target and `mbrlab selftest`.
//!
//! Every check is seeded and reports its own wall time against a budget; a
//! check that is correct but over budget fails.

use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::analysis::{
    chop_probability, haar_volume_mc, lcu_simulate, lcu_success_bound, sparse_volume_prob, LcuInstance, LcuMode,
    VolumeQuery,
};
use crate::error::Result;
use crate::groundstate::{linspace, tfim_sweep, GraphSpec, GroundRecord, PipelineOptions};
use crate::linalg;
use crate::mbrstate::{assemble, fit_weights, gram_of, gram_rank, uk_fidelity, MbrState, SparseState, UkMode};
use crate::mub::{complete_mub_set, local_mub_basis, LocalMubSpec};
use crate::qcore::{dagger, haar_random_state, random_brickwork, Circuit, StateVector};
use crate::tomography::{
    amplitude_error_bound_sq, certify_support, eps_rank, gram_error_bound_sq, sample_in_basis, tomography_pipeline,
    GramMode, TomographyConfig,
};
use crate::{rng, C64};

/// Master seed of the suite.
pub const SUITE_SEED: u64 = 0x5E1F_7E57;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteMode {
    Full,
    /// Smaller grids and trial counts; the two lattice sweeps are skipped.
    Quick,
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.skipped {
            "SKIP"
        } else if self.passed {
            "PASS"
        } else {
            "FAIL"
        };
        write!(
            f,
            "{tag} [{:>2}] {} ({:.2} s of {} s): {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

pub const CRITERIA: [(usize, &str, u64); 12] = [
    (1, "psi_plus_zero exact fit", 1),
    (2, "(U,K)-fidelity bound on complete MUB families", 10),
    (3, "MBR overlap bracket on Haar targets", 120),
    (4, "Gram rank K*B for MUB configurations", 30),
    (5, "sparse volume vs Haar Monte-Carlo", 120),
    (6, "TFIM 4x4 ground-state sweep", 900),
    (7, "finite-size gap trend 3x3 to 4x4", 1200),
    (8, "support certification soundness", 60),
    (9, "Hadamard amplitude and Gram error coverage", 120),
    (10, "tomography end-to-end fidelity", 300),
    (11, "LCU success probability bounds", 60),
    (12, "reduce-and-chop truncation", 60),
];

/// Run one criterion by number (1 to 12).
pub fn run_criterion(id: usize, mode: SuiteMode) -> CriterionOutcome {
    let (_, name, budget) = CRITERIA.iter().copied().find(|c| c.0 == id).expect("criterion id in 1..=12");
    let budget = Duration::from_secs(budget);
    let start = Instant::now();
    let result: Result<Check> = match id {
        1 => c01_psi_plus_zero(),
        2 => c02_uk_fidelity(),
        3 => c03_overlap_bracket(mode),
        4 => c04_gram_rank(),
        5 => c05_volume(mode),
        6 => c06_tfim(mode),
        7 => c07_finite_size(mode),
        8 => c08_certification(mode),
        9 => c09_hadamard_coverage(mode),
        10 => c10_tomography(mode),
        11 => c11_lcu(mode),
        12 => c12_chop(mode),
        _ => unreachable!(),
    };
    let mut elapsed = start.elapsed();
    let (passed, skipped, mut detail) = match result {
        Ok(c) => {
            elapsed += c.extra_time;
            (c.passed, c.skipped, c.detail)
        }
        Err(e) => (false, false, format!("error: {e}")),
    };
    let in_time = elapsed <= budget;
    if !in_time && !skipped {
        detail.push_str("; over time budget");
    }
    CriterionOutcome { id, name, passed: passed && (in_time || skipped), skipped, detail, elapsed, budget }
}

pub fn run_all(mode: SuiteMode) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0, mode)).collect()
}

struct Check {
    passed: bool,
    skipped: bool,
    detail: String,
    /// Time spent in shared cached work attributed to this check.
    extra_time: Duration,
}

impl Check {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, skipped: false, detail, extra_time: Duration::ZERO }
    }

    fn skip(detail: &str) -> Self {
        Self { passed: true, skipped: true, detail: detail.into(), extra_time: Duration::ZERO }
    }
}

/// `(|0…0⟩ + |+…+⟩)` normalized.
pub fn psi_plus_zero(n: usize) -> Result<StateVector> {
    let dim = 1usize << n;
    let h = (dim as f64).sqrt().recip();
    let mut amps = vec![C64::new(h, 0.0); dim];
    amps[0] += 1.0;
    StateVector::unnormalized(amps)?.normalize()
}

/// The `count` bases of an `n`-qubit register obtained by applying the same
/// member of the complete `l`-qubit family to every block. Pairwise unbiased.
pub fn uniform_local_mubs(n: usize, l: usize, count: usize) -> Result<Vec<Circuit>> {
    let family = complete_mub_set(l)?;
    (0..count)
        .map(|c| local_mub_basis(&LocalMubSpec::contiguous(n, l, vec![c; n / l]), &family))
        .collect()
}

fn c01_psi_plus_zero() -> Result<Check> {
    let mut worst = 0.0f64;
    for n in 3..=10 {
        let bases = [Circuit::identity(n), Circuit::hadamard_all(n)];
        let fit = fit_weights(&psi_plus_zero(n)?, &bases, 1)?;
        worst = worst.max((fit.overlap - 1.0).abs());
    }
    Ok(Check::new(worst <= 1e-9, format!("max |overlap - 1| = {worst:.2e} over n = 3..10 (tol 1e-9)")))
}

fn c02_uk_fidelity() -> Result<Check> {
    let mut worst = f64::NEG_INFINITY;
    let mut pairs = 0;
    for l in [1, 2] {
        let fam = complete_mub_set(l)?;
        for (a, ua) in fam.bases.iter().enumerate() {
            for (b, ub) in fam.bases.iter().enumerate() {
                if a == b {
                    continue;
                }
                let u = ua.then(&dagger(ub))?;
                for k in 1..=3 {
                    let f = uk_fidelity(&u, k, UkMode::Exact)?;
                    worst = worst.max(f - k as f64 * 2f64.powf(-(l as f64) / 2.0));
                }
                pairs += 1;
            }
        }
    }
    Ok(Check::new(worst <= 1e-12, format!("{pairs} ordered pairs, max F - K 2^(-n/2) = {worst:.2e} (tol 1e-12)")))
}

fn c03_overlap_bracket(mode: SuiteMode) -> Result<Check> {
    let (ns, targets): (&[usize], usize) = match mode {
        SuiteMode::Full => (&[6, 8, 10], 50),
        SuiteMode::Quick => (&[6, 8], 10),
    };
    let mut total = 0;
    let mut inside = 0;
    let mut worst_margin = f64::INFINITY;
    for &n in ns {
        let all = uniform_local_mubs(n, 2, 3)?;
        for b in [2, 3] {
            for k in [1, 2, 4] {
                let bases = &all[..b];
                let rows = crate::par::try_map_range(targets, |t| {
                    let target = haar_random_state(n, rng::derive_seed(SUITE_SEED, &[3, n as u64, b as u64, k as u64, t as u64]))?;
                    let fit = fit_weights(&target, bases, k)?;
                    let base = fit.partial_overlaps.iter().map(|p| p * p).sum::<f64>().sqrt();
                    let c = (k * b) as f64 / (2.0 * ((1u64 << n) as f64).sqrt());
                    let lo = base * (1.0 - c) - 1e-9;
                    let hi = base * (1.0 + c) + 1e-9;
                    Ok::<_, crate::Error>((fit.overlap >= lo && fit.overlap <= hi, (fit.overlap - lo).min(hi - fit.overlap)))
                })?;
                for (ok, margin) in rows {
                    total += 1;
                    inside += ok as usize;
                    worst_margin = worst_margin.min(margin);
                }
            }
        }
    }
    Ok(Check::new(
        inside == total,
        format!("{inside}/{total} fits inside the bracket, smallest margin {worst_margin:.3e}"),
    ))
}

fn random_supports(n: usize, k: usize, b: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut r = rng::rng_from(seed, &[]);
    (0..b).map(|_| sample(&mut r, 1 << n, k).into_vec()).collect()
}

fn c04_gram_rank() -> Result<Check> {
    let mut configs = 0;
    let mut mismatches = Vec::new();
    for n in [4usize, 6, 8] {
        let root = ((1u64 << n) as f64).sqrt();
        let bases = uniform_local_mubs(n, 2, 5)?;
        for k in 1..=root as usize {
            let b_max = ((root / k as f64 + 1.0).floor() as usize).min(bases.len());
            for b in 1..=b_max {
                for draw in 0..3u64 {
                    let supports = random_supports(n, k, b, rng::derive_seed(SUITE_SEED, &[4, n as u64, k as u64, b as u64, draw]));
                    let f = gram_of(&bases[..b], &supports)?;
                    let r = gram_rank(&f, 1e-9);
                    configs += 1;
                    if r != k * b {
                        mismatches.push(format!("n={n} K={k} B={b}: rank {r}"));
                    }
                }
            }
        }
    }
    let detail = if mismatches.is_empty() {
        format!("{configs} configurations, all rank K*B")
    } else {
        format!("{} of {configs} mismatched, first {}", mismatches.len(), mismatches[0])
    };
    Ok(Check::new(mismatches.is_empty(), detail))
}

/// `(n, K, z)`: `eps` sits `z` standard deviations from the mean discarded mass.
const VOLUME_TRIPLES: [(usize, usize, f64); 10] = [
    (3, 4, 0.0),
    (4, 2, 0.3),
    (4, 8, -0.5),
    (5, 3, 1.0),
    (6, 1, -1.0),
    (6, 10, 0.5),
    (7, 4, 0.0),
    (8, 16, -0.7),
    (9, 2, 0.8),
    (10, 8, 0.2),
];

/// The ten volume queries of the Monte-Carlo comparison.
pub fn volume_queries() -> Result<Vec<VolumeQuery>> {
    VOLUME_TRIPLES
        .iter()
        .map(|&(n, k, z)| {
            let probe = VolumeQuery::new(n, k, 0.0)?;
            let (mean, var) = probe.moments();
            let eps = if n == 3 && k == 4 { 0.5 } else { (mean + z * var.sqrt()).clamp(0.0, 1.0) };
            VolumeQuery::new(n, k, eps)
        })
        .collect()
}

fn c05_volume(mode: SuiteMode) -> Result<Check> {
    let trials = match mode {
        SuiteMode::Full => 20_000,
        SuiteMode::Quick => 5_000,
    };
    let mut worst = 0.0f64;
    let mut ok = true;
    for (i, q) in volume_queries()?.iter().enumerate() {
        let exact = sparse_volume_prob(q)?;
        let mc = haar_volume_mc(q, trials, rng::derive_seed(SUITE_SEED, &[5, i as u64]), false)?;
        let z = (mc.fraction - exact).abs() / mc.stderr.max(f64::MIN_POSITIVE);
        worst = worst.max(z);
        ok &= z <= 3.0;
    }
    Ok(Check::new(ok, format!("10 triples, {trials} trials each, max deviation {worst:.2} standard errors (limit 3)")))
}

struct SweepCache {
    rows: Vec<GroundRecord>,
    elapsed: Duration,
}

fn sweep_4x4() -> Result<&'static SweepCache> {
    static CACHE: OnceLock<std::result::Result<SweepCache, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let start = Instant::now();
            let g = GraphSpec::lattice(4, 4).map_err(|e| e.to_string())?;
            let rows = tfim_sweep(&g, 1.0, &linspace(0.0, 6.0, 25), &[0, 1, 2], &PipelineOptions::default())
                .map_err(|e| e.to_string())?;
            Ok(SweepCache { rows, elapsed: start.elapsed() })
        })
        .as_ref()
        .map_err(|e| crate::Error::Numerical(e.clone()))
}

/// `h` of the largest gap at a given `D_H`, with the gap.
fn max_gap(rows: &[GroundRecord], dh: usize) -> (f64, f64) {
    rows.iter().filter(|r| r.dh == dh).map(|r| (r.h, r.gap)).fold((f64::NAN, f64::NEG_INFINITY), |acc, x| {
        if x.1 > acc.1 {
            x
        } else {
            acc
        }
    })
}

fn c06_tfim(mode: SuiteMode) -> Result<Check> {
    if mode == SuiteMode::Quick {
        return Ok(Check::skip("lattice sweep skipped in quick mode"));
    }
    let first_use = Instant::now();
    let cache = sweep_4x4()?;
    let cached = first_use.elapsed() < cache.elapsed;
    let rows = &cache.rows;
    let variational = rows.iter().all(|r| r.e_mbr >= r.e_exact - 1e-8);
    let at = |h: f64, dh: usize| rows.iter().find(|r| r.dh == dh && (r.h - h).abs() < 1e-12).expect("grid point");
    let monotone = linspace(0.0, 6.0, 25).iter().all(|&h| {
        let e: Vec<f64> = (0..=2).map(|dh| at(h, dh).e_mbr).collect();
        e[1] <= e[0] + 1e-10 && e[2] <= e[1] + 1e-10
    });
    let rel = |h: f64| {
        let r = at(h, 1);
        (r.e_mbr - r.e_exact).abs() / r.e_exact.abs()
    };
    let (rel_lo, rel_hi) = (rel(0.25), rel(6.0));
    let (h_peak, gap_peak) = max_gap(rows, 1);
    let peak_ok = (2.0..=4.0).contains(&h_peak);
    let passed = variational && monotone && rel_lo <= 1e-3 && rel_hi <= 1e-3 && peak_ok;
    let detail = format!(
        "(a) variational {} (b) monotone in D_H {} (c) rel err h=0.25: {rel_lo:.2e}, h=6: {rel_hi:.2e} (limit 1e-3) \
         (d) max gap {gap_peak:.3} at h={h_peak:.2} (D_H=1)",
        yes(variational),
        yes(monotone)
    );
    let mut c = Check::new(passed, detail);
    if cached {
        c.extra_time = cache.elapsed;
    }
    Ok(c)
}

fn yes(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "VIOLATED"
    }
}

fn c07_finite_size(mode: SuiteMode) -> Result<Check> {
    if mode == SuiteMode::Quick {
        return Ok(Check::skip("lattice sweeps skipped in quick mode"));
    }
    let first_use = Instant::now();
    let cache = sweep_4x4()?;
    let cached = first_use.elapsed() < cache.elapsed;
    let g = GraphSpec::lattice(3, 3)?;
    let small = tfim_sweep(&g, 1.0, &linspace(0.0, 6.0, 25), &[1], &PipelineOptions::default())?;
    let (h3, g3) = max_gap(&small, 1);
    let (h4, g4) = max_gap(&cache.rows, 1);
    let mut c = Check::new(g4 >= g3, format!("max gap 3x3 {g3:.4} (h={h3:.2}), 4x4 {g4:.4} (h={h4:.2}), D_H=1"));
    if cached {
        c.extra_time = cache.elapsed;
    }
    Ok(c)
}

/// `(probabilities, eps)` of the certification check; boundary counts sit
/// near the threshold at `M = 10⁴`, `δ = 0.05`.
pub const CERT_DISTRIBUTIONS: [(&[f64], f64); 5] = [
    (&[0.6, 0.33, 0.037, 0.033], 0.1),
    (&[0.7, 0.26, 0.04], 0.1),
    (&[0.5, 0.3, 0.13, 0.036, 0.034], 0.1),
    (&[0.45, 0.45, 0.035, 0.035, 0.03], 0.15),
    (&[0.8, 0.125, 0.038, 0.037], 0.1),
];

/// State on three qubits whose computational-basis distribution is `p`.
pub fn state_with_distribution(p: &[f64]) -> Result<StateVector> {
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    for (a, &x) in amps.iter_mut().zip(p) {
        *a = C64::new(x.sqrt(), 0.0);
    }
    StateVector::unnormalized(amps)?.normalize()
}

fn c08_certification(mode: SuiteMode) -> Result<Check> {
    let seeds = match mode {
        SuiteMode::Full => 500,
        SuiteMode::Quick => 100,
    };
    let (m, delta) = (10_000u64, 0.05);
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, &(p, eps)) in CERT_DISTRIBUTIONS.iter().enumerate() {
        let truth = eps_rank(p, eps)?;
        let s = state_with_distribution(p)?;
        let id = Circuit::identity(3);
        let runs = crate::par::try_map_range(seeds, |t| {
            let hist = sample_in_basis(&s, &id, m, rng::derive_seed(SUITE_SEED, &[8, d as u64, t as u64]))?;
            certify_support(&hist, eps, delta)
        })?;
        let certified: Vec<_> = runs.iter().filter(|c| c.certified).collect();
        let right = certified.iter().filter(|c| c.k == truth).count();
        let nc = certified.len();
        let freq = if nc == 0 { 1.0 } else { right as f64 / nc as f64 };
        let slack = if nc == 0 { 0.0 } else { 3.0 * (delta * (1.0 - delta) / nc as f64).sqrt() };
        ok &= nc > 0 && freq >= 1.0 - delta - slack;
        parts.push(format!("{right}/{nc} of {seeds}"));
    }
    Ok(Check::new(ok, format!("correct/certified per distribution: {}", parts.join(", "))))
}

/// Known `n = 6` MBR over the computational and Hadamard bases with two
/// elements per basis, normalized.
pub fn reference_mbr() -> Result<MbrState> {
    let n = 6;
    let comps = vec![
        SparseState::new(n, vec![0, 5], vec![C64::new(0.8, 0.0), C64::new(0.6, 0.0)])?,
        SparseState::new(n, vec![3, 12], vec![C64::new(0.8, 0.0), C64::new(0.0, 0.6)])?,
    ];
    let m = MbrState::new(vec![Circuit::identity(n), Circuit::hadamard_all(n)], vec![1.0, 1.0], comps)?;
    let norm = assemble(&m)?.norm_sqr().sqrt();
    m.rescaled(1.0 / norm)
}

/// Settings of the tomography checks on [`reference_mbr`].
pub fn reference_config(seed: u64, mode: GramMode) -> TomographyConfig {
    TomographyConfig { m: 100_000, m_h: 1_000_000, eps: 0.55, delta: 0.05, seed, mode }
}

fn c09_hadamard_coverage(mode: SuiteMode) -> Result<Check> {
    let seeds = match mode {
        SuiteMode::Full => 100,
        SuiteMode::Quick => 30,
    };
    let truth_mbr = reference_mbr()?;
    let truth = assemble(&truth_mbr)?;
    let bases = truth_mbr.bases().to_vec();
    let rows = crate::par::try_map_range(seeds, |t| {
        let cfg = reference_config(rng::derive_seed(SUITE_SEED, &[9, t as u64]), GramMode::NoisyF);
        let r = tomography_pipeline(&truth, &bases, &cfg)?;
        let k = r.certifications.iter().map(|c| c.k).max().unwrap_or(0);
        let da: Vec<C64> = r.a_hat.iter().zip(&r.a_true).map(|(x, y)| x - y).collect();
        let a_ok = linalg::norm_sqr(&da) <= amplitude_error_bound_sq(k, bases.len(), cfg.delta, cfg.m_h);
        let df = linalg::spectral_norm(&(&r.f_hat - &r.f_true)).powi(2);
        let f_ok = df <= gram_error_bound_sq(k, bases.len(), cfg.delta, cfg.m_h);
        Ok::<_, crate::Error>((a_ok, f_ok))
    })?;
    let a_cov = rows.iter().filter(|r| r.0).count();
    let f_cov = rows.iter().filter(|r| r.1).count();
    let need = (0.95 * seeds as f64).ceil() as usize;
    Ok(Check::new(
        a_cov >= need && f_cov >= need,
        format!("amplitude bound held on {a_cov}/{seeds}, Gram bound on {f_cov}/{seeds} (need {need})"),
    ))
}

fn c10_tomography(mode: SuiteMode) -> Result<Check> {
    let seeds = match mode {
        SuiteMode::Full => 100,
        SuiteMode::Quick => 20,
    };
    let truth_mbr = reference_mbr()?;
    let truth = assemble(&truth_mbr)?;
    let bases = truth_mbr.bases().to_vec();
    let fids = crate::par::try_map_range(seeds, |t| {
        let cfg = reference_config(rng::derive_seed(SUITE_SEED, &[10, t as u64]), GramMode::ExactF);
        tomography_pipeline(&truth, &bases, &cfg).map(|r| r.fidelity_to_truth)
    })?;
    let good = fids.iter().filter(|&&f| f >= 0.99).count();
    let need = (0.95 * seeds as f64).ceil() as usize;
    let worst = fids.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Check::new(good >= need, format!("{good}/{seeds} seeds with fidelity >= 0.99 (need {need}), worst {worst:.5}")))
}

fn random_sparse(n: usize, k: usize, r: &mut rng::Rng) -> Result<SparseState> {
    let support = sample(r, 1 << n, k).into_vec();
    let coeffs = (0..k)
        .map(|_| {
            let re: f64 = StandardNormal.sample(r);
            let im: f64 = StandardNormal.sample(r);
            C64::new(re, im)
        })
        .collect();
    SparseState::normalized(n, support, coeffs)
}

/// Random LCU instance `t`; even `t` uses mutually unbiased bases.
pub fn random_lcu_instance(t: usize, seed: u64) -> Result<(MbrState, bool)> {
    let mut r = rng::rng_from(seed, &[11, t as u64]);
    let n = r.random_range(3..=7);
    let b = r.random_range(1..=3);
    let k = r.random_range(1..=3);
    let mub = t.is_multiple_of(2);
    let bases = if mub {
        uniform_local_mubs(n, 1, b)?
    } else {
        (0..b).map(|i| random_brickwork(n, 2, rng::derive_seed(seed, &[11, t as u64, i as u64]))).collect::<Result<_>>()?
    };
    let weights: Vec<f64> = (0..b).map(|_| r.random_range(0.05..1.0)).collect();
    let comps = (0..b).map(|_| random_sparse(n, k, &mut r)).collect::<Result<_>>()?;
    Ok((MbrState::new(bases, weights, comps)?, mub))
}

fn c11_lcu(mode: SuiteMode) -> Result<Check> {
    let count = match mode {
        SuiteMode::Full => 200,
        SuiteMode::Quick => 60,
    };
    let rows = crate::par::try_map_range(count, |t| {
        let (m, mub) = random_lcu_instance(t, SUITE_SEED)?;
        let p = lcu_simulate(&m)?;
        let inst = LcuInstance::from_mbr(&m)?;
        let general = lcu_success_bound(&inst, LcuMode::General);
        let kb = (inst.k * inst.n_bases()) as f64;
        let mub_bound = (mub && kb <= ((1u64 << inst.n_qubits) as f64).sqrt()).then(|| lcu_success_bound(&inst, LcuMode::Mub));
        Ok::<_, crate::Error>((p - general, mub_bound.map(|b| p - b)))
    })?;
    let gen_viol = rows.iter().filter(|r| r.0 > 1e-9).count();
    let mub_checked = rows.iter().filter(|r| r.1.is_some()).count();
    let mub_viol = rows.iter().filter(|r| r.1.is_some_and(|d| d > 1e-9)).count();
    let worst = rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(Check::new(
        gen_viol == 0 && mub_viol == 0,
        format!(
            "{count} instances: general-bound violations {gen_viol}, mutually-unbiased-bound violations {mub_viol} of \
             {mub_checked}; max (simulated - bound) {worst:.3e}"
        ),
    ))
}

fn c12_chop(mode: SuiteMode) -> Result<Check> {
    let count = match mode {
        SuiteMode::Full => 100,
        SuiteMode::Quick => 40,
    };
    let n = 6;
    let h = Circuit::hadamard_all(n);
    let mut perfect = 0.0f64;
    for t in 0..8u64 {
        let u2 = random_brickwork(n, 3, rng::derive_seed(SUITE_SEED, &[12, 0, t]))?;
        let x = (t as usize * 7) % 64;
        let r = chop_probability(&h, &u2, &h, x, 1)?;
        perfect = perfect.max((r.p_approx - r.p_exact).abs());
    }
    let rows = crate::par::try_map_range(count, |t| {
        let s = |k: u64| rng::derive_seed(SUITE_SEED, &[12, 1, t as u64, k]);
        let u1 = random_brickwork(n, 2, s(0))?;
        let u2 = random_brickwork(n, 2, s(1))?;
        let reducer = if t % 2 == 0 { Circuit::identity(n) } else { random_brickwork(n, 1, s(2))? };
        let mut r = rng::rng_from(s(3), &[]);
        let x = r.random_range(0..64);
        let k = r.random_range(1..=64);
        let c = chop_probability(&u1, &u2, &reducer, x, k)?;
        let err = (c.p_approx - c.p_exact).abs();
        let lost = (1.0 - c.trunc_fidelity).max(0.0);
        Ok::<_, crate::Error>((err - 2.0 * lost, err - 2.0 * lost.sqrt()))
    })?;
    let violations = rows.iter().filter(|r| r.0 > 1e-9).count();
    let sqrt_violations = rows.iter().filter(|r| r.1 > 1e-9).count();
    let worst = rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(Check::new(
        perfect <= 1e-12 && violations == 0,
        format!(
            "perfect reducer max error {perfect:.1e}; {violations}/{count} instances exceed 2(1-f), \
             max excess {worst:.3e}; {sqrt_violations} exceed 2 sqrt(1-f)"
        ),
    ))
}
