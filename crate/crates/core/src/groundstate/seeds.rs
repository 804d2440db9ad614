use rand::Rng as _;

use super::{DiagonalEnergy, HamiltonianDecomposition};
use crate::error::{check_cap, Error, Result};
use crate::qcore::bit_of;
use crate::{par, rng};

/// Most degenerate minimizers kept per term.
pub const SEED_CAP: usize = 64;
/// Largest register enumerated exhaustively.
pub const BRUTE_FORCE_MAX_QUBITS: usize = 22;
const ENERGY_TOL: f64 = 1e-9;
const CHUNK: usize = 1 << 14;

/// How minimal-energy basis states of each term are found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedStrategy {
    /// Enumerate every bitstring (`n ≤ 22`).
    BruteForce,
    /// Checkerboard or uniform patterns on a rectangular lattice.
    LatticePattern,
    /// Greedy single-flip descent from random starts.
    LocalSearch { restarts: usize, seed: u64 },
}

impl SeedStrategy {
    /// Brute force when affordable, local search otherwise.
    pub fn auto(n: usize) -> Self {
        if n <= BRUTE_FORCE_MAX_QUBITS {
            SeedStrategy::BruteForce
        } else {
            SeedStrategy::LocalSearch { restarts: 32, seed: rng::DEFAULT_SEED }
        }
    }
}

/// Seeds for one term.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedSet {
    /// Sorted basis indices.
    pub indices: Vec<usize>,
    pub energy: f64,
    /// Found by a method without an optimality guarantee.
    pub heuristic: bool,
}

/// Minimal-energy basis indices of every term of `decomp`.
pub fn seed_supports(decomp: &HamiltonianDecomposition, strategy: SeedStrategy) -> Result<Vec<SeedSet>> {
    decomp.terms.iter().map(|t| seeds_for(&t.energy, strategy, None)).collect()
}

/// As [`seed_supports`] with the lattice shape needed by `LatticePattern`.
pub fn seed_supports_on_lattice(
    decomp: &HamiltonianDecomposition,
    strategy: SeedStrategy,
    shape: Option<(usize, usize)>,
) -> Result<Vec<SeedSet>> {
    decomp.terms.iter().map(|t| seeds_for(&t.energy, strategy, shape)).collect()
}

pub(crate) fn seeds_for(e: &DiagonalEnergy, strategy: SeedStrategy, shape: Option<(usize, usize)>) -> Result<SeedSet> {
    match strategy {
        SeedStrategy::BruteForce => brute_force(e),
        SeedStrategy::LatticePattern => lattice_pattern(e, shape),
        SeedStrategy::LocalSearch { restarts, seed } => local_search(e, restarts, seed),
    }
}

fn brute_force(e: &DiagonalEnergy) -> Result<SeedSet> {
    let n = e.n_qubits();
    check_cap("brute-force seeds", n, BRUTE_FORCE_MAX_QUBITS)?;
    let dim = 1usize << n;
    let chunks = dim.div_ceil(CHUNK);
    // Per chunk: its minimum and the first SEED_CAP indices within tolerance of it.
    let partial = par::map_range(chunks, |c| {
        let mut best = f64::INFINITY;
        let mut hits: Vec<usize> = Vec::new();
        for i in c * CHUNK..((c + 1) * CHUNK).min(dim) {
            let v = e.energy(i);
            if v < best - ENERGY_TOL {
                best = v;
                hits.clear();
            }
            if v <= best + ENERGY_TOL && hits.len() < SEED_CAP {
                hits.push(i);
            }
        }
        (best, hits)
    });
    let min = partial.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut indices = Vec::new();
    for (best, hits) in partial {
        if best <= min + ENERGY_TOL {
            indices.extend(hits.into_iter().filter(|&i| e.energy(i) <= min + ENERGY_TOL));
        }
        if indices.len() >= SEED_CAP {
            break;
        }
    }
    indices.truncate(SEED_CAP);
    Ok(SeedSet { indices, energy: min, heuristic: false })
}

fn lattice_pattern(e: &DiagonalEnergy, shape: Option<(usize, usize)>) -> Result<SeedSet> {
    let n = e.n_qubits();
    let all_ones = (1usize << n) - 1;
    let indices = match e {
        DiagonalEnergy::Field { coeff, .. } => {
            if *coeff >= 0.0 {
                vec![all_ones]
            } else {
                vec![0]
            }
        }
        DiagonalEnergy::Ising { coeff, .. } => {
            if *coeff < 0.0 {
                vec![0, all_ones]
            } else {
                let (rows, cols) =
                    shape.ok_or_else(|| Error::invalid("lattice patterns need a rectangular lattice graph"))?;
                if rows * cols != n {
                    return Err(Error::invalid(format!("{rows}x{cols} lattice does not have {n} nodes")));
                }
                let mut board = 0usize;
                for r in 0..rows {
                    for c in 0..cols {
                        if (r + c) % 2 == 1 {
                            board |= 1 << bit_of(n, r * cols + c);
                        }
                    }
                }
                let mut v = vec![board, all_ones ^ board];
                v.sort_unstable();
                v
            }
        }
    };
    let energy = e.energy(indices[0]);
    Ok(SeedSet { indices, energy, heuristic: false })
}

fn local_search(e: &DiagonalEnergy, restarts: usize, seed: u64) -> Result<SeedSet> {
    let n = e.n_qubits();
    if n >= usize::BITS as usize {
        return Err(Error::invalid(format!("{n} qubits cannot be indexed")));
    }
    let runs = par::map_range(restarts.max(1), |r| {
        let mut g = rng::rng_from(seed, &[0x5EED, r as u64]);
        let mut x: usize = g.random::<u64>() as usize & ((1usize << n) - 1);
        let mut v = e.energy(x);
        loop {
            let mut improved = false;
            for q in 0..n {
                let y = x ^ (1 << q);
                let w = e.energy(y);
                if w < v - ENERGY_TOL {
                    x = y;
                    v = w;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        (v, x)
    });
    let min = runs.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let mut indices: Vec<usize> = runs.iter().filter(|r| r.0 <= min + ENERGY_TOL).map(|r| r.1).collect();
    indices.sort_unstable();
    indices.dedup();
    indices.truncate(SEED_CAP);
    Ok(SeedSet { indices, energy: min, heuristic: true })
}

/// All indices within Hamming distance `radius` of some seed, sorted.
///
/// When more than `cap` indices qualify, those closest to a seed are kept
/// (ties by lower index), so the seeds always survive. The flag reports
/// truncation.
pub fn hamming_ball(n: usize, seeds: &[usize], radius: usize, cap: usize) -> Result<(Vec<usize>, bool)> {
    if cap < seeds.len() {
        return Err(Error::invalid(format!("cap {cap} is smaller than the {} seeds", seeds.len())));
    }
    if n >= usize::BITS as usize {
        return Err(Error::invalid(format!("{n} qubits cannot be indexed")));
    }
    if let Some(s) = seeds.iter().find(|&&s| s >> n != 0) {
        return Err(Error::invalid(format!("seed {s} out of range for {n} qubits")));
    }
    let radius = radius.min(n);
    let mut dist: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut masks = vec![0usize];
    for r in 0..=radius {
        if r > 0 {
            masks = next_weight_masks(&masks, n);
        }
        for &s in seeds {
            for &m in &masks {
                dist.entry(s ^ m).or_insert(r);
            }
        }
        if dist.len() > cap.saturating_mul(4).max(1 << 20) {
            break;
        }
    }
    let mut all: Vec<(usize, usize)> = dist.into_iter().map(|(i, d)| (d, i)).collect();
    all.sort_unstable();
    let truncated = all.len() > cap;
    all.truncate(cap);
    let mut out: Vec<usize> = all.into_iter().map(|(_, i)| i).collect();
    out.sort_unstable();
    Ok((out, truncated))
}

/// Masks of weight `w+1` from the masks of weight `w`, each generated once by
/// only setting bits above the current highest one.
fn next_weight_masks(prev: &[usize], n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for &m in prev {
        let start = if m == 0 { 0 } else { usize::BITS as usize - m.leading_zeros() as usize };
        for b in start..n {
            out.push(m | (1 << b));
        }
    }
    out
}

/// Why an index entered a support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Seed,
    Hamming(usize),
    Heuristic,
}

/// Per-basis supports with the reason each index is there.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceSelection {
    pub supports: Vec<Vec<usize>>,
    pub provenance: Vec<Vec<Provenance>>,
    pub truncated: bool,
}

impl SubspaceSelection {
    /// Hamming balls around each term's seeds.
    pub fn from_seeds(n: usize, seeds: &[SeedSet], radius: usize, cap: usize) -> Result<Self> {
        let mut supports = Vec::with_capacity(seeds.len());
        let mut provenance = Vec::with_capacity(seeds.len());
        let mut truncated = false;
        for s in seeds {
            let (ball, t) = hamming_ball(n, &s.indices, radius, cap)?;
            truncated |= t;
            provenance.push(
                ball.iter()
                    .map(|&i| {
                        let d = s.indices.iter().map(|&x| (x ^ i).count_ones() as usize).min().unwrap_or(0);
                        match (d, s.heuristic) {
                            (0, true) => Provenance::Heuristic,
                            (0, false) => Provenance::Seed,
                            (d, _) => Provenance::Hamming(d),
                        }
                    })
                    .collect(),
            );
            supports.push(ball);
        }
        Ok(Self { supports, provenance, truncated })
    }

    pub fn total_size(&self) -> usize {
        self.supports.iter().map(Vec::len).sum()
    }
}
