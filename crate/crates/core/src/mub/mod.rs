//! Mutually unbiased bases.
//!
//! Complete sets on `l ≤ 3` qubits use the Clifford construction
//! `U_M = D_M · H^{⊗l}` with `D_M|y⟩ = i^{yᵀMy}|y⟩` (exponent taken mod 4),
//! where `M` runs over the symmetric matrices of the trace form of `GF(2^l)`.
//! Any two of them differ by an invertible matrix, which makes the bases
//! pairwise unbiased. The computational basis completes the set.

use rand::Rng as _;
use statrs::function::gamma::ln_gamma;

use crate::error::{check_cap, Error, Result};
use crate::qcore::{dagger, Circuit, Gate, DENSE_STATE_CAP};
use crate::{par, rng};

/// Trace-form matrices, rows as bit lists. `GF(4)` uses `x² + x + 1`,
/// `GF(8)` uses `x³ + x + 1`.
const TABLE_L1: [[[u8; 1]; 1]; 2] = [[[0]], [[1]]];
const TABLE_L2: [[[u8; 2]; 2]; 4] = [[[0, 0], [0, 0]], [[0, 1], [1, 1]], [[1, 1], [1, 0]], [[1, 0], [0, 1]]];
const TABLE_L3: [[[u8; 3]; 3]; 8] = [
    [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
    [[0, 0, 1], [0, 1, 0], [1, 0, 1]],
    [[1, 0, 1], [0, 1, 1], [1, 1, 1]],
    [[0, 1, 0], [1, 0, 1], [0, 1, 1]],
    [[1, 1, 0], [1, 0, 0], [0, 0, 1]],
    [[0, 1, 1], [1, 1, 1], [1, 1, 0]],
    [[1, 1, 1], [1, 1, 0], [1, 0, 0]],
];

/// Exhaustive verification up to this size, sampled beyond.
const EXHAUSTIVE_MAX_QUBITS: usize = 6;
const SAMPLED_PAIRS: usize = 200;

/// A family of bases on `n_qubits`, optionally checked pairwise unbiased.
#[derive(Clone, Debug, PartialEq)]
pub struct MubFamily {
    pub n_qubits: usize,
    pub bases: Vec<Circuit>,
    pub pairwise_verified: bool,
}

impl MubFamily {
    /// Run [`verify_mub`] on every pair and record the result.
    pub fn verify(mut self, tol: f64) -> Result<Self> {
        let mut ok = true;
        for a in 0..self.bases.len() {
            for b in a + 1..self.bases.len() {
                ok &= verify_mub(&self.bases[a], &self.bases[b], tol)?.unbiased;
            }
        }
        self.pairwise_verified = ok;
        Ok(self)
    }
}

/// `D_M · H^{⊗l}` as a Clifford circuit: Hadamards, then `S` for each
/// diagonal one and `CZ` for each off-diagonal pair.
pub(crate) fn clifford_basis<const L: usize>(m: &[[u8; L]; L]) -> Circuit {
    let mut gates: Vec<Gate> = (0..L).map(Gate::H).collect();
    for (i, row) in m.iter().enumerate() {
        if row[i] == 1 {
            gates.push(Gate::S(i));
        }
    }
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate().skip(i + 1) {
            if v == 1 {
                gates.push(Gate::CZ(i, j));
            }
        }
    }
    Circuit::from_gates(L, gates).expect("table gates are valid")
}

/// The `2^l + 1` bases of a complete MUB set on `l` qubits, computational
/// basis first.
pub fn complete_mub_set(l: usize) -> Result<MubFamily> {
    let mut bases = vec![Circuit::identity(l)];
    match l {
        1 => bases.extend(TABLE_L1.iter().map(clifford_basis)),
        2 => bases.extend(TABLE_L2.iter().map(clifford_basis)),
        3 => bases.extend(TABLE_L3.iter().map(clifford_basis)),
        _ => return Err(Error::invalid(format!("complete MUB sets are tabulated for l in 1..=3, got {l}"))),
    }
    MubFamily { n_qubits: l, bases, pairwise_verified: false }.verify(1e-9)
}

/// Outcome of [`verify_mub`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MubCheck {
    pub unbiased: bool,
    /// Largest `| |⟨j|U_a†U_b|i⟩|² − 2^{-n} |` seen.
    pub max_dev: f64,
}

/// Check `|⟨j|U_a†U_b|i⟩|² = 2^{-n}`: all pairs for `n ≤ 6`, 200 seeded
/// random pairs otherwise.
pub fn verify_mub(a: &Circuit, b: &Circuit, tol: f64) -> Result<MubCheck> {
    let n = a.n_qubits();
    if b.n_qubits() != n {
        return Err(Error::QubitMismatch { expected: n, got: b.n_qubits() });
    }
    check_cap("verify_mub", n, DENSE_STATE_CAP)?;
    let dim = 1usize << n;
    let target = 1.0 / dim as f64;
    let ad = dagger(a);
    let column = |i: usize| {
        let mut v = b.column(i);
        ad.apply_to(&mut v);
        v
    };
    let max_dev = if n <= EXHAUSTIVE_MAX_QUBITS {
        par::map_range(dim, |i| column(i).iter().map(|z| (z.norm_sqr() - target).abs()).fold(0.0, f64::max))
            .into_iter()
            .fold(0.0, f64::max)
    } else {
        let mut r = rng::rng_from(rng::DEFAULT_SEED, &[n as u64]);
        let pairs: Vec<(usize, usize)> =
            (0..SAMPLED_PAIRS).map(|_| (r.random_range(0..dim), r.random_range(0..dim))).collect();
        par::map_slice(&pairs, |&(i, j)| (column(i)[j].norm_sqr() - target).abs()).into_iter().fold(0.0, f64::max)
    };
    Ok(MubCheck { unbiased: max_dev <= tol, max_dev })
}

/// Tensor-product basis built from `l`-qubit blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMubSpec {
    pub n_qubits: usize,
    pub block_size: usize,
    /// `blocks[k][q]` is the register qubit playing local qubit `q` of block `k`.
    pub blocks: Vec<Vec<usize>>,
    /// Family index used in each block.
    pub choices: Vec<usize>,
    /// Relabeling of the `2^l` local basis states in each block.
    pub permutations: Vec<Vec<usize>>,
}

impl LocalMubSpec {
    /// Contiguous blocks, identity permutations.
    pub fn contiguous(n_qubits: usize, block_size: usize, choices: Vec<usize>) -> Self {
        let nb = n_qubits.checked_div(block_size).unwrap_or(0);
        Self {
            n_qubits,
            block_size,
            blocks: (0..nb).map(|k| (k * block_size..(k + 1) * block_size).collect()).collect(),
            choices,
            permutations: vec![(0..1usize << block_size).collect(); nb],
        }
    }

    fn validate(&self, family: &MubFamily) -> Result<()> {
        let l = self.block_size;
        if l == 0 || !self.n_qubits.is_multiple_of(l) {
            return Err(Error::invalid(format!("block size {l} does not divide {} qubits", self.n_qubits)));
        }
        if family.n_qubits != l {
            return Err(Error::invalid(format!("family acts on {} qubits, blocks have {l}", family.n_qubits)));
        }
        let nb = self.n_qubits / l;
        if self.blocks.len() != nb || self.choices.len() != nb || self.permutations.len() != nb {
            return Err(Error::invalid(format!("expected {nb} blocks, choices and permutations")));
        }
        let mut seen = vec![false; self.n_qubits];
        for blk in &self.blocks {
            if blk.len() != l {
                return Err(Error::invalid(format!("block {blk:?} does not have {l} qubits")));
            }
            for &q in blk {
                if q >= self.n_qubits || seen[q] {
                    return Err(Error::invalid("blocks do not partition the register"));
                }
                seen[q] = true;
            }
        }
        if let Some(c) = self.choices.iter().find(|&&c| c >= family.bases.len()) {
            return Err(Error::invalid(format!("basis choice {c} out of range")));
        }
        Ok(())
    }
}

/// `⊗_k U_{choice_k} Π_k`, routed to the block qubits. Permutations act
/// first; identity permutations are omitted.
pub fn local_mub_basis(spec: &LocalMubSpec, family: &MubFamily) -> Result<Circuit> {
    spec.validate(family)?;
    let mut c = Circuit::new(spec.n_qubits);
    for (k, blk) in spec.blocks.iter().enumerate() {
        let perm = &spec.permutations[k];
        if perm.iter().enumerate().any(|(i, &p)| i != p) {
            c.push(Gate::Perm(blk.clone(), perm.clone()))?;
        }
        for g in family.bases[spec.choices[k]].gates() {
            c.push(g.relabeled(blk))?;
        }
    }
    Ok(c)
}

/// Natural logs of the number of local MUB sets, of block partitions, and
/// of their product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MubCounts {
    pub log_sets: f64,
    pub log_partitions: f64,
    pub log_total: f64,
}

fn ln_factorial(x: f64) -> f64 {
    ln_gamma(x + 1.0)
}

/// `((2^l+1)!)^{n/l}` sets and `n!/((l!)^{n/l} (n/l)!)` partitions, in logs.
pub fn count_mub_combinatorics(n: usize, l: usize) -> Result<MubCounts> {
    if l == 0 || n == 0 || !n.is_multiple_of(l) {
        return Err(Error::invalid(format!("l = {l} must divide n = {n}")));
    }
    let blocks = (n / l) as f64;
    let log_sets = blocks * ln_factorial(2f64.powi(l as i32) + 1.0);
    let log_partitions = ln_factorial(n as f64) - blocks * ln_factorial(l as f64) - ln_factorial(blocks);
    Ok(MubCounts { log_sets, log_partitions, log_total: log_sets + log_partitions })
}

fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln[ C(M,B) · C(2^n,K)^B ]`: choices of `B` bases out of `M` and of one
/// K-subset per basis.
pub fn c_mkb(m: usize, k: usize, b: usize, n: usize) -> Result<f64> {
    if b == 0 || b > m {
        return Err(Error::invalid(format!("need 1 <= B <= M, got B = {b}, M = {m}")));
    }
    let dim = 2f64.powi(n as i32);
    if k == 0 || k as f64 > dim {
        return Err(Error::invalid(format!("need 1 <= K <= 2^n, got K = {k}")));
    }
    Ok(ln_binomial(m as f64, b as f64) + b as f64 * ln_binomial(dim, k as f64))
}
