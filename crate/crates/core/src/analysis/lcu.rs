use crate::error::{check_cap, Error, Result};
use crate::linalg;
use crate::mbrstate::{gram, GramMatrix, MbrState};
use crate::C64;

/// Largest `n + ⌈log₂ B⌉` the ancilla simulation will hold densely.
pub const LCU_SIM_CAP: usize = 16;

/// Weights, overlap matrix and sizes of an MBR as seen by the LCU loader.
#[derive(Clone, Debug)]
pub struct LcuInstance {
    pub weights: Vec<f64>,
    pub gram: GramMatrix,
    pub n_qubits: usize,
    /// Largest per-basis sparsity.
    pub k: usize,
}

impl LcuInstance {
    pub fn new(weights: Vec<f64>, gram: GramMatrix, n_qubits: usize, k: usize) -> Result<Self> {
        if weights.len() != gram.n_blocks() {
            return Err(Error::invalid(format!("{} weights for {} Gram blocks", weights.len(), gram.n_blocks())));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || weights.iter().all(|w| *w == 0.0) {
            return Err(Error::invalid("LCU weights must be finite, nonnegative and not all zero"));
        }
        Ok(Self { weights, gram, n_qubits, k })
    }

    pub fn from_mbr(m: &MbrState) -> Result<Self> {
        let k = m.components().iter().map(|c| c.k()).max().unwrap_or(0);
        Self::new(m.weights().to_vec(), gram(m)?, m.n_qubits(), k)
    }

    pub fn n_bases(&self) -> usize {
        self.weights.len()
    }

    /// `max_{a≠b} ‖F_{a,b}‖` in the spectral norm; 0 for a single basis.
    pub fn max_offdiag_norm(&self) -> f64 {
        let nb = self.gram.n_blocks();
        let mut best = 0.0f64;
        for b in 0..nb {
            for a in 0..nb {
                if a != b {
                    best = best.max(linalg::spectral_norm(&self.gram.block(b, a)));
                }
            }
        }
        best
    }

    fn norms(&self) -> (f64, f64, f64) {
        let l1: f64 = self.weights.iter().sum();
        let l2sq: f64 = self.weights.iter().map(|w| w * w).sum();
        let linf = self.weights.iter().cloned().fold(0.0, f64::max);
        (l1, l2sq, linf)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcuMode {
    /// Uses the measured largest off-diagonal block norm.
    General,
    /// Uses the mutually-unbiased overlap `K B / √2ⁿ` in place of the block norm.
    Mub,
}

/// Upper bound on the post-selection probability of the LCU loader.
///
/// Values above 1 carry no information and are reported as 1.
pub fn lcu_success_bound(inst: &LcuInstance, mode: LcuMode) -> f64 {
    let (l1, l2sq, linf) = inst.norms();
    let raw = match mode {
        LcuMode::General => {
            let f = inst.max_offdiag_norm();
            l2sq / (l1 * l1) * (1.0 - f) + f
        }
        LcuMode::Mub => {
            let b = inst.n_bases() as f64;
            let c = inst.k as f64 * b / ((1u64 << inst.n_qubits) as f64).sqrt();
            b * linf * linf / (l1 * l1) * (1.0 - c) + c
        }
    };
    raw.min(1.0)
}

/// Simulate the loader on `ancilla ⊗ system` and return the probability of
/// reading the ancilla in `|0⟩`.
///
/// `W|0⟩ = Σ_b √(α_b/‖α‖₁)|b⟩` is realized as a Householder reflection. Each
/// branch `|b⟩` prepares `U_b|ψ_b⟩`, then `W†` is applied.
pub fn lcu_simulate(m: &MbrState) -> Result<f64> {
    let nb = m.n_bases();
    let anc = nb.next_power_of_two().trailing_zeros() as usize;
    let n = m.n_qubits();
    check_cap("lcu_simulate", n + anc, LCU_SIM_CAP)?;
    let l1: f64 = m.weights().iter().sum();
    if l1 == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let dim_a = 1usize << anc;
    let dim_s = 1usize << n;
    let mut w_col = vec![0.0; dim_a];
    for (b, &a) in m.weights().iter().enumerate() {
        w_col[b] = (a / l1).sqrt();
    }
    let w = householder(&w_col);

    // Register layout: index = b · 2ⁿ + system index.
    let mut reg = vec![C64::new(0.0, 0.0); dim_a * dim_s];
    for b in 0..dim_a {
        reg[b * dim_s] = C64::new(w[(b, 0)], 0.0);
    }
    for (b, (u, s)) in m.bases().iter().zip(m.components()).enumerate() {
        let amp = reg[b * dim_s];
        let block = &mut reg[b * dim_s..(b + 1) * dim_s];
        block[0] = C64::new(0.0, 0.0);
        for (&i, &c) in s.support().iter().zip(s.coeffs()) {
            block[i] = amp * c;
        }
        u.apply_to(block);
    }
    // Ancilla |0⟩ row of W† is the first column of W (real, symmetric).
    let mut out = vec![C64::new(0.0, 0.0); dim_s];
    for b in 0..dim_a {
        let coeff = w[(0, b)];
        if coeff != 0.0 {
            out.iter_mut().zip(&reg[b * dim_s..(b + 1) * dim_s]).for_each(|(o, x)| *o += x * coeff);
        }
    }
    Ok(linalg::norm_sqr(&out))
}

/// Real reflection sending `e₀` to the unit vector `v`.
fn householder(v: &[f64]) -> nalgebra::DMatrix<f64> {
    let d = v.len();
    let mut u: Vec<f64> = v.iter().map(|x| -x).collect();
    u[0] += 1.0;
    let uu: f64 = u.iter().map(|x| x * x).sum();
    nalgebra::DMatrix::from_fn(d, d, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        if uu < 1e-30 {
            id
        } else {
            id - 2.0 * u[r] * u[c] / uu
        }
    })
}
