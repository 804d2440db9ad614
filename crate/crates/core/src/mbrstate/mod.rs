//! Multiple-basis representations `Σ_b α_b U_b|ψ_b⟩` and their calculus.
//!
//! Flattened indices run over `(b, slot)` pairs basis-major, so the slot
//! `k` of basis `b` sits at `offsets[b] + k`. Per-basis support sizes may
//! differ.

mod fidelity;
mod gram;
mod io;
mod sparse;

pub use fidelity::{fit_weights, uk_fidelity, FitResult, UkMode};
pub(crate) use gram::subspace_matrices;
pub use gram::{expectation, gram, gram_of, gram_rank, observable_gram, GramMatrix};
pub use io::{load_mbr, mbr_to_value, save_mbr};
pub(crate) use sparse::rank_of_weights as sparse_rank;
pub use sparse::{best_sparse_approx, cb_rank, psi_plus_zero_rank_formula, top_k_indices};

use crate::error::{check_cap, Error, Result};
use crate::qcore::{Circuit, StateVector, DENSE_STATE_CAP};
use crate::C64;

const NORM_TOL: f64 = 1e-9;

/// K-sparse normalized state in the computational basis.
///
/// Entries are kept ordered by decreasing `|c|²`, ties by lower index.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    n_qubits: usize,
    support: Vec<usize>,
    coeffs: Vec<C64>,
}

impl SparseState {
    pub fn new(n_qubits: usize, support: Vec<usize>, coeffs: Vec<C64>) -> Result<Self> {
        if support.len() != coeffs.len() {
            return Err(Error::invalid(format!(
                "support has {} entries but coeffs has {}",
                support.len(),
                coeffs.len()
            )));
        }
        if support.is_empty() {
            return Err(Error::invalid("sparse state needs a non-empty support"));
        }
        if n_qubits >= usize::BITS as usize {
            return Err(Error::invalid(format!("{n_qubits} qubits cannot be indexed")));
        }
        let dim = 1usize << n_qubits;
        let mut seen = std::collections::HashSet::with_capacity(support.len());
        for &i in &support {
            if i >= dim {
                return Err(Error::invalid(format!("support index {i} out of range for {n_qubits} qubits")));
            }
            if !seen.insert(i) {
                return Err(Error::invalid(format!("support index {i} repeated")));
            }
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("sparse coefficients have squared norm {norm}, expected 1")));
        }
        let mut pairs: Vec<(usize, C64)> = support.into_iter().zip(coeffs).collect();
        pairs.sort_by(|a, b| b.1.norm_sqr().total_cmp(&a.1.norm_sqr()).then(a.0.cmp(&b.0)));
        let (support, coeffs) = pairs.into_iter().unzip();
        Ok(Self { n_qubits, support, coeffs })
    }

    /// `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Self::new(n_qubits, vec![index], vec![C64::new(1.0, 0.0)])
    }

    /// Rescales the coefficients to unit norm before validating.
    pub fn normalized(n_qubits: usize, support: Vec<usize>, coeffs: Vec<C64>) -> Result<Self> {
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Self::new(n_qubits, support, coeffs.into_iter().map(|c| c / norm).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Result<StateVector> {
        check_cap("sparse state densify", self.n_qubits, DENSE_STATE_CAP)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << self.n_qubits];
        for (&i, &c) in self.support.iter().zip(&self.coeffs) {
            amps[i] = c;
        }
        StateVector::unnormalized(amps)
    }
}

/// `Σ_b α_b U_b|ψ_b⟩`. Not normalized in general.
#[derive(Clone, Debug, PartialEq)]
pub struct MbrState {
    bases: Vec<Circuit>,
    weights: Vec<f64>,
    components: Vec<SparseState>,
}

impl MbrState {
    pub fn new(bases: Vec<Circuit>, weights: Vec<f64>, components: Vec<SparseState>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::invalid("an MBR needs at least one basis"));
        }
        if weights.len() != bases.len() || components.len() != bases.len() {
            return Err(Error::invalid(format!(
                "{} bases, {} weights and {} components do not match",
                bases.len(),
                weights.len(),
                components.len()
            )));
        }
        let n = bases[0].n_qubits();
        for c in &bases {
            if c.n_qubits() != n {
                return Err(Error::QubitMismatch { expected: n, got: c.n_qubits() });
            }
            c.validate()?;
        }
        for s in &components {
            if s.n_qubits() != n {
                return Err(Error::QubitMismatch { expected: n, got: s.n_qubits() });
            }
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::invalid(format!("weight {w} is not a finite nonnegative number")));
        }
        Ok(Self { bases, weights, components })
    }

    pub fn n_qubits(&self) -> usize {
        self.bases[0].n_qubits()
    }

    pub fn n_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[Circuit] {
        &self.bases
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[SparseState] {
        &self.components
    }

    pub fn supports(&self) -> Vec<Vec<usize>> {
        self.components.iter().map(|c| c.support().to_vec()).collect()
    }

    /// Flattened `α_b c^(b)_k`, the vector every quadratic form acts on.
    pub fn weighted_coeffs(&self) -> Vec<C64> {
        self.components
            .iter()
            .zip(&self.weights)
            .flat_map(|(s, &w)| s.coeffs().iter().map(move |&c| c * w))
            .collect()
    }

    /// Same state with every weight multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.bases.clone(), self.weights.iter().map(|w| w * factor).collect(), self.components.clone())
    }
}

/// Seeded test instance: the computational basis followed by `b − 1`
/// two-layer random brickworks, random `k`-subsets with Gaussian
/// coefficients, and weights drawn from `[0.5, 1)`.
pub fn random_mbr(n: usize, b: usize, k: usize, seed: u64) -> Result<MbrState> {
    use rand::Rng as _;
    use rand_distr::{Distribution, StandardNormal};
    if n == 0 || b == 0 || k == 0 || n >= usize::BITS as usize || k > 1usize << n {
        return Err(Error::invalid(format!("random MBR needs n, B, K >= 1 and K <= 2^n, got n={n}, B={b}, K={k}")));
    }
    let mut bases = vec![Circuit::identity(n)];
    for i in 1..b {
        bases.push(crate::qcore::random_brickwork(n, 2, crate::rng::derive_seed(seed, &[0x3B, i as u64]))?);
    }
    let mut r = crate::rng::rng_from(seed, &[0x3C]);
    let mut components = Vec::with_capacity(b);
    for _ in 0..b {
        let support = rand::seq::index::sample(&mut r, 1 << n, k).into_vec();
        let coeffs = (0..k)
            .map(|_| {
                let (re, im): (f64, f64) = (StandardNormal.sample(&mut r), StandardNormal.sample(&mut r));
                C64::new(re, im)
            })
            .collect();
        components.push(SparseState::normalized(n, support, coeffs)?);
    }
    let weights = (0..b).map(|_| r.random_range(0.5..1.0)).collect();
    MbrState::new(bases, weights, components)
}

/// Dense `Σ_b α_b U_b|ψ_b⟩`, marked unnormalized.
pub fn assemble(m: &MbrState) -> Result<StateVector> {
    let n = m.n_qubits();
    check_cap("assemble", n, DENSE_STATE_CAP)?;
    let mut out = vec![C64::new(0.0, 0.0); 1 << n];
    let mut buf = vec![C64::new(0.0, 0.0); 1 << n];
    for ((u, &w), s) in m.bases.iter().zip(&m.weights).zip(&m.components) {
        buf.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        for (&i, &c) in s.support().iter().zip(s.coeffs()) {
            buf[i] = c * w;
        }
        u.apply_to(&mut buf);
        out.iter_mut().zip(&buf).for_each(|(o, b)| *o += b);
    }
    StateVector::unnormalized(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_state_sorts_by_weight_then_index() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = SparseState::new(2, vec![3, 1], vec![C64::new(h, 0.0), C64::new(0.0, h)]).unwrap();
        assert_eq!(s.support(), &[1, 3]);
        let t = SparseState::new(2, vec![2, 0], vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)]).unwrap();
        assert_eq!(t.support(), &[0, 2]);
    }

    #[test]
    fn sparse_state_rejects_bad_input() {
        assert!(SparseState::new(2, vec![0, 0], vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)]).is_err());
        assert!(SparseState::new(2, vec![4], vec![C64::new(1.0, 0.0)]).is_err());
        assert!(SparseState::new(2, vec![1], vec![C64::new(0.5, 0.0)]).is_err());
    }

    #[test]
    fn assemble_single_basis_vector() {
        let m = MbrState::new(vec![Circuit::identity(3)], vec![1.0], vec![SparseState::basis(3, 5).unwrap()]).unwrap();
        let v = assemble(&m).unwrap();
        for (i, a) in v.amps().iter().enumerate() {
            assert_eq!(*a, C64::new(if i == 5 { 1.0 } else { 0.0 }, 0.0));
        }
    }

    #[test]
    fn rejects_negative_weight() {
        let r = MbrState::new(vec![Circuit::identity(1)], vec![-1.0], vec![SparseState::basis(1, 0).unwrap()]);
        assert!(r.is_err());
    }
}
