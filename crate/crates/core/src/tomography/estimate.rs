use super::sampling::{binomial, SampleHistogram};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::mbrstate::GramMatrix;
use crate::qcore::{dagger, Circuit, StateVector};
use crate::{rng, C64};

/// Simulated Hadamard-test estimates of `a_i = ⟨i|U†|ψ⟩` over a support.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeEstimates {
    pub a_hat: Vec<C64>,
    /// Oracle values, kept for diagnostics.
    pub a_true: Vec<C64>,
    /// Shots spent on each quadrature of each amplitude.
    pub shots: Vec<u64>,
}

/// `2·Binomial(shots, (1+v)/2)/shots − 1`, an unbiased estimate of `v`.
fn hadamard_quadrature(v: f64, shots: u64, r: &mut rng::Rng) -> f64 {
    let p = ((1.0 + v) / 2.0).clamp(0.0, 1.0);
    2.0 * binomial(shots, p, r) as f64 / shots as f64 - 1.0
}

/// Estimate the support amplitudes of `U†|s⟩`.
///
/// Each quadrature of amplitude `i` gets `max(1, ⌊M_H m_i / (2 Σ_j m_j)⌋)`
/// shots, with `m` the counts of the preceding sampling round, so at most
/// `M_H` shots are used in total whenever every share is at least one.
pub fn hadamard_estimates(
    s: &StateVector,
    u: &Circuit,
    support: &[usize],
    m_h: u64,
    hist: &SampleHistogram,
    seed: u64,
) -> Result<AmplitudeEstimates> {
    if support.is_empty() {
        return Err(Error::invalid("empty support"));
    }
    if u.n_qubits() != s.n_qubits() {
        return Err(Error::QubitMismatch { expected: s.n_qubits(), got: u.n_qubits() });
    }
    if let Some(i) = support.iter().find(|&&i| hist.count(i) == 0) {
        return Err(Error::invalid(format!("support index {i} was never sampled")));
    }
    let mut rotated = s.amps().to_vec();
    dagger(u).apply_to(&mut rotated);
    let total: u64 = support.iter().map(|&i| hist.count(i)).sum();
    let mut a_hat = Vec::with_capacity(support.len());
    let mut a_true = Vec::with_capacity(support.len());
    let mut shots = Vec::with_capacity(support.len());
    for (slot, &i) in support.iter().enumerate() {
        let share = ((m_h as f64) * hist.count(i) as f64 / (2.0 * total as f64)).floor() as u64;
        let k = share.max(1);
        let a = rotated[i];
        let re = hadamard_quadrature(a.re, k, &mut rng::rng_from(seed, &[slot as u64, 0]));
        let im = hadamard_quadrature(a.im, k, &mut rng::rng_from(seed, &[slot as u64, 1]));
        a_hat.push(C64::new(re, im));
        a_true.push(a);
        shots.push(k);
    }
    Ok(AmplitudeEstimates { a_hat, a_true, shots })
}

/// Gram matrix with Hadamard-test noise on the off-diagonal blocks.
///
/// The diagonal blocks are the identity by construction. The budget `m_f` is
/// split evenly over the independent off-diagonal entries and their two
/// quadratures; the lower triangle mirrors the upper one.
pub fn noisy_gram(exact: &GramMatrix, m_f: u64, seed: u64) -> Result<GramMatrix> {
    let dim = exact.dim();
    let f = exact.matrix();
    let mut out = CMatrix::identity(dim, dim);
    let mut entries = Vec::new();
    for b in 0..exact.n_blocks() {
        for a in b + 1..exact.n_blocks() {
            for i in 0..exact.block_size(b) {
                for j in 0..exact.block_size(a) {
                    entries.push((exact.block_index(b, i), exact.block_index(a, j)));
                }
            }
        }
    }
    // Diagonal blocks are written exactly; the unit diagonal is already there.
    for b in 0..exact.n_blocks() {
        for i in 0..exact.block_size(b) {
            for j in 0..exact.block_size(b) {
                let (r, c) = (exact.block_index(b, i), exact.block_index(b, j));
                out[(r, c)] = f[(r, c)];
            }
        }
    }
    if !entries.is_empty() {
        let shots = (m_f / (2 * entries.len() as u64)).max(1);
        for &(r, c) in &entries {
            let v = f[(r, c)];
            let re = hadamard_quadrature(v.re, shots, &mut rng::rng_from(seed, &[0xF, r as u64, c as u64, 0]));
            let im = hadamard_quadrature(v.im, shots, &mut rng::rng_from(seed, &[0xF, r as u64, c as u64, 1]));
            out[(r, c)] = C64::new(re, im);
            out[(c, r)] = C64::new(re, -im);
        }
    }
    let sizes: Vec<usize> = (0..exact.n_blocks()).map(|b| exact.block_size(b)).collect();
    GramMatrix::from_parts(out, &sizes)
}

/// Default relative singular-value cutoff of the pseudo-inverse.
pub const PINV_CUTOFF: f64 = 1e-8;

/// `α̂ = F⁺ â` split per basis into a weight and unit coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Inversion {
    pub alpha_hat: Vec<C64>,
    /// `α_b = ‖block_b‖₂`.
    pub weights: Vec<f64>,
    /// `block_b / α_b`; empty for zero blocks.
    pub coeffs: Vec<Vec<C64>>,
    pub zero_blocks: Vec<bool>,
    pub rank: usize,
    /// `‖F⁺‖₂`.
    pub pinv_norm: f64,
}

/// Minimum-norm solution of `F α = a` and its per-basis split.
pub fn invert_gram(a_hat: &[C64], f_hat: &GramMatrix, cutoff: f64) -> Result<Inversion> {
    if a_hat.len() != f_hat.dim() {
        return Err(Error::invalid(format!("a has {} entries but F is {}x{}", a_hat.len(), f_hat.dim(), f_hat.dim())));
    }
    if a_hat.iter().all(|a| a.norm() == 0.0) {
        return Err(Error::ZeroNorm);
    }
    let (pinv, rank, smin) = linalg::pinv(f_hat.matrix(), cutoff);
    let a = crate::linalg::CVector::from_column_slice(a_hat);
    let alpha: Vec<C64> = (&pinv * a).iter().copied().collect();
    let mut weights = Vec::new();
    let mut coeffs = Vec::new();
    let mut zero_blocks = Vec::new();
    for b in 0..f_hat.n_blocks() {
        let block = &alpha[f_hat.block_index(b, 0)..f_hat.block_index(b, 0) + f_hat.block_size(b)];
        let w = linalg::norm_sqr(block).sqrt();
        let zero = w < 1e-300;
        weights.push(if zero { 0.0 } else { w });
        coeffs.push(if zero { Vec::new() } else { block.iter().map(|c| c / w).collect() });
        zero_blocks.push(zero);
    }
    Ok(Inversion { alpha_hat: alpha, weights, coeffs, zero_blocks, rank, pinv_norm: 1.0 / smin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn identity_gram_returns_input() {
        let f = GramMatrix::from_parts(CMatrix::identity(3, 3), &[2, 1]).unwrap();
        let a = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.45), C64::new(0.64, 0.0)];
        let inv = invert_gram(&a, &f, PINV_CUTOFF).unwrap();
        for (x, y) in inv.alpha_hat.iter().zip(&a) {
            assert!((x - y).norm() < 1e-14);
        }
        assert!((inv.weights[0] - 0.75).abs() < 1e-14);
        assert!(invert_gram(&[C64::new(0.0, 0.0); 3], &f, PINV_CUTOFF).is_err());
    }

    #[test]
    fn shots_respect_budget() {
        let s = crate::qcore::haar_random_state(3, 4).unwrap();
        let hist = SampleHistogram::new(3, BTreeMap::from([(0, 7), (3, 11), (5, 2)]));
        let est = hadamard_estimates(&s, &Circuit::identity(3), &[0, 3, 5], 1001, &hist, 9).unwrap();
        assert!(2 * est.shots.iter().sum::<u64>() <= 1001);
        assert!(hadamard_estimates(&s, &Circuit::identity(3), &[1], 10, &hist, 9).is_err());
        assert!(hadamard_estimates(&s, &Circuit::identity(3), &[], 10, &hist, 9).is_err());
    }
}
