use super::SparseState;
use crate::error::{Error, Result};
use crate::qcore::StateVector;

/// Slack on cumulative-mass comparisons, so exact ties such as
/// `0.25 + 0.25 ≥ 0.5` survive rounding.
pub(crate) const MASS_SLACK: f64 = 1e-12;

/// Indices of the `k` largest weights, largest first, ties by lower index.
pub fn top_k_indices(weights: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    let key = |a: &usize, b: &usize| weights[*b].total_cmp(&weights[*a]).then(a.cmp(b));
    let k = k.min(order.len());
    if k < order.len() && k > 0 {
        order.select_nth_unstable_by(k - 1, key);
        order.truncate(k);
    }
    order.truncate(k);
    order.sort_by(key);
    order
}

/// Smallest `K` whose top-`K` cumulative weight reaches `1 - eps`.
pub(crate) fn rank_of_weights(weights: &[f64], eps: f64) -> usize {
    let target = 1.0 - eps - MASS_SLACK;
    let mut sorted = weights.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    for (k, w) in sorted.iter().enumerate() {
        acc += w;
        if acc >= target {
            return k + 1;
        }
    }
    sorted.len()
}

/// ε-approximate computational-basis rank.
pub fn cb_rank(s: &StateVector, eps: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("eps = {eps} outside [0, 1]")));
    }
    Ok(rank_of_weights(&s.probabilities(), eps))
}

/// Closed-form rank estimate for `(|0…0⟩ + |+…+⟩)/√(2C)`:
/// `1 + ⌊(1 − ε − (1 + 2^{-n/2})/2)(2ⁿ − 1)⌋`, floored at 1.
///
/// Reported for comparison only. It can disagree with [`cb_rank`] on small
/// registers (`n = 2`, `ε = 0.2` gives 1 where the exact rank is 2).
pub fn psi_plus_zero_rank_formula(n: usize, eps: f64) -> usize {
    let dim = (1u64 << n) as f64;
    let inner = ((1.0 - eps - (1.0 + dim.sqrt().recip()) / 2.0) * (dim - 1.0)).floor();
    1 + inner.max(0.0) as usize
}

/// Optimal K-sparse approximation and the fidelity it retains.
pub fn best_sparse_approx(s: &StateVector, k: usize) -> Result<(SparseState, f64)> {
    if k == 0 || k > s.dim() {
        return Err(Error::invalid(format!("K = {k} outside 1..={}", s.dim())));
    }
    let probs = s.probabilities();
    let support = top_k_indices(&probs, k);
    let fidelity: f64 = support.iter().map(|&i| probs[i]).sum::<f64>() / s.norm_sqr();
    let coeffs = support.iter().map(|&i| s.amps()[i]).collect();
    let sparse = SparseState::normalized(s.n_qubits(), support, coeffs)?;
    Ok((sparse, fidelity))
}
