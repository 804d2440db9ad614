use super::gram::gram_of;
use super::sparse::best_sparse_approx;
use super::{assemble, MbrState};
use crate::error::{check_cap, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qcore::{dagger, Circuit, StateVector, DENSE_MATRIX_CAP};
use crate::{par, C64};

/// How [`uk_fidelity`] searches over supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UkMode {
    /// All support pairs; `n ≤ 5`, `K ≤ 3`.
    Exact,
    /// Greedy largest-entry growth; a lower bound on the exact value.
    Heuristic,
}

const EXACT_MAX_QUBITS: usize = 5;
const EXACT_MAX_K: usize = 3;

/// Largest overlap `|⟨ψ₁|U|ψ₂⟩|` between two K-sparse states, i.e. the
/// largest singular value over all K×K submatrices of `U`.
pub fn uk_fidelity(u: &Circuit, k: usize, mode: UkMode) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    let n = u.n_qubits();
    match mode {
        UkMode::Exact => {
            check_cap("exact (U,K)-fidelity", n, EXACT_MAX_QUBITS)?;
            if k > EXACT_MAX_K {
                return Err(Error::invalid(format!("exact (U,K)-fidelity needs K <= {EXACT_MAX_K}, got {k}")));
            }
        }
        UkMode::Heuristic => check_cap("heuristic (U,K)-fidelity", n, DENSE_MATRIX_CAP)?,
    }
    let m = u.matrix()?;
    let dim = m.nrows();
    let k = k.min(dim);
    Ok(match mode {
        UkMode::Exact => exact_search(&m, k),
        UkMode::Heuristic => greedy_search(&m, k),
    })
}

fn sigma_max(m: &CMatrix, rows: &[usize], cols: &[usize]) -> f64 {
    let sub = CMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])]);
    linalg::spectral_norm(&sub)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Branch and bound over row subsets for every column subset. The Frobenius
/// norm of the rows picked so far plus the heaviest remaining rows bounds σ_max.
fn exact_search(m: &CMatrix, k: usize) -> f64 {
    let dim = m.nrows();
    let col_sets = combinations(dim, k);
    let bests = par::map_slice(&col_sets, |cols| {
        let mut weight: Vec<(f64, usize)> =
            (0..dim).map(|i| (cols.iter().map(|&j| m[(i, j)].norm_sqr()).sum(), i)).collect();
        weight.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut best = 0.0f64;
        let mut rows = Vec::with_capacity(k);
        rows_rec(m, cols, &weight, 0, 0.0, &mut rows, k, &mut best);
        best
    });
    bests.into_iter().fold(0.0, f64::max)
}

#[allow(clippy::too_many_arguments)]
fn rows_rec(
    m: &CMatrix,
    cols: &[usize],
    weight: &[(f64, usize)],
    start: usize,
    acc: f64,
    rows: &mut Vec<usize>,
    k: usize,
    best: &mut f64,
) {
    let need = k - rows.len();
    if need == 0 {
        *best = best.max(sigma_max(m, rows, cols));
        return;
    }
    for p in start..=weight.len() - need {
        let bound: f64 = acc + weight[p..p + need].iter().map(|w| w.0).sum::<f64>();
        // Weights are sorted, so later starts cannot do better.
        if bound.sqrt() <= *best * (1.0 + 1e-12) {
            return;
        }
        rows.push(weight[p].1);
        rows_rec(m, cols, weight, p + 1, acc + weight[p].0, rows, k, best);
        rows.pop();
    }
}

fn greedy_search(m: &CMatrix, k: usize) -> f64 {
    let dim = m.nrows();
    let mut rows = Vec::with_capacity(k);
    let mut cols = Vec::with_capacity(k);
    for _ in 0..k {
        let mut pick = (0, 0);
        let mut pick_val = -1.0;
        for i in (0..dim).filter(|i| !rows.contains(i)) {
            for j in (0..dim).filter(|j| !cols.contains(j)) {
                let v = m[(i, j)].norm_sqr();
                if v > pick_val {
                    pick_val = v;
                    pick = (i, j);
                }
            }
        }
        rows.push(pick.0);
        cols.push(pick.1);
    }
    sigma_max(m, &rows, &cols)
}

/// Output of [`fit_weights`].
#[derive(Clone, Debug)]
pub struct FitResult {
    /// Normalized MBR of the target.
    pub state: MbrState,
    /// `|⟨target|state⟩|`.
    pub overlap: f64,
    /// `|⟨ψ|U_b|ψ_b⟩|` per basis.
    pub partial_overlaps: Vec<f64>,
    /// Every partial overlap vanished and uniform weights were used.
    pub degenerate: bool,
}

/// Per basis keep the best K-sparse part of `U_b†|target⟩`, weight it by its
/// overlap with the target and normalize the sum.
pub fn fit_weights(target: &StateVector, bases: &[Circuit], k: usize) -> Result<FitResult> {
    if bases.is_empty() {
        return Err(Error::invalid("fit_weights needs at least one basis"));
    }
    let n = target.n_qubits();
    let mut components = Vec::with_capacity(bases.len());
    let mut partial = Vec::with_capacity(bases.len());
    for u in bases {
        if u.n_qubits() != n {
            return Err(Error::QubitMismatch { expected: n, got: u.n_qubits() });
        }
        let mut rotated = target.amps().to_vec();
        dagger(u).apply_to(&mut rotated);
        let rotated = StateVector::unnormalized(rotated)?;
        let (sparse, _) = best_sparse_approx(&rotated, k)?;
        // Coefficients are the rotated amplitudes themselves, so this
        // overlap is real and nonnegative.
        let ov: C64 = sparse.support().iter().zip(sparse.coeffs()).map(|(&i, c)| c.conj() * rotated.amps()[i]).sum();
        partial.push(ov.norm());
        components.push(sparse);
    }
    let degenerate = partial.iter().all(|&o| o < 1e-300);
    let raw = if degenerate { vec![1.0; bases.len()] } else { partial.clone() };
    let unscaled = MbrState::new(bases.to_vec(), raw, components)?;
    let f = gram_of(bases, &unscaled.supports())?;
    let norm = linalg::quadratic_form(f.matrix(), &unscaled.weighted_coeffs()).re;
    if norm < 1e-24 {
        return Err(Error::ZeroNorm);
    }
    let state = unscaled.rescaled(1.0 / norm.sqrt())?;
    let overlap = target.inner(&assemble(&state)?)?.norm();
    Ok(FitResult { state, overlap, partial_overlaps: partial, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_fidelity() {
        for k in 1..=3 {
            let f = uk_fidelity(&Circuit::identity(3), k, UkMode::Exact).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hadamard_single_entry() {
        let f = uk_fidelity(&Circuit::hadamard_all(4), 1, UkMode::Exact).unwrap();
        assert!((f - 0.25).abs() < 1e-12);
    }

    #[test]
    fn exact_caps() {
        assert!(uk_fidelity(&Circuit::identity(6), 1, UkMode::Exact).is_err());
        assert!(uk_fidelity(&Circuit::identity(2), 4, UkMode::Exact).is_err());
        assert!(uk_fidelity(&Circuit::identity(2), 0, UkMode::Heuristic).is_err());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 4).len(), 1);
    }

    #[test]
    fn computational_target_in_identity_basis() {
        let r = fit_weights(&StateVector::zero(2).unwrap(), &[Circuit::identity(2)], 1).unwrap();
        assert!((r.overlap - 1.0).abs() < 1e-12);
        assert!(!r.degenerate);
    }
}
