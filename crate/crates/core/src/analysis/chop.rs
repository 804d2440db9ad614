use crate::error::{check_cap, Error, Result};
use crate::mbrstate::top_k_indices;
use crate::qcore::{dagger, Circuit, DENSE_STATE_CAP};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChopResult {
    /// `|Σ_{i∈S} ⟨x|U₂R†|i⟩⟨i|RU₁|0⟩|²`.
    pub p_approx: f64,
    /// `|⟨x|U₂U₁|0⟩|²`.
    pub p_exact: f64,
    /// Mass of `RU₁|0⟩` kept on `S`.
    pub trunc_fidelity: f64,
}

/// Reduce and chop: apply `U₁` then the reducer `R`, keep the `K` largest
/// amplitudes, undo `R`, apply `U₂` and read outcome `x`.
pub fn chop_probability(u1: &Circuit, u2: &Circuit, reducer: &Circuit, x: usize, k: usize) -> Result<ChopResult> {
    let n = u1.n_qubits();
    for c in [u2, reducer] {
        if c.n_qubits() != n {
            return Err(Error::QubitMismatch { expected: n, got: c.n_qubits() });
        }
    }
    check_cap("chop_probability", n, DENSE_STATE_CAP)?;
    for c in [u1, u2, reducer] {
        c.validate()?;
    }
    let dim = 1usize << n;
    if x >= dim {
        return Err(Error::invalid(format!("outcome {x} out of range for {n} qubits")));
    }
    if k == 0 || k > dim {
        return Err(Error::invalid(format!("K = {k} outside 1..=2^n")));
    }

    let mut exact = vec![C64::new(0.0, 0.0); dim];
    exact[0] = C64::new(1.0, 0.0);
    u1.apply_to(&mut exact);
    let mut v = exact.clone();
    u2.apply_to(&mut exact);

    reducer.apply_to(&mut v);
    let weights: Vec<f64> = v.iter().map(|a| a.norm_sqr()).collect();
    let keep = top_k_indices(&weights, k);
    let mut chopped = vec![C64::new(0.0, 0.0); dim];
    for &i in &keep {
        chopped[i] = v[i];
    }
    let trunc_fidelity = keep.iter().map(|&i| weights[i]).sum();
    dagger(reducer).apply_to(&mut chopped);
    u2.apply_to(&mut chopped);
    Ok(ChopResult { p_approx: chopped[x].norm_sqr(), p_exact: exact[x].norm_sqr(), trunc_fidelity })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_reducer_needs_one_element() {
        let h = Circuit::hadamard_all(4);
        let u2 = crate::qcore::random_brickwork(4, 3, 1).unwrap();
        for x in 0..16 {
            let r = chop_probability(&h, &u2, &h, x, 1).unwrap();
            assert!((r.p_approx - r.p_exact).abs() < 1e-12);
            assert!((r.trunc_fidelity - 1.0).abs() < 1e-12);
        }
    }
}
