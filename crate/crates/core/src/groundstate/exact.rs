use nalgebra::{DMatrix, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use super::HamiltonianDecomposition;
use crate::error::{check_cap, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qcore::PauliSum;
use crate::{rng, C64};

/// Largest register diagonalized densely on request.
pub const DENSE_EXACT_CAP: usize = 10;
/// Above this size `Auto` switches to Lanczos.
pub const AUTO_DENSE_MAX: usize = 8;
/// Largest register handled by Lanczos.
pub const LANCZOS_CAP: usize = 20;
/// Residual tolerance `‖Hx − θx‖ ≤ tol · max(1, |θ|)`.
pub const LANCZOS_TOL: f64 = 1e-8;
const MAX_RESTARTS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactMethod {
    Auto,
    Dense,
    Lanczos,
}

/// Lowest eigenvalue of `Σ_c h_c`.
pub fn exact_ground_energy(decomp: &HamiltonianDecomposition) -> Result<f64> {
    exact_ground_energy_with(decomp, ExactMethod::Auto)
}

pub fn exact_ground_energy_with(decomp: &HamiltonianDecomposition, method: ExactMethod) -> Result<f64> {
    let h = decomp.total();
    let n = decomp.n_qubits;
    match method {
        ExactMethod::Dense => dense_ground(&h),
        ExactMethod::Lanczos => lanczos_ground(&h),
        ExactMethod::Auto if n <= AUTO_DENSE_MAX => dense_ground(&h),
        ExactMethod::Auto => lanczos_ground(&h),
    }
}

fn dense_ground(h: &PauliSum) -> Result<f64> {
    let n = h.n_qubits();
    check_cap("dense diagonalization", n, DENSE_EXACT_CAP)?;
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for (coeff, p) in h.terms() {
        for j in 0..dim {
            let (k, phase) = p.act(j);
            m[(k, j)] += phase * *coeff;
        }
    }
    Ok(linalg::eigh(&m).0[0])
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    linalg::inner(a, b)
}

fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Thick-free restarted Lanczos: blocks of at most `m` steps with full
/// reorthogonalization, restarted from the current Ritz vector.
fn lanczos_ground(h: &PauliSum) -> Result<f64> {
    let n = h.n_qubits();
    check_cap("Lanczos", n, LANCZOS_CAP)?;
    let dim = 1usize << n;
    if dim <= 2 {
        return dense_ground(h);
    }
    // Fewer stored vectors on large registers.
    let m = if n <= 16 { 60 } else { 24 }.min(dim);
    let mut g = rng::rng_from(rng::DEFAULT_SEED, &[0x1A4C, n as u64]);
    let mut x: Vec<C64> =
        (0..dim).map(|_| C64::new(StandardNormal.sample(&mut g), StandardNormal.sample(&mut g))).collect();
    let nx = linalg::norm_sqr(&x).sqrt();
    x.iter_mut().for_each(|v| *v /= nx);

    let mut theta = f64::NAN;
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<C64>> = vec![x.clone()];
        let mut alphas: Vec<f64> = Vec::with_capacity(m);
        let mut betas: Vec<f64> = Vec::with_capacity(m);
        let mut breakdown = false;
        let mut last_beta = 0.0;
        for k in 0..m {
            let mut w = h.apply_gather(&basis[k]);
            let alpha = dot(&basis[k], &w).re;
            axpy(&mut w, C64::new(-alpha, 0.0), &basis[k]);
            if k > 0 {
                axpy(&mut w, C64::new(-betas[k - 1], 0.0), &basis[k - 1]);
            }
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(&mut w, -c, v);
                }
            }
            alphas.push(alpha);
            let beta = linalg::norm_sqr(&w).sqrt();
            last_beta = beta;
            if beta < 1e-12 * alpha.abs().max(1.0) {
                breakdown = true;
                break;
            }
            if k + 1 == m {
                break;
            }
            betas.push(beta);
            w.iter_mut().for_each(|v| *v /= beta);
            basis.push(w);
        }
        let steps = alphas.len();
        let t = DMatrix::from_fn(steps, steps, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j {
                betas[i]
            } else if j + 1 == i {
                betas[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (imin, &tmin) =
            eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty tridiagonal");
        theta = tmin;
        let y = eig.eigenvectors.column(imin);
        let mut next = vec![C64::new(0.0, 0.0); dim];
        for (k, v) in basis.iter().take(steps).enumerate() {
            axpy(&mut next, C64::new(y[k], 0.0), v);
        }
        let nn = linalg::norm_sqr(&next).sqrt();
        next.iter_mut().for_each(|v| *v /= nn);
        x = next;
        let residual = if breakdown { 0.0 } else { (last_beta * y[steps - 1]).abs() };
        if residual <= LANCZOS_TOL * theta.abs().max(1.0) {
            return Ok(theta);
        }
    }
    Err(Error::NonConvergence(format!(
        "Lanczos did not reach residual {LANCZOS_TOL:e} after {MAX_RESTARTS} restarts (last estimate {theta})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groundstate::{tfim, GraphSpec};

    #[test]
    fn single_edge() {
        let d = tfim(&GraphSpec::new(2, vec![(0, 1)]).unwrap(), 1.0, 0.0).unwrap();
        assert!((exact_ground_energy(&d).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn lone_spin_in_field() {
        let d = tfim(&GraphSpec::new(1, vec![]).unwrap(), 1.0, 1.0).unwrap();
        assert!((exact_ground_energy(&d).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_matches_dense_on_a_chain() {
        let d = tfim(&GraphSpec::lattice(1, 6).unwrap(), 1.0, 0.7).unwrap();
        let a = exact_ground_energy_with(&d, ExactMethod::Dense).unwrap();
        let b = exact_ground_energy_with(&d, ExactMethod::Lanczos).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn caps_enforced() {
        let d = tfim(&GraphSpec::lattice(1, 11).unwrap(), 1.0, 1.0).unwrap();
        assert!(matches!(exact_ground_energy_with(&d, ExactMethod::Dense), Err(Error::DenseCap { .. })));
    }
}
