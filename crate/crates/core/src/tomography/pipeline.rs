use serde_json::{json, Value};

use super::estimate::{hadamard_estimates, invert_gram, noisy_gram, PINV_CUTOFF};
use super::sampling::{certify_support, sample_in_basis, Certification};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::mbrstate::{assemble, gram_of, mbr_to_value, MbrState, SparseState};
use crate::qcore::{Circuit, StateVector};
use crate::{par, rng, C64};

/// Where the overlap matrix comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramMode {
    /// Computed exactly by the dense oracle.
    ExactF,
    /// Estimated with simulated Hadamard tests on a budget of `M_H` shots.
    NoisyF,
}

impl GramMode {
    pub fn label(self) -> &'static str {
        match self {
            GramMode::ExactF => "exact-F",
            GramMode::NoisyF => "noisy-F",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TomographyConfig {
    /// Samples per basis for support identification.
    pub m: u64,
    /// Hadamard-test shots per basis.
    pub m_h: u64,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub mode: GramMode,
}

#[derive(Clone, Debug)]
pub struct TomographyReport {
    pub config: TomographyConfig,
    pub recovered: MbrState,
    pub certifications: Vec<Certification>,
    pub supports_certified: Vec<bool>,
    pub a_hat: Vec<C64>,
    pub a_true: Vec<C64>,
    pub f_hat: CMatrix,
    pub f_true: CMatrix,
    pub alpha_hat: Vec<C64>,
    pub zero_blocks: Vec<bool>,
    /// Oracle-only: `|⟨truth|ψ̂⟩|² / ⟨ψ̂|ψ̂⟩`.
    pub fidelity_to_truth: f64,
    /// First-order bound on `‖α − α̂‖₂`.
    pub error_bound: f64,
}

/// `2√2 · K · B · √(ln(2/δ)/M_H)`, the bound on `‖a − â‖₂²`.
pub fn amplitude_error_bound_sq(k: usize, b: usize, delta: f64, m_h: u64) -> f64 {
    2.0 * 2f64.sqrt() * (k * b) as f64 * ((2.0 / delta).ln() / m_h as f64).sqrt()
}

/// `2√2 · K² · B² · √(ln(2/δ)/M_H)`, the bound on `‖F − F̂‖₂²`.
pub fn gram_error_bound_sq(k: usize, b: usize, delta: f64, m_h: u64) -> f64 {
    2.0 * 2f64.sqrt() * ((k * b) as f64).powi(2) * ((2.0 / delta).ln() / m_h as f64).sqrt()
}

/// Sample, certify, estimate amplitudes, build `F`, invert.
pub fn tomography_pipeline(truth: &StateVector, bases: &[Circuit], cfg: &TomographyConfig) -> Result<TomographyReport> {
    if bases.is_empty() {
        return Err(Error::invalid("tomography needs at least one basis"));
    }
    if cfg.m == 0 || cfg.m_h == 0 {
        return Err(Error::invalid("M and M_H must be positive"));
    }
    if !(0.0..=1.0).contains(&cfg.eps) {
        return Err(Error::invalid(format!("eps = {} outside [0, 1]", cfg.eps)));
    }
    let n = truth.n_qubits();
    if let Some(u) = bases.iter().find(|u| u.n_qubits() != n) {
        return Err(Error::QubitMismatch { expected: n, got: u.n_qubits() });
    }

    let per_basis = par::try_map_range(bases.len(), |b| {
        let hist = sample_in_basis(truth, &bases[b], cfg.m, rng::derive_seed(cfg.seed, &[b as u64, 0]))?;
        let cert = certify_support(&hist, cfg.eps, cfg.delta)?;
        let est = hadamard_estimates(
            truth,
            &bases[b],
            &cert.support,
            cfg.m_h,
            &hist,
            rng::derive_seed(cfg.seed, &[b as u64, 1]),
        )?;
        Ok::<_, Error>((cert, est))
    })?;

    let supports: Vec<Vec<usize>> = per_basis.iter().map(|(c, _)| c.support.clone()).collect();
    let a_hat: Vec<C64> = per_basis.iter().flat_map(|(_, e)| e.a_hat.iter().copied()).collect();
    let a_true: Vec<C64> = per_basis.iter().flat_map(|(_, e)| e.a_true.iter().copied()).collect();
    let f_exact = gram_of(bases, &supports)?;
    let f_used = match cfg.mode {
        GramMode::ExactF => f_exact.clone(),
        GramMode::NoisyF => noisy_gram(&f_exact, cfg.m_h, rng::derive_seed(cfg.seed, &[0xF0F0]))?,
    };
    let inv = invert_gram(&a_hat, &f_used, PINV_CUTOFF)?;

    let components = supports
        .iter()
        .zip(&inv.coeffs)
        .map(|(s, c)| {
            if c.is_empty() {
                SparseState::basis(n, s[0])
            } else {
                SparseState::normalized(n, s.clone(), c.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let recovered = MbrState::new(bases.to_vec(), inv.weights.clone(), components)?;

    let psi = assemble(&recovered)?;
    let norm = psi.norm_sqr();
    let fidelity_to_truth = if norm > 0.0 { truth.inner(&psi)?.norm_sqr() / (norm * truth.norm_sqr()) } else { 0.0 };

    let k = supports.iter().map(Vec::len).max().unwrap_or(0);
    let ea = amplitude_error_bound_sq(k, bases.len(), cfg.delta, cfg.m_h).sqrt();
    let ef = match cfg.mode {
        GramMode::ExactF => 0.0,
        GramMode::NoisyF => gram_error_bound_sq(k, bases.len(), cfg.delta, cfg.m_h).sqrt(),
    };
    let a_norm = linalg::norm_sqr(&a_hat).sqrt();
    let error_bound = inv.pinv_norm * ea + inv.pinv_norm.powi(2) * ef * a_norm;

    let certifications: Vec<Certification> = per_basis.into_iter().map(|(c, _)| c).collect();
    Ok(TomographyReport {
        config: *cfg,
        recovered,
        supports_certified: certifications.iter().map(|c| c.certified).collect(),
        certifications,
        a_hat,
        a_true,
        f_hat: f_used.into_matrix(),
        f_true: f_exact.into_matrix(),
        alpha_hat: inv.alpha_hat,
        zero_blocks: inv.zero_blocks,
        fidelity_to_truth,
        error_bound,
    })
}

fn cvec(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|c| json!([c.re, c.im])).collect())
}

fn cmat(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows()).map(|r| Value::Array((0..m.ncols()).map(|c| json!([m[(r, c)].re, m[(r, c)].im])).collect())).collect(),
    )
}

impl TomographyReport {
    /// JSON document; the seed and all settings are echoed.
    pub fn to_json(&self) -> Value {
        let c = &self.config;
        json!({
            "seed": c.seed,
            "mode": c.mode.label(),
            "M": c.m,
            "MH": c.m_h,
            "eps": c.eps,
            "delta": c.delta,
            "recovered": mbr_to_value(&self.recovered),
            "supports": self.certifications.iter().map(|x| x.support.clone()).collect::<Vec<_>>(),
            "k_hat": self.certifications.iter().map(|x| x.k).collect::<Vec<_>>(),
            "boundary_counts": self.certifications.iter().map(|x| x.boundary_count).collect::<Vec<_>>(),
            "threshold": self.certifications.first().map(|x| x.threshold),
            "supports_certified": self.supports_certified,
            "a_hat": cvec(&self.a_hat),
            "F_hat": cmat(&self.f_hat),
            "alpha_hat": cvec(&self.alpha_hat),
            "zero_blocks": self.zero_blocks,
            "fidelity_to_truth": self.fidelity_to_truth,
            "error_bound": self.error_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn computational_basis_state_is_recovered() {
        let truth = StateVector::zero(3).unwrap();
        let cfg = TomographyConfig { m: 1000, m_h: 10_000, eps: 0.05, delta: 0.05, seed: 3, mode: GramMode::ExactF };
        let r = tomography_pipeline(&truth, &[Circuit::identity(3)], &cfg).unwrap();
        assert!((r.fidelity_to_truth - 1.0).abs() < 1e-9);
        assert_eq!(r.supports_certified, vec![false]);
        assert!(r.to_json()["fidelity_to_truth"].is_number());
    }
}
