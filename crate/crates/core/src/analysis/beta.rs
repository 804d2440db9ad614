use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::{par, rng};

const CF_TOL: f64 = 1e-15;
const CF_MAX_ITER: usize = 20_000;
const TINY: f64 = 1e-300;

/// Regularized incomplete beta `I(x; a, b)`.
///
/// Modified Lentz evaluation of the standard continued fraction, switched to
/// `1 − I(1−x; b, a)` past the mean so it always converges quickly.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::invalid(format!("reg_inc_beta: x = {x} outside [0, 1]")));
    }
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("reg_inc_beta: need a, b > 0, got a = {a}, b = {b}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok((ln_front.exp() * lentz(x, a, b)? / a).clamp(0.0, 1.0))
    } else {
        Ok((1.0 - ln_front.exp() * lentz(1.0 - x, b, a)? / b).clamp(0.0, 1.0))
    }
}

fn lentz(x: f64, a: f64, b: f64) -> Result<f64> {
    let guard = |v: f64| if v.abs() < TINY { TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - (a + b) * x / (a + 1.0));
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let even = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        d = 1.0 / guard(1.0 + even * d);
        c = guard(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
        d = 1.0 / guard(1.0 + odd * d);
        c = guard(1.0 + odd / c);
        let step = d * c;
        h *= step;
        if (step - 1.0).abs() < CF_TOL {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence(format!("incomplete beta continued fraction at x = {x}, a = {a}, b = {b}")))
}

/// Arguments of the sparse-volume calculators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeQuery {
    pub n: usize,
    pub k: usize,
    pub eps: f64,
}

/// Largest register for the closed-form volume calculators.
pub const VOLUME_MAX_QUBITS: usize = 40;
/// Largest register for the Haar Monte-Carlo estimate.
pub const MC_MAX_QUBITS: usize = 12;

impl VolumeQuery {
    pub fn new(n: usize, k: usize, eps: f64) -> Result<Self> {
        let q = Self { n, k, eps };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > VOLUME_MAX_QUBITS {
            return Err(Error::invalid(format!("volume query needs 1 <= n <= {VOLUME_MAX_QUBITS}, got {}", self.n)));
        }
        if self.k == 0 || self.k > 1usize << self.n {
            return Err(Error::invalid(format!("volume query needs 1 <= K <= 2^n, got K = {}", self.k)));
        }
        if !(0.0..=1.0).contains(&self.eps) {
            return Err(Error::invalid(format!("eps = {} outside [0, 1]", self.eps)));
        }
        Ok(())
    }

    fn dim(&self) -> f64 {
        (1u64 << self.n) as f64
    }

    /// Mean and variance of the discarded mass `1 − Σ_{i∈S}|ψ_i|²`.
    pub fn moments(&self) -> (f64, f64) {
        let big = self.dim();
        let k = self.k as f64;
        ((big - k) / big, (big - k) * k / ((big + 1.0) * big * big))
    }
}

/// Probability that a Haar state keeps fidelity `≥ 1 − ε` on a fixed support
/// of size `K`: `I(ε; 2ⁿ − K, K)`.
pub fn sparse_volume_prob(q: &VolumeQuery) -> Result<f64> {
    q.validate()?;
    let rest = q.dim() - q.k as f64;
    if rest == 0.0 {
        return Ok(1.0);
    }
    reg_inc_beta(q.eps, rest, q.k as f64)
}

/// Same with both shape parameters lowered by 1/2, the form the Gaussian
/// approximation is usually quoted against. Reported alongside, not used for checks.
pub fn sparse_volume_prob_shifted(q: &VolumeQuery) -> Result<f64> {
    q.validate()?;
    let rest = q.dim() - q.k as f64 - 0.5;
    if rest <= 0.0 {
        return Ok(1.0);
    }
    reg_inc_beta(q.eps, rest, q.k as f64 - 0.5)
}

/// Normal CDF at `ε` with the mean and variance of the beta law.
pub fn gaussian_volume_approx(q: &VolumeQuery) -> Result<f64> {
    q.validate()?;
    let (mean, var) = q.moments();
    if var == 0.0 {
        return Ok(if q.eps >= mean { 1.0 } else { 0.0 });
    }
    let normal = Normal::new(mean, var.sqrt()).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(normal.cdf(q.eps))
}

/// `exp(−2ⁿ (ε − (2ⁿ−K)/2ⁿ)²)`, an order estimate valid for `K ≤ (1−ε)2ⁿ`.
/// `None` outside that range. Display only.
pub fn hoeffding_volume_estimate(q: &VolumeQuery) -> Result<Option<f64>> {
    q.validate()?;
    let big = q.dim();
    if q.k as f64 > (1.0 - q.eps) * big {
        return Ok(None);
    }
    let (mean, _) = q.moments();
    Ok(Some((-big * (q.eps - mean).powi(2)).exp()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub fraction: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Fraction of Haar states whose mass on the support `{0, …, K−1}` is at least
/// `1 − ε`. With `maximize`, the best support of size `K` is used instead.
pub fn haar_volume_mc(q: &VolumeQuery, trials: usize, seed: u64, maximize: bool) -> Result<McEstimate> {
    q.validate()?;
    crate::error::check_cap("haar_volume_mc", q.n, MC_MAX_QUBITS)?;
    if trials == 0 {
        return Err(Error::invalid("haar_volume_mc needs at least one trial"));
    }
    let dim = 1usize << q.n;
    let hits = par::sum_range(trials, |t| {
        use rand_distr::{Distribution, StandardNormal};
        let mut r = rng::rng_from(seed, &[0x701, t as u64]);
        let mut w: Vec<f64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut r);
                let im: f64 = StandardNormal.sample(&mut r);
                re * re + im * im
            })
            .collect();
        let total: f64 = w.iter().sum();
        if maximize {
            w.sort_unstable_by(|a, b| b.total_cmp(a));
        }
        let kept: f64 = w[..q.k].iter().sum();
        if kept >= (1.0 - q.eps) * total {
            1.0
        } else {
            0.0
        }
    });
    let p = hits / trials as f64;
    Ok(McEstimate { fraction: p, stderr: (p * (1.0 - p) / trials as f64).sqrt(), trials })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_symmetric_cases() {
        for x in [0.0, 0.25, 1.0] {
            assert!((reg_inc_beta(x, 1.0, 1.0).unwrap() - x).abs() < 1e-14);
        }
        for a in [2.0, 7.5] {
            assert!((reg_inc_beta(0.5, a, a).unwrap() - 0.5).abs() < 1e-13);
        }
        assert!(reg_inc_beta(1.5, 1.0, 1.0).is_err());
        assert!(reg_inc_beta(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn volume_edges() {
        assert_eq!(sparse_volume_prob(&VolumeQuery::new(3, 2, 1.0).unwrap()).unwrap(), 1.0);
        assert_eq!(sparse_volume_prob(&VolumeQuery::new(3, 2, 0.0).unwrap()).unwrap(), 0.0);
        assert_eq!(sparse_volume_prob(&VolumeQuery::new(3, 8, 0.0).unwrap()).unwrap(), 1.0);
        let q = VolumeQuery::new(4, 3, 0.0).unwrap();
        let (mean, _) = q.moments();
        let at_mean = VolumeQuery::new(4, 3, mean).unwrap();
        assert!((gaussian_volume_approx(&at_mean).unwrap() - 0.5).abs() < 1e-12);
        assert!(VolumeQuery::new(3, 9, 0.1).is_err());
    }
}
