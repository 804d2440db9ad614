use std::collections::BTreeMap;

use rand_distr::{Binomial, Distribution};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_cap, Error, Result};
use crate::mbrstate::top_k_indices;
use crate::qcore::{dagger, Circuit, StateVector, DENSE_STATE_CAP};
use crate::rng;

/// Outcome counts of `M` computational-basis measurements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleHistogram {
    pub n_qubits: usize,
    pub total: u64,
    /// Only nonzero counts are stored.
    pub counts: BTreeMap<usize, u64>,
}

impl SampleHistogram {
    pub fn new(n_qubits: usize, counts: BTreeMap<usize, u64>) -> Self {
        let counts: BTreeMap<usize, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let total = counts.values().sum();
        Self { n_qubits, total, counts }
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    /// `(index, count)` by decreasing count, ties by lower index.
    pub fn sorted(&self) -> Vec<(usize, u64)> {
        let mut v: Vec<(usize, u64)> = self.counts.iter().map(|(&i, &c)| (i, c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let m = self.total.max(1) as f64;
        self.sorted().into_iter().map(|(_, c)| c as f64 / m).collect()
    }
}

/// Binomial draw that tolerates probabilities a rounding step outside `[0, 1]`.
pub(crate) fn binomial(n: u64, p: f64, rng: &mut rng::Rng) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("p in (0, 1)").sample(rng)
}

/// Multinomial draw of `m` samples from `p`, as a chain of binomials.
pub(crate) fn multinomial(p: &[f64], m: u64, rng: &mut rng::Rng) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    let mut remaining = m;
    let mut mass: f64 = p.iter().sum();
    for (i, &pi) in p.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if pi <= 0.0 {
            continue;
        }
        let k = if mass <= pi { remaining } else { binomial(remaining, pi / mass, rng) };
        if k > 0 {
            out.insert(i, k);
        }
        remaining -= k;
        mass -= pi;
    }
    out
}

/// Measure `U†|s⟩` in the computational basis `m` times.
pub fn sample_in_basis(s: &StateVector, u: &Circuit, m: u64, seed: u64) -> Result<SampleHistogram> {
    let n = s.n_qubits();
    if u.n_qubits() != n {
        return Err(Error::QubitMismatch { expected: n, got: u.n_qubits() });
    }
    check_cap("sample_in_basis", n, DENSE_STATE_CAP)?;
    let mut amps = s.amps().to_vec();
    dagger(u).apply_to(&mut amps);
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if norm < 1e-300 {
        return Err(Error::ZeroNorm);
    }
    let p: Vec<f64> = amps.iter().map(|a| a.norm_sqr() / norm).collect();
    let mut r = rng::rng_from(seed, &[0x5A3D]);
    Ok(SampleHistogram::new(n, multinomial(&p, m, &mut r)))
}

/// Fewest outcomes whose probabilities sum to at least `1 − eps`.
pub fn eps_rank(p: &[f64], eps: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("eps = {eps} outside [0, 1]")));
    }
    Ok(crate::mbrstate::sparse_rank(p, eps))
}

/// Result of [`certify_support`].
#[derive(Clone, Debug, PartialEq)]
pub struct Certification {
    /// Top-`k` outcomes by count, sorted by decreasing count.
    pub support: Vec<usize>,
    pub k: usize,
    pub certified: bool,
    /// `m_{k+1}`, zero if fewer than `k + 1` outcomes were seen.
    pub boundary_count: u64,
    /// `√M · ln(2/δ)`.
    pub threshold: f64,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::invalid(format!("delta = {delta} outside (0, 0.1]")));
    }
    Ok(())
}

/// Empirical ε-rank and whether the sample size certifies it: the count just
/// past the rank must strictly exceed `√M · ln(2/δ)`.
pub fn certify_support(hist: &SampleHistogram, eps: f64, delta: f64) -> Result<Certification> {
    check_delta(delta)?;
    if hist.total == 0 {
        return Err(Error::invalid("empty histogram"));
    }
    let sorted = hist.sorted();
    let k = eps_rank(&hist.frequencies(), eps)?;
    let counts: Vec<f64> = (0..sorted.len()).map(|i| sorted[i].1 as f64).collect();
    let order = top_k_indices(&counts, k);
    let support: Vec<usize> = order.iter().map(|&i| sorted[i].0).collect();
    let boundary_count = sorted.get(k).map(|x| x.1).unwrap_or(0);
    let threshold = (hist.total as f64).sqrt() * (2.0 / delta).ln();
    Ok(Certification { support, k, certified: boundary_count as f64 > threshold, boundary_count, threshold })
}

/// Two-sided Wilson score interval at confidence `1 − δ`.
pub fn wilson_interval(count: u64, m: u64, delta: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta = {delta} outside (0, 1)")));
    }
    if m == 0 || count > m {
        return Err(Error::invalid(format!("need 0 <= count <= M with M > 0, got {count}/{m}")));
    }
    let z = Normal::standard().inverse_cdf(1.0 - delta / 2.0);
    let (mf, p) = (m as f64, count as f64 / m as f64);
    let z2 = z * z;
    let denom = 1.0 + z2 / mf;
    let center = (p + z2 / (2.0 * mf)) / denom;
    let half = z / denom * (p * (1.0 - p) / mf + z2 / (4.0 * mf * mf)).sqrt();
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}
