use rand_distr::{Distribution, StandardNormal};

use super::{bit_of, Gate, DENSE_STATE_CAP};
use crate::error::{check_cap, Error, Result};
use crate::{linalg, rng, C64};

const NORM_TOL: f64 = 1e-9;

/// Dense vector of `2^n` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
    normalized: bool,
}

impl StateVector {
    /// `|index⟩` on `n` qubits.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_cap("statevector", n, DENSE_STATE_CAP)?;
        if index >= 1 << n {
            return Err(Error::invalid(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amps, normalized: true })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Normalized state from amplitudes; fails if the norm is not 1 within 1e-9.
    pub fn from_amps(amps: Vec<C64>) -> Result<Self> {
        let s = Self::unnormalized(amps)?;
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("amplitudes have squared norm {norm}, expected 1")));
        }
        Ok(Self { normalized: true, ..s })
    }

    /// Amplitudes taken as-is, marked unnormalized.
    pub fn unnormalized(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("amplitude count {len} is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        check_cap("statevector", n, DENSE_STATE_CAP)?;
        Ok(Self { n_qubits: n, amps, normalized: false })
    }

    /// Rescale to unit norm.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        self.normalized = true;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        Ok(linalg::inner(&self.amps, &other.amps))
    }

    /// `|⟨self|other⟩|² / (‖self‖² ‖other‖²)`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let ov = self.inner(other)?;
        let den = self.norm_sqr() * other.norm_sqr();
        if den < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(ov.norm_sqr() / den)
    }

    /// Computational-basis probabilities `|amp_i|²` (not renormalized).
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Haar-random state: i.i.d. complex Gaussians normalized to unit norm.
pub fn haar_random_state(n: usize, seed: u64) -> Result<StateVector> {
    check_cap("haar_random_state", n, DENSE_STATE_CAP)?;
    let mut rng = rng::rng_from(seed, &[0x4841_4152]);
    Ok(haar_with(n, &mut rng))
}

pub(crate) fn haar_with(n: usize, rng: &mut rng::Rng) -> StateVector {
    let amps: Vec<C64> = (0..1usize << n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    StateVector::unnormalized(amps)
        .and_then(StateVector::normalize)
        .expect("gaussian vector has nonzero norm")
}

/// Haar-random `dim × dim` unitary, row-major, by Gram-Schmidt on Gaussian columns.
pub(crate) fn haar_unitary_with(dim: usize, rng: &mut rng::Rng) -> Vec<C64> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im)
            })
            .collect();
        for u in &cols {
            let p = linalg::inner(u, &v);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
        }
        let nrm = linalg::norm_sqr(&v).sqrt();
        if nrm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / nrm).collect());
        }
    }
    (0..dim * dim).map(|k| cols[k % dim][k / dim]).collect()
}

/// Apply one gate in place to a `2^n` amplitude buffer. The gate must already
/// be validated against `n`.
pub(crate) fn apply_gate(amps: &mut [C64], n: usize, gate: &Gate) {
    match gate {
        Gate::Z(q) => phase_on_one(amps, n, *q, C64::new(-1.0, 0.0)),
        Gate::S(q) => phase_on_one(amps, n, *q, C64::new(0.0, 1.0)),
        Gate::T(q) => phase_on_one(amps, n, *q, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
        Gate::X(q) => {
            let stride = 1usize << bit_of(n, *q);
            for i in 0..amps.len() {
                if i & stride == 0 {
                    amps.swap(i, i | stride);
                }
            }
        }
        Gate::CX(ctl, tgt) => {
            let cb = 1usize << bit_of(n, *ctl);
            let tb = 1usize << bit_of(n, *tgt);
            for i in 0..amps.len() {
                if i & cb != 0 && i & tb == 0 {
                    amps.swap(i, i | tb);
                }
            }
        }
        Gate::CZ(a, b) => {
            let mask = (1usize << bit_of(n, *a)) | (1usize << bit_of(n, *b));
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *amp = -*amp;
                }
            }
        }
        Gate::Swap(a, b) => {
            let ab = 1usize << bit_of(n, *a);
            let bb = 1usize << bit_of(n, *b);
            for i in 0..amps.len() {
                if i & ab != 0 && i & bb == 0 {
                    amps.swap(i, (i & !ab) | bb);
                }
            }
        }
        Gate::U2Q(a, b, _) => {
            let m = gate.matrix_2q().expect("two-qubit literal");
            let ab = 1usize << bit_of(n, *a);
            let bb = 1usize << bit_of(n, *b);
            for i in 0..amps.len() {
                if i & (ab | bb) == 0 {
                    let idx = [i, i | bb, i | ab, i | ab | bb];
                    let v = idx.map(|k| amps[k]);
                    for (r, &k) in idx.iter().enumerate() {
                        amps[k] = (0..4).map(|s| m[r * 4 + s] * v[s]).sum();
                    }
                }
            }
        }
        Gate::Perm(targets, table) => {
            let bits: Vec<usize> = targets.iter().map(|&q| bit_of(n, q)).collect();
            let k = bits.len();
            let mask: usize = bits.iter().map(|&b| 1usize << b).sum();
            let local = |i: usize| -> usize {
                bits.iter().fold(0usize, |acc, &b| (acc << 1) | ((i >> b) & 1))
            };
            let place = |base: usize, l: usize| -> usize {
                bits.iter().enumerate().fold(base, |acc, (pos, &b)| acc | (((l >> (k - 1 - pos)) & 1) << b))
            };
            let src = amps.to_vec();
            for (i, &a) in src.iter().enumerate() {
                let dest = place(i & !mask, table[local(i)]);
                amps[dest] = a;
            }
        }
        _ => {
            let q = gate.targets()[0];
            let m = gate.matrix_1q().expect("single-qubit gate");
            let stride = 1usize << bit_of(n, q);
            for i in 0..amps.len() {
                if i & stride == 0 {
                    let a0 = amps[i];
                    let a1 = amps[i | stride];
                    amps[i] = m[0] * a0 + m[1] * a1;
                    amps[i | stride] = m[2] * a0 + m[3] * a1;
                }
            }
        }
    }
}

fn phase_on_one(amps: &mut [C64], n: usize, q: usize, phase: C64) {
    let stride = 1usize << bit_of(n, q);
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & stride != 0 {
            *amp *= phase;
        }
    }
}
