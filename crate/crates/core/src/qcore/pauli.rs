use std::fmt;

use super::{bit_of, StateVector};
use crate::error::{Error, Result};
use crate::{linalg, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, letter `k` acting on qubit `k`.
///
/// On basis states it acts as `P|j⟩ = i^{#Y} (-1)^{|j ∧ zy|} |j ⊕ xy⟩` where
/// `xy` marks X/Y positions and `zy` marks Z/Y positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    flip_mask: usize,
    sign_mask: usize,
    n_y: u32,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        let n = letters.len();
        let mut flip_mask = 0;
        let mut sign_mask = 0;
        let mut n_y = 0;
        for (q, &p) in letters.iter().enumerate() {
            let bit = 1usize << bit_of(n, q);
            match p {
                Pauli::I => {}
                Pauli::X => flip_mask |= bit,
                Pauli::Z => sign_mask |= bit,
                Pauli::Y => {
                    flip_mask |= bit;
                    sign_mask |= bit;
                    n_y += 1;
                }
            }
        }
        Self { letters, flip_mask, sign_mask, n_y }
    }

    /// Parse a dense label such as `"XXIZ"`.
    pub fn parse(label: &str) -> Result<Self> {
        let letters = label
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::invalid(format!("bad Pauli letter {c:?} in {label:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(letters))
    }

    /// Identity except for the listed `(qubit, letter)` pairs.
    pub fn sparse(n: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n];
        for &(q, p) in ops {
            if q >= n {
                return Err(Error::invalid(format!("Pauli qubit {q} out of range for {n} qubits")));
            }
            letters[q] = p;
        }
        Ok(Self::new(letters))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_diagonal(&self) -> bool {
        self.flip_mask == 0
    }

    /// `(target index, phase)` with `P|j⟩ = phase |target⟩`.
    #[inline]
    pub fn act(&self, j: usize) -> (usize, C64) {
        let mut phase = match self.n_y % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        if (j & self.sign_mask).count_ones() % 2 == 1 {
            phase = -phase;
        }
        (j ^ self.flip_mask, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|p| write!(f, "{}", p.as_char()))
    }
}

/// Real-weighted sum of Pauli strings on a common register.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let mut s = Self::new(n_qubits);
        for (c, p) in terms {
            s.add(c, p)?;
        }
        Ok(s)
    }

    /// Build from dense labels, e.g. `[(0.5, "XXI"), (1.2, "IIZ")]`.
    pub fn from_labels(terms: &[(f64, &str)]) -> Result<Self> {
        let n = terms.first().map(|(_, l)| l.len()).ok_or_else(|| Error::invalid("empty Pauli sum"))?;
        let parsed = terms
            .iter()
            .map(|&(c, l)| PauliString::parse(l).map(|p| (c, p)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, parsed)
    }

    pub fn add(&mut self, coeff: f64, string: PauliString) -> Result<&mut Self> {
        if string.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch { expected: self.n_qubits, got: string.n_qubits() });
        }
        if !coeff.is_finite() {
            return Err(Error::invalid("Pauli coefficient is not finite"));
        }
        self.terms.push((coeff, string));
        Ok(self)
    }

    /// Concatenation of the terms of both sums.
    pub fn plus(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = self.clone();
        for (c, p) in &other.terms {
            out.add(*c, p.clone())?;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> PauliSum {
        PauliSum { n_qubits: self.n_qubits, terms: self.terms.iter().map(|(c, p)| (c * factor, p.clone())).collect() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// `out += O · v` on raw buffers of length `2^n`.
    pub fn apply_add(&self, v: &[C64], out: &mut [C64]) {
        for (coeff, p) in &self.terms {
            if *coeff == 0.0 {
                continue;
            }
            for (j, &a) in v.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let (k, phase) = p.act(j);
                out[k] += phase * a * *coeff;
            }
        }
    }

    /// `O · v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        self.apply_add(v, &mut out);
        out
    }

    /// `O · v` computed row by row (gather form), parallel over row chunks.
    pub fn apply_gather(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        let terms: Vec<&(f64, PauliString)> = self.terms.iter().filter(|t| t.0 != 0.0).collect();
        crate::par::for_each_chunk_mut(&mut out, 1 << 12, |k, rows| {
            let base = k << 12;
            for (r, o) in rows.iter_mut().enumerate() {
                let i = base + r;
                let mut acc = C64::new(0.0, 0.0);
                for (coeff, p) in &terms {
                    let j = i ^ p.flip_mask;
                    let (_, phase) = p.act(j);
                    acc += phase * v[j] * *coeff;
                }
                *o = acc;
            }
        });
        out
    }

    /// Dense `2^n × 2^n` matrix (n ≤ 8).
    pub fn matrix(&self) -> Result<crate::linalg::CMatrix> {
        crate::error::check_cap("Pauli sum matrix", self.n_qubits, super::DENSE_MATRIX_CAP)?;
        let dim = 1usize << self.n_qubits;
        let mut m = crate::linalg::CMatrix::zeros(dim, dim);
        for (coeff, p) in &self.terms {
            for j in 0..dim {
                let (k, phase) = p.act(j);
                m[(k, j)] += phase * *coeff;
            }
        }
        Ok(m)
    }
}

/// `⟨s|O|s⟩` (real part; the imaginary part vanishes for Hermitian `O`).
pub fn expectation_dense(s: &StateVector, obs: &PauliSum) -> Result<f64> {
    if s.n_qubits() != obs.n_qubits() {
        return Err(Error::QubitMismatch { expected: obs.n_qubits(), got: s.n_qubits() });
    }
    Ok(linalg::inner(s.amps(), &obs.apply(s.amps())).re)
}
