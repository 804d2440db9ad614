use super::state::{apply_gate, haar_unitary_with};
use super::{Gate, StateVector, DENSE_MATRIX_CAP, DENSE_STATE_CAP};
use crate::error::{check_cap, Error, Result};
use crate::linalg::CMatrix;
use crate::C64;

/// Ordered gate list on a fixed register. Gates are applied first to last.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new() }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(n_qubits)
    }

    /// `H^{⊗n}`.
    pub fn hadamard_all(n_qubits: usize) -> Self {
        Self { n_qubits, gates: (0..n_qubits).map(Gate::H).collect() }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Append a gate after validating it.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(self.n_qubits))
    }

    /// Circuit applying `self` then `next`.
    pub fn then(&self, next: &Circuit) -> Result<Circuit> {
        if next.n_qubits != self.n_qubits {
            return Err(Error::QubitMismatch { expected: self.n_qubits, got: next.n_qubits });
        }
        let mut gates = self.gates.clone();
        gates.extend(next.gates.iter().cloned());
        Ok(Circuit { n_qubits: self.n_qubits, gates })
    }

    /// Apply to a raw amplitude buffer of length `2^n`.
    pub fn apply_to(&self, amps: &mut [C64]) {
        debug_assert_eq!(amps.len(), 1 << self.n_qubits);
        for g in &self.gates {
            apply_gate(amps, self.n_qubits, g);
        }
    }

    /// Column `U|index⟩` as a dense buffer.
    pub fn column(&self, index: usize) -> Vec<C64> {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << self.n_qubits];
        amps[index] = C64::new(1.0, 0.0);
        self.apply_to(&mut amps);
        amps
    }

    /// Full unitary, built column by column (n ≤ 8).
    pub fn matrix(&self) -> Result<CMatrix> {
        check_cap("circuit matrix", self.n_qubits, DENSE_MATRIX_CAP)?;
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            for (i, a) in self.column(j).into_iter().enumerate() {
                m[(i, j)] = a;
            }
        }
        Ok(m)
    }

    /// Largest entry of `U†U - I` (n ≤ 8).
    pub fn unitarity_defect(&self) -> Result<f64> {
        let m = self.matrix()?;
        let dim = m.nrows();
        let prod = m.adjoint() * &m;
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - C64::new(want, 0.0)).norm());
            }
        }
        Ok(worst)
    }
}

/// `U_c · s`. The input is left untouched.
pub fn apply_circuit(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    if c.n_qubits != s.n_qubits() {
        return Err(Error::QubitMismatch { expected: c.n_qubits, got: s.n_qubits() });
    }
    check_cap("apply_circuit", c.n_qubits, DENSE_STATE_CAP)?;
    c.validate()?;
    let mut amps = s.amps().to_vec();
    c.apply_to(&mut amps);
    let out = StateVector::unnormalized(amps)?;
    if s.is_normalized() {
        StateVector::from_amps(out.into_amps())
    } else {
        Ok(out)
    }
}

/// Reversed gate order with every gate replaced by its adjoint.
pub fn dagger(c: &Circuit) -> Circuit {
    Circuit { n_qubits: c.n_qubits, gates: c.gates.iter().rev().map(Gate::adjoint).collect() }
}

/// Brickwork of Haar-random two-qubit gates: layer `l` couples `(q, q+1)` for
/// `q ≡ l (mod 2)`. A single qubit gets Haar-random one-qubit layers instead.
pub fn random_brickwork(n_qubits: usize, layers: usize, seed: u64) -> Result<Circuit> {
    if n_qubits == 0 {
        return Err(Error::invalid("random_brickwork needs at least one qubit"));
    }
    let mut c = Circuit::new(n_qubits);
    for l in 0..layers {
        let mut rng = crate::rng::rng_from(seed, &[0xB21C, l as u64]);
        if n_qubits == 1 {
            let u = haar_unitary_with(2, &mut rng);
            c.push(Gate::U1Q(0, [u[0], u[1], u[2], u[3]]))?;
            continue;
        }
        for q in (l % 2..n_qubits - 1).step_by(2) {
            let u: [C64; 16] = haar_unitary_with(4, &mut rng).try_into().expect("4x4 literal");
            c.push(Gate::U2Q(q, q + 1, Box::new(u)))?;
        }
    }
    Ok(c)
}
