use super::GraphSpec;
use crate::error::{check_cap, Result};
use crate::linalg::CMatrix;
use crate::qcore::{dagger, qubit_value, Circuit, Pauli, PauliString, PauliSum, DENSE_MATRIX_CAP};

/// Closed-form diagonal of `U_c† h_c U_c` in the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagonalEnergy {
    /// `coeff · Σ_{(i,j)} s_i s_j` with `s = (-1)^{bit}`.
    Ising { n: usize, edges: Vec<(usize, usize)>, coeff: f64 },
    /// `coeff · Σ_i s_i = coeff · (n − 2·popcount)`.
    Field { n: usize, coeff: f64 },
}

impl DiagonalEnergy {
    pub fn n_qubits(&self) -> usize {
        match self {
            DiagonalEnergy::Ising { n, .. } | DiagonalEnergy::Field { n, .. } => *n,
        }
    }

    pub fn energy(&self, index: usize) -> f64 {
        match self {
            DiagonalEnergy::Ising { n, edges, coeff } => {
                let aligned = edges.iter().filter(|&&(a, b)| qubit_value(*n, index, a) == qubit_value(*n, index, b)).count();
                coeff * (2.0 * aligned as f64 - edges.len() as f64)
            }
            DiagonalEnergy::Field { n, coeff } => coeff * (*n as f64 - 2.0 * index.count_ones() as f64),
        }
    }

    pub fn coeff(&self) -> f64 {
        match self {
            DiagonalEnergy::Ising { coeff, .. } | DiagonalEnergy::Field { coeff, .. } => *coeff,
        }
    }

    /// Same structure with a different coefficient.
    pub fn with_coeff(&self, c: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            DiagonalEnergy::Ising { coeff, .. } | DiagonalEnergy::Field { coeff, .. } => *coeff = c,
        }
        out
    }
}

/// One term `h_c` with the circuit that diagonalizes it.
#[derive(Clone, Debug, PartialEq)]
pub struct HamTerm {
    pub op: PauliSum,
    pub circuit: Circuit,
    pub energy: DiagonalEnergy,
}

/// `H = Σ_c h_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianDecomposition {
    pub n_qubits: usize,
    pub terms: Vec<HamTerm>,
}

impl HamiltonianDecomposition {
    pub fn total(&self) -> PauliSum {
        let mut h = PauliSum::new(self.n_qubits);
        for t in &self.terms {
            for (c, s) in t.op.terms() {
                h.add(*c, s.clone()).expect("terms share the register");
            }
        }
        h
    }

    pub fn bases(&self) -> Vec<Circuit> {
        self.terms.iter().map(|t| t.circuit.clone()).collect()
    }

    /// Per term, the largest off-diagonal entry of `U_c† h_c U_c` and the
    /// largest mismatch between its diagonal and the closed-form energies.
    pub fn diagonalization_defects(&self) -> Result<Vec<(f64, f64)>> {
        check_cap("diagonalization check", self.n_qubits, DENSE_MATRIX_CAP)?;
        self.terms
            .iter()
            .map(|t| {
                let u = t.circuit.matrix()?;
                let d: CMatrix = dagger_matrix(&t.circuit)? * t.op.matrix()? * u;
                let mut off = 0.0f64;
                let mut diag = 0.0f64;
                for i in 0..d.nrows() {
                    for j in 0..d.ncols() {
                        if i == j {
                            diag = diag.max((d[(i, i)].re - t.energy.energy(i)).abs().max(d[(i, i)].im.abs()));
                        } else {
                            off = off.max(d[(i, j)].norm());
                        }
                    }
                }
                Ok((off, diag))
            })
            .collect()
    }
}

fn dagger_matrix(c: &Circuit) -> Result<CMatrix> {
    dagger(c).matrix()
}

/// `J Σ_{(i,j)∈E} X_i X_j + h Σ_i Z_i`, split into the `XX` term (diagonal
/// after `H^{⊗n}`) and the `Z` term (already diagonal).
pub fn tfim(graph: &GraphSpec, j: f64, h: f64) -> Result<HamiltonianDecomposition> {
    let n = graph.n_nodes();
    check_cap("tfim", n, 20)?;
    let mut xx = PauliSum::new(n);
    for &(a, b) in graph.edges() {
        xx.add(j, PauliString::sparse(n, &[(a, Pauli::X), (b, Pauli::X)])?)?;
    }
    let mut z = PauliSum::new(n);
    for q in 0..n {
        z.add(h, PauliString::sparse(n, &[(q, Pauli::Z)])?)?;
    }
    Ok(HamiltonianDecomposition {
        n_qubits: n,
        terms: vec![
            HamTerm {
                op: xx,
                circuit: Circuit::hadamard_all(n),
                energy: DiagonalEnergy::Ising { n, edges: graph.edges().to_vec(), coeff: j },
            },
            HamTerm { op: z, circuit: Circuit::identity(n), energy: DiagonalEnergy::Field { n, coeff: h } },
        ],
    })
}
