//! Ground states by subspace expansion over a few bases.
//!
//! Each Hamiltonian term is diagonal in a known basis. Its lowest-energy
//! basis states, grown into Hamming balls, give the supports; the Hamiltonian
//! is projected onto the resulting non-orthogonal vectors and the
//! generalized eigenproblem is solved.

mod exact;
mod gep;
mod graph;
mod hamiltonian;
mod pipeline;
mod seeds;

pub use exact::{
    exact_ground_energy, exact_ground_energy_with, ExactMethod, AUTO_DENSE_MAX, DENSE_EXACT_CAP, LANCZOS_CAP,
    LANCZOS_TOL,
};
pub use gep::{solve_gep, term_matrices, truncated_hamiltonian, GepSolution, GEP_CUTOFF};
pub use graph::GraphSpec;
pub use hamiltonian::{tfim, DiagonalEnergy, HamTerm, HamiltonianDecomposition};
pub use pipeline::{linspace, mbr_ground_pipeline, tfim_sweep, GroundRecord, PipelineOptions};
pub use seeds::{
    hamming_ball, seed_supports, seed_supports_on_lattice, Provenance, SeedSet, SeedStrategy, SubspaceSelection,
    BRUTE_FORCE_MAX_QUBITS, SEED_CAP,
};
