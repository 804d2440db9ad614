//! Dense statevector engine and circuit representation.
//!
//! Index `i` of a statevector is the computational basis element whose bits,
//! read most-significant first, are qubits `0, 1, …, n-1`. This is the only
//! bit convention in the crate.

mod circuit;
mod gate;
mod pauli;
mod state;
mod text;

pub use circuit::{apply_circuit, dagger, random_brickwork, Circuit};
pub use gate::Gate;
pub use pauli::{expectation_dense, Pauli, PauliString, PauliSum};
pub use state::{haar_random_state, StateVector};
pub use text::{parse_circuit, write_circuit};

/// Largest register held as a dense statevector.
pub const DENSE_STATE_CAP: usize = 16;
/// Largest register for which full `2^n × 2^n` matrices are built.
pub const DENSE_MATRIX_CAP: usize = 8;

/// Bit position (from the least significant end) holding qubit `q`.
#[inline]
pub fn bit_of(n: usize, q: usize) -> usize {
    n - 1 - q
}

/// Value (0 or 1) of qubit `q` in basis index `i`.
#[inline]
pub fn qubit_value(n: usize, i: usize, q: usize) -> usize {
    (i >> bit_of(n, q)) & 1
}
