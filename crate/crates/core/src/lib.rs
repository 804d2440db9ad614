//! Multiple-basis representations (MBR) of quantum states.
//!
//! A state is written as `Σ_b α_b U_b |ψ_b⟩` where every `|ψ_b⟩` is sparse in the
//! computational basis and `U_b` is a circuit-defined basis change. The crate
//! provides a dense statevector engine ([`qcore`]) that serves as ground truth,
//! the MBR calculus ([`mbrstate`]), mutually unbiased bases ([`mub`]),
//! subspace-expansion ground states ([`groundstate`]), a simulated tomography
//! protocol ([`tomography`]) and bound calculators ([`analysis`]).
//!
//! Data-parallel loops (Monte-Carlo trials, sweeps, Gram columns) run on rayon
//! when the `parallel` feature is enabled (the default) and sequentially
//! otherwise. Results never depend on the schedule.

pub mod analysis;
pub mod error;
pub mod groundstate;
pub mod linalg;
pub mod mbrstate;
pub mod mub;
pub mod par;
pub mod qcore;
pub mod rng;
pub mod selftest;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
