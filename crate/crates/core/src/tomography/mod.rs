//! Simulated tomography of an MBR: sample each basis to find the support,
//! estimate amplitudes with simulated Hadamard tests, and invert the overlap
//! system `a = F α`.

mod estimate;
mod pipeline;
mod sampling;

pub use estimate::{hadamard_estimates, invert_gram, noisy_gram, AmplitudeEstimates, Inversion, PINV_CUTOFF};
pub use pipeline::{
    amplitude_error_bound_sq, gram_error_bound_sq, tomography_pipeline, GramMode, TomographyConfig, TomographyReport,
};
pub use sampling::{certify_support, eps_rank, sample_in_basis, wilson_interval, Certification, SampleHistogram};
