//! Bound calculators and their Monte-Carlo or dense-simulation checks:
//! sparse-state volumes, LCU loading probabilities, depth estimates and the
//! reduce-and-chop truncation.

mod beta;
mod chop;
mod depth;
mod lcu;

pub use beta::{
    gaussian_volume_approx, haar_volume_mc, hoeffding_volume_estimate, reg_inc_beta, sparse_volume_prob,
    sparse_volume_prob_shifted, McEstimate, VolumeQuery, MC_MAX_QUBITS, VOLUME_MAX_QUBITS,
};
pub use chop::{chop_probability, ChopResult};
pub use depth::{depth_bounds, DepthBounds, DepthParams};
pub use lcu::{lcu_simulate, lcu_success_bound, LcuInstance, LcuMode, LCU_SIM_CAP};
