//! The approximation method: clique indicators, sunflower plucking,
//! gate-by-gate approximation, exact error counts, and the approximated CLO.

mod approximator;
mod clo;
mod errors;
mod sunflower;

pub use approximator::{
    approx_and, approx_and_traced, approx_or, approx_or_traced, approximate_circuit, default_params, pluck, AndSteps,
    ApproxParams, Approximator, Indicator, OrSteps,
};
pub use clo::{approximate_clo, CloApproxReport, TermReport};
pub use errors::{count_errors, positive_error_bound, negative_error_bound, ErrorCounts};
pub use sunflower::{find_sunflower, is_sunflower, Sunflower};
