//! Signals with finite rate of innovation: local identification of shifts
//! and amplitudes, and blind recovery in perturbed shift-invariant spaces.

mod blind;
mod fourier;
mod identify;
mod signal;

pub use blind::{
    FilterKind,
    blind_coarse_estimate, blind_recover, check_rank_condition, dual_filters, BlindConfig, BlindRecovery,
    BlindSamples, CoarseEstimate, DualFilters, RankCondition,
};
pub use fourier::{bracket_product, FourierGrid};
pub use identify::{
    calibrate_locality, identification_map, identify, linearize, linearize_kernels, Identification,
    IdentificationMap, Linearization, LocalityCalibration,
};
pub use signal::FriSignal;
