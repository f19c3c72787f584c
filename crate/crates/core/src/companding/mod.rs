//! Companded average sampling in spline-type spaces.

mod model;
mod reconstruct;

pub use model::{CompandingMap, GapReport, Preconditioner, SamplingModel};
pub use reconstruct::{
    reconstruct_hybrid, reconstruct_modified, reconstruct_van_cittert, ModifiedReport,
};
