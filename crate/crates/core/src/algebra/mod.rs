//! Localized matrices, Jaffard norms and norm-controlled inversion.

mod differential;
mod inverse;
mod lstsq;
mod matrix;
mod points;

pub use differential::{check_differential_norm, differential_constant, DifferentialNormCheck};
pub use inverse::{
    norm_controlled_inverse, submultiplicative_constant, weak_differential_constant, InverseDiagnostics,
};
pub use lstsq::{pseudo_inverse_apply, PseudoInverse};
pub use matrix::{
    decay_weight_norm, jaffard_norm, operator_norm, spectral_norm, LocalizedMatrix, NormReport, PNorm,
    SpectralNorm,
};
pub use points::PointSet;
