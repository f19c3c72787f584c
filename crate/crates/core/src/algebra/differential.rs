use super::matrix::{decay_weight_norm, LocalizedMatrix, PNorm};
use crate::error::{invalid, Result};

/// Outcome of one differential-norm check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferentialNormCheck {
    /// `‖AB‖_J / (‖A‖_J ‖B‖_J^θ ‖B‖₂^{1-θ} + ‖B‖_J ‖A‖_J^θ ‖A‖₂^{1-θ})`.
    pub ratio: f64,
    /// Whether `ratio ≤ c0`.
    pub holds: bool,
}

pub fn check_differential_norm(
    a: &LocalizedMatrix,
    b: &LocalizedMatrix,
    beta: f64,
    theta: f64,
    c0: f64,
) -> Result<DifferentialNormCheck> {
    if !(0.0..1.0).contains(&theta) {
        return invalid(format!("theta must lie in [0, 1), got {theta}"));
    }
    let ab = a.mul(b)?;
    let (aj, bj) = (a.jaffard_norm(beta), b.jaffard_norm(beta));
    let (a2, b2) = (a.operator_norm(PNorm::L2), b.operator_norm(PNorm::L2));
    let denom = aj * bj.powf(theta) * b2.powf(1.0 - theta) + bj * aj.powf(theta) * a2.powf(1.0 - theta);
    let num = ab.jaffard_norm(beta);
    let ratio = if denom > 0.0 { num / denom } else { 0.0 };
    Ok(DifferentialNormCheck { ratio, holds: ratio <= c0 })
}

/// A constant `C₀` for which the differential-norm inequality holds for all
/// products of matrices indexed by `positions` (at most `n` per dimension).
///
/// `‖AB‖_J ≤ c_β (‖A‖_J ‖B‖_{B(ℓ¹)} + ‖B‖_J ‖A‖_{B(ℓ^∞)})` and each operator
/// norm is at most `min(√n ‖·‖₂, K ‖·‖_J)` with `K` the decay weight norm.
pub fn differential_constant(positions: &[f64], n: usize, beta: f64, theta: f64) -> f64 {
    let c_beta = (2f64).powf(beta - 1.0).max(1.0);
    let k = decay_weight_norm(positions, positions, beta, PNorm::L1)
        .max(decay_weight_norm(positions, positions, beta, PNorm::LInf));
    c_beta * (n as f64).powf(0.5 * (1.0 - theta)) * k.powf(theta)
}
