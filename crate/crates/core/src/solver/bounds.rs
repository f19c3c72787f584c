use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::map::NonlinearMap;
use crate::algebra::{decay_weight_norm, LocalizedMatrix, PNorm};
use crate::error::{invalid, Error, Result};
use crate::Vector;

/// Probe-based monotonicity bounds of a square map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// `min_probe λ_min((G + Gᵀ)/2)`.
    pub m0: f64,
    /// `max_probe ‖G‖₂`.
    pub l: f64,
    /// Whether every probe had a positive definite symmetric part.
    pub monotone: bool,
    pub probes: usize,
}

impl MonotonicityReport {
    /// Largest step size with a guaranteed contraction, `m₀ / (L + L²)`.
    pub fn admissible_alpha(&self) -> f64 {
        self.m0 / (self.l + self.l * self.l)
    }
}

fn sym_min_eigen(g: &LocalizedMatrix) -> f64 {
    let e = g.entries();
    let s = (e + e.transpose()) * 0.5;
    SymmetricEigen::new(s).eigenvalues.min()
}

/// Estimate `m₀` and `L` from gradients at the probe points.
pub fn estimate_monotonicity<F: NonlinearMap + ?Sized>(f: &F, probes: &[Vector]) -> Result<MonotonicityReport> {
    if probes.is_empty() {
        return Err(Error::BoundsUnavailable("no probe points".into()));
    }
    if f.domain().len() != f.range().len() {
        return Err(Error::BoundsUnavailable("map is not square".into()));
    }
    let mut m0 = f64::INFINITY;
    let mut l = 0.0f64;
    for p in probes {
        if p.len() != f.domain().len() {
            return invalid("probe has the wrong length");
        }
        let g = f.gradient(p);
        m0 = m0.min(sym_min_eigen(&g));
        l = l.max(g.operator_norm(PNorm::L2));
    }
    Ok(MonotonicityReport { m0, l, monotone: m0 > 0.0, probes: probes.len() })
}

/// `center` plus `count` points uniform in the `ℓ^∞` ball of `radius`.
pub fn random_probes(center: &Vector, radius: f64, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![center.clone()];
    for _ in 0..count {
        out.push(Vector::from_fn(center.len(), |i, _| center[i] + radius * rng.random_range(-1.0..=1.0)));
    }
    out
}

/// Contraction factor `(1 - α + α²L + α²L²) / (1 - α + α m₀)` of the
/// Van-Cittert iteration.
pub fn van_cittert_rate_bound(m0: f64, l: f64, alpha: f64) -> f64 {
    (1.0 - alpha + alpha * alpha * (l + l * l)) / (1.0 - alpha + alpha * m0)
}

/// Perturbation bounds for `f(x_ε) = y + ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBounds {
    pub p: PNorm,
    /// Bound on `‖x_ε - x‖_p`.
    pub absolute: f64,
    /// Bound on `‖x_ε - x‖_p / ‖x‖_p`.
    pub relative: f64,
    /// Bound used for `sup ‖(∇f)⁻¹‖_{B(ℓ^p)}`.
    pub inverse_norm: f64,
    /// Bound used for `sup ‖∇f‖_{B(ℓ^p)}`.
    pub gradient_norm: f64,
    pub monotonicity: MonotonicityReport,
}

/// Evaluate the absolute and relative perturbation estimates from gradients
/// at `probes`.
///
/// In `ℓ²` the inverse is bounded by `1/m₀` and the gradient by `L`. For other
/// `p` the Jaffard norms of the probe gradients and their inverses are
/// converted with `sup{‖A‖_{B(ℓ^p)} : ‖A‖_J ≤ 1}`.
pub fn error_estimate<F: NonlinearMap + ?Sized>(
    f: &F,
    probes: &[Vector],
    y: &Vector,
    epsilon: &Vector,
    p: PNorm,
    beta: f64,
) -> Result<ErrorBounds> {
    if epsilon.len() != y.len() {
        return invalid("noise and data lengths differ");
    }
    let mono = estimate_monotonicity(f, probes)?;
    if !mono.monotone {
        return Err(Error::BoundsUnavailable(format!("m0 = {:.3e} is not positive", mono.m0)));
    }
    let (inverse_norm, gradient_norm) = match p {
        PNorm::L2 => (1.0 / mono.m0, mono.l),
        _ => {
            let k = decay_weight_norm(f.domain(), f.range(), beta, p).max(decay_weight_norm(
                f.range(),
                f.domain(),
                beta,
                p,
            ));
            let mut inv_j = 0.0f64;
            let mut grad_j = 0.0f64;
            for x in probes {
                let g = f.gradient(x);
                grad_j = grad_j.max(g.jaffard_norm(beta));
                let inv = g
                    .entries()
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::BoundsUnavailable("singular probe gradient".into()))?;
                let inv = LocalizedMatrix::with_positions(f.range().to_vec(), f.domain().to_vec(), inv)?;
                inv_j = inv_j.max(inv.jaffard_norm(beta));
            }
            (k * inv_j, k * grad_j)
        }
    };
    let eps = p.of(epsilon);
    let ynorm = p.of(y);
    let relative = if ynorm > 0.0 { inverse_norm * gradient_norm * eps / ynorm } else { f64::INFINITY };
    Ok(ErrorBounds { p, absolute: inverse_norm * eps, relative, inverse_norm, gradient_norm, monotonicity: mono })
}
