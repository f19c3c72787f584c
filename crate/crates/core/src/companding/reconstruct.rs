use super::model::{Preconditioner, SamplingModel};
use crate::error::Result;
use crate::kernels::mu_of_companding;
use crate::solver::{hybrid_solve_by, van_cittert, SolverOptions, SolverTrace};
use crate::Vector;

/// Van-Cittert iteration `c ← c - α P(⟨F(cᵀΦ), Ψ⟩ - y)` from zero.
pub fn reconstruct_van_cittert(
    model: &SamplingModel,
    y: &Vector,
    alpha: f64,
    precond: Preconditioner,
    opts: &SolverOptions,
) -> Result<SolverTrace> {
    let target = model.precondition(y, precond)?;
    let map = model.companding_map(precond);
    van_cittert(&map, &target, &Vector::zeros(model.generators().len()), alpha, opts)
}

/// Van-Cittert steps until the raw data misfit `‖⟨F(cᵀΦ), Ψ⟩ - y‖_∞ / ‖y‖_∞`
/// drops below `switch_ratio`, then quasi-Newton steps.
pub fn reconstruct_hybrid(
    model: &SamplingModel,
    y: &Vector,
    alpha: f64,
    switch_ratio: f64,
    precond: Preconditioner,
    opts: &SolverOptions,
) -> Result<SolverTrace> {
    let target = model.precondition(y, precond)?;
    let map = model.companding_map(precond);
    let scale = y.amax();
    let switch = |c: &Vector, _: &Vector| {
        model.forward_sample(c).map(|s| (s - y).amax() < switch_ratio * scale).unwrap_or(false)
    };
    hybrid_solve_by(&map, &target, &Vector::zeros(model.generators().len()), alpha, opts, switch)
}

/// Contraction data of the iteration `c ← c - m R̃(⟨F(cᵀΦ), Ψ⟩ - y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedReport {
    /// `sup |1 - m F'|` over the declared amplitude interval.
    pub mu: f64,
    /// Gap between the generating and sampling spaces.
    pub delta: f64,
    /// `μ / √(1 - δ²)`.
    pub rate_bound: f64,
    /// `√(1 - δ²) / (√(1 - δ²) - μ)`, infinite when the condition fails.
    pub stability_factor: f64,
    /// `μ < √(1 - δ²)`.
    pub condition_holds: bool,
}

/// Modified Van-Cittert iteration with step `m` and the normalized
/// preconditioner. `amplitude` is the interval containing the signal values.
pub fn reconstruct_modified(
    model: &SamplingModel,
    y: &Vector,
    m: f64,
    amplitude: (f64, f64),
    opts: &SolverOptions,
) -> Result<(SolverTrace, ModifiedReport)> {
    let mu = mu_of_companding(&model.companding(), m, amplitude)?;
    let delta = model.gap().delta;
    let s = (1.0 - delta * delta).max(0.0).sqrt();
    let condition_holds = mu < s;
    let report = ModifiedReport {
        mu,
        delta,
        rate_bound: if s > 0.0 { mu / s } else { f64::INFINITY },
        stability_factor: if condition_holds { s / (s - mu) } else { f64::INFINITY },
        condition_holds,
    };
    let trace = reconstruct_van_cittert(model, y, m, Preconditioner::Normalized, opts)?;
    Ok((trace, report))
}
