use crate::Vector;

/// Per-iteration record of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    /// Final iterate.
    pub x: Vector,
    /// Number of updates performed.
    pub iterations: usize,
    /// `‖f(xₙ) - y‖_∞` for `n = 0..=iterations`.
    pub residuals: Vec<f64>,
    /// `‖xₙ - x_ref‖_∞` when a reference solution was supplied.
    pub errors: Option<Vec<f64>>,
    /// All iterates `x₀, x₁, …` when retention was requested.
    pub iterates: Vec<Vector>,
    pub converged: bool,
    /// Iteration at which a hybrid solve switched to Newton steps.
    pub switch_iteration: Option<usize>,
    pub warnings: Vec<String>,
}

/// Iterations skipped before ratios enter the rate estimate.
pub(crate) const BURN_IN: usize = 5;

impl SolverTrace {
    /// Error sequence used for rates: reference errors if present, else residuals.
    pub fn error_sequence(&self) -> &[f64] {
        self.errors.as_deref().unwrap_or(&self.residuals)
    }

    /// Median of `e_{n+1}/e_n` after a burn-in of five iterations, ignoring
    /// pairs where `e_n` has reached round-off level.
    pub fn rate(&self) -> Option<f64> {
        rate_of(self.error_sequence(), BURN_IN)
    }

    /// `e_{n+1} / e_n²` for consecutive pairs starting at iteration `from`.
    pub fn quadratic_ratios(&self, from: usize) -> Vec<f64> {
        let e = self.error_sequence();
        (from..e.len().saturating_sub(1)).filter(|&n| e[n] > 0.0).map(|n| e[n + 1] / (e[n] * e[n])).collect()
    }

    /// Largest `e_{n+1}/e_n²` over Newton steps of a hybrid solve (or all
    /// steps of a pure Newton solve), ignoring round-off level errors.
    pub fn quadratic_constant(&self) -> Option<f64> {
        let e = self.error_sequence();
        let floor = 1e-13 * e.first().copied().unwrap_or(1.0).max(1.0);
        let from = self.switch_iteration.unwrap_or(0);
        (from..e.len().saturating_sub(1))
            .filter(|&n| e[n] > floor && e[n + 1] > floor)
            .map(|n| e[n + 1] / (e[n] * e[n]))
            .reduce(f64::max)
    }
}

pub(crate) fn rate_of(e: &[f64], burn_in: usize) -> Option<f64> {
    let floor = 1e-12 * e.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let mut ratios: Vec<f64> = (burn_in..e.len().saturating_sub(1))
        .filter(|&n| e[n] > floor && e[n + 1] > floor)
        .map(|n| e[n + 1] / e[n])
        .collect();
    if ratios.is_empty() {
        return None;
    }
    ratios.sort_by(f64::total_cmp);
    let k = ratios.len();
    Some(if k % 2 == 1 { ratios[k / 2] } else { 0.5 * (ratios[k / 2 - 1] + ratios[k / 2]) })
}
