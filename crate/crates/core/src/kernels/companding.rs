use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};

/// A monotone companding function applied pointwise to a signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompandingFunction {
    /// `F(t) = t`.
    Identity,
    /// `F(t) = sin(πt/2)`.
    Sine,
}

impl CompandingFunction {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            CompandingFunction::Identity => t,
            CompandingFunction::Sine => (FRAC_PI_2 * t).sin(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            CompandingFunction::Identity => 1.0,
            CompandingFunction::Sine => FRAC_PI_2 * (FRAC_PI_2 * t).cos(),
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        match self {
            CompandingFunction::Identity => 0.0,
            CompandingFunction::Sine => -FRAC_PI_2 * FRAC_PI_2 * (FRAC_PI_2 * t).sin(),
        }
    }
}

const MU_GRID: usize = 10_000;

/// `sup_{t ∈ [lo, hi]} |1 - m F'(t)|` on a uniform grid of `10⁴` points,
/// refined by a three-point parabola around the best grid point.
pub fn mu_of_companding(f: &CompandingFunction, m: f64, interval: (f64, f64)) -> Result<f64> {
    let (lo, hi) = interval;
    if !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return invalid(format!("bad interval [{lo}, {hi}]"));
    }
    let g = |t: f64| (1.0 - m * f.derivative(t)).abs();
    if hi == lo {
        return Ok(g(lo));
    }
    let h = (hi - lo) / (MU_GRID - 1) as f64;
    let at = |i: usize| if i + 1 == MU_GRID { hi } else { lo + h * i as f64 };
    let (best_i, best) = (0..MU_GRID).map(|i| (i, g(at(i)))).fold((0, f64::NEG_INFINITY), |acc, x| {
        if x.1 > acc.1 {
            x
        } else {
            acc
        }
    });
    if best_i == 0 || best_i + 1 == MU_GRID {
        return Ok(best);
    }
    let (y0, y1, y2) = (g(at(best_i - 1)), best, g(at(best_i + 1)));
    let denom = y0 - 2.0 * y1 + y2;
    if denom >= 0.0 {
        return Ok(best);
    }
    let offset = 0.5 * (y0 - y2) / denom;
    let t = (at(best_i) + offset * h).clamp(lo, hi);
    Ok(best.max(g(t)))
}
