use crate::algebra::PointSet;
use crate::error::{invalid, Result};
use crate::kernels::Kernel;
use crate::Vector;

/// `h(t) = χ_window(t) Σ_λ c(λ) φ(t - λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FriSignal {
    /// `φ`, centred at the origin.
    impulse: Kernel,
    positions: PointSet,
    amplitudes: Vector,
    window: (f64, f64),
}

impl FriSignal {
    pub fn new(impulse: Kernel, positions: PointSet, amplitudes: Vector, window: (f64, f64)) -> Result<Self> {
        if positions.len() != amplitudes.len() {
            return invalid(format!("{} positions but {} amplitudes", positions.len(), amplitudes.len()));
        }
        if !(window.1 > window.0) {
            return invalid("empty window");
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return invalid("non-finite amplitude");
        }
        Ok(Self { impulse, positions, amplitudes, window })
    }

    pub fn impulse(&self) -> &Kernel {
        &self.impulse
    }

    pub fn positions(&self) -> &PointSet {
        &self.positions
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amplitudes
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn value(&self, t: f64) -> f64 {
        if t < self.window.0 || t > self.window.1 {
            return 0.0;
        }
        self.positions.iter().zip(self.amplitudes.iter()).map(|(l, c)| c * self.impulse.value(t - l)).sum()
    }
}
