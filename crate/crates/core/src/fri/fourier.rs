use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::exec::{map_indices, Execution};
use crate::kernels::Kernel;

/// Uniform frequency grid `ξ_j = -π + 2πj/n` with alias shifts `|l| ≤ alias`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierGrid {
    n: usize,
    alias: usize,
}

impl FourierGrid {
    pub fn new(n: usize, alias: usize) -> Result<Self> {
        if n < 2 {
            return invalid("frequency grid needs at least two points");
        }
        Ok(Self { n, alias })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn alias(&self) -> usize {
        self.alias
    }

    pub fn xi(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.n as f64
    }

    fn shifts(&self) -> usize {
        2 * self.alias + 1
    }

    /// `k̂(ξ_j + 2πl)` laid out shift-major: index `(l + alias) * n + j`.
    pub fn sample(&self, kernel: &Kernel) -> Vec<Complex64> {
        let per_shift = map_indices(Execution::default(), self.shifts(), |s| {
            let l = s as f64 - self.alias as f64;
            (0..self.n).map(|j| kernel.fourier(self.xi(j) + 2.0 * PI * l)).collect::<Vec<_>>()
        });
        per_shift.concat()
    }

    /// Transform of the derivative, `iξ k̂(ξ)`, on the same layout.
    pub fn differentiate(&self, hat: &[Complex64]) -> Vec<Complex64> {
        hat.iter()
            .enumerate()
            .map(|(idx, v)| {
                let (s, j) = (idx / self.n, idx % self.n);
                let xi = self.xi(j) + 2.0 * PI * (s as f64 - self.alias as f64);
                Complex64::new(0.0, xi) * v
            })
            .collect()
    }
}

/// `[f, g](ξ) = Σ_l f̂(ξ + 2πl) conj(ĝ(ξ + 2πl))` on the grid.
pub fn bracket_product(grid: &FourierGrid, f_hat: &[Complex64], g_hat: &[Complex64]) -> Vec<Complex64> {
    let n = grid.len();
    assert_eq!(f_hat.len(), n * grid.shifts(), "f̂ grid has the wrong size");
    assert_eq!(g_hat.len(), n * grid.shifts(), "ĝ grid has the wrong size");
    (0..n)
        .map(|j| (0..grid.shifts()).map(|s| f_hat[s * n + j] * g_hat[s * n + j].conj()).sum())
        .collect()
}
