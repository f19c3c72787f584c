use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PointSet;
use crate::error::{invalid, Result};
use crate::{Matrix, Vector};

/// Which `ℓ^p` operator norm to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PNorm {
    L1,
    L2,
    LInf,
}

impl PNorm {
    pub const ALL: [PNorm; 3] = [PNorm::L1, PNorm::L2, PNorm::LInf];

    /// Vector norm of `v`.
    pub fn of(self, v: &Vector) -> f64 {
        match self {
            PNorm::L1 => v.iter().map(|x| x.abs()).sum(),
            PNorm::L2 => v.norm(),
            PNorm::LInf => v.amax(),
        }
    }
}

/// A dense matrix whose rows and columns carry positions on the real line.
///
/// Positions need not be increasing so that block matrices can repeat the
/// positions of a point set per block.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedMatrix {
    rows: Arc<[f64]>,
    cols: Arc<[f64]>,
    entries: Matrix,
}

impl LocalizedMatrix {
    pub fn new(rows: &PointSet, cols: &PointSet, entries: Matrix) -> Result<Self> {
        Self::with_positions(rows.as_slice().to_vec(), cols.as_slice().to_vec(), entries)
    }

    pub fn with_positions(rows: Vec<f64>, cols: Vec<f64>, entries: Matrix) -> Result<Self> {
        if entries.nrows() != rows.len() || entries.ncols() != cols.len() {
            return invalid(format!(
                "matrix is {}x{} but positions are {}x{}",
                entries.nrows(),
                entries.ncols(),
                rows.len(),
                cols.len()
            ));
        }
        if rows.iter().chain(cols.iter()).any(|p| !p.is_finite()) {
            return invalid("non-finite position");
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return invalid("non-finite matrix entry");
        }
        Ok(Self { rows: rows.into(), cols: cols.into(), entries })
    }

    pub(crate) fn from_parts(rows: Arc<[f64]>, cols: Arc<[f64]>, entries: Matrix) -> Self {
        debug_assert_eq!(entries.shape(), (rows.len(), cols.len()));
        Self { rows, cols, entries }
    }

    pub fn identity(set: &PointSet) -> Self {
        let p: Arc<[f64]> = set.as_slice().into();
        Self::from_parts(p.clone(), p, Matrix::identity(set.len(), set.len()))
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    pub fn cols(&self) -> &[f64] {
        &self.cols
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_entries(self) -> Matrix {
        self.entries
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.entries.is_square()
    }

    pub fn transpose(&self) -> Self {
        Self::from_parts(self.cols.clone(), self.rows.clone(), self.entries.transpose())
    }

    /// Product `self * rhs`; inner dimensions must agree.
    pub fn mul(&self, rhs: &LocalizedMatrix) -> Result<Self> {
        if self.ncols() != rhs.nrows() {
            return invalid(format!("cannot multiply {}x{} by {}x{}", self.nrows(), self.ncols(), rhs.nrows(), rhs.ncols()));
        }
        Ok(Self::from_parts(self.rows.clone(), rhs.cols.clone(), &self.entries * &rhs.entries))
    }

    /// Same positions, new entries.
    pub fn with_entries(&self, entries: Matrix) -> Result<Self> {
        Self::with_positions(self.rows.to_vec(), self.cols.to_vec(), entries)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.entries * v
    }

    pub fn jaffard_norm(&self, beta: f64) -> f64 {
        jaffard_norm(&self.entries, &self.rows, &self.cols, beta)
    }

    pub fn operator_norm(&self, p: PNorm) -> f64 {
        operator_norm(&self.entries, p)
    }

    pub fn norm_report(&self, beta: f64) -> NormReport {
        NormReport {
            jaffard: self.jaffard_norm(beta),
            l1: self.operator_norm(PNorm::L1),
            l2: self.operator_norm(PNorm::L2),
            linf: self.operator_norm(PNorm::LInf),
        }
    }
}

/// Jaffard norm and the three operator norms of one matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub jaffard: f64,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl NormReport {
    pub fn get(&self, p: PNorm) -> f64 {
        match p {
            PNorm::L1 => self.l1,
            PNorm::L2 => self.l2,
            PNorm::LInf => self.linf,
        }
    }
}

/// `sup_{λ,λ'} (1 + |λ - λ'|)^β |a(λ,λ')|`.
pub fn jaffard_norm(a: &Matrix, rows: &[f64], cols: &[f64], beta: f64) -> f64 {
    let mut best = 0.0f64;
    for (j, &c) in cols.iter().enumerate() {
        for (i, &r) in rows.iter().enumerate() {
            let x = a[(i, j)].abs();
            if x > 0.0 {
                best = best.max((1.0 + (r - c).abs()).powf(beta) * x);
            }
        }
    }
    best
}

/// `‖W‖_{B(ℓ^p)}` for the decay weight `W(λ,λ') = (1 + |λ - λ'|)^{-β}`.
///
/// This is the exact value of `sup { ‖A‖_{B(ℓ^p)} : ‖A‖_J ≤ 1 }`.
pub fn decay_weight_norm(rows: &[f64], cols: &[f64], beta: f64, p: PNorm) -> f64 {
    let w = Matrix::from_fn(rows.len(), cols.len(), |i, j| (1.0 + (rows[i] - cols[j]).abs()).powf(-beta));
    operator_norm(&w, p)
}

/// Operator norm on `ℓ^p`. For `p = 2` this is the power-iteration estimate.
pub fn operator_norm(a: &Matrix, p: PNorm) -> f64 {
    match p {
        PNorm::L1 => (0..a.ncols()).map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max),
        PNorm::LInf => (0..a.nrows()).map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max),
        PNorm::L2 => spectral_norm(a).value,
    }
}

/// Result of the spectral norm power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralNorm {
    pub value: f64,
    /// `‖AᵀA v - λ v‖ / λ` at the returned vector.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 5000;

/// Largest singular value by power iteration on `AᵀA`.
///
/// Starts from the all-ones vector and then from one fixed random vector; the
/// larger estimate wins. If not converged the value is a lower bound.
pub fn spectral_norm(a: &Matrix) -> SpectralNorm {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return SpectralNorm { value: 0.0, residual: 0.0, iterations: 0, converged: true };
    }
    let first = power_iteration(a, Vector::from_element(n, 1.0));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let second = power_iteration(a, Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)));
    if second.value > first.value {
        SpectralNorm { iterations: first.iterations + second.iterations, ..second }
    } else {
        SpectralNorm { iterations: first.iterations + second.iterations, ..first }
    }
}

fn power_iteration(a: &Matrix, start: Vector) -> SpectralNorm {
    let mut v = start;
    let nv = v.norm();
    if nv == 0.0 {
        return SpectralNorm { value: 0.0, residual: 0.0, iterations: 0, converged: false };
    }
    v /= nv;
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=POWER_MAX_ITER {
        let w = a * &v;
        let u = a.transpose() * &w;
        lambda = w.norm_squared();
        if lambda == 0.0 {
            return SpectralNorm { value: 0.0, residual: 0.0, iterations: it, converged: true };
        }
        residual = (&u - &v * lambda).norm() / lambda;
        let nu = u.norm();
        v = u / nu;
        if residual <= POWER_TOL {
            // One more Rayleigh quotient at the updated vector.
            let w = a * &v;
            lambda = lambda.max(w.norm_squared());
            return SpectralNorm { value: lambda.sqrt(), residual, iterations: it, converged: true };
        }
    }
    SpectralNorm { value: lambda.sqrt(), residual, iterations: POWER_MAX_ITER, converged: false }
}
