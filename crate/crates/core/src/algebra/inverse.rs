use super::matrix::LocalizedMatrix;
use crate::error::{invalid, Error, Result};
use crate::Matrix;

/// Diagnostics of [`norm_controlled_inverse`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseDiagnostics {
    /// `r = 1 - (‖A⁻¹‖₂ ‖A‖₂)⁻²`, the spectral radius of `I - AᵀA/‖A‖₂²`.
    pub contraction_ratio: f64,
    /// Number of series terms summed (a power of two).
    pub terms: u64,
    /// Number of doubling steps performed.
    pub doublings: usize,
    /// `max |I - A⁻¹A|` of the returned inverse.
    pub residual: f64,
    /// `‖A‖₂` used for the scaling.
    pub spectral_norm: f64,
    /// Constant `D` used in the a-priori bound.
    pub differential_constant: f64,
    /// `log10` of the a-priori bound on `‖A⁻¹‖_J`.
    pub log10_bound: f64,
}

impl InverseDiagnostics {
    /// A-priori bound on the Jaffard norm of the inverse; may be `inf`.
    pub fn bound(&self) -> f64 {
        10f64.powf(self.log10_bound)
    }
}

const TAIL_TOL: f64 = 1e-14;

/// Invert `A` through the Neumann series
/// `A⁻¹ = ‖A‖₂⁻² Σₙ (I - AᵀA/‖A‖₂²)ⁿ Aᵀ`.
///
/// Partial sums over `2^k` terms are formed by doubling,
/// `X ← X + (I - XA) X`, where `I - XA` equals the `2^k`-th power of the
/// series ratio. Summation stops when that tail factor falls below `1e-14`,
/// stops decreasing, or `max_terms` would be exceeded.
pub fn norm_controlled_inverse(
    a: &LocalizedMatrix,
    beta: f64,
    max_terms: u64,
) -> Result<(LocalizedMatrix, InverseDiagnostics)> {
    if !a.is_square() || a.nrows() == 0 {
        return invalid("norm-controlled inversion needs a non-empty square matrix");
    }
    let m = a.entries();
    let n = m.nrows();
    let sv = m.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let ratio = if smax > 0.0 { 1.0 - (smin / smax).powi(2) } else { 1.0 };
    if !(ratio < 1.0) {
        return Err(Error::NotBoundedlyInvertible { ratio });
    }

    let id = Matrix::identity(n, n);
    let mut x = m.transpose() / (smax * smax);
    let mut terms: u64 = 1;
    let mut doublings = 0;
    let mut prev_tail = f64::INFINITY;
    loop {
        let e = &id - &x * m;
        let tail = e.amax();
        if tail < TAIL_TOL || terms.saturating_mul(2) > max_terms {
            break;
        }
        if tail < 1e-6 && tail > 0.5 * prev_tail {
            break;
        }
        prev_tail = tail;
        x = &x + &e * &x;
        terms = terms.saturating_mul(2);
        doublings += 1;
    }
    let residual = (&id - &x * m).amax();

    let at = a.transpose();
    let at_j = at.jaffard_norm(beta);
    let a_j = a.jaffard_norm(beta);
    let d = weak_differential_constant(a.rows(), beta).max(submultiplicative_constant(a.rows(), beta));
    let log10_bound = log10_series_bound(at_j, a_j, smax, ratio, d);

    let inv = LocalizedMatrix::from_parts(a.cols().into(), a.rows().into(), x);
    Ok((
        inv,
        InverseDiagnostics {
            contraction_ratio: ratio,
            terms,
            doublings,
            residual,
            spectral_norm: smax,
            differential_constant: d,
            log10_bound,
        },
    ))
}

/// `D` with `‖X²‖_J ≤ D ‖X‖_J ‖X‖₂` for every matrix indexed by `positions`.
///
/// From `(1+|λ-λ''|)^β ≤ c_β((1+|λ-λ'|)^β + (1+|λ'-λ''|)^β)` with
/// `c_β = max(1, 2^{β-1})` and `‖column‖₁ ≤ √N ‖X‖₂`.
pub fn weak_differential_constant(positions: &[f64], beta: f64) -> f64 {
    2.0 * (2f64).powf(beta - 1.0).max(1.0) * (positions.len() as f64).sqrt()
}

/// Smallest `K` with `‖XY‖_J ≤ K ‖X‖_J ‖Y‖_J` for matrices indexed by `positions`.
pub fn submultiplicative_constant(positions: &[f64], beta: f64) -> f64 {
    let w = |a: f64, b: f64| (1.0 + (a - b).abs()).powf(beta);
    let mut best = 0.0f64;
    for &l in positions {
        for &l2 in positions {
            let s: f64 = positions.iter().map(|&m| 1.0 / (w(l, m) * w(m, l2))).sum();
            best = best.max(s * w(l, l2));
        }
    }
    best
}

/// `log10` of `‖Aᵀ‖_J ‖A‖₂⁻² Σₙ rⁿ (D b / r)^{1 + log₂ n}`,
/// `b = 1 + ‖Aᵀ‖_J ‖A‖_J ‖A‖₂⁻²`, with the `n = 0` term equal to one.
fn log10_series_bound(at_j: f64, a_j: f64, a2: f64, r: f64, d: f64) -> f64 {
    let prefactor = (at_j / (a2 * a2)).ln();
    if r <= 0.0 {
        // B = 0: only the identity term survives.
        return prefactor / std::f64::consts::LN_10;
    }
    let b = 1.0 + at_j * a_j / (a2 * a2);
    let ln_x = (d * b / r).ln();
    let expo = ln_x / std::f64::consts::LN_2;
    let q = -r.ln();
    let ln_sum = ln_x + ln_power_series(expo, q, expo / q < 2.0e6);
    (prefactor + log_add(0.0, ln_sum)) / std::f64::consts::LN_10
}

/// `ln Σ_{n≥1} nᵃ e^{-qn}`, summed directly or by `Γ(a+1)/q^{a+1}`
/// (relative error `O(q)`).
fn ln_power_series(a: f64, q: f64, direct: bool) -> f64 {
    if !direct {
        return ln_gamma(a + 1.0) - (a + 1.0) * q.ln();
    }
    let peak = a / q;
    let mut acc = -q;
    let mut n = 2u64;
    loop {
        let nf = n as f64;
        let t = a * nf.ln() - q * nf;
        acc = log_add(acc, t);
        if nf > peak && t < acc - 45.0 {
            return acc;
        }
        n += 1;
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Lanczos approximation of `ln Γ(x)` for `x > 0`.
fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}
