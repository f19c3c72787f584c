//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nlsampling::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| r.random_range(-1.0..1.0))
}

/// Symmetric positive definite matrix with entries decaying like
/// `(1 + |i - j|)^{-beta}` and unit-order diagonal dominance.
pub fn banded_spd(r: &mut ChaCha8Rng, n: usize, beta: f64) -> Matrix {
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let v = r.random_range(-0.5..0.5) * (1.0 + (i - j) as f64).powf(-beta);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        a[(i, i)] = off + r.random_range(0.1..1.0);
    }
    a
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
pub fn jacobi_eigenvalues(a: &Matrix) -> Vec<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest singular value from the Jacobi eigenvalues of `AᵀA`.
pub fn jacobi_spectral_norm(a: &Matrix) -> f64 {
    jacobi_eigenvalues(&(a.transpose() * a)).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &Matrix, b: &Vector) -> Vector {
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs())).unwrap();
        m.swap_rows(k, p);
        x.swap_rows(k, p);
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            for j in k..n {
                m[(i, j)] -= f * m[(k, j)];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[(k, j)] * x[j]).sum();
        x[k] = (x[k] - s) / m[(k, k)];
    }
    x
}

pub fn inverse_dense(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        let e = Vector::from_fn(n, |i, _| if i == j { 1.0 } else { 0.0 });
        inv.set_column(j, &solve_dense(a, &e));
    }
    inv
}

/// Composite trapezoid rule with `n` intervals.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let s: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    h / 3.0 * (f(a) + f(b) + s)
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.amax()
}

/// Composite midpoint rule with one Richardson step; never evaluates `f`
/// at the interval ends, so one-sided jumps there are harmless.
pub fn midpoint_richardson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let mid = |n: usize| {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    };
    (4.0 * mid(2 * n) - mid(n)) / 3.0
}
