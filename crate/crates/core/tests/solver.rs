mod common;

use common::*;
use nlsampling::algebra::{LocalizedMatrix, PNorm};
use nlsampling::solver::*;
use nlsampling::{Error, Matrix, Vector};

fn pos(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64).collect()
}

fn linear(m: Matrix) -> LinearMap {
    let n = m.nrows();
    LinearMap::new(LocalizedMatrix::with_positions(pos(n), pos(m.ncols()), m).unwrap())
}

/// `x ↦ x + x³/10` coordinatewise.
fn cubic(n: usize) -> FnMap {
    FnMap::new(
        pos(n),
        pos(n),
        |x: &Vector| x.map(|t| t + t * t * t / 10.0),
        |x: &Vector| Matrix::from_diagonal(&x.map(|t| 1.0 + 0.3 * t * t)),
    )
    .unwrap()
}

#[test]
fn fn_map_rejects_nonzero_origin() {
    let r = FnMap::new(pos(1), pos(1), |x: &Vector| x.map(|t| t + 1.0), |_| Matrix::identity(1, 1));
    assert!(matches!(r, Err(Error::InvalidInput(_))));
}

#[test]
fn van_cittert_scalar_doubling() {
    let f = linear(Matrix::from_element(1, 1, 2.0));
    let y = Vector::from_element(1, 2.0);
    let t = van_cittert(&f, &y, &Vector::zeros(1), 0.25, &SolverOptions::default()).unwrap();
    assert!(t.converged);
    assert!((t.x[0] - 1.0).abs() < 1e-11);
    // Error halves each step.
    let opts = SolverOptions { reference: Some(Vector::from_element(1, 1.0)), max_iter: 30, tol: 0.0, ..Default::default() };
    let t = van_cittert(&f, &y, &Vector::zeros(1), 0.25, &opts).unwrap();
    assert!((t.rate().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn identity_with_unit_step_converges_in_one() {
    let f = linear(Matrix::identity(4, 4));
    let y = Vector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
    let t = van_cittert(&f, &y, &Vector::zeros(4), 1.0, &SolverOptions::default()).unwrap();
    assert_eq!(t.iterations, 1);
    assert_eq!(t.x, y);
}

#[test]
fn newton_on_linear_map_is_one_step() {
    let mut r = rng(3);
    let a = banded_spd(&mut r, 12, 3.0);
    let f = linear(a.clone());
    let x = Vector::from_fn(12, |i, _| (i as f64).sin());
    let y = &a * &x;
    let t = quasi_newton(&f, &y, &Vector::zeros(12), &SolverOptions::default()).unwrap();
    assert_eq!(t.iterations, 1);
    assert!((&t.x - &x).amax() < 1e-12);
    let h = hybrid_solve(&f, &y, &Vector::zeros(12), 0.1, 2.0, &SolverOptions::default()).unwrap();
    assert_eq!(h.switch_iteration, Some(0));
    assert!((&h.x - &t.x).amax() < 1e-14);
}

#[test]
fn newton_converges_quadratically_on_cubic() {
    let f = cubic(1);
    // Reference root of x + x³/10 = 0.5 by bisection.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid + mid.powi(3) / 10.0 < 0.5 { lo = mid } else { hi = mid }
    }
    let root = 0.5 * (lo + hi);
    let opts = SolverOptions { reference: Some(Vector::from_element(1, root)), tol: 1e-15, ..Default::default() };
    let t = quasi_newton(&f, &Vector::from_element(1, 0.5), &Vector::zeros(1), &opts).unwrap();
    assert!(t.converged);
    assert!((t.x[0] - root).abs() < 1e-15);
    let c = t.quadratic_constant().unwrap();
    assert!(c < 1.0, "e_(n+1)/e_n^2 = {c}");
    let e = t.error_sequence();
    assert!(e[2] < e[1] * e[1]);
}

#[test]
fn hybrid_switches_and_finishes_with_newton() {
    let f = cubic(5);
    let y = Vector::from_vec(vec![0.5, -0.3, 1.0, 0.0, 0.8]);
    let t = hybrid_solve(&f, &y, &Vector::zeros(5), 0.5, 0.1, &SolverOptions { tol: 1e-14, ..Default::default() }).unwrap();
    assert!(t.converged);
    let k = t.switch_iteration.unwrap();
    assert!(k > 0);
    assert!(t.residuals[k] < 0.1 * y.amax());
    assert!(t.residuals[..k].iter().all(|&r| r >= 0.1 * y.amax()));
    assert!((f.evaluate(&t.x) - &y).amax() < 1e-13);
}

#[test]
fn monotonicity_examples() {
    let f = linear(Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 3.0])));
    let r = estimate_monotonicity(&f, &[Vector::zeros(2)]).unwrap();
    assert!((r.m0 - 2.0).abs() < 1e-12 && (r.l - 3.0).abs() < 1e-9);
    assert!((r.admissible_alpha() - 2.0 / 12.0).abs() < 1e-9);
    let f = linear(Matrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 2.0]));
    let r = estimate_monotonicity(&f, &[Vector::zeros(2)]).unwrap();
    assert!((r.m0 - 1.5).abs() < 1e-12);
    assert!(r.monotone);
    let f = linear(Matrix::from_diagonal(&Vector::from_vec(vec![1.0, -1.0])));
    assert!(!estimate_monotonicity(&f, &[Vector::zeros(2)]).unwrap().monotone);
    assert!(estimate_monotonicity(&f, &[]).is_err());
}

#[test]
fn probes_stay_in_ball() {
    let c = Vector::from_vec(vec![1.0, -1.0, 0.0]);
    let p = random_probes(&c, 0.1, 20, 7);
    assert_eq!(p.len(), 21);
    assert_eq!(p[0], c);
    assert!(p.iter().all(|v| (v - &c).amax() <= 0.1));
    assert_eq!(p, random_probes(&c, 0.1, 20, 7));
}

#[test]
fn rate_bound_below_one_for_admissible_steps() {
    for (m0, l) in [(0.5, 1.0), (1.0, 2.0), (0.1, 0.3)] {
        let alpha = 0.99 * m0 / (l + l * l);
        assert!(van_cittert_rate_bound(m0, l, alpha) < 1.0);
    }
}

#[test]
fn van_cittert_respects_rate_bound() {
    let f = cubic(6);
    let y = Vector::from_vec(vec![0.3, -0.2, 0.1, 0.4, -0.4, 0.0]);
    let probes = random_probes(&Vector::zeros(6), 1.0, 30, 1);
    let r = estimate_monotonicity(&f, &probes).unwrap();
    let alpha = r.admissible_alpha();
    let exact = quasi_newton(&f, &y, &Vector::zeros(6), &SolverOptions { tol: 1e-15, ..Default::default() }).unwrap().x;
    let opts = SolverOptions { reference: Some(exact), tol: 0.0, max_iter: 60, ..Default::default() };
    let t = van_cittert(&f, &y, &Vector::zeros(6), alpha, &opts).unwrap();
    let bound = van_cittert_rate_bound(r.m0, r.l, alpha);
    assert!(t.rate().unwrap() <= bound + 1e-9, "{} > {bound}", t.rate().unwrap());
}

#[test]
fn error_estimate_examples() {
    let f = linear(Matrix::from_element(1, 1, 2.0));
    let y = Vector::from_element(1, 2.0);
    let b = error_estimate(&f, &[Vector::zeros(1)], &y, &Vector::from_element(1, 0.1), PNorm::L2, 3.0).unwrap();
    assert!((b.absolute - 0.05).abs() < 1e-12);
    let b = error_estimate(&f, &[Vector::zeros(1)], &y, &Vector::zeros(1), PNorm::L2, 3.0).unwrap();
    assert_eq!(b.absolute, 0.0);
    assert_eq!(b.relative, 0.0);
}

#[test]
fn error_estimate_bounds_actual_perturbation() {
    let mut r = rng(11);
    for p in PNorm::ALL {
        let a = banded_spd(&mut r, 15, 3.0);
        let f = linear(a.clone());
        let x = Vector::from_fn(15, |i, _| 1.0 + 0.1 * i as f64);
        let y = &a * &x;
        let eps = Vector::from_fn(15, |i, _| 1e-3 * ((i * 5 % 7) as f64 - 3.0));
        let b = error_estimate(&f, &[Vector::zeros(15)], &y, &eps, p, 3.0).unwrap();
        let xe = solve_dense(&a, &(&y + &eps));
        let actual = p.of(&(&xe - &x));
        assert!(actual <= b.absolute * (1.0 + 1e-9), "{p:?}: {actual} > {}", b.absolute);
        assert!(actual / p.of(&x) <= b.relative * (1.0 + 1e-9));
    }
}

#[test]
fn large_step_warns() {
    let f = linear(Matrix::identity(2, 2));
    let opts = SolverOptions { bounds: Some((1.0, 1.0)), max_iter: 3, ..Default::default() };
    let t = van_cittert(&f, &Vector::from_element(2, 1.0), &Vector::zeros(2), 0.9, &opts).unwrap();
    assert_eq!(t.warnings.len(), 1);
    let t = van_cittert(&f, &Vector::from_element(2, 1.0), &Vector::zeros(2), 0.4, &opts).unwrap();
    assert!(t.warnings.is_empty());
}

#[test]
fn divergence_is_reported_with_trace() {
    let f = linear(Matrix::from_element(1, 1, 2.0));
    let opts = SolverOptions { divergence_radius: Some(1e3), ..Default::default() };
    match van_cittert(&f, &Vector::from_element(1, 1.0), &Vector::zeros(1), 2.0, &opts) {
        Err(Error::Divergence { trace: Some(t), .. }) => assert!(!t.residuals.is_empty()),
        other => panic!("expected divergence, got {other:?}"),
    }
    // No radius: only overflow counts. Factor 1999 per step overflows long before max_iter.
    let r = van_cittert(&f, &Vector::from_element(1, 1.0), &Vector::zeros(1), 1000.0, &SolverOptions::default());
    match r {
        Err(Error::Divergence { trace: Some(t), .. }) => assert!(t.x.iter().all(|v| v.is_finite())),
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn singular_gradient_is_an_error() {
    let f = linear(Matrix::zeros(2, 2));
    let r = quasi_newton(&f, &Vector::from_element(2, 1.0), &Vector::zeros(2), &SolverOptions::default());
    assert!(matches!(r, Err(Error::SingularGradient { iteration: 0 })));
}

#[test]
fn shape_errors() {
    let f = linear(Matrix::identity(3, 3));
    assert!(van_cittert(&f, &Vector::zeros(2), &Vector::zeros(3), 0.5, &SolverOptions::default()).is_err());
    assert!(van_cittert(&f, &Vector::zeros(3), &Vector::zeros(3), 0.0, &SolverOptions::default()).is_err());
    let tall = linear(Matrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]));
    assert!(van_cittert(&tall, &Vector::zeros(3), &Vector::zeros(2), 0.5, &SolverOptions::default()).is_err());
}

#[test]
fn gradient_check_on_cubic() {
    let f = cubic(4);
    let c = check_gradient(&f, &Vector::from_vec(vec![0.3, -1.0, 2.0, 0.0]), 1e-6);
    assert!(c.relative_error < 1e-8);
}
