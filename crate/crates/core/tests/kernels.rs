mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::*;
use nlsampling::algebra::PointSet;
use nlsampling::kernels::*;
use nlsampling::{Matrix, Vector};

/// Midpoint-Richardson on each smooth piece between `breaks`.
fn piecewise_oracle(f: impl Fn(f64) -> f64, breaks: &[f64], lo: f64, hi: f64) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    cuts.insert(0, lo);
    cuts.push(hi);
    cuts.windows(2).map(|w| midpoint_richardson(&f, w[0], w[1], 20_000)).sum()
}

fn rule() -> QuadratureRule {
    QuadratureRule::gauss_legendre(10, 0.125)
}

#[test]
fn gauss_legendre_is_exact_for_degree_two_n_minus_one() {
    for n in [2usize, 5, 10] {
        let q = QuadratureRule::gauss_legendre(n, 1.0);
        let deg = 2 * n - 1;
        let f = |t: f64| t.powi(deg as i32) + 0.5 * t.powi(deg as i32 - 1);
        let (a, b) = (-0.3f64, 0.7f64);
        let exact = (b.powi(deg as i32 + 1) - a.powi(deg as i32 + 1)) / (deg + 1) as f64
            + 0.5 * (b.powi(deg as i32) - a.powi(deg as i32)) / deg as f64;
        assert_relative_eq!(q.integrate(f, &[], a, b), exact, max_relative = 1e-13);
    }
}

#[test]
fn reference_weights_sum_to_two() {
    let q = rule();
    let (x, w) = q.reference();
    assert_eq!(x.len(), 10);
    assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
}

#[test]
fn gaussian_values() {
    let g = Kernel::gaussian(0.0);
    assert_eq!(g.value(0.0), 1.0);
    let k0 = 4.0 * (PI / 2.0).powf(2.0 / 3.0);
    assert_relative_eq!(g.value(1.0), (-k0).exp(), max_relative = 1e-14);
    assert_relative_eq!(g.gradient(0.3), -2.0 * k0 * 0.3 * g.value(0.3), max_relative = 1e-13);
    let (lo, hi) = g.support();
    let integral = rule().integrate(|t| g.value(t), &[0.0], lo, hi);
    assert_relative_eq!(integral, (PI / k0).sqrt(), max_relative = 1e-10);
}

#[test]
fn gaussian_self_inner_product() {
    let g = Kernel::gaussian(0.0);
    let ip = inner_product(|t| g.value(t), &[0.0], &g, &rule());
    let k0 = GAUSSIAN_RATE;
    assert_relative_eq!(ip, (PI / (2.0 * k0)).sqrt(), max_relative = 1e-10);
}

#[test]
fn square_root_kernel_values() {
    let s = Kernel::square_root(0.0);
    assert_eq!(s.value(0.75), 1.0);
    assert_relative_eq!(s.value(0.375), 0.5, epsilon = 1e-15);
    assert_relative_eq!(s.value(0.125), 0.25, epsilon = 1e-15);
    assert_eq!(s.value(0.0), 0.0);
    assert_eq!(s.value(1.5), 0.0);
    assert_eq!(s.value(-0.1), 0.0);
    assert_eq!(s.support(), (0.0, 1.0));
}

#[test]
fn box_times_constant() {
    let b = Kernel::box_average(0.0, 0.05, 10.0).unwrap();
    assert_relative_eq!(inner_product(|_| 1.0, &[], &b, &rule()), 0.5, epsilon = 1e-14);
    let far = Kernel::box_average(3.0, 4.0, 1.0).unwrap();
    assert_eq!(inner_product(|t| b.value(t), &b.breakpoints(), &far, &rule()), 0.0);
}

#[test]
fn supports_are_sound() {
    let kernels = [
        Kernel::gaussian(0.3),
        Kernel::square_root(1.0),
        Kernel::box_average(-1.0, 0.5, 2.0).unwrap(),
        Kernel::bspline3(0.0, 0.5).unwrap(),
    ];
    for k in &kernels {
        let (lo, hi) = k.support();
        for i in 1..200 {
            let d = i as f64 * 0.05;
            assert!(k.value(hi + d).abs() < 1e-15, "{k:?} at {}", hi + d);
            assert!(k.value(lo - d).abs() < 1e-15, "{k:?} at {}", lo - d);
        }
    }
}

#[test]
fn gradients_match_finite_differences() {
    let knots = PointSet::new(vec![-1.0, -0.4, 0.1, 0.5, 1.2, 1.6]).unwrap();
    let mut kernels = vec![Kernel::gaussian(0.2), Kernel::bspline3(0.1, 0.7).unwrap()];
    kernels.extend(Kernel::cardinal_splines(&knots).unwrap());
    let h = 1e-6;
    for k in &kernels {
        for i in 0..40 {
            let t = -1.3 + 0.071 * i as f64 + 0.0123;
            if k.breakpoints().iter().any(|b| (b - t).abs() < 1e-3) {
                continue;
            }
            let fd = (k.value(t + h) - k.value(t - h)) / (2.0 * h);
            let g = k.gradient(t);
            assert!((fd - g).abs() <= 1e-6 * g.abs().max(1.0), "{k:?} at {t}: {g} vs {fd}");
            let fd2 = (k.gradient(t + h) - k.gradient(t - h)) / (2.0 * h);
            assert!((fd2 - k.hessian(t)).abs() <= 1e-5 * k.hessian(t).abs().max(1.0));
        }
    }
}

#[test]
fn gaussian_decay_is_polynomially_bounded() {
    let g = Kernel::gaussian(0.0);
    assert!(g.decay_order().is_infinite());
    let beta = 3.0;
    let r = g.support().1;
    let bound = (0..=500).map(|i| 5.0 * r * i as f64 / 500.0).map(|t| g.value(t) * (1.0 + t).powf(beta)).fold(0.0, f64::max);
    assert!(bound.is_finite() && bound < 10.0);
}

#[test]
fn cardinal_splines_interpolate() {
    let knots = PointSet::uniform(0.0, 1.0, 4).unwrap();
    let phi = Kernel::cardinal_splines(&knots).unwrap();
    for (i, k) in phi.iter().enumerate() {
        for j in 0..4 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((k.value(j as f64) - want).abs() < 1e-12);
        }
    }
    assert!(Kernel::cardinal_splines(&PointSet::uniform(0.0, 1.0, 3).unwrap()).is_err());
}

/// Natural cubic interpolant of `y` at `t` by a dense solve of the full
/// moment system (continuity of the first derivative at interior knots).
fn natural_spline_oracle(t: &[f64], y: &[f64], x: f64) -> f64 {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let mut a = Matrix::zeros(n, n);
    let mut b = Vector::zeros(n);
    a[(0, 0)] = 1.0;
    a[(n - 1, n - 1)] = 1.0;
    for i in 1..n - 1 {
        a[(i, i - 1)] = h[i - 1] / 6.0;
        a[(i, i)] = (h[i - 1] + h[i]) / 3.0;
        a[(i, i + 1)] = h[i] / 6.0;
        b[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
    }
    let m = solve_dense(&a, &b);
    if x < t[0] || x > t[n - 1] {
        return 0.0;
    }
    let k = (0..n - 1).find(|&k| x <= t[k + 1]).unwrap();
    let (l, r) = (t[k + 1] - x, x - t[k]);
    m[k] * l.powi(3) / (6.0 * h[k])
        + m[k + 1] * r.powi(3) / (6.0 * h[k])
        + (y[k] / h[k] - m[k] * h[k] / 6.0) * l
        + (y[k + 1] / h[k] - m[k + 1] * h[k] / 6.0) * r
}

#[test]
fn cardinal_splines_match_dense_natural_spline_oracle() {
    let t = vec![-2.0, -1.85, -1.6, -1.52, -1.3, -1.21, -1.1];
    let knots = PointSet::new(t.clone()).unwrap();
    let phi = Kernel::cardinal_splines(&knots).unwrap();
    for (i, k) in phi.iter().enumerate() {
        let y: Vec<f64> = (0..t.len()).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
        for s in 0..=90 {
            let x = -2.0 + 0.01 * s as f64;
            assert!((k.value(x) - natural_spline_oracle(&t, &y, x)).abs() < 1e-12, "φ_{i}({x})");
        }
    }
}

#[test]
fn fourier_transforms_match_quadrature() {
    let kernels = [
        Kernel::gaussian(0.25),
        Kernel::square_root(0.5),
        Kernel::box_average(-0.2, 0.6, 3.0).unwrap(),
        Kernel::bspline3(0.1, 0.8).unwrap(),
    ];
    for k in &kernels {
        let (lo, hi) = k.support();
        for &xi in &[0.0, 1e-7, 0.5, 2.0, -3.7, 11.0] {
            let b = k.breakpoints();
            let re = piecewise_oracle(|t| k.value(t) * (xi * t).cos(), &b, lo, hi);
            let im = -piecewise_oracle(|t| k.value(t) * (xi * t).sin(), &b, lo, hi);
            let f = k.fourier(xi);
            assert!((f.re - re).abs() < 1e-8 && (f.im - im).abs() < 1e-8, "{k:?} at {xi}: {f} vs {re}+{im}i");
        }
    }
}

#[test]
fn inner_product_is_symmetric_and_bilinear() {
    let a = Kernel::gaussian(0.1);
    let b = Kernel::square_root(-0.4);
    let q = rule();
    let ab = inner_product(|t| a.value(t), &a.breakpoints(), &b, &q);
    let ba = inner_product(|t| b.value(t), &b.breakpoints(), &a, &q);
    assert!((ab - ba).abs() < 1e-12);
    let scaled = inner_product(|t| 2.5 * a.value(t), &a.breakpoints(), &b, &q);
    assert!((scaled - 2.5 * ab).abs() < 1e-12);
}

#[test]
fn inner_product_matches_piecewise_oracle() {
    let a = Kernel::gaussian(0.3);
    let b = Kernel::square_root(0.0);
    let ip = inner_product(|t| (a.value(t) * 1.3).sin(), &a.breakpoints(), &b, &rule());
    let oracle = piecewise_oracle(|t| (a.value(t) * 1.3).sin() * b.value(t), &b.breakpoints(), 0.0, 1.0);
    assert!((ip - oracle).abs() < 1e-9);
}

#[test]
fn intercorrelation_properties() {
    let knots = PointSet::uniform(-1.0, 0.25, 9).unwrap();
    let phi = GeneratorFamily::cardinal_splines(&knots, 3.0).unwrap();
    let q = rule();
    let a = intercorrelation(&phi, &phi, &q);
    let m = a.entries();
    assert!((m - m.transpose()).amax() < 1e-14);
    for i in 0..9 {
        let off: f64 = (0..9).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
        assert!(m[(i, i)] > off, "row {i} not dominant");
    }
    // Exact: piecewise cubic products are degree 6, integrated exactly per panel.
    let k = phi.kernels();
    let oracle = simpson(|t| k[3].value(t) * k[4].value(t), -1.0, 1.0, 200_000);
    assert!((m[(3, 4)] - oracle).abs() < 1e-10);
    let boxes = GeneratorFamily::translates(&Kernel::box_average(0.0, 0.1, 10.0).unwrap(), &PointSet::new(vec![0.0, 5.0]).unwrap(), 3.0).unwrap();
    let bb = intercorrelation(&boxes, &boxes, &q);
    assert_eq!(bb.entries()[(0, 1)], 0.0);
}

#[test]
fn node_doubling_changes_inner_products_negligibly() {
    let knots = PointSet::new((0..40).map(|i| -2.0 + 0.1 * i as f64 + 0.013 * ((i * 7) % 5) as f64).collect()).unwrap();
    let phi = GeneratorFamily::cardinal_splines(&knots, 3.0).unwrap();
    let psi = GeneratorFamily::new(
        (1..=80).map(|i| Kernel::box_average(-2.0 + (i - 1) as f64 / 20.0, -2.0 + i as f64 / 20.0, 10.0).unwrap()).collect(),
        PointSet::new((1..=80).map(|i| -2.0 + i as f64 / 20.0).collect()).unwrap(),
        3.0,
    )
    .unwrap();
    let q = rule();
    let a = intercorrelation(&psi, &phi, &q);
    let b = intercorrelation(&psi, &phi, &q.doubled());
    assert!((a.entries() - b.entries()).amax() < 1e-10);
}

#[test]
fn mu_of_companding_cases() {
    assert_eq!(mu_of_companding(&CompandingFunction::Identity, 1.0, (-1.0, 1.0)).unwrap(), 0.0);
    let m = 4.0 / PI;
    let mu = mu_of_companding(&CompandingFunction::Sine, m, (-1.0, 1.0)).unwrap();
    assert_relative_eq!(mu, 1.0, epsilon = 1e-12);
    // On [-1/2, 1/2], F' ranges over [π/2 cos(π/4), π/2]: |1 - mF'| peaks at 1.
    let mu = mu_of_companding(&CompandingFunction::Sine, m, (-0.5, 0.5)).unwrap();
    let calculus = (1.0 - m * PI / 2.0).abs().max((1.0 - m * PI / 2.0 * (PI / 4.0).cos()).abs());
    assert_relative_eq!(mu, calculus, epsilon = 1e-10);
    // Interior maximizer: m = 1, F' sweeps through 1 so the sup is at an endpoint.
    let mu = mu_of_companding(&CompandingFunction::Sine, 0.9, (-0.8, 0.3)).unwrap();
    let g = |t: f64| (1.0 - 0.9 * PI / 2.0 * (PI * t / 2.0).cos()).abs();
    let brute = (0..=1_000_000).map(|i| g(-0.8 + 1.1 * i as f64 / 1e6)).fold(0.0, f64::max);
    assert_relative_eq!(mu, brute, epsilon = 1e-10);
}

#[test]
fn companding_derivatives() {
    let f = CompandingFunction::Sine;
    assert_eq!(f.value(0.0), 0.0);
    for i in 0..20 {
        let t = -1.0 + 0.1 * i as f64;
        let h = 1e-6;
        assert!(((f.value(t + h) - f.value(t - h)) / (2.0 * h) - f.derivative(t)).abs() < 1e-6);
        assert!(((f.derivative(t + h) - f.derivative(t - h)) / (2.0 * h) - f.second_derivative(t)).abs() < 1e-6);
    }
}
