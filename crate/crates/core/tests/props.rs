mod common;

use common::*;
use nlsampling::algebra::*;
use nlsampling::kernels::*;
use nlsampling::solver::*;
use nlsampling::{Matrix, Vector};
use proptest::prelude::*;

fn pos(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64).collect()
}

fn localized(m: Matrix) -> LocalizedMatrix {
    let (r, c) = m.shape();
    LocalizedMatrix::with_positions(pos(r), pos(c), m).unwrap()
}

fn kernel() -> impl Strategy<Value = Kernel> {
    prop_oneof![
        (-3.0..3.0f64).prop_map(Kernel::gaussian),
        (-3.0..3.0f64).prop_map(Kernel::square_root),
        (-3.0..3.0f64, 0.01..2.0f64, -5.0..5.0f64).prop_map(|(l, w, h)| Kernel::box_average(l, l + w, h).unwrap()),
        (-3.0..3.0f64, 0.05..1.0f64).prop_map(|(c, w)| Kernel::bspline3(c, w).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn jaffard_norm_grows_with_beta(seed in any::<u64>(), n in 1usize..12, b1 in 0.0..4.0f64, b2 in 0.0..4.0f64) {
        let a = localized(random_matrix(&mut rng(seed), n, n));
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        prop_assert!(a.jaffard_norm(hi) >= a.jaffard_norm(lo));
    }

    #[test]
    fn schur_interpolation(seed in any::<u64>(), r in 1usize..15, c in 1usize..15) {
        let a = random_matrix(&mut rng(seed), r, c);
        let l2 = operator_norm(&a, PNorm::L2);
        prop_assert!(l2 * l2 <= operator_norm(&a, PNorm::L1) * operator_norm(&a, PNorm::LInf) * (1.0 + 1e-9));
    }

    #[test]
    fn inverse_reproduces_identity_within_bound(seed in any::<u64>(), n in 2usize..30) {
        let m = banded_spd(&mut rng(seed), n, 3.0);
        let a = localized(m.clone());
        let (inv, d) = norm_controlled_inverse(&a, 3.0, 1 << 40).unwrap();
        prop_assert!((inv.entries() * &m - Matrix::identity(n, n)).amax() < 1e-10);
        prop_assert!(inv.jaffard_norm(3.0) <= d.bound() * (1.0 + 1e-12));
    }

    #[test]
    fn supports_are_sound(k in kernel(), d in 1e-9..10.0f64) {
        let (lo, hi) = k.support();
        prop_assert!(k.value(hi + d).abs() < 1e-15);
        prop_assert!(k.value(lo - d).abs() < 1e-15);
    }

    #[test]
    fn inner_product_symmetric_and_bilinear(a in kernel(), b in kernel(), s in -4.0..4.0f64) {
        let q = QuadratureRule::gauss_legendre(10, 0.125);
        let ab = inner_product(|t| a.value(t), &a.breakpoints(), &b, &q);
        let ba = inner_product(|t| b.value(t), &b.breakpoints(), &a, &q);
        let scale = ab.abs().max(1.0);
        prop_assert!((ab - ba).abs() <= 1e-12 * scale);
        let sab = inner_product(|t| s * a.value(t), &a.breakpoints(), &b, &q);
        prop_assert!((sab - s * ab).abs() <= 1e-12 * scale * s.abs().max(1.0));
    }

    #[test]
    fn van_cittert_rate_within_theory(seed in any::<u64>(), n in 2usize..25, frac in 0.05..0.95f64) {
        let m = banded_spd(&mut rng(seed), n, 3.0);
        let f = LinearMap::new(localized(m.clone()));
        let rep = estimate_monotonicity(&f, &[Vector::zeros(n)]).unwrap();
        let alpha = frac * rep.admissible_alpha();
        let x = Vector::from_fn(n, |i, _| ((i + 1) as f64).sqrt());
        let y = &m * &x;
        let opts = SolverOptions { reference: Some(x), tol: 0.0, max_iter: 80, ..Default::default() };
        let t = van_cittert(&f, &y, &Vector::zeros(n), alpha, &opts).unwrap();
        if let Some(rate) = t.rate() {
            prop_assert!(rate <= van_cittert_rate_bound(rep.m0, rep.l, alpha) + 0.05);
        }
    }

    #[test]
    fn error_estimate_is_sound(seed in any::<u64>(), n in 2usize..20, level in 1e-6..1e-1f64) {
        let mut r = rng(seed);
        let m = banded_spd(&mut r, n, 3.0);
        let f = LinearMap::new(localized(m.clone()));
        let x = Vector::from_fn(n, |i, _| 1.0 + (i as f64).cos());
        let y = &m * &x;
        let eps = random_matrix(&mut r, n, 1).column(0).into_owned() * level;
        let xe = solve_dense(&m, &(&y + &eps));
        for p in PNorm::ALL {
            let b = error_estimate(&f, &[Vector::zeros(n)], &y, &eps, p, 3.0).unwrap();
            prop_assert!(p.of(&(&xe - &x)) <= b.absolute * (1.0 + 1e-9));
        }
    }

    #[test]
    fn newton_tail_is_quadratic(a in 0.05..0.5f64, y0 in -1.0..1.0f64, y1 in -1.0..1.0f64) {
        // x ↦ x + a x³ coordinatewise, coupled through a mild symmetric mix.
        let f = FnMap::new(
            pos(2),
            pos(2),
            move |x: &Vector| Vector::from_vec(vec![x[0] + a * x[0].powi(3) + 0.2 * x[1], x[1] + a * x[1].powi(3) + 0.2 * x[0]]),
            move |x: &Vector| Matrix::from_row_slice(2, 2, &[1.0 + 3.0 * a * x[0] * x[0], 0.2, 0.2, 1.0 + 3.0 * a * x[1] * x[1]]),
        ).unwrap();
        let y = Vector::from_vec(vec![y0, y1]);
        let exact = quasi_newton(&f, &y, &Vector::zeros(2), &SolverOptions { tol: 1e-16, max_iter: 100, ..Default::default() }).unwrap().x;
        let opts = SolverOptions { reference: Some(exact), tol: 1e-16, max_iter: 100, ..Default::default() };
        let t = quasi_newton(&f, &y, &Vector::zeros(2), &opts).unwrap();
        prop_assert!((f.evaluate(&t.x) - &y).amax() <= 1e-15 * y.amax().max(1.0) * 10.0);
        let e = t.error_sequence();
        let pairs: Vec<(f64, f64)> = e.windows(2).filter(|w| w[0] < 1e-2 && w[1] > 1e-13).map(|w| (w[0].ln(), w[1].ln())).collect();
        if pairs.len() >= 2 {
            let (mx, my) = pairs.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
            let (mx, my) = (mx / pairs.len() as f64, my / pairs.len() as f64);
            let (num, den) = pairs.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
            prop_assert!(num / den >= 1.8, "slope {}", num / den);
        }
    }

    #[test]
    fn convergent_traces_meet_tolerance(seed in any::<u64>(), n in 1usize..15, tol in 1e-12..1e-4f64) {
        let m = banded_spd(&mut rng(seed), n, 3.0);
        let f = LinearMap::new(localized(m.clone()));
        let y = Vector::from_fn(n, |i, _| (i as f64 * 0.9).sin() + 0.5);
        let alpha = estimate_monotonicity(&f, &[Vector::zeros(n)]).unwrap().admissible_alpha();
        let t = van_cittert(&f, &y, &Vector::zeros(n), alpha, &SolverOptions { tol, max_iter: 5000, ..Default::default() }).unwrap();
        if t.converged {
            prop_assert!((f.evaluate(&t.x) - &y).amax() <= tol * y.amax().max(1.0));
        }
    }
}
