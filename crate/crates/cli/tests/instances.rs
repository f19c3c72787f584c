use nlsampling_cli::instances::*;
use nlsampling_cli::{Experiment, ExperimentConfig};
use nlsampling::Vector;

#[test]
fn knots_respect_gaps_and_window() {
    let mut r = rng(4);
    for _ in 0..50 {
        let k = random_knots(&mut r, 40, 0.05, 0.15).unwrap();
        assert_eq!(k.len(), 40);
        assert!(k.first().unwrap() >= -2.0 && k.last().unwrap() <= 2.0);
        assert!(k.min_gap().unwrap() >= 0.05 - 1e-12 && k.max_gap().unwrap() <= 0.15 + 1e-12);
    }
    assert!(random_knots(&mut r, 40, 0.14, 0.15).is_none());
}

#[test]
fn noise_pattern_blocks() {
    let weights: Vec<f64> = (1..=80).map(noise_pattern).collect();
    assert_eq!(weights.iter().filter(|&&w| w == 1.0).count(), 15 + 9);
    assert_eq!(weights.iter().filter(|&&w| w == 2.0).count(), 32);
    assert_eq!(noise_pattern(16), 0.0);
    assert_eq!(noise_pattern(40), 0.0);
    assert_eq!(noise_pattern(48), 2.0);
}

#[test]
fn piecewise_noise_is_bounded_and_reproducible() {
    let y = Vector::from_fn(80, |i, _| (i as f64 * 0.3).sin());
    let n = piecewise_noise(3, &y, 0.025);
    assert_eq!(n, piecewise_noise(3, &y, 0.025));
    for (i, v) in n.iter().enumerate() {
        assert!(v.abs() <= 0.025 / 2.0 * noise_pattern(i + 1) * y.amax() + 1e-15);
    }
    assert!(n.amax() > 0.0);
}

#[test]
fn samplers_have_expected_layout() {
    let b = box_samplers();
    assert_eq!(b.len(), 80);
    assert_eq!(b.centers().first(), Some(-1.95));
    let s = square_root_samplers();
    assert_eq!(s.len(), 41);
    assert_eq!(s.kernels()[0].support(), (-0.5, 0.5));
}

#[test]
fn companding_instance_is_reproducible() {
    let c = ExperimentConfig::preset(Experiment::CompandingTable1);
    let a = companding_instance(&c).unwrap();
    let b = companding_instance(&c).unwrap();
    assert_eq!(a.x_true, b.x_true);
    assert_eq!(a.y, b.y);
    assert_eq!(a.x_true.amax(), 1.0);
}

#[test]
fn fri_instance_satisfies_its_gates() {
    let c = ExperimentConfig::preset(Experiment::FriTable3);
    let f = fri_instance(&c).unwrap();
    assert_eq!(f.positions.len(), 20);
    assert!((f.positions[0] - 0.5).abs() < 1e-12 && (f.positions[19] - 19.5).abs() < 1e-12);
    assert!(f.lin.b_bound() <= FRI_MAX_CONDITION * f.lin.a_bound());
    assert_eq!(f.y, f.y_clean);
}

#[test]
fn blind_instance_has_one_extreme_shift() {
    let c = ExperimentConfig::preset(Experiment::BlindDemo);
    let b = blind_instance(&c).unwrap();
    let worst = b.positions.iter().zip(&b.support).map(|(p, &k)| (p - k as f64).abs()).fold(0.0, f64::max);
    assert!((worst - c.perturbation).abs() < 1e-15);
    assert!(b.amplitudes.iter().all(|a| (1.0 / 3.0..=3.0).contains(&a.abs())));
}
