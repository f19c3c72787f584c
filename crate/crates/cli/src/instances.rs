//! Seeded random instances of the experiments.
//!
//! Every generator draws from a ChaCha8 stream seeded by the config seed;
//! measurement noise uses a separate stream of the same seed so that the
//! noiseless and noisy variants share one instance.

use nlsampling::algebra::{PNorm, PointSet};
use nlsampling::companding::{Preconditioner, SamplingModel};
use nlsampling::fri::{linearize, BlindConfig, FilterKind, BlindSamples, FriSignal, Linearization};
use nlsampling::kernels::{CompandingFunction, GeneratorFamily, Kernel, QuadratureRule};
use nlsampling::solver::{estimate_monotonicity, random_probes};
use nlsampling::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{CompandingTag, ExperimentConfig};
use crate::{CliError, Result};

/// Declared decay order of the generator and sampler families.
pub const BETA: f64 = 3.0;
/// Attempts before instance generation gives up.
pub const MAX_ATTEMPTS: usize = 1000;
const NOISE_STREAM: u64 = 1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn noise_rng(seed: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(NOISE_STREAM);
    r
}

fn pipeline(config: &ExperimentConfig) -> impl Fn(nlsampling::Error) -> CliError + '_ {
    move |source| CliError::Pipeline { source, config: config.echo() }
}

pub fn companding_function(tag: CompandingTag) -> CompandingFunction {
    match tag {
        CompandingTag::Sine => CompandingFunction::Sine,
        CompandingTag::Identity => CompandingFunction::Identity,
    }
}

/// 80 box samplers `10 χ_[-2+(i-1)/20, -2+i/20)`, indexed by their right edges.
pub fn box_samplers() -> GeneratorFamily {
    let kernels = (1..=80)
        .map(|i| Kernel::box_average(-2.0 + (i - 1) as f64 / 20.0, -2.0 + i as f64 / 20.0, 10.0).expect("box"))
        .collect();
    let centers = PointSet::new((1..=80).map(|i| -2.0 + i as f64 / 20.0).collect()).expect("increasing");
    GeneratorFamily::new(kernels, centers, BETA).expect("family")
}

/// Ten Gauss-Legendre nodes per panel.
pub fn default_rule() -> QuadratureRule {
    QuadratureRule::gauss_legendre(10, 0.125)
}

/// `count` knots in `[-2, 2]` with consecutive gaps uniform in
/// `[gap_min, gap_max]`, redrawn until the span fits; the first knot is
/// uniform over the admissible offsets.
pub fn random_knots(rng: &mut ChaCha8Rng, count: usize, gap_min: f64, gap_max: f64) -> Option<PointSet> {
    for _ in 0..MAX_ATTEMPTS {
        let gaps: Vec<f64> = (1..count).map(|_| rng.random_range(gap_min..=gap_max)).collect();
        let span: f64 = gaps.iter().sum();
        if span > 4.0 {
            continue;
        }
        let mut t = -2.0 + rng.random_range(0.0..=(4.0 - span));
        let mut knots = vec![t];
        for g in gaps {
            t += g;
            knots.push(t);
        }
        return PointSet::new(knots).ok();
    }
    None
}

/// A companded spline sampling instance.
#[derive(Debug, Clone)]
pub struct CompandingInstance {
    pub model: SamplingModel,
    pub x_true: Vector,
    /// Noiseless samples `⟨F(x_trueᵀΦ), Ψ⟩`.
    pub y: Vector,
    /// Draws rejected before this one.
    pub rejected: usize,
}

/// Radius of the `ℓ^∞` ball around the true coefficients on which the
/// normalized sampling map must be monotone.
pub const MONOTONE_RADIUS: f64 = 0.1;
pub const MONOTONE_PROBES: usize = 8;

/// Draw knots and coefficients until the normalized sampling map is monotone
/// (`m₀ > 0` for the symmetric part of its gradient) at the true coefficients
/// and at random probes within [`MONOTONE_RADIUS`].
pub fn companding_instance(config: &ExperimentConfig) -> Result<CompandingInstance> {
    let err = pipeline(config);
    let mut rng = rng(config.seed);
    let samplers = box_samplers();
    let f = companding_function(config.companding);
    for rejected in 0..MAX_ATTEMPTS {
        let knots = random_knots(&mut rng, config.count, config.gap_min, config.gap_max)
            .ok_or_else(|| CliError::Config("no knot set satisfies the gap constraints".into()))?;
        let c: Vec<f64> = (0..config.count).map(|_| rng.random_range(-0.5..=0.5)).collect();
        let cmax = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if cmax == 0.0 {
            continue;
        }
        let x_true = Vector::from_iterator(config.count, c.iter().map(|v| v / cmax));
        let generators = GeneratorFamily::cardinal_splines(&knots, BETA).map_err(&err)?;
        let model = match SamplingModel::new(generators, samplers.clone(), f, default_rule()) {
            Ok(m) => m,
            Err(nlsampling::Error::SamplingNotStabilizable { .. }) => continue,
            Err(e) => return Err(err(e)),
        };
        let map = model.companding_map(Preconditioner::Normalized);
        let mut probes = random_probes(&x_true, MONOTONE_RADIUS, MONOTONE_PROBES, rng.random());
        probes.push(x_true.clone());
        let mono = estimate_monotonicity(&map, &probes).map_err(&err)?;
        if !mono.monotone {
            continue;
        }
        let y = model.forward_sample(&x_true).map_err(&err)?;
        return Ok(CompandingInstance { model, x_true, y, rejected });
    }
    Err(CliError::Config(format!("no monotone instance in {MAX_ATTEMPTS} draws")))
}

/// Piecewise noise weights: one on boxes `[1,16) ∪ [72,80]`, two on
/// `[24,40) ∪ [48,64)`, zero elsewhere.
pub fn noise_pattern(i: usize) -> f64 {
    if (1..16).contains(&i) || (72..=80).contains(&i) {
        1.0
    } else if (24..40).contains(&i) || (48..64).contains(&i) {
        2.0
    } else {
        0.0
    }
}

/// `ε_i = r_i a(i) ‖y‖_∞` with `r_i` uniform in `[-level/2, level/2]`, so the
/// largest possible relative noise equals `level`.
pub fn piecewise_noise(seed: u64, y: &Vector, level: f64) -> Vector {
    let mut rng = noise_rng(seed);
    let scale = y.amax();
    Vector::from_fn(y.len(), |i, _| {
        let r: f64 = rng.random_range(-0.5..=0.5) * level;
        r * noise_pattern(i + 1) * scale
    })
}

/// 41 square-root samplers `ψ₀(· - (j/2 - 1))`, `j = 1..41`.
pub fn square_root_samplers() -> GeneratorFamily {
    let kernels: Vec<Kernel> = (1..=41).map(|j| Kernel::square_root(j as f64 / 2.0 - 1.0)).collect();
    let centers = PointSet::new(kernels.iter().map(|k| k.center()).collect()).expect("increasing");
    GeneratorFamily::new(kernels, centers, BETA).expect("family")
}

/// Innovation window `[0, 20]`.
pub const FRI_WINDOW: (f64, f64) = (0.0, 20.0);
/// Declared locality radius for identification: twice the rounding error of
/// the floor-to-0.1 approximations.
pub const FRI_DELTA0: f64 = 0.2;
/// Conditioning cap on the linearization.
pub const FRI_MAX_CONDITION: f64 = 500.0;
/// Cap on the spectral radius of `I - α ∇f` along the segment to the truth.
pub const FRI_MAX_SPECTRAL_RADIUS: f64 = 0.75;

/// An identification instance.
#[derive(Debug, Clone)]
pub struct FriInstance {
    pub positions: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub lin: Linearization,
    /// `σ_∞ = t - t₀`.
    pub sigma_true: Vector,
    /// `c_∞ = a - a₀`.
    pub c_true: Vector,
    pub y_clean: Vector,
    pub y: Vector,
    pub rejected: usize,
}

fn floor_tenth(v: f64) -> f64 {
    (10.0 * v).floor() / 10.0
}

/// Positions `0.5 = t₁ < … < t_n = 19.5` with gaps in `[gap_min, gap_max]`.
fn fri_positions(rng: &mut ChaCha8Rng, n: usize, gap_min: f64, gap_max: f64) -> Option<Vec<f64>> {
    let total = 19.0;
    for _ in 0..MAX_ATTEMPTS {
        let raw: Vec<f64> = (1..n).map(|_| rng.random_range(gap_min..=gap_max)).collect();
        let s: f64 = raw.iter().sum();
        let gaps: Vec<f64> = raw.iter().map(|g| g * total / s).collect();
        if gaps.iter().all(|g| (gap_min..=gap_max).contains(g)) {
            let mut t = vec![0.5];
            for g in gaps {
                t.push(t.last().unwrap() + g);
            }
            *t.last_mut().unwrap() = 19.5;
            return Some(t);
        }
    }
    None
}

fn spectral_radius(m: &Matrix) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Draw innovations until the linearization at the rounded parameters is well
/// conditioned, the Van-Cittert map contracts along the segment to the true
/// parameters, and the first-order correction from noiseless samples lies
/// within the locality radius.
pub fn fri_instance(config: &ExperimentConfig) -> Result<FriInstance> {
    let err = pipeline(config);
    let mut rng = rng(config.seed);
    let samplers = square_root_samplers();
    let f = companding_function(config.companding);
    let rule = default_rule();
    let n = config.count;
    for rejected in 0..MAX_ATTEMPTS {
        let positions = fri_positions(&mut rng, n, config.gap_min, config.gap_max)
            .ok_or_else(|| CliError::Config("no position set satisfies the gap constraints".into()))?;
        let amplitudes: Vec<f64> = (0..n)
            .map(|_| {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                sign * rng.random_range(0.1..=1.0)
            })
            .collect();
        let t0: Vec<f64> = positions.iter().map(|&t| floor_tenth(t)).collect();
        let a0: Vec<f64> = amplitudes.iter().map(|&a| floor_tenth(a)).collect();
        let Ok(t0_set) = PointSet::new(t0.clone()) else { continue };
        let base = FriSignal::new(Kernel::gaussian(0.0), t0_set, Vector::from_vec(a0.clone()), FRI_WINDOW)
            .map_err(&err)?;
        let lin = linearize(&base, &samplers, f, &rule).map_err(&err)?;
        if lin.pseudo_inverse().is_err() || lin.b_bound() > FRI_MAX_CONDITION * lin.a_bound() {
            continue;
        }
        let sigma_true = Vector::from_iterator(n, positions.iter().zip(&t0).map(|(t, s)| t - s));
        let c_true = Vector::from_iterator(n, amplitudes.iter().zip(&a0).map(|(a, b)| a - b));
        let p = lin.pseudo_inverse().map_err(&err)?.matrix().clone();
        let id = Matrix::identity(2 * n, 2 * n);
        let contracts = [0.5, 1.0].iter().all(|&s| {
            let g = &p * lin.perturbed_matrix(&(&sigma_true * s), &(&c_true * s));
            spectral_radius(&(&id - g * config.alpha)) <= FRI_MAX_SPECTRAL_RADIUS
        });
        if !contracts {
            continue;
        }
        let y_clean = lin.samples(&positions, &amplitudes).map_err(&err)?;
        let z0 = lin.pseudo_inverse().map_err(&err)?.apply(&(&y_clean - lin.base_samples()));
        if z0.amax() > FRI_DELTA0 {
            continue;
        }
        let y = if config.noise_level > 0.0 {
            let mut nr = noise_rng(config.seed);
            let scale = y_clean.amax();
            Vector::from_fn(y_clean.len(), |i, _| y_clean[i] + config.noise_level * rng_unit(&mut nr) * scale)
        } else {
            y_clean.clone()
        };
        return Ok(FriInstance { positions, amplitudes, lin, sigma_true, c_true, y_clean, y, rejected });
    }
    Err(CliError::Config(format!("no admissible innovation instance in {MAX_ATTEMPTS} draws")))
}

fn rng_unit(r: &mut ChaCha8Rng) -> f64 {
    r.random_range(-1.0..=1.0)
}

/// A perturbed shift-invariant signal for blind recovery.
#[derive(Debug, Clone)]
pub struct BlindInstance {
    pub config: BlindConfig,
    pub phi: Kernel,
    /// Integer shifts carrying an innovation.
    pub support: Vec<i64>,
    /// `k + σ(k)` on the support.
    pub positions: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub samples: BlindSamples,
    pub rule: QuadratureRule,
}

/// Extra sampled shifts on each side of the innovation window.
pub const BLIND_MARGIN: i64 = 12;
/// Amplitude bound `L` of the blind demonstration.
pub const BLIND_AMPLITUDE_BOUND: f64 = 10.0 / 3.0;

/// Samplers `φ₀` and `φ₀'` of the blind demonstration.
pub fn blind_samplers() -> Vec<Kernel> {
    let phi = Kernel::gaussian(0.0);
    vec![phi.clone(), phi.derivative().expect("gaussian derivative")]
}

/// Innovations on `0..count` (each present with probability 1/2), amplitudes
/// in `±[1/3, 3]`, shifts uniform in `[-δ, δ]` with one shift of size exactly `δ`.
pub fn blind_instance(config: &ExperimentConfig) -> Result<BlindInstance> {
    let err = pipeline(config);
    let mut rng = rng(config.seed);
    let delta = config.perturbation;
    let phi = Kernel::gaussian(0.0);
    let mut bcfg =
        BlindConfig::new(blind_samplers(), BLIND_AMPLITUDE_BOUND, delta.max(f64::MIN_POSITIVE)).map_err(&err)?;
    bcfg.filters = FilterKind::ShiftAnnihilating;
    let mut support = Vec::new();
    let mut amplitudes = Vec::new();
    let mut sigma = Vec::new();
    for k in 0..config.count as i64 {
        if rng.random_bool(0.5) {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            support.push(k);
            amplitudes.push(sign * rng.random_range(1.0 / 3.0..=3.0));
            sigma.push(rng.random_range(-delta..=delta));
        }
    }
    if support.is_empty() {
        support.push(0);
        amplitudes.push(1.0);
        sigma.push(0.0);
    }
    let i = rng.random_range(0..sigma.len());
    sigma[i] = if sigma[i] < 0.0 { -delta } else { delta };
    let positions: Vec<f64> = support.iter().zip(&sigma).map(|(&k, s)| k as f64 + s).collect();
    let rule = default_rule();
    let range = (-BLIND_MARGIN, config.count as i64 - 1 + BLIND_MARGIN);
    let samples = BlindSamples::synthesize(&bcfg, &phi, &positions, &amplitudes, range, &rule).map_err(&err)?;
    Ok(BlindInstance { config: bcfg, phi, support, positions, amplitudes, samples, rule })
}

/// `‖·‖_∞` of a vector difference.
pub fn linf(a: &Vector, b: &Vector) -> f64 {
    PNorm::LInf.of(&(a - b))
}
