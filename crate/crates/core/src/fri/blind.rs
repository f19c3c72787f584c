use num_complex::Complex64;
use rustfft::FftPlanner;

use super::fourier::{bracket_product, FourierGrid};
use super::identify::{identify, linearize_kernels, Identification};
use super::signal::FriSignal;
use crate::algebra::PointSet;
use crate::error::{invalid, Error, Result};
use crate::kernels::{inner_product, CompandingFunction, Kernel, QuadratureRule};
use crate::solver::SolverOptions;
use crate::Vector;

/// Which dual filters turn samples into amplitude estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterKind {
    /// Minimum-norm filters `conj([φ̂, ψ̂_m]) / Σ_m |[φ̂, ψ̂_m]|²`.
    #[default]
    Amplitude,
    /// Minimum-norm filters that reproduce `c` and also annihilate the
    /// first-order shift term `σ(k) c(k) φ'(· - k)`; needs the rank condition.
    ShiftAnnihilating,
}

/// Samplers and a-priori bounds for blind recovery.
#[derive(Debug, Clone, PartialEq)]
pub struct BlindConfig {
    /// `ψ₁, …, ψ_M`, each used at all integer shifts.
    pub samplers: Vec<Kernel>,
    /// `L ≥ 1` with `|c(k)| ∈ {0} ∪ [1/L, L]`.
    pub amplitude_bound: f64,
    /// `δ₁ ≥ ‖σ‖_∞`.
    pub perturbation_bound: f64,
    /// Number of frequency grid points on `[-π, π)`.
    pub grid_size: usize,
    /// Alias range `|l| ≤ alias`.
    pub alias: usize,
    pub filters: FilterKind,
}

impl BlindConfig {
    pub fn new(samplers: Vec<Kernel>, amplitude_bound: f64, perturbation_bound: f64) -> Result<Self> {
        let c = Self { samplers, amplitude_bound, perturbation_bound, grid_size: 4096, alias: 8, filters: FilterKind::Amplitude };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samplers.is_empty() {
            return invalid("no samplers");
        }
        if !(self.amplitude_bound >= 1.0) {
            return invalid(format!("amplitude bound must be at least 1, got {}", self.amplitude_bound));
        }
        if !(self.perturbation_bound > 0.0) {
            return invalid("perturbation bound must be positive");
        }
        if self.grid_size < 256 || !self.grid_size.is_power_of_two() {
            return invalid(format!("grid size must be a power of two ≥ 256, got {}", self.grid_size));
        }
        Ok(())
    }

    /// Detection threshold `1/(2L)`.
    pub fn threshold(&self) -> f64 {
        0.5 / self.amplitude_bound
    }

    fn grid(&self) -> Result<FourierGrid> {
        FourierGrid::new(self.grid_size, self.alias)
    }
}

/// Samples `y_m(k) = ⟨h, ψ_m(· - k)⟩` for `k = first, first + 1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlindSamples {
    pub first: i64,
    /// One sequence per sampler, all of the same length.
    pub values: Vec<Vector>,
}

impl BlindSamples {
    /// Sample `Σ_j c_j φ(· - p_j)` at shifts `range.0 ..= range.1`.
    pub fn synthesize(
        config: &BlindConfig,
        phi: &Kernel,
        positions: &[f64],
        amplitudes: &[f64],
        range: (i64, i64),
        rule: &QuadratureRule,
    ) -> Result<Self> {
        if positions.len() != amplitudes.len() {
            return invalid("positions and amplitudes differ in length");
        }
        if range.1 < range.0 {
            return invalid("empty sample range");
        }
        let h = |t: f64| positions.iter().zip(amplitudes).map(|(p, c)| c * phi.value(t - p)).sum::<f64>();
        let mut values = Vec::with_capacity(config.samplers.len());
        for psi in &config.samplers {
            let mut v = Vec::new();
            for k in range.0..=range.1 {
                v.push(inner_product(h, &[], &psi.shifted(k as f64)?, rule));
            }
            values.push(Vector::from_vec(v));
        }
        Ok(Self { first: range.0, values })
    }

    pub fn len(&self) -> usize {
        self.values.first().map_or(0, |v| v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last(&self) -> i64 {
        self.first + self.len() as i64 - 1
    }

    fn validate(&self, m: usize) -> Result<()> {
        if self.values.len() != m {
            return invalid(format!("{} sample sequences for {m} samplers", self.values.len()));
        }
        if self.values.iter().any(|v| v.len() != self.len()) {
            return invalid("sample sequences differ in length");
        }
        Ok(())
    }
}

/// Minimum over the grid of the second singular value of the `2 x M`
/// bracket matrix with rows `[φ̂', ψ̂_m]` and `[φ̂, ψ̂_m]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankCondition {
    pub min_sigma: f64,
    pub holds: bool,
}

struct Brackets {
    /// `[φ̂, ψ̂_m](ξ_j)` per sampler.
    plain: Vec<Vec<Complex64>>,
    /// `[φ̂', ψ̂_m](ξ_j)` per sampler.
    derivative: Vec<Vec<Complex64>>,
}

fn brackets(config: &BlindConfig, phi: &Kernel) -> Result<Brackets> {
    config.validate()?;
    let grid = config.grid()?;
    let phi_hat = grid.sample(phi);
    let dphi_hat = grid.differentiate(&phi_hat);
    let mut plain = Vec::new();
    let mut derivative = Vec::new();
    for psi in &config.samplers {
        let psi_hat = grid.sample(psi);
        plain.push(bracket_product(&grid, &phi_hat, &psi_hat));
        derivative.push(bracket_product(&grid, &dphi_hat, &psi_hat));
    }
    Ok(Brackets { plain, derivative })
}

pub fn check_rank_condition(config: &BlindConfig, phi: &Kernel) -> Result<RankCondition> {
    let b = brackets(config, phi)?;
    let mut min_sigma = f64::INFINITY;
    for j in 0..config.grid_size {
        let (mut aa, mut bb) = (0.0, 0.0);
        let mut ab = Complex64::new(0.0, 0.0);
        for m in 0..config.samplers.len() {
            let (a, p) = (b.derivative[m][j], b.plain[m][j]);
            aa += a.norm_sqr();
            bb += p.norm_sqr();
            ab += a * p.conj();
        }
        // Eigenvalues of the 2x2 Gram matrix; σ₂² = det / λ_max.
        let tr = aa + bb;
        let det = (aa * bb - ab.norm_sqr()).max(0.0);
        let lmax = 0.5 * (tr + ((aa - bb).powi(2) + 4.0 * ab.norm_sqr()).sqrt());
        let s2 = if lmax > 0.0 { (det / lmax).sqrt() } else { 0.0 };
        min_sigma = min_sigma.min(s2);
    }
    Ok(RankCondition { min_sigma, holds: min_sigma > 1e-8 })
}

/// Dual filters `r_m(k)`, `|k| ≤ radius`, with
/// `Σ_m Σ_k' r_m(k - k') ⟨φ(· - j), ψ_m(· - k')⟩ = δ_jk`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFilters {
    /// `taps[m][k + radius]`.
    pub taps: Vec<Vec<f64>>,
    pub radius: usize,
}

impl DualFilters {
    pub fn tap(&self, m: usize, k: i64) -> f64 {
        if k.unsigned_abs() as usize > self.radius {
            0.0
        } else {
            self.taps[m][(k + self.radius as i64) as usize]
        }
    }
}

const FILTER_FLOOR: f64 = 1e-10;

/// Filters by inverse DFT of their symbols, truncated where all taps fall
/// below `1e-10`. See [`FilterKind`] for the symbols.
pub fn dual_filters(config: &BlindConfig, phi: &Kernel) -> Result<DualFilters> {
    let b = brackets(config, phi)?;
    let n = config.grid_size;
    let m = config.samplers.len();
    let mut symbols = vec![vec![Complex64::new(0.0, 0.0); n]; m];
    for j in 0..n {
        // Symbol r̂_m = Σ_i w_i conj(B_im) with w G = e₁, G_ij = Σ_m conj(B_im) B_jm,
        // rows of B being [φ̂, ψ̂_m] and, when annihilating, [φ̂', ψ̂_m].
        match config.filters {
            FilterKind::Amplitude => {
                let r: f64 = b.plain.iter().map(|g| g[j].norm_sqr()).sum();
                if !(r > 0.0) {
                    return Err(Error::RankCondition { min_singular: 0.0 });
                }
                for (s, g) in symbols.iter_mut().zip(&b.plain) {
                    s[j] = g[j].conj() / r;
                }
            }
            FilterKind::ShiftAnnihilating => {
                let (mut g00, mut g11) = (0.0, 0.0);
                let mut g01 = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    let (p, d) = (b.plain[k][j], b.derivative[k][j]);
                    g00 += p.norm_sqr();
                    g11 += d.norm_sqr();
                    g01 += p.conj() * d;
                }
                let det = g00 * g11 - g01.norm_sqr();
                if !(det > 1e-14 * (g00 * g11).max(f64::MIN_POSITIVE)) {
                    return Err(Error::RankCondition { min_singular: det.max(0.0).sqrt() });
                }
                // First row of G⁻¹ for G = [[g00, g01], [conj(g01), g11]].
                let (w0, w1) = (Complex64::new(g11 / det, 0.0), -g01 / det);
                for (k, row) in symbols.iter_mut().enumerate() {
                    row[j] = w0 * b.plain[k][j].conj() + w1 * b.derivative[k][j].conj();
                }
            }
        }
    }
    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft_inverse(n);
    let mut full = Vec::with_capacity(config.samplers.len());
    for mut buf in symbols {
        ifft.process(&mut buf);
        // r(k) = (1/n) Σ_j R(ξ_j) e^{ikξ_j}, ξ_j = -π + 2πj/n.
        let taps: Vec<f64> = (0..n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * buf[k].re / n as f64
            })
            .collect();
        full.push(taps);
    }
    let at = |taps: &[f64], k: i64| taps[k.rem_euclid(n as i64) as usize];
    let mut radius = 0usize;
    for k in 1..(n / 2) as i64 {
        if full.iter().any(|t| at(t, k).abs() >= FILTER_FLOOR || at(t, -k).abs() >= FILTER_FLOOR) {
            radius = k as usize;
        }
    }
    let taps = full
        .iter()
        .map(|t| (-(radius as i64)..=radius as i64).map(|k| at(t, k)).collect())
        .collect();
    Ok(DualFilters { taps, radius })
}

/// Outcome of the filtering and thresholding stage.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseEstimate {
    /// Integer shifts `k` with `|c̃(k)| ≥ 1/(2L)`.
    pub support: Vec<i64>,
    /// `c̃` on the support.
    pub amplitudes: Vector,
    /// `c̃(k)` on every sampled shift.
    pub estimate: Vec<(i64, f64)>,
    /// Shifts whose `|c̃(k)|` lies within `1e-6` of the threshold.
    pub ambiguous: Vec<i64>,
}

impl CoarseEstimate {
    pub fn support_points(&self) -> Result<PointSet> {
        PointSet::new(self.support.iter().map(|&k| k as f64).collect())
    }
}

pub fn blind_coarse_estimate(config: &BlindConfig, phi: &Kernel, samples: &BlindSamples) -> Result<CoarseEstimate> {
    samples.validate(config.samplers.len())?;
    let rank = check_rank_condition(config, phi)?;
    if !rank.holds {
        return Err(Error::RankCondition { min_singular: rank.min_sigma });
    }
    let filters = dual_filters(config, phi)?;
    let threshold = config.threshold();
    let mut estimate = Vec::with_capacity(samples.len());
    let mut support = Vec::new();
    let mut amplitudes = Vec::new();
    let mut ambiguous = Vec::new();
    for k in samples.first..=samples.last() {
        let mut c = 0.0;
        for (m, y) in samples.values.iter().enumerate() {
            for (i, v) in y.iter().enumerate() {
                c += filters.tap(m, k - (samples.first + i as i64)) * v;
            }
        }
        estimate.push((k, c));
        if (c.abs() - threshold).abs() <= 1e-6 {
            ambiguous.push(k);
        }
        if c.abs() >= threshold {
            support.push(k);
            amplitudes.push(c);
        }
    }
    Ok(CoarseEstimate { support, amplitudes: Vector::from_vec(amplitudes), estimate, ambiguous })
}

/// Result of [`blind_recover`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlindRecovery {
    pub coarse: CoarseEstimate,
    /// `None` when the coarse support is empty.
    pub identification: Option<Identification>,
    pub positions: Vec<f64>,
    pub amplitudes: Vector,
}

/// Coarse estimate followed by identification with `F = identity`.
///
/// Fails if the identification diverges, does not converge, or returns shifts
/// beyond the declared perturbation bound.
pub fn blind_recover(
    config: &BlindConfig,
    phi: &Kernel,
    samples: &BlindSamples,
    rule: &QuadratureRule,
    opts: &SolverOptions,
) -> Result<BlindRecovery> {
    let coarse = blind_coarse_estimate(config, phi, samples)?;
    if coarse.support.is_empty() {
        return Ok(BlindRecovery { coarse, identification: None, positions: Vec::new(), amplitudes: Vector::zeros(0) });
    }
    let mut kernels = Vec::with_capacity(samples.len() * config.samplers.len());
    let mut y = Vec::with_capacity(kernels.capacity());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, k) in (samples.first..=samples.last()).enumerate() {
        for (m, psi) in config.samplers.iter().enumerate() {
            let s = psi.shifted(k as f64)?;
            let (a, b) = s.support();
            lo = lo.min(a);
            hi = hi.max(b);
            kernels.push(s);
            y.push(samples.values[m][i]);
        }
    }
    let base = FriSignal::new(phi.clone(), coarse.support_points()?, coarse.amplitudes.clone(), (lo, hi))?;
    let lin = linearize_kernels(&base, &kernels, CompandingFunction::Identity, rule)?;
    let delta0 = config.perturbation_bound * config.amplitude_bound;
    let ident = identify(&lin, &Vector::from_vec(y), 0.5, delta0, opts)?;
    if !ident.trace.converged {
        return Err(Error::Divergence {
            iteration: ident.trace.iterations,
            reason: "identification did not converge".into(),
            trace: Some(Box::new(ident.trace)),
        });
    }
    let shift = ident.sigma.amax();
    if shift > config.perturbation_bound + 1e-6 {
        return Err(Error::LocalityViolated(format!(
            "recovered shift {shift:.3e} exceeds the perturbation bound {:.3e}",
            config.perturbation_bound
        )));
    }
    let positions = ident.positions.clone();
    let amplitudes = ident.amplitudes.clone();
    Ok(BlindRecovery { coarse, identification: Some(ident), positions, amplitudes })
}
