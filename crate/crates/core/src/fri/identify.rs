use std::ops::Range;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::signal::FriSignal;
use crate::algebra::{LocalizedMatrix, PNorm, PseudoInverse};
use crate::error::{invalid, Error, Result};
use crate::exec::{map_indices, Execution};
use crate::kernels::{CompandingFunction, GeneratorFamily, Kernel, QuadratureRule};
use crate::solver::{van_cittert, NonlinearMap, SolverOptions, SolverTrace};
use crate::{Matrix, Vector};

/// Quadrature tables for `⟨F(χ_W Σ a_j φ(· - p_j)), ψ_γ⟩` and its derivatives.
#[derive(Debug, Clone)]
struct Engine {
    impulse: Kernel,
    impulse_grad: Option<Kernel>,
    support: (f64, f64),
    nodes: Vec<f64>,
    /// `w_k ψ_γ(t_k)`, samplers by nodes.
    psi_weighted: Matrix,
    companding: CompandingFunction,
    exec: Execution,
}

impl Engine {
    fn new(
        impulse: &Kernel,
        samplers: &[Kernel],
        window: (f64, f64),
        companding: CompandingFunction,
        rule: &QuadratureRule,
        exec: Execution,
    ) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut breaks = vec![window.0, window.1];
        for s in samplers {
            let (a, b) = s.support();
            lo = lo.min(a);
            hi = hi.max(b);
            breaks.extend(s.breakpoints());
        }
        let grid = rule.grid(&breaks, lo.max(window.0), hi.min(window.1));
        let nodes = grid.nodes().to_vec();
        let rows = map_indices(exec, samplers.len(), |g| {
            let k = &samplers[g];
            grid.nodes().iter().zip(grid.weights()).map(|(&t, &w)| w * k.value(t)).collect::<Vec<f64>>()
        });
        let psi_weighted = Matrix::from_fn(samplers.len(), nodes.len(), |g, k| rows[g][k]);
        Self {
            impulse: impulse.clone(),
            impulse_grad: impulse.derivative(),
            support: impulse.support(),
            nodes,
            psi_weighted,
            companding,
            exec,
        }
    }

    /// Nodes inside the support of `φ(· - p)`.
    fn node_range(&self, p: f64) -> Range<usize> {
        let a = self.nodes.partition_point(|&t| t < p + self.support.0);
        let b = self.nodes.partition_point(|&t| t <= p + self.support.1);
        a..b
    }

    fn signal(&self, pos: &[f64], amp: &[f64]) -> Vector {
        let mut h = Vector::zeros(self.nodes.len());
        for (&p, &a) in pos.iter().zip(amp) {
            for k in self.node_range(p) {
                h[k] += a * self.impulse.value(self.nodes[k] - p);
            }
        }
        h
    }

    fn samples(&self, pos: &[f64], amp: &[f64]) -> Vector {
        let h = self.signal(pos, amp);
        &self.psi_weighted * h.map(|v| self.companding.value(v))
    }

    /// `[-a_j ⟨F'(h) φ'(· - p_j), ψ_γ⟩ | ⟨F'(h) φ(· - p_j), ψ_γ⟩]`.
    fn jacobian(&self, pos: &[f64], amp: &[f64]) -> Matrix {
        let h = self.signal(pos, amp);
        let d = h.map(|v| self.companding.derivative(v));
        let n = pos.len();
        let cols = map_indices(self.exec, 2 * n, |col| {
            let j = col % n;
            let p = pos[j];
            let range = self.node_range(p);
            let v = Vector::from_iterator(
                range.len(),
                range.clone().map(|k| {
                    let t = self.nodes[k] - p;
                    if col < n {
                        let g = match &self.impulse_grad {
                            Some(g) => g.value(t),
                            None => self.impulse.gradient(t),
                        };
                        -amp[j] * d[k] * g
                    } else {
                        d[k] * self.impulse.value(t)
                    }
                }),
            );
            self.psi_weighted.columns(range.start, range.len()) * v
        });
        Matrix::from_columns(&cols)
    }
}

/// The linearized sampling matrix at an approximate parameterization.
#[derive(Debug, Clone)]
pub struct Linearization {
    base: FriSignal,
    engine: Engine,
    s: LocalizedMatrix,
    a_bound: f64,
    b_bound: f64,
    pinv: std::result::Result<PseudoInverse, Error>,
    base_samples: Vector,
}

/// Linearize at `signal_base` with samplers taken from a generator family.
pub fn linearize(
    signal_base: &FriSignal,
    sampler: &GeneratorFamily,
    companding: CompandingFunction,
    rule: &QuadratureRule,
) -> Result<Linearization> {
    linearize_kernels(signal_base, sampler.kernels(), companding, rule)
}

/// Linearize with an arbitrary list of samplers; rows are placed at the
/// sampler centres, which may repeat.
pub fn linearize_kernels(
    signal_base: &FriSignal,
    samplers: &[Kernel],
    companding: CompandingFunction,
    rule: &QuadratureRule,
) -> Result<Linearization> {
    if samplers.is_empty() {
        return invalid("no samplers");
    }
    let engine = Engine::new(signal_base.impulse(), samplers, signal_base.window(), companding, rule, Execution::default());
    let pos = signal_base.positions().as_slice();
    let amp = signal_base.amplitudes().as_slice();
    let s_m = engine.jacobian(pos, amp);
    let sv = s_m.clone().singular_values();
    let (a_bound, b_bound) = if sv.is_empty() { (0.0, 0.0) } else { (sv.min(), sv.max()) };
    let pinv = PseudoInverse::new(&s_m);
    let rows: Arc<[f64]> = samplers.iter().map(|k| k.center()).collect::<Vec<_>>().into();
    let cols: Arc<[f64]> = signal_base.positions().stacked(2).into();
    let base_samples = engine.samples(pos, amp);
    Ok(Linearization {
        base: signal_base.clone(),
        engine,
        s: LocalizedMatrix::from_parts(rows, cols, s_m),
        a_bound,
        b_bound,
        pinv,
        base_samples,
    })
}

impl Linearization {
    /// `S`, samplers by `(shift block, amplitude block)`.
    pub fn matrix(&self) -> &LocalizedMatrix {
        &self.s
    }

    /// Smallest singular value of `S`.
    pub fn a_bound(&self) -> f64 {
        self.a_bound
    }

    /// Largest singular value of `S`.
    pub fn b_bound(&self) -> f64 {
        self.b_bound
    }

    pub fn base(&self) -> &FriSignal {
        &self.base
    }

    /// `⟨F(h₀), Ψ⟩`.
    pub fn base_samples(&self) -> &Vector {
        &self.base_samples
    }

    pub fn pseudo_inverse(&self) -> Result<&PseudoInverse> {
        self.pinv.as_ref().map_err(Clone::clone)
    }

    /// `⟨F(h), Ψ⟩` for `h` with the given positions and amplitudes.
    pub fn samples(&self, positions: &[f64], amplitudes: &[f64]) -> Result<Vector> {
        if positions.len() != amplitudes.len() {
            return invalid("positions and amplitudes differ in length");
        }
        Ok(self.engine.samples(positions, amplitudes))
    }

    /// `A(σ, c)`: the linearization at perturbed positions and amplitudes.
    pub fn perturbed_matrix(&self, sigma: &Vector, c: &Vector) -> Matrix {
        let (pos, amp) = self.perturbed(sigma, c);
        self.engine.jacobian(&pos, &amp)
    }

    /// Positions `λ + σ(λ)` and amplitudes `c₀ + c`.
    pub fn perturbed(&self, sigma: &Vector, c: &Vector) -> (Vec<f64>, Vec<f64>) {
        let pos = self.base.positions().iter().zip(sigma.iter()).map(|(l, s)| l + s).collect();
        let amp = self.base.amplitudes().iter().zip(c.iter()).map(|(a, d)| a + d).collect();
        (pos, amp)
    }

    /// `(σ, c)` halves of a stacked parameter vector.
    pub fn split(&self, u: &Vector) -> (Vector, Vector) {
        let n = self.base.len();
        (u.rows(0, n).into_owned(), u.rows(n, n).into_owned())
    }
}

/// `(σ, c) ↦ (SᵀS)⁻¹Sᵀ ⟨F(h_{σ,c}) - F(h₀), Ψ⟩`.
#[derive(Debug, Clone, Copy)]
pub struct IdentificationMap<'a> {
    lin: &'a Linearization,
    pinv: &'a PseudoInverse,
}

pub fn identification_map(lin: &Linearization) -> Result<IdentificationMap<'_>> {
    Ok(IdentificationMap { lin, pinv: lin.pseudo_inverse()? })
}

impl NonlinearMap for IdentificationMap<'_> {
    fn domain(&self) -> &[f64] {
        self.lin.s.cols()
    }

    fn range(&self) -> &[f64] {
        self.lin.s.cols()
    }

    fn evaluate(&self, u: &Vector) -> Vector {
        let (sigma, c) = self.lin.split(u);
        let (pos, amp) = self.lin.perturbed(&sigma, &c);
        self.pinv.apply(&(self.lin.engine.samples(&pos, &amp) - &self.lin.base_samples))
    }

    fn gradient(&self, u: &Vector) -> LocalizedMatrix {
        let (sigma, c) = self.lin.split(u);
        let g = self.pinv.matrix() * self.lin.perturbed_matrix(&sigma, &c);
        let p: Arc<[f64]> = self.lin.s.cols().into();
        LocalizedMatrix::from_parts(p.clone(), p, g)
    }
}

/// Result of [`identify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Identification {
    /// Position corrections `σ`.
    pub sigma: Vector,
    /// Amplitude corrections `c`.
    pub c: Vector,
    /// `λ + σ(λ)`.
    pub positions: Vec<f64>,
    /// `c₀ + c`.
    pub amplitudes: Vector,
    pub trace: SolverTrace,
}

/// Van-Cittert identification `u ← u - α(f(u) - z₀)` from `u = 0`, with
/// `z₀ = (SᵀS)⁻¹Sᵀ(y - ⟨F(h₀), Ψ⟩)`. Iterates leaving the ball of radius
/// `10 δ₀` abort with a divergence error.
pub fn identify(
    lin: &Linearization,
    y: &Vector,
    alpha: f64,
    delta0: f64,
    opts: &SolverOptions,
) -> Result<Identification> {
    if y.len() != lin.base_samples.len() {
        return invalid(format!("{} samples for {} samplers", y.len(), lin.base_samples.len()));
    }
    if !(delta0 > 0.0) {
        return invalid("locality radius must be positive");
    }
    let map = identification_map(lin)?;
    let z0 = map.pinv.apply(&(y - &lin.base_samples));
    let mut opts = opts.clone();
    opts.divergence_radius = Some(10.0 * delta0);
    let mut trace = van_cittert(&map, &z0, &Vector::zeros(2 * lin.base.len()), alpha, &opts)?;
    if z0.amax() > delta0 {
        trace.warnings.push(format!("first-order correction {:.3e} exceeds locality radius {delta0:.3e}", z0.amax()));
    }
    let (sigma, c) = lin.split(&trace.x);
    let (positions, amplitudes) = lin.perturbed(&sigma, &c);
    Ok(Identification { sigma, c, positions, amplitudes: Vector::from_vec(amplitudes), trace })
}

/// Empirical locality radius of an identification map.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityCalibration {
    /// Largest tested radius `r` with `max ‖∇f(u) - I‖_{B(ℓ^∞)} ≤ 1/3` over
    /// the sampled `‖u‖_∞ = r`; zero when no radius qualifies.
    pub delta0: f64,
    /// `(r, max deviation)` per tested radius.
    pub deviations: Vec<(f64, f64)>,
    /// Least-squares slope of deviation against radius through the origin.
    pub slope: f64,
}

/// Sample `trials` perturbations per radius and measure `‖∇f(u) - I‖_{B(ℓ^∞)}`.
pub fn calibrate_locality(lin: &Linearization, radii: &[f64], trials: usize, seed: u64) -> Result<LocalityCalibration> {
    let map = identification_map(lin)?;
    let n = 2 * lin.base.len();
    let id = Matrix::identity(n, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deviations = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut worst = 0.0f64;
        for _ in 0..trials.max(1) {
            let mut u = Vector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
            let m = u.amax();
            if m > 0.0 {
                u *= r / m;
            }
            let g = map.gradient(&u).into_entries();
            worst = worst.max(crate::algebra::operator_norm(&(g - &id), PNorm::LInf));
        }
        deviations.push((r, worst));
    }
    let mut sorted = deviations.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let delta0 = sorted.iter().take_while(|(_, d)| *d <= 1.0 / 3.0).map(|(r, _)| *r).fold(0.0, f64::max);
    let (num, den) = deviations.iter().fold((0.0, 0.0), |(a, b), (r, d)| (a + r * d, b + r * r));
    Ok(LocalityCalibration { delta0, deviations, slope: if den > 0.0 { num / den } else { 0.0 } })
}

