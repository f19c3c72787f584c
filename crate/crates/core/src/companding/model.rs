use nalgebra::{Cholesky, Dyn, SymmetricEigen};

use crate::algebra::LocalizedMatrix;
use crate::error::{invalid, Error, Result};
use crate::exec::{map_indices, Execution};
use crate::kernels::{intercorrelation_with, CompandingFunction, GeneratorFamily, QuadratureGrid, QuadratureRule};
use crate::solver::NonlinearMap;
use crate::{Matrix, Vector};

/// Which left inverse turns samples back into coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preconditioner {
    /// `R = A_ΦΦ (A_ΦΨ A_ΨΨ⁻¹ A_ΨΦ)⁻¹ A_ΦΨ A_ΨΨ⁻¹`, with `R A_ΨΦ = A_ΦΦ`.
    #[default]
    Reconstruction,
    /// `R̃ = (A_ΦΨ A_ΨΨ⁻¹ A_ΨΦ)⁻¹ A_ΦΨ A_ΨΨ⁻¹`, with `R̃ A_ΨΦ = I`.
    Normalized,
}

/// Gap between the generating space `V(Φ)` and the sampling space `V(Ψ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    /// `sup_{f ∈ V(Φ), ‖f‖ = 1} ‖f - P_{V(Ψ)} f‖`.
    pub delta: f64,
    /// Smallest generalized eigenvalue of `(A_ΦΨ A_ΨΨ⁻¹ A_ΨΦ, A_ΦΦ)`.
    pub mu_min: f64,
}

/// Everything needed to evaluate `c ↦ ⟨F(cᵀΦ), Ψ⟩` and its gradient.
#[derive(Debug, Clone)]
pub struct SamplingModel {
    generators: GeneratorFamily,
    samplers: GeneratorFamily,
    companding: CompandingFunction,
    rule: QuadratureRule,
    grid: QuadratureGrid,
    /// `φ_λ(t_k)`, nodes by generators.
    phi_table: Matrix,
    /// `w_k ψ_γ(t_k)`, samplers by nodes.
    psi_weighted: Matrix,
    a_pp: LocalizedMatrix,
    a_ss: LocalizedMatrix,
    a_sp: LocalizedMatrix,
    r: LocalizedMatrix,
    r_tilde: LocalizedMatrix,
    gap: GapReport,
}

fn table(grid: &QuadratureGrid, family: &GeneratorFamily, exec: Execution) -> Matrix {
    let cols = map_indices(exec, family.len(), |j| {
        let k = &family.kernels()[j];
        grid.nodes().iter().map(|&t| k.value(t)).collect::<Vec<f64>>()
    });
    Matrix::from_fn(grid.len(), family.len(), |i, j| cols[j][i])
}

fn cholesky(m: &Matrix, what: &str) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m.clone()).ok_or_else(|| Error::InvalidInput(format!("{what} is not positive definite")))
}

impl SamplingModel {
    pub fn new(
        generators: GeneratorFamily,
        samplers: GeneratorFamily,
        companding: CompandingFunction,
        rule: QuadratureRule,
    ) -> Result<Self> {
        Self::with_execution(generators, samplers, companding, rule, Execution::default())
    }

    pub fn with_execution(
        generators: GeneratorFamily,
        samplers: GeneratorFamily,
        companding: CompandingFunction,
        rule: QuadratureRule,
        exec: Execution,
    ) -> Result<Self> {
        if generators.is_empty() || samplers.len() < generators.len() {
            return invalid(format!("{} samplers cannot determine {} coefficients", samplers.len(), generators.len()));
        }
        let (ga, gb) = generators.hull();
        let (sa, sb) = samplers.hull();
        let mut breaks = generators.breakpoints();
        breaks.extend(samplers.breakpoints());
        let grid = rule.grid(&breaks, ga.min(sa), gb.max(sb));
        let phi_table = table(&grid, &generators, exec);
        let psi_table = table(&grid, &samplers, exec);
        let mut psi_weighted = psi_table.transpose();
        for (k, w) in grid.weights().iter().enumerate() {
            psi_weighted.column_mut(k).scale_mut(*w);
        }

        let a_pp = intercorrelation_with(&generators, &generators, &rule, exec);
        let a_ss = intercorrelation_with(&samplers, &samplers, &rule, exec);
        let a_sp = intercorrelation_with(&samplers, &generators, &rule, exec);
        let a_ps = a_sp.transpose();

        let ss = cholesky(a_ss.entries(), "sampler Gram matrix")?;
        // M = A_ΦΨ A_ΨΨ⁻¹ A_ΨΦ
        let ss_inv_sp = ss.solve(a_sp.entries());
        let normal = a_ps.entries() * &ss_inv_sp;
        let normal = (&normal + normal.transpose()) * 0.5;

        let gap = gap_report(&grid, &phi_table, &psi_table, a_pp.entries(), &normal)?;
        if !(gap.mu_min > 1e-12) {
            return Err(Error::SamplingNotStabilizable { mu_min: gap.mu_min });
        }

        let nc = cholesky(&normal, "normal matrix")?;
        // R̃ = M⁻¹ A_ΦΨ A_ΨΨ⁻¹ = M⁻¹ (A_ΨΨ⁻¹ A_ΨΦ)ᵀ
        let r_tilde_m = nc.solve(&ss_inv_sp.transpose());
        let r_m = a_pp.entries() * &r_tilde_m;
        let lam = generators.centers().as_slice();
        let gam = samplers.centers().as_slice();
        let r = LocalizedMatrix::with_positions(lam.to_vec(), gam.to_vec(), r_m)?;
        let r_tilde = LocalizedMatrix::with_positions(lam.to_vec(), gam.to_vec(), r_tilde_m)?;

        Ok(Self {
            generators,
            samplers,
            companding,
            rule,
            grid,
            phi_table,
            psi_weighted,
            a_pp,
            a_ss,
            a_sp,
            r,
            r_tilde,
            gap,
        })
    }

    pub fn generators(&self) -> &GeneratorFamily {
        &self.generators
    }

    pub fn samplers(&self) -> &GeneratorFamily {
        &self.samplers
    }

    pub fn companding(&self) -> CompandingFunction {
        self.companding
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    /// `A_ΦΦ`.
    pub fn gram(&self) -> &LocalizedMatrix {
        &self.a_pp
    }

    /// `A_ΨΨ`.
    pub fn sampler_gram(&self) -> &LocalizedMatrix {
        &self.a_ss
    }

    /// `A_ΨΦ`, samplers by generators.
    pub fn cross_gram(&self) -> &LocalizedMatrix {
        &self.a_sp
    }

    pub fn gap(&self) -> GapReport {
        self.gap
    }

    /// `R` or `R̃`.
    pub fn preconditioner(&self, p: Preconditioner) -> &LocalizedMatrix {
        match p {
            Preconditioner::Reconstruction => &self.r,
            Preconditioner::Normalized => &self.r_tilde,
        }
    }

    /// `h = cᵀΦ` at the quadrature nodes.
    pub fn signal_at_nodes(&self, c: &Vector) -> Vector {
        &self.phi_table * c
    }

    /// `h = cᵀΦ` at arbitrary points.
    pub fn signal(&self, c: &Vector, t: f64) -> f64 {
        self.generators.kernels().iter().zip(c.iter()).map(|(k, ci)| ci * k.value(t)).sum()
    }

    /// Samples `y = ⟨F(cᵀΦ), ψ_γ⟩`.
    pub fn forward_sample(&self, c: &Vector) -> Result<Vector> {
        if c.len() != self.generators.len() {
            return invalid(format!("{} coefficients for {} generators", c.len(), self.generators.len()));
        }
        Ok(self.sample_unchecked(c))
    }

    fn sample_unchecked(&self, c: &Vector) -> Vector {
        let h = self.signal_at_nodes(c);
        let fh = h.map(|v| self.companding.value(v));
        &self.psi_weighted * fh
    }

    /// `⟨F'(cᵀΦ) φ_λ, ψ_γ⟩`, samplers by generators.
    pub fn sample_gradient(&self, c: &Vector) -> Matrix {
        let h = self.signal_at_nodes(c);
        let mut scaled = self.phi_table.clone();
        for (k, hv) in h.iter().enumerate() {
            let d = self.companding.derivative(*hv);
            scaled.row_mut(k).scale_mut(d);
        }
        &self.psi_weighted * scaled
    }

    /// The square map `c ↦ P ⟨F(cᵀΦ), Ψ⟩`.
    pub fn companding_map(&self, p: Preconditioner) -> CompandingMap<'_> {
        CompandingMap { model: self, precond: p }
    }

    /// `P y`.
    pub fn precondition(&self, y: &Vector, p: Preconditioner) -> Result<Vector> {
        if y.len() != self.samplers.len() {
            return invalid("sample vector has the wrong length");
        }
        Ok(self.preconditioner(p).apply(y))
    }
}

/// Gap from principal angles between `V(Φ)` and `V(Ψ)` in the quadrature
/// discretization of `L²`, which keeps full relative accuracy for small gaps.
fn gap_report(
    grid: &QuadratureGrid,
    phi: &Matrix,
    psi: &Matrix,
    a_pp: &Matrix,
    normal: &Matrix,
) -> Result<GapReport> {
    let sw = Vector::from_iterator(grid.len(), grid.weights().iter().map(|w| w.sqrt()));
    let scale = |m: &Matrix| {
        let mut m = m.clone();
        for (k, s) in sw.iter().enumerate() {
            m.row_mut(k).scale_mut(*s);
        }
        m
    };
    let q1 = scale(phi).qr().q();
    let q2 = scale(psi).qr().q();
    let proj = &q2 * (q2.transpose() * &q1);
    let delta = (&q1 - proj).singular_values().max().min(1.0);

    let c = cholesky(a_pp, "generator Gram matrix")?;
    let l_inv = c.l().try_inverse().ok_or_else(|| Error::InvalidInput("singular Gram factor".into()))?;
    let sym = &l_inv * normal * l_inv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let mu_min = SymmetricEigen::new(sym).eigenvalues.min();
    Ok(GapReport { delta, mu_min })
}

/// `c ↦ P ⟨F(cᵀΦ), Ψ⟩` for a fixed preconditioner `P`.
#[derive(Debug, Clone, Copy)]
pub struct CompandingMap<'a> {
    model: &'a SamplingModel,
    precond: Preconditioner,
}

impl CompandingMap<'_> {
    pub fn preconditioner(&self) -> Preconditioner {
        self.precond
    }
}

impl NonlinearMap for CompandingMap<'_> {
    fn domain(&self) -> &[f64] {
        self.model.generators.centers().as_slice()
    }

    fn range(&self) -> &[f64] {
        self.model.generators.centers().as_slice()
    }

    fn evaluate(&self, x: &Vector) -> Vector {
        self.model.preconditioner(self.precond).apply(&self.model.sample_unchecked(x))
    }

    fn gradient(&self, x: &Vector) -> LocalizedMatrix {
        let g = self.model.preconditioner(self.precond).entries() * self.model.sample_gradient(x);
        let p: std::sync::Arc<[f64]> = self.model.generators.centers().as_slice().into();
        LocalizedMatrix::from_parts(p.clone(), p, g)
    }
}
