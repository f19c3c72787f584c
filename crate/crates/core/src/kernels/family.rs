use std::sync::Arc;

use super::{Kernel, QuadratureRule};
use crate::algebra::{LocalizedMatrix, PointSet};
use crate::error::{invalid, Result};
use crate::exec::{map_indices, Execution};
use crate::Matrix;

/// A family of kernels `{k_λ}` indexed by a point set, with declared decay
/// order `β` of the associated Gram matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorFamily {
    kernels: Arc<[Kernel]>,
    centers: PointSet,
    beta: f64,
}

impl GeneratorFamily {
    pub fn new(kernels: Vec<Kernel>, centers: PointSet, beta: f64) -> Result<Self> {
        if kernels.len() != centers.len() {
            return invalid(format!("{} kernels for {} centres", kernels.len(), centers.len()));
        }
        if !(beta > 1.0) {
            return invalid(format!("decay order must exceed 1, got {beta}"));
        }
        Ok(Self { kernels: kernels.into(), centers, beta })
    }

    /// Cardinal cubic splines on `knots`, indexed by the knots.
    pub fn cardinal_splines(knots: &PointSet, beta: f64) -> Result<Self> {
        Self::new(Kernel::cardinal_splines(knots)?, knots.clone(), beta)
    }

    /// Translates `{k(· - λ)}` of one kernel.
    pub fn translates(kernel: &Kernel, centers: &PointSet, beta: f64) -> Result<Self> {
        let kernels = centers.iter().map(|c| kernel.shifted(c)).collect::<Result<Vec<_>>>()?;
        Self::new(kernels, centers.clone(), beta)
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    /// Union of all kernel breakpoints, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.kernels.iter().flat_map(|k| k.breakpoints()).collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// Smallest interval containing every support.
    pub fn hull(&self) -> (f64, f64) {
        self.kernels.iter().map(|k| k.support()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (lo, hi)| {
            (a.min(lo), b.max(hi))
        })
    }
}

/// `⟨f, g⟩ = ∫ f g` over the support of `g`, panels aligned to the
/// breakpoints of `g` and the extra breakpoints `f_breaks` of `f`.
pub fn inner_product(f: impl Fn(f64) -> f64, f_breaks: &[f64], g: &Kernel, rule: &QuadratureRule) -> f64 {
    let (lo, hi) = g.support();
    let mut breaks = g.breakpoints();
    breaks.extend_from_slice(f_breaks);
    rule.integrate(|t| f(t) * g.value(t), &breaks, lo, hi)
}

fn kernel_pair(p: &Kernel, q: &Kernel, rule: &QuadratureRule) -> f64 {
    let (pa, pb) = p.support();
    let (qa, qb) = q.support();
    let (lo, hi) = (pa.max(qa), pb.min(qb));
    if !(hi > lo) {
        return 0.0;
    }
    let mut breaks = p.breakpoints();
    breaks.extend(q.breakpoints());
    rule.integrate(|t| p.value(t) * q.value(t), &breaks, lo, hi)
}

/// `A_{P,Q} = (⟨p_λ, q_γ⟩)_{λ, γ}`, rows indexed by `P`, columns by `Q`.
pub fn intercorrelation(p: &GeneratorFamily, q: &GeneratorFamily, rule: &QuadratureRule) -> LocalizedMatrix {
    intercorrelation_with(p, q, rule, Execution::default())
}

/// [`intercorrelation`] with an explicit execution mode.
pub fn intercorrelation_with(
    p: &GeneratorFamily,
    q: &GeneratorFamily,
    rule: &QuadratureRule,
    exec: Execution,
) -> LocalizedMatrix {
    let (m, n) = (p.len(), q.len());
    let cols = map_indices(exec, n, |j| {
        let qk = &q.kernels()[j];
        p.kernels().iter().map(|pk| kernel_pair(pk, qk, rule)).collect::<Vec<f64>>()
    });
    let entries = Matrix::from_fn(m, n, |i, j| cols[j][i]);
    LocalizedMatrix::from_parts(p.centers().as_slice().into(), q.centers().as_slice().into(), entries)
}
