use std::sync::Arc;

use crate::algebra::LocalizedMatrix;
use crate::error::{invalid, Result};
use crate::{Matrix, Vector};

/// A differentiable map between sequence spaces indexed by positions.
pub trait NonlinearMap: Sync {
    /// Positions indexing the unknowns.
    fn domain(&self) -> &[f64];
    /// Positions indexing the outputs.
    fn range(&self) -> &[f64];
    fn evaluate(&self, x: &Vector) -> Vector;
    fn gradient(&self, x: &Vector) -> LocalizedMatrix;
}

/// The linear map `x ↦ A x`.
#[derive(Debug, Clone)]
pub struct LinearMap {
    a: LocalizedMatrix,
}

impl LinearMap {
    pub fn new(a: LocalizedMatrix) -> Self {
        Self { a }
    }

    pub fn matrix(&self) -> &LocalizedMatrix {
        &self.a
    }
}

impl NonlinearMap for LinearMap {
    fn domain(&self) -> &[f64] {
        self.a.cols()
    }

    fn range(&self) -> &[f64] {
        self.a.rows()
    }

    fn evaluate(&self, x: &Vector) -> Vector {
        self.a.apply(x)
    }

    fn gradient(&self, _x: &Vector) -> LocalizedMatrix {
        self.a.clone()
    }
}

type ValueFn = dyn Fn(&Vector) -> Vector + Send + Sync;
type GradFn = dyn Fn(&Vector) -> Matrix + Send + Sync;

/// A map given by closures for its value and Jacobian.
#[derive(Clone)]
pub struct FnMap {
    domain: Arc<[f64]>,
    range: Arc<[f64]>,
    value: Arc<ValueFn>,
    grad: Arc<GradFn>,
}

impl FnMap {
    /// Fails unless `f(0) = 0` and the shapes agree with the positions.
    pub fn new(
        domain: Vec<f64>,
        range: Vec<f64>,
        value: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
        grad: impl Fn(&Vector) -> Matrix + Send + Sync + 'static,
    ) -> Result<Self> {
        let zero = Vector::zeros(domain.len());
        let f0 = value(&zero);
        if f0.len() != range.len() {
            return invalid(format!("map returns {} values for {} range positions", f0.len(), range.len()));
        }
        if f0.amax() > 1e-12 {
            return invalid(format!("map must send 0 to 0, got max |f(0)| = {:.3e}", f0.amax()));
        }
        let g0 = grad(&zero);
        if g0.shape() != (range.len(), domain.len()) {
            return invalid("gradient shape does not match the positions");
        }
        Ok(Self { domain: domain.into(), range: range.into(), value: Arc::new(value), grad: Arc::new(grad) })
    }
}

impl std::fmt::Debug for FnMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnMap").field("dim_in", &self.domain.len()).field("dim_out", &self.range.len()).finish()
    }
}

impl NonlinearMap for FnMap {
    fn domain(&self) -> &[f64] {
        &self.domain
    }

    fn range(&self) -> &[f64] {
        &self.range
    }

    fn evaluate(&self, x: &Vector) -> Vector {
        (self.value)(x)
    }

    fn gradient(&self, x: &Vector) -> LocalizedMatrix {
        LocalizedMatrix::from_parts(self.range.clone(), self.domain.clone(), (self.grad)(x))
    }
}

/// Comparison of an analytic Jacobian with central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    /// `max |J - J_fd| / max(max |J|, tiny)`.
    pub relative_error: f64,
    pub step: f64,
}

/// Central finite differences of `f` at `x` with step `h` per coordinate.
pub fn check_gradient<F: NonlinearMap + ?Sized>(f: &F, x: &Vector, h: f64) -> GradientCheck {
    let g = f.gradient(x).into_entries();
    let mut fd = Matrix::zeros(g.nrows(), g.ncols());
    for j in 0..x.len() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        let col = (f.evaluate(&xp) - f.evaluate(&xm)) / (2.0 * h);
        fd.set_column(j, &col);
    }
    let scale = g.amax().max(f64::MIN_POSITIVE);
    GradientCheck { relative_error: (&g - &fd).amax() / scale, step: h }
}
