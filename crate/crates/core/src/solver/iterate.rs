use super::map::NonlinearMap;
use super::trace::SolverTrace;
use crate::algebra::PseudoInverse;
use crate::error::{invalid, Error, Result};
use crate::Vector;

/// Stopping rule and bookkeeping shared by all solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Stop once `‖f(xₙ) - y‖_∞ ≤ tol · max(1, ‖y‖_∞)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Exact solution, if known; errors against it are recorded.
    pub reference: Option<Vector>,
    /// Keep every iterate in the trace.
    pub retain_iterates: bool,
    /// Monotonicity bounds `(m₀, L)` used to check the step size.
    pub bounds: Option<(f64, f64)>,
    /// Abort with a divergence error once `‖xₙ‖_∞` exceeds this radius.
    pub divergence_radius: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 500, reference: None, retain_iterates: false, bounds: None, divergence_radius: None }
    }
}

struct Recorder<'a> {
    opts: &'a SolverOptions,
    trace: SolverTrace,
    threshold: f64,
}

impl<'a> Recorder<'a> {
    fn new(opts: &'a SolverOptions, y: &Vector, x0: &Vector) -> Result<Self> {
        if let Some(r) = &opts.reference {
            if r.len() != x0.len() {
                return invalid("reference solution has the wrong length");
            }
        }
        let trace = SolverTrace {
            x: x0.clone(),
            iterations: 0,
            residuals: Vec::new(),
            errors: opts.reference.as_ref().map(|_| Vec::new()),
            iterates: Vec::new(),
            converged: false,
            switch_iteration: None,
            warnings: Vec::new(),
        };
        Ok(Self { opts, trace, threshold: opts.tol * y.amax().max(1.0) })
    }

    /// Record `x` with residual vector `r`; returns true when converged.
    fn record(&mut self, x: &Vector, r: &Vector) -> Result<bool> {
        let n = self.trace.residuals.len();
        if x.iter().chain(r.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                iteration: n,
                reason: "non-finite iterate".into(),
                trace: Some(Box::new(self.trace.clone())),
            });
        }
        if let Some(radius) = self.opts.divergence_radius {
            if x.amax() > radius {
                return Err(Error::Divergence {
                    iteration: n,
                    reason: format!("iterate norm {:.3e} exceeds {radius:.3e}", x.amax()),
                    trace: Some(Box::new(self.trace.clone())),
                });
            }
        }
        let res = r.amax();
        self.trace.residuals.push(res);
        if let (Some(errs), Some(xr)) = (self.trace.errors.as_mut(), self.opts.reference.as_ref()) {
            errs.push((x - xr).amax());
        }
        if self.opts.retain_iterates {
            self.trace.iterates.push(x.clone());
        }
        self.trace.x = x.clone();
        self.trace.iterations = n;
        Ok(res <= self.threshold)
    }

    fn finish(mut self, converged: bool) -> SolverTrace {
        self.trace.converged = converged;
        self.trace
    }
}

fn check_shapes<F: NonlinearMap + ?Sized>(f: &F, y: &Vector, x0: &Vector) -> Result<()> {
    if x0.len() != f.domain().len() || y.len() != f.range().len() {
        return invalid(format!(
            "shapes: x0 {} / domain {}, y {} / range {}",
            x0.len(),
            f.domain().len(),
            y.len(),
            f.range().len()
        ));
    }
    Ok(())
}

/// `x ← x - α (f(x) - y)`.
pub fn van_cittert<F: NonlinearMap + ?Sized>(
    f: &F,
    y: &Vector,
    x0: &Vector,
    alpha: f64,
    opts: &SolverOptions,
) -> Result<SolverTrace> {
    check_shapes(f, y, x0)?;
    if f.domain().len() != f.range().len() {
        return invalid("Van-Cittert iteration needs a square map");
    }
    if !(alpha > 0.0) {
        return invalid("step size must be positive");
    }
    let mut rec = Recorder::new(opts, y, x0)?;
    if let Some((m0, l)) = opts.bounds {
        let limit = m0 / (l + l * l);
        if alpha > limit {
            rec.trace.warnings.push(format!("step size {alpha} exceeds m0/(L+L^2) = {limit:.4e}"));
        }
    }
    let mut x = x0.clone();
    let mut r = f.evaluate(&x) - y;
    if rec.record(&x, &r)? {
        return Ok(rec.finish(true));
    }
    for _ in 0..opts.max_iter {
        x -= &r * alpha;
        r = f.evaluate(&x) - y;
        if rec.record(&x, &r)? {
            return Ok(rec.finish(true));
        }
    }
    Ok(rec.finish(false))
}

/// One Newton correction `∇f(x)⁻¹ r` (least squares for tall gradients).
fn newton_step<F: NonlinearMap + ?Sized>(f: &F, x: &Vector, r: &Vector, iteration: usize) -> Result<Vector> {
    let g = f.gradient(x).into_entries();
    let d = if g.is_square() {
        g.lu().solve(r)
    } else {
        PseudoInverse::new(&g).ok().map(|p| p.apply(r))
    };
    match d {
        Some(d) if d.iter().all(|v| v.is_finite()) => Ok(d),
        _ => Err(Error::SingularGradient { iteration }),
    }
}

/// `x ← x - ∇f(x)⁻¹ (f(x) - y)`.
pub fn quasi_newton<F: NonlinearMap + ?Sized>(
    f: &F,
    y: &Vector,
    x0: &Vector,
    opts: &SolverOptions,
) -> Result<SolverTrace> {
    check_shapes(f, y, x0)?;
    let mut rec = Recorder::new(opts, y, x0)?;
    let mut x = x0.clone();
    let mut r = f.evaluate(&x) - y;
    if rec.record(&x, &r)? {
        return Ok(rec.finish(true));
    }
    for n in 0..opts.max_iter {
        x -= newton_step(f, &x, &r, n)?;
        r = f.evaluate(&x) - y;
        if rec.record(&x, &r)? {
            return Ok(rec.finish(true));
        }
    }
    Ok(rec.finish(false))
}

/// Van-Cittert steps until `‖f(x) - y‖_∞ / ‖y‖_∞ < switch_ratio`, then
/// quasi-Newton steps.
pub fn hybrid_solve<F: NonlinearMap + ?Sized>(
    f: &F,
    y: &Vector,
    x0: &Vector,
    alpha: f64,
    switch_ratio: f64,
    opts: &SolverOptions,
) -> Result<SolverTrace> {
    let scale = y.amax();
    hybrid_solve_by(f, y, x0, alpha, opts, |_, r| r.amax() < switch_ratio * scale)
}

/// Hybrid solve with a caller-supplied switch rule, called with the current
/// iterate and residual `f(x) - y`.
pub fn hybrid_solve_by<F: NonlinearMap + ?Sized>(
    f: &F,
    y: &Vector,
    x0: &Vector,
    alpha: f64,
    opts: &SolverOptions,
    switch: impl Fn(&Vector, &Vector) -> bool,
) -> Result<SolverTrace> {
    check_shapes(f, y, x0)?;
    if !(alpha > 0.0) {
        return invalid("step size must be positive");
    }
    let mut rec = Recorder::new(opts, y, x0)?;
    let mut x = x0.clone();
    let mut r = f.evaluate(&x) - y;
    if rec.record(&x, &r)? {
        return Ok(rec.finish(true));
    }
    let mut newton = false;
    for n in 0..opts.max_iter {
        if !newton && switch(&x, &r) {
            newton = true;
            rec.trace.switch_iteration = Some(n);
        }
        if newton {
            x -= newton_step(f, &x, &r, n)?;
        } else {
            x -= &r * alpha;
        }
        r = f.evaluate(&x) - y;
        if rec.record(&x, &r)? {
            return Ok(rec.finish(true));
        }
    }
    Ok(rec.finish(false))
}
