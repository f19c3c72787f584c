//! Solvers for `f(x) = y` with `f` a localized, strictly monotone map.

mod bounds;
mod iterate;
mod map;
mod trace;

pub use bounds::{
    error_estimate, estimate_monotonicity, random_probes, van_cittert_rate_bound, ErrorBounds, MonotonicityReport,
};
pub use iterate::{hybrid_solve, hybrid_solve_by, quasi_newton, van_cittert, SolverOptions};
pub use map::{check_gradient, FnMap, GradientCheck, LinearMap, NonlinearMap};
pub use trace::SolverTrace;
