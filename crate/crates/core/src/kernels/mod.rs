//! Kernels, generator families, Gauss-Legendre quadrature and companding functions.

mod companding;
mod family;
mod kernel;
mod quadrature;
mod spline;

pub use companding::{mu_of_companding, CompandingFunction};
pub use family::{inner_product, intercorrelation, intercorrelation_with, GeneratorFamily};
pub use kernel::{Kernel, KernelFamily, GAUSSIAN_RATE};
pub use quadrature::{QuadratureGrid, QuadratureRule};
pub use spline::CardinalSplineBasis;
