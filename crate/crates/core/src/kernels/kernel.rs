use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::spline::CardinalSplineBasis;
use super::QuadratureRule;
use crate::algebra::PointSet;
use crate::error::{invalid, Result};

/// Exponent `k₀ = 4 (π/2)^{2/3}` of the Gaussian `exp(-k₀ t²)`.
pub const GAUSSIAN_RATE: f64 = 5.405_135_380_126_98;

/// Gaussians are truncated where they drop below this value.
const GAUSSIAN_FLOOR: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    Gaussian,
    GaussianDerivative,
    CardinalCubicSpline,
    BoxAverage,
    SquareRoot,
    BSpline3,
}

/// A real-valued kernel on the line.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// `exp(-rate (t - center)²)`.
    Gaussian { center: f64, rate: f64 },
    /// Derivative of the Gaussian above.
    GaussianDerivative { center: f64, rate: f64 },
    /// Basis function `index` of a natural cubic cardinal spline basis.
    CardinalSpline { basis: Arc<CardinalSplineBasis>, index: usize },
    /// `height · χ_[left, right)`.
    Box { left: f64, right: f64, height: f64 },
    /// The square-root sampler shifted by `shift`:
    /// `max(1/4 - |2t - 1/4|, 0)` on `[0, 1/4)`, `4t - 1` on `[1/4, 1/2)`,
    /// `1` on `[1/2, 1)`, zero elsewhere.
    SquareRoot { shift: f64 },
    /// Centred cubic B-spline with knot spacing `width`.
    BSpline3 { center: f64, width: f64 },
}

impl Kernel {
    pub fn gaussian(center: f64) -> Self {
        Kernel::Gaussian { center, rate: GAUSSIAN_RATE }
    }

    pub fn box_average(left: f64, right: f64, height: f64) -> Result<Self> {
        if !(right > left) {
            return invalid("box needs left < right");
        }
        Ok(Kernel::Box { left, right, height })
    }

    pub fn square_root(shift: f64) -> Self {
        Kernel::SquareRoot { shift }
    }

    pub fn bspline3(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return invalid("B-spline width must be positive");
        }
        Ok(Kernel::BSpline3 { center, width })
    }

    /// All basis functions of the cardinal cubic splines on `knots`.
    pub fn cardinal_splines(knots: &PointSet) -> Result<Vec<Self>> {
        let basis = Arc::new(CardinalSplineBasis::new(knots.clone())?);
        Ok((0..knots.len()).map(|index| Kernel::CardinalSpline { basis: basis.clone(), index }).collect())
    }

    pub fn family(&self) -> KernelFamily {
        match self {
            Kernel::Gaussian { .. } => KernelFamily::Gaussian,
            Kernel::GaussianDerivative { .. } => KernelFamily::GaussianDerivative,
            Kernel::CardinalSpline { .. } => KernelFamily::CardinalCubicSpline,
            Kernel::Box { .. } => KernelFamily::BoxAverage,
            Kernel::SquareRoot { .. } => KernelFamily::SquareRoot,
            Kernel::BSpline3 { .. } => KernelFamily::BSpline3,
        }
    }

    /// Polynomial decay order; infinite for compact or Gaussian kernels.
    pub fn decay_order(&self) -> f64 {
        f64::INFINITY
    }

    /// The derivative kernel where it is again a kernel of this type.
    pub fn derivative(&self) -> Option<Self> {
        match *self {
            Kernel::Gaussian { center, rate } => Some(Kernel::GaussianDerivative { center, rate }),
            _ => None,
        }
    }

    /// The kernel translated by `dx`, i.e. `t ↦ k(t - dx)`.
    pub fn shifted(&self, dx: f64) -> Result<Self> {
        Ok(match self {
            Kernel::Gaussian { center, rate } => Kernel::Gaussian { center: center + dx, rate: *rate },
            Kernel::GaussianDerivative { center, rate } => Kernel::GaussianDerivative { center: center + dx, rate: *rate },
            Kernel::CardinalSpline { basis, index } => {
                let knots = PointSet::new(basis.knots().iter().map(|t| t + dx).collect())?;
                Kernel::CardinalSpline { basis: Arc::new(CardinalSplineBasis::new(knots)?), index: *index }
            }
            Kernel::Box { left, right, height } => Kernel::Box { left: left + dx, right: right + dx, height: *height },
            Kernel::SquareRoot { shift } => Kernel::SquareRoot { shift: shift + dx },
            Kernel::BSpline3 { center, width } => Kernel::BSpline3 { center: center + dx, width: *width },
        })
    }

    /// A representative location (centre, knot, or left edge).
    pub fn center(&self) -> f64 {
        match self {
            Kernel::Gaussian { center, .. } | Kernel::GaussianDerivative { center, .. } => *center,
            Kernel::CardinalSpline { basis, index } => basis.knots()[*index],
            Kernel::Box { left, right, .. } => 0.5 * (left + right),
            Kernel::SquareRoot { shift } => shift + 0.5,
            Kernel::BSpline3 { center, .. } => *center,
        }
    }

    /// Closed interval outside of which the kernel vanishes (Gaussians are
    /// cut where they fall below `1e-16`).
    pub fn support(&self) -> (f64, f64) {
        match self {
            Kernel::Gaussian { center, rate } | Kernel::GaussianDerivative { center, rate } => {
                let r = gaussian_radius(*rate);
                (center - r, center + r)
            }
            Kernel::CardinalSpline { basis, .. } => (basis.knots().first().unwrap(), basis.knots().last().unwrap()),
            Kernel::Box { left, right, .. } => (*left, *right),
            Kernel::SquareRoot { shift } => (*shift, shift + 1.0),
            Kernel::BSpline3 { center, width } => (center - 2.0 * width, center + 2.0 * width),
        }
    }

    /// Points where the kernel or one of its derivatives jumps, including the
    /// ends of a compact support. Quadrature panels are aligned to these.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Kernel::Gaussian { .. } | Kernel::GaussianDerivative { .. } => Vec::new(),
            Kernel::CardinalSpline { basis, .. } => basis.knots().as_slice().to_vec(),
            Kernel::Box { left, right, .. } => vec![*left, *right],
            Kernel::SquareRoot { shift } => [0.0, 0.125, 0.25, 0.5, 1.0].iter().map(|b| b + shift).collect(),
            Kernel::BSpline3 { center, width } => (-2..=2).map(|k| center + k as f64 * width).collect(),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t)[0]
    }

    pub fn gradient(&self, t: f64) -> f64 {
        self.eval(t)[1]
    }

    pub fn hessian(&self, t: f64) -> f64 {
        self.eval(t)[2]
    }

    /// Value, first and second derivative at `t` (one-sided at breakpoints).
    pub fn eval(&self, t: f64) -> [f64; 3] {
        match self {
            Kernel::Gaussian { center, rate } => {
                let x = t - center;
                if x.abs() > gaussian_radius(*rate) {
                    return [0.0; 3];
                }
                let g = (-rate * x * x).exp();
                [g, -2.0 * rate * x * g, (4.0 * rate * rate * x * x - 2.0 * rate) * g]
            }
            Kernel::GaussianDerivative { center, rate } => {
                let x = t - center;
                if x.abs() > gaussian_radius(*rate) {
                    return [0.0; 3];
                }
                let g = (-rate * x * x).exp();
                let r = *rate;
                [
                    -2.0 * r * x * g,
                    (4.0 * r * r * x * x - 2.0 * r) * g,
                    (12.0 * r * r * x - 8.0 * r * r * r * x * x * x) * g,
                ]
            }
            Kernel::CardinalSpline { basis, index } => basis.eval(*index, t),
            Kernel::Box { left, right, height } => {
                if t >= *left && t < *right {
                    [*height, 0.0, 0.0]
                } else {
                    [0.0; 3]
                }
            }
            Kernel::SquareRoot { shift } => {
                let x = t - shift;
                if x < 0.0 {
                    [0.0; 3]
                } else if x < 0.125 {
                    [2.0 * x, 2.0, 0.0]
                } else if x < 0.25 {
                    [0.5 - 2.0 * x, -2.0, 0.0]
                } else if x < 0.5 {
                    [4.0 * x - 1.0, 4.0, 0.0]
                } else if x < 1.0 {
                    [1.0, 0.0, 0.0]
                } else {
                    [0.0; 3]
                }
            }
            Kernel::BSpline3 { center, width } => {
                let u = (t - center) / width;
                let a = u.abs();
                let s = u.signum();
                let (v, d, dd) = if a < 1.0 {
                    (2.0 / 3.0 - a * a + 0.5 * a * a * a, s * (-2.0 * a + 1.5 * a * a), -2.0 + 3.0 * a)
                } else if a < 2.0 {
                    let b = 2.0 - a;
                    (b * b * b / 6.0, -s * 0.5 * b * b, b)
                } else {
                    (0.0, 0.0, 0.0)
                };
                [v, d / width, dd / (width * width)]
            }
        }
    }

    /// `k̂(ξ) = ∫ e^{-iξt} k(t) dt`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        match self {
            Kernel::Gaussian { center, rate } => gaussian_hat(*center, *rate, xi),
            Kernel::GaussianDerivative { center, rate } => Complex64::new(0.0, xi) * gaussian_hat(*center, *rate, xi),
            Kernel::Box { left, right, height } => *height * linear_segment_hat(*left, *right, 1.0, 0.0, xi),
            Kernel::SquareRoot { shift } => {
                let s = *shift;
                // Segments (a, b, p, q) with value p + q (t - s) on [a, b).
                let segs = [
                    (0.0, 0.125, 0.0, 2.0),
                    (0.125, 0.25, 0.5, -2.0),
                    (0.25, 0.5, -1.0, 4.0),
                    (0.5, 1.0, 1.0, 0.0),
                ];
                segs.iter()
                    .map(|&(a, b, p, q)| linear_segment_hat(s + a, s + b, p - q * s, q, xi))
                    .sum()
            }
            Kernel::BSpline3 { center, width } => {
                let x = 0.5 * xi * width;
                let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                Complex64::from_polar(width * sinc.powi(4), -xi * center)
            }
            Kernel::CardinalSpline { .. } => {
                let rule = QuadratureRule::gauss_legendre(20, 0.05);
                let (lo, hi) = self.support();
                let grid = rule.grid(&self.breakpoints(), lo, hi);
                grid.nodes()
                    .iter()
                    .zip(grid.weights())
                    .map(|(&t, &w)| Complex64::from_polar(w * self.value(t), -xi * t))
                    .sum()
            }
        }
    }
}

fn gaussian_radius(rate: f64) -> f64 {
    (-(GAUSSIAN_FLOOR.ln()) / rate).sqrt()
}

fn gaussian_hat(center: f64, rate: f64, xi: f64) -> Complex64 {
    Complex64::from_polar((PI / rate).sqrt() * (-xi * xi / (4.0 * rate)).exp(), -xi * center)
}

/// `∫_a^b (p + q t) e^{-iξt} dt` in closed form.
fn linear_segment_hat(a: f64, b: f64, p: f64, q: f64, xi: f64) -> Complex64 {
    if xi.abs() * (b - a).max(a.abs().max(b.abs())) < 1e-4 {
        // Taylor expansion of e^{-iξt} to third order.
        let m = |k: i32| (b.powi(k + 1) - a.powi(k + 1)) / (k + 1) as f64;
        let moment = |k: i32| p * m(k) + q * m(k + 1);
        let i = Complex64::new(0.0, 1.0);
        return moment(0) - i * xi * moment(1) - xi * xi / 2.0 * moment(2) + i * xi.powi(3) / 6.0 * moment(3);
    }
    let i = Complex64::new(0.0, 1.0);
    let e = |t: f64| Complex64::from_polar(1.0, -xi * t);
    let anti = |t: f64| e(t) * (p * i / xi + q * (i * t / xi + 1.0 / (xi * xi)));
    anti(b) - anti(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_constant_matches_formula() {
        assert!((4.0 * std::f64::consts::FRAC_PI_2.powf(2.0 / 3.0) - GAUSSIAN_RATE).abs() < 1e-15);
    }
}
