use crate::algebra::PointSet;
use crate::error::{invalid, Result};
use crate::{Matrix, Vector};

/// Natural cubic cardinal splines on a knot set: `φ_i(t_j) = δ_ij`,
/// vanishing second derivative at both end knots, zero outside the knot hull.
#[derive(Debug, Clone, PartialEq)]
pub struct CardinalSplineBasis {
    knots: PointSet,
    /// Column `i` holds the second derivatives of `φ_i` at the knots.
    moments: Matrix,
}

impl CardinalSplineBasis {
    pub fn new(knots: PointSet) -> Result<Self> {
        let n = knots.len();
        if n < 4 {
            return invalid(format!("cardinal cubic splines need at least 4 knots, got {n}"));
        }
        let t = knots.as_slice();
        let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        // Interior moments solve a symmetric tridiagonal system (Thomas algorithm).
        let m = n - 2;
        let diag: Vec<f64> = (0..m).map(|k| (h[k] + h[k + 1]) / 3.0).collect();
        let off: Vec<f64> = (0..m.saturating_sub(1)).map(|k| h[k + 1] / 6.0).collect();
        let mut moments = Matrix::zeros(n, n);
        for i in 0..n {
            let y = |j: usize| if j == i { 1.0 } else { 0.0 };
            let rhs = Vector::from_fn(m, |k, _| {
                let j = k + 1;
                (y(j + 1) - y(j)) / h[j] - (y(j) - y(j - 1)) / h[j - 1]
            });
            let sol = thomas(&off, &diag, &off, rhs);
            for k in 0..m {
                moments[(k + 1, i)] = sol[k];
            }
        }
        Ok(Self { knots, moments })
    }

    pub fn knots(&self) -> &PointSet {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    fn interval(&self, t: f64) -> Option<usize> {
        let k = self.knots.as_slice();
        if t < k[0] || t > k[k.len() - 1] {
            return None;
        }
        let j = k.partition_point(|&x| x <= t);
        Some(j.clamp(1, k.len() - 1) - 1)
    }

    /// Value, first and second derivative of basis function `i` at `t`.
    pub fn eval(&self, i: usize, t: f64) -> [f64; 3] {
        let Some(j) = self.interval(t) else {
            return [0.0; 3];
        };
        let k = self.knots.as_slice();
        let (t0, t1) = (k[j], k[j + 1]);
        let h = t1 - t0;
        let (m0, m1) = (self.moments[(j, i)], self.moments[(j + 1, i)]);
        let y0 = if j == i { 1.0 } else { 0.0 };
        let y1 = if j + 1 == i { 1.0 } else { 0.0 };
        let (a, b) = ((t1 - t) / h, (t - t0) / h);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d = (y1 - y0) / h - (3.0 * a * a - 1.0) * h / 6.0 * m0 + (3.0 * b * b - 1.0) * h / 6.0 * m1;
        let s = a * m0 + b * m1;
        [v, d, s]
    }
}

/// Tridiagonal solve with sub-diagonal `lo`, diagonal `d`, super-diagonal `up`.
fn thomas(lo: &[f64], d: &[f64], up: &[f64], mut rhs: Vector) -> Vector {
    let n = d.len();
    let mut diag = d.to_vec();
    for k in 1..n {
        let w = lo[k - 1] / diag[k - 1];
        diag[k] -= w * up[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    let mut x = Vector::zeros(n);
    for k in (0..n).rev() {
        let upper = if k + 1 < n { up[k] * x[k + 1] } else { 0.0 };
        x[k] = (rhs[k] - upper) / diag[k];
    }
    x
}
