use crate::error::{invalid, Error, Result};
use crate::{Matrix, Vector};

/// `(SᵀS)⁻¹Sᵀ` through a thin singular value decomposition of `S`.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    /// `V Σ⁻¹ Uᵀ`, of shape `ncols(S) x nrows(S)`.
    matrix: Matrix,
    singular_values: Vector,
}

/// Relative floor on `σ_min(SᵀS) / σ_max(SᵀS)`.
const RANK_TOL: f64 = 1e-12;

impl PseudoInverse {
    pub fn new(s: &Matrix) -> Result<Self> {
        if s.nrows() < s.ncols() || s.ncols() == 0 {
            return invalid(format!("pseudo-inverse needs a tall matrix, got {}x{}", s.nrows(), s.ncols()));
        }
        let svd = s.clone().svd(true, true);
        let sv = svd.singular_values.clone();
        let (smax, smin) = (sv.max(), sv.min());
        if !(smin * smin > RANK_TOL * smax * smax) {
            return Err(Error::LinearizationNotStable { min_singular: smin });
        }
        let u = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v requested");
        let mut vs = vt.transpose();
        for (j, s) in sv.iter().enumerate() {
            vs.column_mut(j).scale_mut(1.0 / s);
        }
        Ok(Self { matrix: vs * u.transpose(), singular_values: sv })
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.matrix * v
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn min_singular(&self) -> f64 {
        self.singular_values.min()
    }

    pub fn max_singular(&self) -> f64 {
        self.singular_values.max()
    }
}

/// `(SᵀS)⁻¹Sᵀ v`.
pub fn pseudo_inverse_apply(s: &Matrix, v: &Vector) -> Result<Vector> {
    if v.len() != s.nrows() {
        return invalid("vector length does not match the number of rows");
    }
    Ok(PseudoInverse::new(s)?.apply(v))
}
