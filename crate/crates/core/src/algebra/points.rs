use std::sync::Arc;

use crate::error::{invalid, Result};

/// A strictly increasing, finite set of reals indexing a sequence space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Arc<[f64]>,
}

impl PointSet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return invalid(format!("point set contains non-finite value {p}"));
        }
        if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
            return invalid(format!("point set is not strictly increasing at {} -> {}", w[0], w[1]));
        }
        Ok(Self { points: points.into() })
    }

    /// `n` points `start, start + step, ...`.
    pub fn uniform(start: f64, step: f64, n: usize) -> Result<Self> {
        if !(step > 0.0) {
            return invalid("uniform point set needs a positive step");
        }
        Self::new((0..n).map(|i| start + step * i as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().copied()
    }

    /// `sup_t #{λ : λ ∈ [t, t+1)}`.
    pub fn max_count_per_unit(&self) -> usize {
        let p = &self.points;
        let mut best = 0;
        let mut hi = 0;
        for lo in 0..p.len() {
            while hi < p.len() && p[hi] < p[lo] + 1.0 {
                hi += 1;
            }
            best = best.max(hi - lo);
        }
        best
    }

    pub fn min_gap(&self) -> Option<f64> {
        self.points.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
    }

    pub fn max_gap(&self) -> Option<f64> {
        self.points.windows(2).map(|w| w[1] - w[0]).reduce(f64::max)
    }

    pub fn first(&self) -> Option<f64> {
        self.points.first().copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.points.last().copied()
    }

    /// The same points repeated `copies` times, one block after another.
    /// Used to index block matrices whose blocks share a point set.
    pub fn stacked(&self, copies: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() * copies);
        for _ in 0..copies {
            out.extend_from_slice(&self.points);
        }
        out
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.points[i]
    }
}
