use std::f64::consts::PI;

/// Composite Gauss-Legendre rule: `n` nodes per panel, panels no wider than
/// `max_panel_width`, panel ends aligned to supplied breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    max_panel_width: f64,
}

/// Nodes and weights of a composite rule over one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point Gauss-Legendre on each panel.
    pub fn gauss_legendre(n: usize, max_panel_width: f64) -> Self {
        assert!(n >= 1, "need at least one node per panel");
        assert!(max_panel_width > 0.0, "panel width must be positive");
        let (nodes, weights) = legendre_nodes(n);
        Self { nodes, weights, max_panel_width }
    }

    /// The same rule with twice as many nodes per panel.
    pub fn doubled(&self) -> Self {
        Self::gauss_legendre(2 * self.nodes.len(), self.max_panel_width)
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes.len()
    }

    pub fn max_panel_width(&self) -> f64 {
        self.max_panel_width
    }

    /// Reference nodes and weights on `[-1, 1]`.
    pub fn reference(&self) -> (&[f64], &[f64]) {
        (&self.nodes, &self.weights)
    }

    /// Composite grid on `[lo, hi]` whose panel ends include every breakpoint
    /// strictly inside the interval.
    pub fn grid(&self, breakpoints: &[f64], lo: f64, hi: f64) -> QuadratureGrid {
        let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > lo && b < hi).collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        if !(hi > lo) {
            return QuadratureGrid { nodes, weights };
        }
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let panels = ((b - a) / self.max_panel_width).ceil().max(1.0) as usize;
            let h = (b - a) / panels as f64;
            for p in 0..panels {
                let pa = a + h * p as f64;
                let pb = if p + 1 == panels { b } else { pa + h };
                let (mid, half) = (0.5 * (pa + pb), 0.5 * (pb - pa));
                for (x, wt) in self.nodes.iter().zip(&self.weights) {
                    nodes.push(mid + half * x);
                    weights.push(half * wt);
                }
            }
        }
        QuadratureGrid { nodes, weights }
    }

    /// `∫_lo^hi f` with panels aligned to `breakpoints`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, breakpoints: &[f64], lo: f64, hi: f64) -> f64 {
        self.grid(breakpoints, lo, hi).integrate(f)
    }
}

impl QuadratureGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
