use super::stencil::DiffOp;

pub const DEFAULT_T: f64 = 12.0;
pub const DEFAULT_INTERVALS: usize = 2048;

/// Uniform mesh on `[-T, T]` in `t = log|z|²` with Simpson weights and
/// fourth-order derivative operators.
#[derive(Clone, Debug)]
pub struct Grid {
    t_max: f64,
    h: f64,
    t: Vec<f64>,
    sigma: Vec<f64>,
    sigma_jet: [Vec<f64>; 4],
    simpson: Vec<f64>,
    ops: [DiffOp; 4],
}

impl Grid {
    /// `intervals` must be even.
    pub fn new(t_max: f64, intervals: usize) -> Self {
        assert!(t_max > 0.0 && intervals >= 8 && intervals % 2 == 0, "bad mesh");
        let nodes = intervals + 1;
        let h = 2.0 * t_max / intervals as f64;
        let t: Vec<f64> = (0..nodes).map(|i| -t_max + i as f64 * h).collect();
        let sigma: Vec<f64> = t.iter().map(|&x| logistic(x)).collect();
        // derivatives of σ from σ and 1 - σ = logistic(-t), both to full relative precision
        let mut sigma_jet = [vec![], vec![], vec![], vec![]];
        for &x in &t {
            let (s, sb) = (logistic(x), logistic(-x));
            let s1 = s * sb;
            let jet = [s1, s1 * (sb - s), s1 * (1.0 - 6.0 * s1), s1 * (sb - s) * (1.0 - 12.0 * s1)];
            for (k, v) in jet.into_iter().enumerate() {
                sigma_jet[k].push(v);
            }
        }
        let simpson = (0..nodes)
            .map(|i| {
                let w = if i == 0 || i == intervals {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * h / 3.0
            })
            .collect();
        let ops = [1, 2, 3, 4].map(|k| DiffOp::new(k, nodes, h));
        Self { t_max, h, t, sigma, sigma_jet, simpson, ops }
    }

    pub fn default_grid() -> Self {
        Self::new(DEFAULT_T, DEFAULT_INTERVALS)
    }

    /// Same range, twice as many intervals.
    pub fn refined(&self) -> Self {
        Self::new(self.t_max, 2 * (self.len() - 1))
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    /// `σ = e^t / (1 + e^t)`, the momentum of the unit Fubini-Study potential.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// `d^k σ / dt^k` for `k = 1..=4`.
    pub fn sigma_derivative(&self, k: usize) -> &[f64] {
        &self.sigma_jet[k - 1]
    }

    pub fn op(&self, order: usize) -> &DiffOp {
        &self.ops[order - 1]
    }

    pub fn d(&self, order: usize, f: &[f64]) -> Vec<f64> {
        self.op(order).apply(f)
    }

    pub fn simpson_weights(&self) -> &[f64] {
        &self.simpson
    }

    pub fn simpson(&self, f: &[f64]) -> f64 {
        pairwise_sum(&f.iter().zip(&self.simpson).map(|(a, w)| a * w).collect::<Vec<_>>())
    }

    /// Value at `t ∈ [-T, T]` of the degree-7 Lagrange interpolant of nodal
    /// values `f` through the eight nodes around `t`.
    pub fn interpolate(&self, f: &[f64], t: f64) -> f64 {
        const W: usize = 8;
        let s = (t + self.t_max) / self.h;
        let cell = (s.floor().max(0.0) as usize).min(self.len() - 2);
        let start = (cell + 1).saturating_sub(W / 2).min(self.len() - W);
        (start..start + W)
            .map(|j| {
                let basis: f64 = (start..start + W)
                    .filter(|&k| k != j)
                    .map(|k| (s - k as f64) / (j as f64 - k as f64))
                    .product();
                basis * f[j]
            })
            .sum()
    }

    /// Samples `f` at the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.t.iter().map(|&x| f(x)).collect()
    }
}

pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^t)` without overflow.
pub fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Deterministic tree reduction, independent of thread count.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 16 => v.iter().sum(),
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}
