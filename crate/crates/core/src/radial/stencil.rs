//! Finite-difference weights by Fornberg's recursion, and fourth-order
//! derivative operators on a uniform mesh.
//!
//! Interior rows use centred stencils (5 points for the first two
//! derivatives, 7 for the third and fourth). Rows too close to an end fall
//! back to one-sided stencils of `d + 4` points anchored at that end. Ghost
//! nodes obtained by reflecting across the poles were considered and
//! rejected: the profile is not even in `t` about the mesh ends, so a
//! reflection would impose a spurious Neumann condition.

/// Weights `w[k][j]` such that `f^(k)(x0) ≈ Σ_j w[k][j] f(x_j)` for `k ≤ m`.
pub fn fornberg(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let np = xs.len();
    let mut c = vec![vec![0.0; np]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..np {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// One derivative order on an `N`-node uniform mesh, stored row by row.
#[derive(Clone, Debug)]
pub struct DiffOp {
    order: usize,
    rows: Vec<(usize, Vec<f64>)>,
}

impl DiffOp {
    pub fn new(order: usize, nodes: usize, h: f64) -> Self {
        assert!((1..=4).contains(&order));
        let half = if order <= 2 { 2 } else { 3 };
        let one_sided = order + 4;
        assert!(nodes >= one_sided.max(2 * half + 1));
        let xs = |len: usize| (0..len).map(|j| j as f64).collect::<Vec<_>>();
        let scale = h.powi(order as i32);
        let centred: Vec<f64> = fornberg(half as f64, &xs(2 * half + 1), order)[order]
            .iter()
            .map(|w| w / scale)
            .collect();
        let mut rows = Vec::with_capacity(nodes);
        for i in 0..nodes {
            if i >= half && i + half < nodes {
                rows.push((i - half, centred.clone()));
            } else if i < half {
                let w = fornberg(i as f64, &xs(one_sided), order)[order].iter().map(|w| w / scale).collect();
                rows.push((0, w));
            } else {
                let start = nodes - one_sided;
                let w = fornberg((i - start) as f64, &xs(one_sided), order)[order]
                    .iter()
                    .map(|w| w / scale)
                    .collect();
                rows.push((start, w));
            }
        }
        Self { order, rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.rows.len());
        self.rows
            .iter()
            .map(|(s, w)| w.iter().zip(&f[*s..]).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `(first column, weights)` of row `i`.
    pub fn row(&self, i: usize) -> (usize, &[f64]) {
        let (s, w) = &self.rows[i];
        (*s, w)
    }
}
