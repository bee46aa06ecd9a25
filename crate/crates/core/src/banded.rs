//! Square banded matrices with an LU factorization using partial pivoting.
//!
//! Storage follows the LAPACK `gbtrf` layout: column `j` keeps rows
//! `j - ku - kl ..= j + kl`, the extra `kl` superdiagonals absorbing fill-in
//! from row interchanges.

#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        Self { n, kl, ku, ld, data: vec![0.0; ld * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        // row offset within the column: kl + ku + i - j
        j * self.ld + (self.kl + self.ku + i - j)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i <= j + self.kl && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    /// Adds `v` at `(i, j)`; panics outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Factor in place. Returns `None` if a pivot vanishes.
    pub fn factor(mut self) -> Option<BandLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let kv = ku + kl;
        let mut piv = vec![0usize; n];
        for j in 0..n {
            let last = (j + kl).min(n - 1);
            let mut p = j;
            let mut best = self.data[j * self.ld + kv].abs();
            for i in j + 1..=last {
                let v = self.data[j * self.ld + kv + i - j].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[j] = p;
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            let right = (j + kv).min(n - 1);
            if p != j {
                for c in j..=right {
                    let a = c * self.ld + kv + j - c;
                    let b = c * self.ld + kv + p - c;
                    self.data.swap(a, b);
                }
            }
            let d = self.data[j * self.ld + kv];
            for i in j + 1..=last {
                self.data[j * self.ld + kv + i - j] /= d;
            }
            for c in j + 1..=right {
                let u = self.data[c * self.ld + kv + j - c];
                if u == 0.0 {
                    continue;
                }
                for i in j + 1..=last {
                    let l = self.data[j * self.ld + kv + i - j];
                    self.data[c * self.ld + kv + i - c] -= l * u;
                }
            }
        }
        Some(BandLu { m: self, piv })
    }
}

#[derive(Clone, Debug)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = &self.m;
        let (n, kl, kv) = (m.n, m.kl, m.kl + m.ku);
        let mut x = b.to_vec();
        for j in 0..n {
            x.swap(j, self.piv[j]);
            let last = (j + kl).min(n - 1);
            for i in j + 1..=last {
                x[i] -= m.data[j * m.ld + kv + i - j] * x[j];
            }
        }
        for j in (0..n).rev() {
            x[j] /= m.data[j * m.ld + kv];
            let top = j.saturating_sub(kv);
            for i in top..j {
                x[i] -= m.data[j * m.ld + kv + i - j] * x[j];
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn solves_random_band_systems(
            n in 3usize..40,
            kl in 0usize..4,
            ku in 0usize..4,
            seed in proptest::collection::vec(-1.0f64..1.0, 400),
        ) {
            let mut a = BandMatrix::zeros(n, kl, ku);
            let mut k = 0;
            for i in 0..n {
                for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                    // weak diagonal so that pivoting matters
                    let v = seed[k % seed.len()] + if i == j { 0.1 } else { 0.0 };
                    a.add(i, j, v);
                    k += 1;
                }
            }
            let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
            let b = a.mul_vec(&x);
            if let Some(lu) = a.clone().factor() {
                let y = lu.solve(&b);
                let r = a.mul_vec(&y);
                let err = r.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                prop_assert!(err < 1e-6 * (1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max)));
            }
        }
    }
}
