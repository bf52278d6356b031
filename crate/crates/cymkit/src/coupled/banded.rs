//! Banded LU factorization with partial pivoting (LAPACK `gbtf2` layout).

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BandMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    ldab: usize,
    ab: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, ldab, ab: vec![0.0; ldab * n] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        (self.kl + self.ku + i - j) + j * self.ldab
    }

    /// True when `(i, j)` lies inside the stored band (including fill).
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i + self.kl + self.ku >= j && i <= j + self.kl
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.ab[self.idx(i, j)]
        } else {
            0.0
        }
    }

    /// Sets an entry; panics outside the original `kl`/`ku` band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i <= j + self.kl && j <= i + self.ku, "({i},{j}) outside the band");
        let k = self.idx(i, j);
        self.ab[k] = v;
    }

    fn at(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.ab[k]
    }

    pub fn scale_row(&mut self, i: usize, s: f64) {
        let lo = i.saturating_sub(self.kl);
        let hi = (i + self.ku).min(self.n - 1);
        for j in lo..=hi {
            *self.at(i, j) *= s;
        }
    }

    pub fn row_max_abs(&self, i: usize) -> f64 {
        let lo = i.saturating_sub(self.kl);
        let hi = (i + self.ku).min(self.n - 1);
        (lo..=hi).map(|j| self.get(i, j).abs()).fold(0.0, f64::max)
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

    /// In-place factorization `P A = L U`.
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let kv = self.kl + self.ku;
        let mut piv = vec![0usize; n];
        let mut ju = 0usize;
        let mut min_pivot = f64::INFINITY;
        for j in 0..n {
            let km = self.kl.min(n - 1 - j);
            let mut p = j;
            let mut best = self.get(j, j).abs();
            for i in j + 1..=j + km {
                let v = self.get(i, j).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[j] = p;
            if best == 0.0 || !best.is_finite() {
                return Err(Error::numerical(format!("singular banded matrix at column {j}")));
            }
            min_pivot = min_pivot.min(best);
            ju = ju.max((j + self.ku + p - j).min(n - 1));
            if p != j {
                for c in j..=ju {
                    let a = self.idx(p, c);
                    let b = self.idx(j, c);
                    self.ab.swap(a, b);
                }
            }
            let d = self.get(j, j);
            for i in j + 1..=j + km {
                *self.at(i, j) /= d;
            }
            for c in j + 1..=ju {
                let t = self.get(j, c);
                if t != 0.0 {
                    for i in j + 1..=j + km {
                        let l = self.get(i, j);
                        *self.at(i, c) -= l * t;
                    }
                }
            }
            let _ = kv;
        }
        Ok(BandLu { a: self, piv, min_pivot })
    }
}

#[derive(Clone, Debug)]
pub struct BandLu {
    a: BandMatrix,
    piv: Vec<usize>,
    /// Smallest pivot magnitude met during elimination.
    pub min_pivot: f64,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let a = &self.a;
        let n = a.n;
        let kv = a.kl + a.ku;
        let mut x = b.to_vec();
        for j in 0..n {
            x.swap(j, self.piv[j]);
            let km = a.kl.min(n - 1 - j);
            let xj = x[j];
            if xj != 0.0 {
                for i in j + 1..=j + km {
                    x[i] -= a.get(i, j) * xj;
                }
            }
        }
        for j in (0..n).rev() {
            x[j] /= a.get(j, j);
            let xj = x[j];
            for i in j.saturating_sub(kv)..j {
                x[i] -= a.get(i, j) * xj;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_random_banded_system_needing_pivots() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (n, kl, ku) = (60, 3, 2);
        let mut a = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                // small diagonal forces row exchanges
                let v = if i == j { 1e-3 * rng.gen::<f64>() } else { rng.gen::<f64>() - 0.5 };
                a.set(i, j, v);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.mul_vec(&x);
        let lu = a.clone().factor().unwrap();
        let y = lu.solve(&b);
        let err = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }
}
