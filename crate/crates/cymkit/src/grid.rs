//! Sampling grids and quadrature rules.

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Log-spaced radial grid. The natural coordinate is `t = log s = 2 log r`,
/// in which the nodes are uniform with spacing `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub t0: f64,
    pub h: f64,
    pub n: usize,
}

impl RadialGrid {
    /// `n` intervals (so `n + 1` nodes) between `r_min` and `r_max`.
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && n >= 4) {
            return Err(Error::input(format!(
                "radial grid needs 0 < r_min < r_max and n ≥ 4 (got {r_min}, {r_max}, {n})"
            )));
        }
        let t0 = 2.0 * r_min.ln();
        let t1 = 2.0 * r_max.ln();
        Ok(RadialGrid { t0, h: (t1 - t0) / n as f64, n })
    }

    /// Grid whose step divides `log 2` exactly: `per_octave` intervals per
    /// doubling of `s`. Shifts by `log c` for `c = 2^m` then map nodes to
    /// nodes.
    pub fn dyadic(r_min: f64, r_max: f64, per_octave: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && per_octave >= 1) {
            return Err(Error::input("dyadic grid needs 0 < r_min < r_max"));
        }
        let h = std::f64::consts::LN_2 / per_octave as f64;
        let t0 = 2.0 * r_min.ln();
        let n = ((2.0 * r_max.ln() - t0) / h).ceil() as usize;
        Ok(RadialGrid { t0, h, n: n.max(4) })
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t0 + self.h * i as f64
    }

    /// Interval midpoint in `t`.
    pub fn tm(&self, i: usize) -> f64 {
        self.t0 + self.h * (i as f64 + 0.5)
    }

    pub fn r(&self, i: usize) -> f64 {
        (0.5 * self.t(i)).exp()
    }

    pub fn r_mid(&self, i: usize) -> f64 {
        (0.5 * self.tm(i)).exp()
    }

    pub fn r_min(&self) -> f64 {
        self.r(0)
    }

    pub fn r_max(&self) -> f64 {
        self.r(self.n)
    }

    pub fn nodes_r(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.r(i)).collect()
    }

    pub fn midpoints_r(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.r_mid(i)).collect()
    }

    /// Same grid translated by `dt` in `t`.
    pub fn shifted(&self, dt: f64) -> Self {
        RadialGrid { t0: self.t0 + dt, h: self.h, n: self.n }
    }

    /// Linear interpolation of node samples at `t` (clamped to the grid).
    pub fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let x = ((t - self.t0) / self.h).clamp(0.0, self.n as f64);
        let i = (x.floor() as usize).min(self.n - 1);
        let w = x - i as f64;
        (1.0 - w) * values[i] + w * values[i + 1]
    }

    /// Cubic (Catmull–Rom) interpolation of node samples at `t`.
    pub fn interpolate_cubic(&self, values: &[f64], t: f64) -> f64 {
        let x = ((t - self.t0) / self.h).clamp(0.0, self.n as f64);
        let i = (x.floor() as usize).clamp(1, self.n.saturating_sub(2).max(1));
        let w = x - i as f64;
        let (p0, p1, p2, p3) = (values[i - 1], values[i], values[i + 1], values[(i + 2).min(self.n)]);
        let w2 = w * w;
        let w3 = w2 * w;
        0.5 * ((2.0 * p1)
            + (-p0 + p2) * w
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * w2
            + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * w3)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (x.iter().map(|t| mid + half * t).collect(), w.iter().map(|v| v * half).collect())
}

/// Quadrature node in ℝ⁴ with its weight.
#[derive(Clone, Copy, Debug)]
pub struct QuadNode {
    pub x: Quaternion,
    pub w: f64,
}

/// Product rule on the ball of radius `radius` in hyperspherical coordinates
/// `x = r (cos ψ, sin ψ cos θ, sin ψ sin θ cos φ, sin ψ sin θ sin φ)`.
///
/// The radial interval is split into panels at `breaks` so that densities
/// concentrated near given radii are resolved.
pub fn hyperspherical_rule(
    radius: f64,
    breaks: &[f64],
    n_r: usize,
    n_psi: usize,
    n_theta: usize,
    n_phi: usize,
) -> Vec<QuadNode> {
    let mut edges = vec![0.0];
    let mut bs: Vec<f64> = breaks.iter().copied().filter(|&b| b > 0.0 && b < radius).collect();
    bs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.extend(bs);
    edges.push(radius);
    let mut rs = Vec::new();
    for win in edges.windows(2) {
        let (x, w) = gauss_legendre_on(n_r, win[0], win[1]);
        rs.extend(x.into_iter().zip(w));
    }
    let (ps, pw) = gauss_legendre_on(n_psi, 0.0, PI);
    let (ts, tw) = gauss_legendre_on(n_theta, 0.0, PI);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut out = Vec::with_capacity(rs.len() * n_psi * n_theta * n_phi);
    for &(r, wr) in &rs {
        for (a, &psi) in ps.iter().enumerate() {
            let (sp, cp) = psi.sin_cos();
            for (b, &th) in ts.iter().enumerate() {
                let (st, ct) = th.sin_cos();
                let jac = r.powi(3) * sp * sp * st;
                for c in 0..n_phi {
                    let ph = (c as f64 + 0.5) * dphi;
                    let (sf, cf) = ph.sin_cos();
                    out.push(QuadNode {
                        x: Quaternion::new(r * cp, r * sp * ct, r * sp * st * cf, r * sp * st * sf),
                        w: wr * pw[a] * tw[b] * dphi * jac,
                    });
                }
            }
        }
    }
    out
}

/// Uniform Cartesian grid in ℝ⁴ (box `[lo, hi]^4`, `n` nodes per axis).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductGrid4 {
    pub lo: [f64; 4],
    pub h: [f64; 4],
    pub n: [usize; 4],
    /// Periodic grids wrap stencils; otherwise boundary samples use
    /// one-sided stencils and are flagged.
    pub periodic: bool,
}

impl ProductGrid4 {
    pub fn cube(lo: f64, hi: f64, n: usize) -> Self {
        let h = (hi - lo) / (n - 1) as f64;
        ProductGrid4 { lo: [lo; 4], h: [h; 4], n: [n; 4], periodic: false }
    }

    /// Periodic torus `ℝ⁴ / (L ℤ)⁴` sampled with `n` nodes per axis.
    pub fn torus(length: f64, n: usize) -> Self {
        ProductGrid4 { lo: [0.0; 4], h: [length / n as f64; 4], n: [n; 4], periodic: true }
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: [usize; 4]) -> usize {
        ((i[0] * self.n[1] + i[1]) * self.n[2] + i[2]) * self.n[3] + i[3]
    }

    pub fn multi(&self, mut k: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for a in (0..4).rev() {
            out[a] = k % self.n[a];
            k /= self.n[a];
        }
        out
    }

    pub fn point(&self, k: usize) -> Quaternion {
        let m = self.multi(k);
        Quaternion::new(
            self.lo[0] + self.h[0] * m[0] as f64,
            self.lo[1] + self.h[1] * m[1] as f64,
            self.lo[2] + self.h[2] * m[2] as f64,
            self.lo[3] + self.h[3] * m[3] as f64,
        )
    }

    pub fn points(&self) -> Vec<Quaternion> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// True when the sample lies on the outer layer of a non-periodic grid.
    pub fn is_boundary(&self, k: usize) -> bool {
        if self.periodic {
            return false;
        }
        let m = self.multi(k);
        (0..4).any(|a| m[a] == 0 || m[a] + 1 == self.n[a])
    }

    /// Neighbour index along axis `a` by `step` (±1), wrapping when
    /// periodic; `None` outside a non-periodic grid.
    pub fn neighbour(&self, k: usize, a: usize, step: isize) -> Option<usize> {
        let mut m = self.multi(k);
        let n = self.n[a] as isize;
        let j = m[a] as isize + step;
        let j = if self.periodic {
            j.rem_euclid(n)
        } else if j < 0 || j >= n {
            return None;
        } else {
            j
        };
        m[a] = j as usize;
        Some(self.index(m))
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.iter().product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        for deg in 0..14 {
            let q: f64 = x.iter().zip(&w).map(|(a, b)| b * a.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "deg {deg}: {q} vs {exact}");
        }
    }

    #[test]
    fn hyperspherical_rule_volume_of_unit_ball() {
        let rule = hyperspherical_rule(1.0, &[], 8, 16, 16, 8);
        let v: f64 = rule.iter().map(|n| n.w).sum();
        assert!((v - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn dyadic_grid_step_divides_log_two() {
        let g = RadialGrid::dyadic(0.01, 100.0, 40).unwrap();
        let m = (std::f64::consts::LN_2 / g.h).round();
        assert!((m * g.h - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn product_grid_index_roundtrip() {
        let g = ProductGrid4::cube(-1.0, 1.0, 5);
        for k in [0, 17, 311, g.len() - 1] {
            assert_eq!(g.index(g.multi(k)), k);
        }
    }
}
