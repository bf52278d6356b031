//! Box discretization of the radial coupled system.
//!
//! Unknowns per node (index `6i + c`): `φ, U, P, κ, f, g` with
//! `u = eᵗ(1+U)`, `ψ = eᵗ(1+P)`, `K = e^{2t}κ`, `g ≈ f_t`. The flat metric
//! with the undeformed instanton is the zero vector. Each interval
//! contributes six rows centred at its midpoint; three rows close each end.

use super::banded::BandMatrix;
use super::reduced::{curvature, Curvature};
use crate::dual::{Dual, Scalar};
use crate::grid::RadialGrid;

pub const STRIDE: usize = 6;
pub const PHI: usize = 0;
pub const U: usize = 1;
pub const P: usize = 2;
pub const KAPPA: usize = 3;
pub const F: usize = 4;
pub const G: usize = 5;

const KL: usize = 8;
const KU: usize = 8;
const COLORS: usize = 18;

#[derive(Clone, Debug, PartialEq)]
pub struct BoxScheme {
    pub grid: RadialGrid,
    /// Squared inverse size of the background instanton.
    pub lam2: f64,
    /// Right-hand side of the scalar equation.
    pub c: f64,
}

/// Midpoint quantities of interval `i`.
#[derive(Clone, Copy, Debug)]
pub struct Midpoint<T> {
    pub s: f64,
    pub lambda_r: T,
    pub lambda_t: T,
    pub scalar: T,
    pub curvature: Curvature<T>,
}

impl<T: Scalar> Midpoint<T> {
    pub fn hermitian(&self) -> T {
        self.curvature.lambda(self.lambda_r, self.lambda_t)
    }

    /// `tr(F∧F) / vol`.
    pub fn density(&self) -> T {
        self.curvature.trace_density() / (self.lambda_r * self.lambda_t)
    }
}

impl BoxScheme {
    pub fn new(grid: RadialGrid, lam2: f64) -> Self {
        BoxScheme { grid, lam2, c: 0.0 }
    }

    pub fn nodes(&self) -> usize {
        self.grid.len()
    }

    pub fn unknowns(&self) -> usize {
        STRIDE * self.nodes()
    }

    pub fn midpoint<T: Scalar>(&self, x: &[T], i: usize) -> Midpoint<T> {
        let h = self.grid.h;
        let s = self.grid.tm(i).exp();
        let v = |c: usize| (x[STRIDE * i + c], x[STRIDE * (i + 1) + c]);
        let avg = |c: usize| {
            let (a, b) = v(c);
            (a + b) * 0.5
        };
        let (u, p, k) = (avg(U) + 1.0, avg(P) + 1.0, avg(KAPPA));
        let (k0, k1) = v(KAPPA);
        let kt = (k1 - k0) / h;
        let scalar = (kt + k * 2.0) * (-4.0 / s) / (u * u * p);
        let (g0, g1) = v(G);
        let curv = curvature(self.lam2, s, avg(F), avg(G), (g1 - g0) / h);
        Midpoint { s, lambda_r: p, lambda_t: u, scalar, curvature: curv }
    }

    /// Residual rows; `out` has the length of `x`.
    pub fn residual<T: Scalar>(&self, x: &[T], alpha: f64, out: &mut [T]) {
        let n = self.nodes();
        let h = self.grid.h;
        let (em, ep) = ((-0.5 * h).exp(), (0.5 * h).exp());
        out[0] = x[KAPPA];
        out[1] = x[P] - x[U];
        out[2] = x[G] - x[F];
        for i in 0..n - 1 {
            let a = STRIDE * i;
            let b = a + STRIDE;
            let r = 3 + STRIDE * i;
            let mid = self.midpoint(x, i);
            let et = self.grid.tm(i).exp();
            out[r] = (x[b + PHI] - x[a + PHI]) / h - (x[a + U] * em + x[b + U] * ep) * (0.5 * et);
            out[r + 1] = (x[b + U] * ep - x[a + U] * em) / h - (x[a + P] * em + x[b + P] * ep) * 0.5;
            let u = (x[a + U] + x[b + U]) * 0.5 + 1.0;
            let p = (x[a + P] + x[b + P]) * 0.5 + 1.0;
            out[r + 2] = (x[a + KAPPA] + x[b + KAPPA]) * 0.5 - u * u * (x[b + P] - x[a + P]) / (p * h);
            out[r + 3] = mid.scalar + mid.density() * alpha - self.c;
            out[r + 4] = (x[b + F] - x[a + F]) / h - (x[a + G] + x[b + G]) * 0.5;
            out[r + 5] = mid.hermitian();
        }
        let e = STRIDE * (n - 1);
        let m = STRIDE * n;
        let u = x[e + U] + 1.0;
        out[m - 3] = x[e + P] + x[e + KAPPA] * (x[e + P] + 1.0) / (u * u * 2.0);
        out[m - 2] = x[e + G] + x[e + F];
        out[m - 1] = x[e + PHI];
    }

    pub fn residual_f64(&self, x: &[f64], alpha: f64) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.residual(x, alpha, &mut out);
        out
    }

    /// Columns that can be nonzero in `row`, as `lo..hi`.
    fn row_support(&self, row: usize) -> (usize, usize) {
        let m = self.unknowns();
        if row < 3 {
            (0, STRIDE)
        } else if row >= m - 3 {
            (m - STRIDE, m)
        } else {
            let i = (row - 3) / STRIDE;
            (STRIDE * i, STRIDE * i + 2 * STRIDE)
        }
    }

    /// Exact Jacobian from coloured forward-mode sweeps.
    pub fn jacobian(&self, x: &[f64], alpha: f64) -> BandMatrix {
        let m = self.unknowns();
        let mut jac = BandMatrix::zeros(m, KL, KU);
        let mut xd = vec![Dual::default(); m];
        let mut out = vec![Dual::default(); m];
        for color in 0..COLORS {
            for (j, v) in xd.iter_mut().enumerate() {
                *v = Dual::new(x[j], if j % COLORS == color { 1.0 } else { 0.0 });
            }
            self.residual(&xd, alpha, &mut out);
            for (row, r) in out.iter().enumerate() {
                let (lo, hi) = self.row_support(row);
                let first = lo + (color + COLORS - lo % COLORS) % COLORS;
                if first < hi {
                    jac.set(row, first, r.d);
                }
            }
        }
        jac
    }

    /// Midpoint samples of a real state.
    pub fn midpoints(&self, x: &[f64]) -> Vec<Midpoint<f64>> {
        (0..self.nodes() - 1).map(|i| self.midpoint(x, i)).collect()
    }

    /// `(1/8π²) ∫ tr(F∧F)` by the midpoint rule in `t`.
    pub fn charge(&self, x: &[f64]) -> f64 {
        let pi2 = std::f64::consts::PI.powi(2);
        let terms: Vec<f64> = self
            .midpoints(x)
            .iter()
            .map(|m| m.curvature.trace_density() * m.s * m.s * pi2 * self.grid.h)
            .collect();
        crate::reduce::pairwise_sum(&terms) / (8.0 * pi2)
    }

    /// True while both metric eigenvalues stay positive.
    pub fn admissible(&self, x: &[f64]) -> bool {
        (0..self.nodes()).all(|i| x[STRIDE * i + U] > -1.0 && x[STRIDE * i + P] > -1.0)
            && x.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scheme(n: usize) -> BoxScheme {
        BoxScheme::new(RadialGrid::new(1e-2, 1e2, n).unwrap(), 1.0)
    }

    #[test]
    fn seed_solves_the_scheme() {
        let s = scheme(200);
        let x = vec![0.0; s.unknowns()];
        let r = s.residual_f64(&x, 0.0);
        assert!(r.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn coloured_jacobian_matches_differences() {
        let s = scheme(40);
        let m = s.unknowns();
        let x: Vec<f64> = (0..m).map(|j| 0.01 * ((j as f64) * 0.7).sin()).collect();
        let jac = s.jacobian(&x, 0.3);
        let h = 1e-6;
        for j in [0, 5, 17, 18, 33, 100, m - 1] {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (s.residual_f64(&xp, 0.3), s.residual_f64(&xm, 0.3));
            for i in 0..m {
                let fd = (rp[i] - rm[i]) / (2.0 * h);
                let scale = 1.0 + fd.abs();
                assert!((fd - jac.get(i, j)).abs() < 1e-5 * scale, "({i},{j}) {fd} vs {}", jac.get(i, j));
            }
        }
    }

    #[test]
    fn seed_charge_is_one() {
        let s = BoxScheme::new(RadialGrid::new(1e-3, 1e3, 3000).unwrap(), 1.0);
        let q = s.charge(&vec![0.0; s.unknowns()]);
        assert!((q - 1.0).abs() < 1e-5, "{q}");
    }
}
