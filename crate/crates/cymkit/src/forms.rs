//! Pointwise algebra of su(2)-valued 2-forms on ℝ⁴ with a Kähler metric.
//!
//! Components are stored for the pairs `(μ,ν)` with `μ < ν` in the order
//! 12, 13, 14, 23, 24, 34 (1-based). Antisymmetry is structural.

use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, ZERO};
use nalgebra::{Matrix2, Matrix4};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TwoForm {
    pub c: [Quaternion; 6],
}

fn pair_index(mu: usize, nu: usize) -> (usize, f64) {
    let (a, b, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    let idx = match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("diagonal component requested"),
    };
    (idx, sign)
}

impl TwoForm {
    pub const ZERO: TwoForm = TwoForm { c: [ZERO; 6] };

    /// Component `F_{μν}` (0-based indices), zero on the diagonal.
    pub fn get(&self, mu: usize, nu: usize) -> Quaternion {
        if mu == nu {
            return ZERO;
        }
        let (i, s) = pair_index(mu, nu);
        self.c[i].scale(s)
    }

    pub fn set(&mut self, mu: usize, nu: usize, q: Quaternion) {
        let (i, s) = pair_index(mu, nu);
        self.c[i] = q.scale(s);
    }

    /// Real 2-form `β` times the Lie algebra element `q`.
    pub fn from_real(beta: &[f64; 6], q: Quaternion) -> Self {
        let mut c = [ZERO; 6];
        for (k, b) in beta.iter().enumerate() {
            c[k] = q.scale(*b);
        }
        TwoForm { c }
    }

    /// Real component of the `q`-direction, `β_k = ⟨F_k, q⟩ / |q|²`.
    pub fn component_along(&self, q: Quaternion) -> [f64; 6] {
        let n = q.norm_sqr();
        let mut out = [0.0; 6];
        for k in 0..6 {
            out[k] = self.c[k].dot(q) / n;
        }
        out
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        let mut c = self.c;
        for q in c.iter_mut() {
            *q = f(*q);
        }
        TwoForm { c }
    }

    /// Conjugation `g F g⁻¹` by a unit quaternion.
    pub fn conjugate_by(&self, g: Quaternion) -> Self {
        let gi = g.conj();
        self.map(|q| g * q * gi)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |a, q| a.max(q.max_abs()))
    }

    /// True when every component is a purely imaginary quaternion.
    pub fn is_imaginary(&self, tol: f64) -> bool {
        self.c.iter().all(|q| q.w.abs() <= tol)
    }

    /// Coefficient of `dx₁∧dx₂∧dx₃∧dx₄` in `F∧F` (quaternion valued).
    pub fn wedge_self(&self) -> Quaternion {
        let c = &self.c;
        let p = |a: usize, b: usize| c[a] * c[b] + c[b] * c[a];
        p(0, 5) - p(1, 4) + p(2, 3)
    }

    /// Euclidean (flat-metric) pairing norm `Σ_{μ<ν} (F_{μν}, F_{μν})`.
    pub fn flat_norm_sqr(&self) -> f64 {
        self.c.iter().map(|q| q.pairing(*q)).sum()
    }

    /// Quaternionic norm `Σ_{μ<ν} |F_{μν}|²`.
    pub fn quaternion_norm_sqr(&self) -> f64 {
        self.c.iter().map(|q| q.norm_sqr()).sum()
    }

    /// Components in a new coframe: `dx_μ = Σ_a N_{μa} θ_a`.
    pub fn transform(&self, n: &Matrix4<f64>) -> TwoForm {
        let mut out = TwoForm::ZERO;
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            let mut acc = ZERO;
            for mu in 0..4 {
                for nu in 0..4 {
                    if mu == nu {
                        continue;
                    }
                    let coef = n[(mu, a)] * n[(nu, b)];
                    if coef != 0.0 {
                        acc += self.get(mu, nu).scale(coef);
                    }
                }
            }
            out.c[k] = acc;
        }
        out
    }
}

impl Add for TwoForm {
    type Output = TwoForm;
    fn add(self, o: TwoForm) -> TwoForm {
        let mut c = self.c;
        for k in 0..6 {
            c[k] += o.c[k];
        }
        TwoForm { c }
    }
}

impl Sub for TwoForm {
    type Output = TwoForm;
    fn sub(self, o: TwoForm) -> TwoForm {
        let mut c = self.c;
        for k in 0..6 {
            c[k] -= o.c[k];
        }
        TwoForm { c }
    }
}

impl Mul<f64> for TwoForm {
    type Output = TwoForm;
    fn mul(self, s: f64) -> TwoForm {
        self.map(|q| q.scale(s))
    }
}

/// Flat Kähler form `dx₁∧dx₂ + dx₃∧dx₄` as real components.
pub const OMEGA0: [f64; 6] = [1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
/// Anti-self-dual basis (flat metric).
pub const ASD_BASIS: [[f64; 6]; 3] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, -1.0],
    [0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
];
/// Self-dual basis (flat metric); the first element is `ω₀`.
pub const SD_BASIS: [[f64; 6]; 3] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 1.0, 0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
];

/// Complex structure `J` (left multiplication by `i`) as a matrix acting on
/// column vectors of ℝ⁴.
pub fn complex_structure() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(1, 0)] = 1.0;
    j[(0, 1)] = -1.0;
    j[(3, 2)] = 1.0;
    j[(2, 3)] = -1.0;
    j
}

/// Real symmetric 4×4 matrix of the Hermitian form `h` (its Hermitian part
/// is used), in the coordinates `x₁, …, x₄`.
pub fn real_block(h: &Matrix2<Complex64>) -> Matrix4<f64> {
    let mut g = Matrix4::zeros();
    for j in 0..2 {
        for k in 0..2 {
            let a = 0.5 * (h[(j, k)].re + h[(k, j)].re);
            let b = 0.5 * (h[(j, k)].im - h[(k, j)].im);
            g[(2 * j, 2 * k)] = a;
            g[(2 * j + 1, 2 * k + 1)] = a;
            g[(2 * j, 2 * k + 1)] = b;
            g[(2 * j + 1, 2 * k)] = -b;
        }
    }
    g
}

/// Real 2-form `(i/2) Σ h_{jk̄} dz_j ∧ dz̄_k` for a Hermitian matrix `h`.
pub fn hermitian_form(h: &Matrix2<Complex64>) -> [f64; 6] {
    let w = complex_structure().transpose() * real_block(h);
    let mut out = [0.0; 6];
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        out[k] = w[(a, b)];
    }
    out
}

/// A Kähler metric at one point, given by the Hermitian matrix `g_{jk̄}` in
/// the convention `ω = (i/2) Σ g_{jk̄} dz_j ∧ dz̄_k`, so the flat metric is the
/// identity and the Riemannian metric is `Σ g_{jk̄} dz_j dz̄_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointMetric {
    pub h: Matrix2<Complex64>,
    riem: Matrix4<f64>,
    inv: Matrix4<f64>,
    sqrt_det: f64,
    /// Coframe change `dx = N θ` to an oriented orthonormal coframe.
    frame: Matrix4<f64>,
}

impl PointMetric {
    pub fn flat() -> Self {
        Self::from_hermitian(Matrix2::identity()).expect("identity is positive")
    }

    /// Metric with eigenvalue `lambda_r` along `z` and `lambda_t` on its
    /// complex-orthogonal complement (the U(2)-invariant form at `z`).
    pub fn radial(lambda_r: f64, lambda_t: f64, z: [Complex64; 2]) -> Result<Self> {
        let s = z[0].norm_sqr() + z[1].norm_sqr();
        let mut h = Matrix2::identity() * Complex64::new(lambda_t, 0.0);
        if s > 0.0 {
            for j in 0..2 {
                for k in 0..2 {
                    h[(j, k)] += z[j] * z[k].conj() * ((lambda_r - lambda_t) / s);
                }
            }
        } else if (lambda_r - lambda_t).abs() > 0.0 {
            h = Matrix2::identity() * Complex64::new(lambda_r, 0.0);
        }
        Self::from_hermitian(h)
    }

    pub fn from_hermitian(h: Matrix2<Complex64>) -> Result<Self> {
        let g = real_block(&h);
        let chol = nalgebra::Cholesky::new(g).ok_or(Error::Degenerate {
            index: 0,
            value: g.symmetric_eigenvalues().min(),
        })?;
        let l = chol.l();
        let sqrt_det = l.diagonal().iter().product::<f64>();
        let frame = l.transpose().try_inverse().ok_or(Error::Degenerate { index: 0, value: 0.0 })?;
        let inv = chol.inverse();
        Ok(PointMetric { h, riem: g, inv, sqrt_det, frame })
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_hermitian(self.h * Complex64::new(c, 0.0))
    }

    pub fn riemannian(&self) -> &Matrix4<f64> {
        &self.riem
    }

    /// Volume density relative to `dx₁∧dx₂∧dx₃∧dx₄`.
    pub fn volume_density(&self) -> f64 {
        self.sqrt_det
    }

    pub fn det_hermitian(&self) -> f64 {
        (self.h[(0, 0)] * self.h[(1, 1)] - self.h[(0, 1)] * self.h[(1, 0)]).re
    }

    /// Kähler form `ω(u,v) = g(Ju, v)` as real components.
    pub fn omega(&self) -> [f64; 6] {
        hermitian_form(&self.h)
    }

    pub fn to_orthonormal(&self, f: &TwoForm) -> TwoForm {
        f.transform(&self.frame)
    }

    /// Pairing inner product `½ Σ g^{μα} g^{νβ} (F_{μν}, G_{αβ})`.
    pub fn inner(&self, f: &TwoForm, g: &TwoForm) -> f64 {
        let mut acc = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                if mu == nu {
                    continue;
                }
                let fq = f.get(mu, nu);
                for al in 0..4 {
                    for be in 0..4 {
                        if al == be {
                            continue;
                        }
                        let c = self.inv[(mu, al)] * self.inv[(nu, be)];
                        if c != 0.0 {
                            acc += c * fq.pairing(g.get(al, be));
                        }
                    }
                }
            }
        }
        0.5 * acc
    }

    pub fn norm_sqr(&self, f: &TwoForm) -> f64 {
        self.inner(f, f)
    }

    /// `ΛF = ⟨F, ω⟩` (Lie algebra valued), normalized so that `Λω = 2`.
    pub fn lambda(&self, f: &TwoForm) -> Quaternion {
        let om = self.omega();
        let mut acc = ZERO;
        for mu in 0..4 {
            for nu in 0..4 {
                if mu == nu {
                    continue;
                }
                let fq = f.get(mu, nu);
                for al in 0..4 {
                    for be in 0..4 {
                        if al == be {
                            continue;
                        }
                        let c = self.inv[(mu, al)] * self.inv[(nu, be)];
                        if c == 0.0 {
                            continue;
                        }
                        let (i, s) = pair_index(al, be);
                        acc += fq.scale(0.5 * c * s * om[i]);
                    }
                }
            }
        }
        acc
    }

    /// `Λ²(F∧F) = 2 (F∧F) / vol` with the pairing `(ξ,η) = −tr(ξη)`.
    pub fn lambda2_wedge(&self, f: &TwoForm) -> f64 {
        2.0 * (-f.wedge_self().trace()) / self.sqrt_det
    }

    /// Self-dual part of `F` in an orthonormal coframe, three components.
    pub fn self_dual_parts(&self, f: &TwoForm) -> [Quaternion; 3] {
        let e = self.to_orthonormal(f);
        [
            (e.c[0] + e.c[5]).scale(0.5),
            (e.c[1] - e.c[4]).scale(0.5),
            (e.c[2] + e.c[3]).scale(0.5),
        ]
    }

    /// `|F⁺|²` for the pairing norm.
    pub fn self_dual_norm_sqr(&self, f: &TwoForm) -> f64 {
        // Each unit self-dual basis form has norm² 2 with coefficient ½(…).
        self.self_dual_parts(f).iter().map(|q| 2.0 * q.pairing(*q)).sum()
    }

    pub fn anti_self_dual_norm_sqr(&self, f: &TwoForm) -> f64 {
        let e = self.to_orthonormal(f);
        let parts = [
            (e.c[0] - e.c[5]).scale(0.5),
            (e.c[1] + e.c[4]).scale(0.5),
            (e.c[2] - e.c[3]).scale(0.5),
        ];
        parts.iter().map(|q| 2.0 * q.pairing(*q)).sum()
    }

    /// J-anti-invariant part `½(F − F(J·,J·))`, i.e. the real form carrying
    /// the (2,0)+(0,2) components.
    pub fn anti_invariant_part(&self, f: &TwoForm) -> TwoForm {
        let j = complex_structure();
        let mut out = TwoForm::ZERO;
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            // F(Je_a, Je_b) = Σ J_{μa} J_{νb} F_{μν}
            let mut acc = ZERO;
            for mu in 0..4 {
                for nu in 0..4 {
                    if mu == nu {
                        continue;
                    }
                    let c = j[(mu, a)] * j[(nu, b)];
                    if c != 0.0 {
                        acc += f.get(mu, nu).scale(c);
                    }
                }
            }
            out.c[k] = (f.c[k] - acc).scale(0.5);
        }
        out
    }

    /// Hermitian norm `|F^{0,2}|²`, half the norm of the real
    /// (2,0)+(0,2) part.
    pub fn f02_norm_sqr(&self, f: &TwoForm) -> f64 {
        0.5 * self.norm_sqr(&self.anti_invariant_part(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{I, J, K};

    #[test]
    fn flat_omega_and_lambda() {
        let m = PointMetric::flat();
        assert_eq!(m.omega(), OMEGA0);
        let w = TwoForm::from_real(&OMEGA0, I);
        let l = m.lambda(&w);
        assert!((l - I.scale(2.0)).max_abs() < 1e-15);
    }

    #[test]
    fn asd_basis_has_zero_lambda_and_self_dual_part() {
        let m = PointMetric::flat();
        for (b, q) in ASD_BASIS.iter().zip([I, J, K]) {
            let f = TwoForm::from_real(b, q);
            assert!(m.lambda(&f).max_abs() < 1e-15);
            assert!(m.self_dual_norm_sqr(&f) < 1e-30);
            assert!((m.norm_sqr(&f) - 2.0 * 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn radial_metric_on_ray_is_diagonal() {
        let z = [Complex64::new(0.7, 0.0), Complex64::new(0.0, 0.0)];
        let m = PointMetric::radial(2.0, 3.0, z).unwrap();
        let g = m.riemannian();
        assert!((g[(0, 0)] - 2.0).abs() < 1e-15 && (g[(1, 1)] - 2.0).abs() < 1e-15);
        assert!((g[(2, 2)] - 3.0).abs() < 1e-15 && (g[(3, 3)] - 3.0).abs() < 1e-15);
        let om = m.omega();
        assert!((om[0] - 2.0).abs() < 1e-15 && (om[5] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn wedge_of_asd_is_minus_norm() {
        let m = PointMetric::flat();
        let f = TwoForm::from_real(&ASD_BASIS[1], J) + TwoForm::from_real(&ASD_BASIS[0], K * 0.3);
        let pair = -f.wedge_self().trace();
        assert!((pair + m.norm_sqr(&f)).abs() < 1e-13);
    }
}
