//! Curvature of the equivariant connection family and the radial operator
//! `L(α, φ, a)` evaluated on analytic jets.
//!
//! The connection is the basic instanton of size `1/λ` modified by the
//! complex gauge `exp(f(t))` in the direction of `i`. Along the ray
//! `(r, 0, 0, 0)`, with `s = r²`, its curvature is
//!
//! ```text
//! F = i (a₁ dx₁₂ + a₂ dx₃₄) + j b (dx₁₃ + dx₂₄) + k b (dx₁₄ − dx₂₃).
//! ```

use crate::dual::Scalar;
use crate::forms::TwoForm;
use crate::quaternion::{Quaternion, I, J, K};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug)]
pub struct Curvature<T> {
    pub a1: T,
    pub a2: T,
    pub b: T,
}

/// Curvature coefficients from `f`, `f_t`, `f_tt` at `s = e^t`.
pub fn curvature<T: Scalar>(lam2: f64, s: f64, f: T, ft: T, ftt: T) -> Curvature<T> {
    let d = lam2 + s;
    let q = lam2 / (d * d);
    let a1 = ftt * (-2.0 / s) + 2.0 * q;
    let a2 = (((f * 2.0).exp_m1() * lam2 - s) * q - ft) * (2.0 / s);
    let ef = f.exp();
    let b = ef * (2.0 * q) - ef * ft * (2.0 * lam2 / (s * d));
    Curvature { a1, a2, b }
}

impl<T: Scalar> Curvature<T> {
    /// Coefficient of `i` in `ΛF` for metric eigenvalues `λ_r`, `λ_t`.
    pub fn lambda(&self, lr: T, lt: T) -> T {
        self.a1 / lr + self.a2 / lt
    }

    /// `tr(F∧F)` against `dx₁₂₃₄`.
    pub fn trace_density(&self) -> T {
        self.b * self.b * 8.0 - self.a1 * self.a2 * 4.0
    }
}

impl Curvature<f64> {
    pub fn two_form(&self) -> TwoForm {
        let mut f = TwoForm::ZERO;
        f.set(0, 1, I.scale(self.a1));
        f.set(2, 3, I.scale(self.a2));
        f.set(0, 2, J.scale(self.b));
        f.set(1, 3, J.scale(self.b));
        f.set(0, 3, K.scale(self.b));
        f.set(1, 2, K.scale(-self.b));
        f
    }
}

/// Riemannian scalar curvature from the `t`-jets `φ_t … φ_tttt` of the
/// potential perturbation (total potential `s + φ`).
pub fn scalar_from_jets(t: f64, p: [f64; 4]) -> f64 {
    let s = t.exp();
    let u = s + p[0];
    let psi = s + p[1];
    let q = (p[2] - p[1]) / psi;
    -4.0 * (2.0 * q / u + ((p[3] - p[1]) / psi - 2.0 * q - q * q) / psi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

/// Sum of Gaussians in `t` with exact derivatives.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub bumps: Vec<Bump>,
}

impl Profile {
    pub fn zero() -> Self {
        Profile::default()
    }

    pub fn bump(amplitude: f64, center: f64, width: f64) -> Self {
        Profile { bumps: vec![Bump { amplitude, center, width }] }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let bumps = self.bumps.iter().map(|b| Bump { amplitude: b.amplitude * c, ..*b }).collect();
        Profile { bumps }
    }

    /// Value and first four derivatives at `t`.
    pub fn jet(&self, t: f64) -> [f64; 5] {
        let mut out = [0.0; 5];
        for b in &self.bumps {
            let x = (t - b.center) / b.width;
            let g = b.amplitude * (-x * x).exp();
            let x2 = x * x;
            let h = [1.0, -2.0 * x, 4.0 * x2 - 2.0, -8.0 * x2 * x + 12.0 * x, 16.0 * x2 * x2 - 48.0 * x2 + 12.0];
            let mut w = 1.0;
            for k in 0..5 {
                out[k] += g * h[k] / w;
                w *= b.width;
            }
        }
        out
    }
}

/// The two components of `L`: the scalar equation
/// `S + α tr(F∧F)/vol − c` and the coefficient of `i` in `ΛF`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialResidual {
    pub t: Vec<f64>,
    pub scalar: Vec<f64>,
    pub hermitian: Vec<f64>,
}

/// Pointwise data of a radial pair at one `t`.
#[derive(Clone, Copy, Debug)]
pub struct RadialPoint {
    pub s: f64,
    pub lambda_r: f64,
    pub lambda_t: f64,
    pub scalar: f64,
    pub curvature: Curvature<f64>,
}

impl RadialPoint {
    pub fn from_jets(lam2: f64, t: f64, phi: &Profile, a: &Profile) -> Self {
        let s = t.exp();
        let p = phi.jet(t);
        let f = a.jet(t);
        RadialPoint {
            s,
            lambda_r: 1.0 + p[2] / s,
            lambda_t: 1.0 + p[1] / s,
            scalar: scalar_from_jets(t, [p[1], p[2], p[3], p[4]]),
            curvature: curvature(lam2, s, f[0], f[1], f[2]),
        }
    }

    pub fn scalar_equation(&self, alpha: f64, c: f64) -> f64 {
        self.scalar + alpha * self.curvature.trace_density() / (self.lambda_r * self.lambda_t) - c
    }

    pub fn hermitian(&self) -> f64 {
        self.curvature.lambda(self.lambda_r, self.lambda_t)
    }
}

/// `L(α, φ, a)` at the points `ts` with an explicit constant `c`.
pub fn c2_residual_with(alpha: f64, c: f64, lam2: f64, phi: &Profile, a: &Profile, ts: &[f64]) -> RadialResidual {
    let pts: Vec<RadialPoint> = ts.iter().map(|&t| RadialPoint::from_jets(lam2, t, phi, a)).collect();
    RadialResidual {
        t: ts.to_vec(),
        scalar: pts.iter().map(|p| p.scalar_equation(alpha, c)).collect(),
        hermitian: pts.iter().map(|p| p.hermitian()).collect(),
    }
}

/// `L(α, φ, a)` with the constant `α·8π²k`.
pub fn c2_residual(alpha: f64, k: u32, lam2: f64, phi: &Profile, a: &Profile, ts: &[f64]) -> RadialResidual {
    let c = alpha * 8.0 * std::f64::consts::PI.powi(2) * k as f64;
    c2_residual_with(alpha, c, lam2, phi, a, ts)
}

/// Derivative of `L(0, ·, ·)` at the flat metric and the undeformed
/// instanton of size² `1/lam2`:
/// `δS = −(4/s²)(φ'''' − φ'')` and
/// `δΛF = (2/s)(−f'' − f' + 2λ⁴f/(λ²+s)²) − 2λ²(φ'' − φ')/(s(λ²+s)²)`.
pub fn linearization_apply(lam2: f64, phi: &Profile, a: &Profile, ts: &[f64]) -> RadialResidual {
    let mut scalar = Vec::with_capacity(ts.len());
    let mut hermitian = Vec::with_capacity(ts.len());
    for &t in ts {
        let s = t.exp();
        let p = phi.jet(t);
        let f = a.jet(t);
        let d = lam2 + s;
        scalar.push(-4.0 * (p[4] - p[2]) / (s * s));
        let gauge = (2.0 / s) * (-f[2] - f[1] + 2.0 * lam2 * lam2 * f[0] / (d * d));
        let metric = -2.0 * lam2 * (p[2] - p[1]) / (s * d * d);
        hermitian.push(gauge + metric);
    }
    RadialResidual { t: ts.to_vec(), scalar, hermitian }
}

/// Lie algebra value of the hermitian component.
pub fn hermitian_value(x: f64) -> Quaternion {
    I.scale(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::PointMetric;
    use crate::gauge::basic_curvature;
    use num::complex::Complex64;

    #[test]
    fn undeformed_curvature_is_the_basic_instanton() {
        for r in [0.3, 1.0, 2.5] {
            let c = curvature(1.0, r * r, 0.0, 0.0, 0.0);
            let f = c.two_form();
            let g = basic_curvature(Quaternion::new(r, 0.0, 0.0, 0.0));
            for k in 0..6 {
                assert!((f.c[k] - g.c[k]).max_abs() < 1e-14, "r={r} k={k}");
            }
        }
    }

    #[test]
    fn reduced_contractions_match_forms() {
        let c = curvature(0.7, 1.3, 0.2, -0.1, 0.4);
        let f = c.two_form();
        let (lr, lt) = (1.2, 0.9);
        let z = [Complex64::new(1.3f64.sqrt(), 0.0), Complex64::new(0.0, 0.0)];
        let m = PointMetric::radial(lr, lt, z).unwrap();
        let l = m.lambda(&f);
        assert!((l - I.scale(c.lambda(lr, lt))).max_abs() < 1e-13);
        let d = m.lambda2_wedge(&f);
        assert!((d + 2.0 * c.trace_density() / (lr * lt)).abs() < 1e-12);
        assert!(m.f02_norm_sqr(&f) < 1e-24);
    }

    #[test]
    fn seed_is_a_zero_of_l() {
        let ts: Vec<f64> = (0..50).map(|i| -6.0 + 0.25 * i as f64).collect();
        let r = c2_residual(0.0, 1, 1.0, &Profile::zero(), &Profile::zero(), &ts);
        assert!(r.scalar.iter().all(|v| *v == 0.0));
        assert!(r.hermitian.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn gaussian_jets_match_differences() {
        let p = Profile { bumps: vec![Bump { amplitude: 0.3, center: 0.5, width: 0.8 }, Bump { amplitude: -0.1, center: -1.0, width: 1.5 }] };
        let h = 1e-4;
        for t in [-1.0, 0.2, 1.7] {
            let j = p.jet(t);
            let (a, b) = (p.jet(t + h), p.jet(t - h));
            for k in 0..4 {
                let fd = (a[k] - b[k]) / (2.0 * h);
                assert!((fd - j[k + 1]).abs() < 1e-6, "order {k} at {t}");
            }
        }
    }
}
