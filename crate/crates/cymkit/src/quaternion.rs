//! Real quaternions `w + x i + y j + z k`.
//!
//! ℝ⁴ is identified with ℍ through `x = x₁ + x₂ i + x₃ j + x₄ k`, and the
//! complex structure is left multiplication by `i`, so `z₁ = x₁ + i x₂`,
//! `z₂ = x₃ + i x₄` and `x = z₁ + z₂ j`.

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

/// Coordinate basis `e_μ` of ℍ = ℝ⁴.
pub const BASIS: [Quaternion; 4] = [ONE, I, J, K];

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn imaginary(x: f64, y: f64, z: f64) -> Self {
        Quaternion::new(0.0, x, y, z)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> Self {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(s * self.w, s * self.x, s * self.y, s * self.z)
    }

    pub fn inverse(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// Commutator `pq − qp`.
    pub fn commutator(self, q: Self) -> Self {
        self * q - q * self
    }

    /// Trace of the image in the fundamental 2×2 complex representation.
    pub fn trace(self) -> f64 {
        2.0 * self.w
    }

    /// Ad-invariant pairing `(ξ, η) = −tr(ξη)`; equals `2 Re(ξ η̄)` and is
    /// positive definite on imaginary quaternions.
    pub fn pairing(self, other: Self) -> f64 {
        -(self * other).trace()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit quaternion from an axis (need not be normalized) and angle.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (s, c) = (0.5 * angle).sin_cos();
        Quaternion::new(c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign<f64> for Quaternion {
    fn mul_assign(&mut self, s: f64) {
        *self = self.scale(s);
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        assert_eq!(I * I, -ONE);
        assert_eq!(J * J, -ONE);
        assert_eq!(K * K, -ONE);
        assert_eq!(I * J, K);
        assert_eq!(J * K, I);
        assert_eq!(K * I, J);
        assert_eq!(I * J * K, -ONE);
    }

    #[test]
    fn pairing_is_twice_euclidean_on_imaginary() {
        let a = Quaternion::imaginary(0.3, -1.2, 0.7);
        let b = Quaternion::imaginary(-0.5, 0.1, 2.0);
        assert!((a.pairing(b) - 2.0 * a.dot(b)).abs() < 1e-15);
        assert!((a.pairing(a) - 2.0 * a.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn rotation_is_unit() {
        let q = Quaternion::rotation([1.0, 2.0, -0.5], 0.7);
        assert!((q.norm() - 1.0).abs() < 1e-15);
    }
}
