//! Plane vectors and the antisymmetric-symbol convention.
//!
//! Everything in the crate works in the (x1, x2) plane with eps_12 = +1,
//! so cross(u, v) = u1*v2 - u2*v1 and (eps . v)_i = eps_ij v_j = (v2, -v1).

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vector2 {
    pub x1: f64,
    pub x2: f64,
}

impl Vector2 {
    pub const ZERO: Vector2 = Vector2 { x1: 0.0, x2: 0.0 };

    pub fn new(x1: f64, x2: f64) -> Self {
        Vector2 { x1, x2 }
    }

    pub fn dot(self, rhs: Vector2) -> f64 {
        self.x1 * rhs.x1 + self.x2 * rhs.x2
    }

    /// u1*v2 - u2*v1 (z-component of the 3D cross product).
    pub fn cross(self, rhs: Vector2) -> f64 {
        self.x1 * rhs.x2 - self.x2 * rhs.x1
    }

    /// eps_ij v_j with eps_12 = +1, i.e. (v2, -v1).
    pub fn eps_dot(self) -> Vector2 {
        Vector2::new(self.x2, -self.x1)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }
}

impl Add for Vector2 {
    type Output = Vector2;
    fn add(self, rhs: Vector2) -> Vector2 {
        Vector2::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for Vector2 {
    type Output = Vector2;
    fn sub(self, rhs: Vector2) -> Vector2 {
        Vector2::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl Mul<f64> for Vector2 {
    type Output = Vector2;
    fn mul(self, s: f64) -> Vector2 {
        Vector2::new(self.x1 * s, self.x2 * s)
    }
}

impl Neg for Vector2 {
    type Output = Vector2;
    fn neg(self) -> Vector2 {
        Vector2::new(-self.x1, -self.x2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_convention() {
        // eps_12 = +1: (eps . e1) = -e2 direction flipped into second slot
        let e1 = Vector2::new(1.0, 0.0);
        let e2 = Vector2::new(0.0, 1.0);
        assert_eq!(e1.eps_dot(), Vector2::new(0.0, -1.0));
        assert_eq!(e2.eps_dot(), Vector2::new(1.0, 0.0));
        assert_eq!(e1.cross(e2), 1.0);
        assert_eq!(e2.cross(e1), -1.0);
    }
}
