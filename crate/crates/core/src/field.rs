//! Piecewise gauge-potential geometry: flux-carrying disks and their
//! vector potentials.
//!
//! A `GaugePrimitive` is a uniform magnetic field B along z concentrated in a
//! disk of radius a around a center c. Its vector potential is
//!
//! ```text
//!   inside  (rho <  a):  A_i = -B eps_ij (x_j - c_j) / 2
//!   outside (rho >= a):  A_i = -B a^2 eps_ij (x_j - c_j) / (2 rho^2)
//! ```
//!
//! with rho = |x - c| and eps_12 = +1. The two branches agree on the circle.
//! The outside branch is curl-free but carries the full enclosed flux
//! Phi = pi a^2 B in its loop integral, which is what makes it an AB-type
//! potential.
//!
//! The minimal-coupling field used by the dynamics modules is
//! g_i(x) = -(q/c) A_i(x), so that the mechanical momentum is K_i = p_i + g_i.

use crate::error::{CoreError, Result};
use crate::geometry::Vector2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Physical constants of the model. Defaults to natural units
/// hbar = c = mu = q = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub mu: f64,
    pub q: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: 1.0,
            c: 1.0,
            mu: 1.0,
            q: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, c: f64, mu: f64, q: f64) -> Result<Self> {
        let k = PhysicalConstants { hbar, c, mu, q };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("c", self.c),
            ("mu", self.mu),
            ("q", self.q),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CoreError::ConfigInvariant(format!(
                    "constant {name} must be a strictly positive real, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Cyclotron frequency omega = q B / (mu c) for a field strength B.
    pub fn omega(&self, b: f64) -> f64 {
        self.q * b / (self.mu * self.c)
    }

    /// Magnetic length (hbar c / (q |B|))^(1/2).
    pub fn magnetic_length(&self, b: f64) -> f64 {
        (self.hbar * self.c / (self.q * b.abs())).sqrt()
    }
}

/// One source of vector potential: a uniform-field disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugePrimitive {
    pub center: Vector2,
    pub radius: f64,
    pub b: f64,
}

impl GaugePrimitive {
    pub fn new(center: Vector2, radius: f64, b: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || !b.is_finite() {
            return Err(CoreError::InvalidInput(
                "gauge primitive fields must be finite".into(),
            ));
        }
        if radius <= 0.0 {
            return Err(CoreError::ConfigInvariant(format!(
                "gauge primitive radius must be positive, got {radius}"
            )));
        }
        Ok(GaugePrimitive { center, radius, b })
    }

    /// True when `p` is in the interior of the disk. Points exactly on the
    /// circle use the outside branch (rho >= a convention).
    pub fn is_inside(&self, p: Vector2) -> bool {
        (p - self.center).norm() < self.radius
    }

    /// Vector potential at `p`, selecting the branch by distance.
    pub fn vector_potential_at(&self, p: Vector2) -> Result<Vector2> {
        if !p.is_finite() {
            return Err(CoreError::InvalidInput(
                "potential evaluation point must be finite".into(),
            ));
        }
        let r = p - self.center;
        let rho_sq = r.norm_sq();
        Ok(if rho_sq.sqrt() < self.radius {
            r.eps_dot() * (-self.b / 2.0)
        } else {
            r.eps_dot() * (-self.b * self.radius * self.radius / (2.0 * rho_sq))
        })
    }

    /// Magnetic field along z at `p`: B inside the disk, 0 outside.
    pub fn magnetic_field_at(&self, p: Vector2) -> f64 {
        if self.is_inside(p) {
            self.b
        } else {
            0.0
        }
    }

    /// Total flux carried by the disk, Phi = pi a^2 B.
    pub fn flux(&self) -> f64 {
        PI * self.radius * self.radius * self.b
    }

    /// Gauge transformation removing the constant term of the inside-branch
    /// potential, chi = -B eps_ij x_i center_j / 2. See [`GaugeShift`].
    pub fn gauge_shift_to_center(&self) -> GaugeShift {
        GaugeShift {
            b: self.b,
            original_center: self.center,
        }
    }
}

/// Result of gauging away the constant term of an inside-branch potential.
///
/// The inside branch about a center c splits as
/// `A_in(x) = A_centered(x) + const` with `A_centered(x) = -B eps . x / 2`
/// (about the origin) and `const = B (eps . c) / 2 = -grad chi` where
/// `chi = -B eps_ij x_i c_j / 2`. Adding grad chi to the original potential
/// leaves exactly the centered form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeShift {
    pub b: f64,
    pub original_center: Vector2,
}

impl GaugeShift {
    /// The centered inside-branch potential -B eps . x / 2.
    pub fn shifted_potential_at(&self, p: Vector2) -> Vector2 {
        p.eps_dot() * (-self.b / 2.0)
    }

    /// grad chi = (-B c_2 / 2, B c_1 / 2), a constant vector field.
    pub fn grad_chi(&self) -> Vector2 {
        Vector2::new(
            -self.b * self.original_center.x2 / 2.0,
            self.b * self.original_center.x1 / 2.0,
        )
    }

    /// chi(p) = -B (p_1 c_2 - p_2 c_1) / 2.
    pub fn chi_at(&self, p: Vector2) -> f64 {
        -self.b * p.cross(self.original_center) / 2.0
    }

    /// Reconstructs the original inside-branch potential from the shifted
    /// form: shifted - grad chi.
    pub fn reconstruct_original_at(&self, p: Vector2) -> Vector2 {
        self.shifted_potential_at(p) - self.grad_chi()
    }
}

/// Which region the receiving particle is confined to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReceiverRegion {
    /// Inside circle II, where the spectator field enables reduced dynamics.
    InsideSpectator,
    /// Region III between the disks, where the constraint matrix degenerates.
    InterveningRegion,
}

/// The world model: source disk (circle I) at the origin, spectator disk
/// (circle II) at (x_C, 0), optional stray disks, physical constants, and
/// the receiver location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldConfiguration {
    pub constants: PhysicalConstants,
    pub source: GaugePrimitive,
    pub spectator: GaugePrimitive,
    pub strays: Vec<GaugePrimitive>,
    pub receiver_region: ReceiverRegion,
}

impl FieldConfiguration {
    pub fn new(
        constants: PhysicalConstants,
        source: GaugePrimitive,
        spectator: GaugePrimitive,
        strays: Vec<GaugePrimitive>,
        receiver_region: ReceiverRegion,
    ) -> Result<Self> {
        let config = FieldConfiguration {
            constants,
            source,
            spectator,
            strays,
            receiver_region,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        if self.source.center != Vector2::ZERO {
            return Err(CoreError::ConfigInvariant(
                "source disk (circle I) must be centered at the origin".into(),
            ));
        }
        if self.spectator.center.x2 != 0.0 {
            return Err(CoreError::ConfigInvariant(
                "spectator disk (circle II) must be centered on the x1 axis".into(),
            ));
        }
        let x_c = self.spectator.center.x1;
        if x_c <= self.source.radius + self.spectator.radius {
            return Err(CoreError::ConfigInvariant(format!(
                "disks must be disjoint: x_C = {x_c} must exceed a_0 + a_c = {}",
                self.source.radius + self.spectator.radius
            )));
        }
        for (i, s) in self.strays.iter().enumerate() {
            if s.center == self.source.center && s.radius == self.source.radius {
                return Err(CoreError::ConfigInvariant(format!(
                    "stray {i} replicates the source disk geometry; stray potentials must \
                     not be of the source's AB type"
                )));
            }
        }
        Ok(())
    }

    /// Point at which the receiver reads out: the spectator center.
    pub fn receiver_point(&self) -> Vector2 {
        self.spectator.center
    }

    /// x_C, the spectator center abscissa.
    pub fn spectator_offset(&self) -> f64 {
        self.spectator.center.x1
    }

    /// All primitives in fixed order: source, spectator, strays.
    pub fn primitives(&self) -> impl Iterator<Item = &GaugePrimitive> {
        std::iter::once(&self.source)
            .chain(std::iter::once(&self.spectator))
            .chain(self.strays.iter())
    }

    /// Linear superposition of all primitive potentials at `p`.
    pub fn total_potential_at(&self, p: Vector2) -> Result<Vector2> {
        let mut a = Vector2::ZERO;
        for prim in self.primitives() {
            a = a + prim.vector_potential_at(p)?;
        }
        Ok(a)
    }

    /// Total magnetic field along z at `p`.
    pub fn total_field_at(&self, p: Vector2) -> f64 {
        self.primitives().map(|prim| prim.magnetic_field_at(p)).sum()
    }

    /// True when `p` lies in region III (outside both named disks).
    pub fn in_intervening_region(&self, p: Vector2) -> bool {
        !self.source.is_inside(p) && !self.spectator.is_inside(p)
    }

    /// Numerical loop integral of the total vector potential around a
    /// counterclockwise circle, by composite trapezoid with node doubling.
    ///
    /// `n_start` is the initial node count (clamped to at least 16); the node
    /// count doubles until the value changes by less than 1e-9 relative or
    /// 2^20 nodes are reached, in which case a numerical error is reported.
    /// The loop must not cross any primitive's boundary circle.
    pub fn loop_integral(
        &self,
        loop_center: Vector2,
        loop_radius: f64,
        n_start: usize,
    ) -> Result<f64> {
        if !loop_center.is_finite() || !loop_radius.is_finite() || loop_radius <= 0.0 {
            return Err(CoreError::InvalidInput(
                "loop center must be finite and radius positive".into(),
            ));
        }
        for prim in self.primitives() {
            // two circles share points iff |r1 - r2| <= d <= r1 + r2
            let d = (prim.center - loop_center).norm();
            let lo = (loop_radius - prim.radius).abs();
            let hi = loop_radius + prim.radius;
            let tol = 1e-12 * hi;
            if d >= lo - tol && d <= hi + tol {
                return Err(CoreError::InvalidInput(format!(
                    "loop (center ({}, {}), radius {loop_radius}) passes through a \
                     primitive boundary circle",
                    loop_center.x1, loop_center.x2
                )));
            }
        }

        let eval = |n: usize| -> Result<f64> {
            let dt = 2.0 * PI / n as f64;
            let mut sum = 0.0;
            for i in 0..n {
                let theta = i as f64 * dt;
                let (sin, cos) = theta.sin_cos();
                let p = loop_center + Vector2::new(loop_radius * cos, loop_radius * sin);
                let tangent = Vector2::new(-loop_radius * sin, loop_radius * cos);
                sum += self.total_potential_at(p)?.dot(tangent);
            }
            Ok(sum * dt)
        };

        let mut n = n_start.max(16);
        let mut prev = eval(n)?;
        while n < (1 << 20) {
            n *= 2;
            let next = eval(n)?;
            let delta = (next - prev).abs();
            if delta <= (1e-9 * next.abs()).max(1e-12) {
                return Ok(next);
            }
            prev = next;
        }
        Err(CoreError::Numerical(format!(
            "loop integral did not converge within 2^20 quadrature nodes \
             (last value {prev}); the loop likely passes too close to a boundary circle"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prim(cx: f64, cy: f64, radius: f64, b: f64) -> GaugePrimitive {
        GaugePrimitive::new(Vector2::new(cx, cy), radius, b).unwrap()
    }

    #[test]
    fn outside_branch_hand_value() {
        // unit disk, B = 1, evaluated at (2, 0): A = (0, 1/4)
        let p = prim(0.0, 0.0, 1.0, 1.0);
        let a = p.vector_potential_at(Vector2::new(2.0, 0.0)).unwrap();
        assert_eq!(a, Vector2::new(0.0, 0.25));
    }

    #[test]
    fn zero_field_everywhere() {
        let p = prim(0.0, 0.0, 1.0, 0.0);
        for q in [
            Vector2::new(0.3, -0.1),
            Vector2::new(5.0, 2.0),
            Vector2::new(-1.0, 0.0),
        ] {
            assert_eq!(p.vector_potential_at(q).unwrap(), Vector2::ZERO);
        }
    }

    #[test]
    fn branches_agree_on_circle() {
        let p = prim(0.0, 0.0, 1.0, 1.0);
        let on = Vector2::new(1.0, 0.0);
        let r = on - p.center;
        let inside = r.eps_dot() * (-p.b / 2.0);
        let outside = p.vector_potential_at(on).unwrap();
        assert_eq!(inside, outside);
    }

    #[test]
    fn field_branches() {
        let p = prim(0.0, 0.0, 1.0, 1.0);
        assert_eq!(p.magnetic_field_at(Vector2::new(0.5, 0.0)), 1.0);
        assert_eq!(p.magnetic_field_at(Vector2::new(2.0, 0.0)), 0.0);
        let p2 = prim(0.0, 0.0, 2.0, -3.0);
        assert_eq!(p2.magnetic_field_at(Vector2::ZERO), -3.0);
    }

    #[test]
    fn non_finite_point_rejected() {
        let p = prim(0.0, 0.0, 1.0, 1.0);
        assert!(p.vector_potential_at(Vector2::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn gauge_shift_values() {
        // spectator at (5, 0), B = 1: grad chi = (0, 2.5); at p = (5, 1) the
        // reconstruction is exact because all values are dyadic
        let p = prim(5.0, 0.0, 1.0, 1.0);
        let shift = p.gauge_shift_to_center();
        assert_eq!(shift.grad_chi(), Vector2::new(0.0, 2.5));
        let at = Vector2::new(5.0, 1.0);
        let original = (at - p.center).eps_dot() * (-p.b / 2.0);
        assert_eq!(shift.reconstruct_original_at(at), original);
    }

    #[test]
    fn gauge_shift_centered_is_identity() {
        let p = prim(0.0, 0.0, 1.0, 2.0);
        let shift = p.gauge_shift_to_center();
        assert_eq!(shift.grad_chi(), Vector2::ZERO);
        let at = Vector2::new(0.25, -0.5);
        assert_eq!(
            shift.shifted_potential_at(at),
            p.vector_potential_at(at).unwrap()
        );
    }

    #[test]
    fn gauge_shift_zero_field() {
        let p = prim(5.0, 0.0, 1.0, 0.0);
        let shift = p.gauge_shift_to_center();
        assert_eq!(shift.grad_chi(), Vector2::ZERO);
        assert_eq!(shift.shifted_potential_at(Vector2::new(5.0, 1.0)), Vector2::ZERO);
        assert_eq!(shift.chi_at(Vector2::new(5.0, 1.0)), 0.0);
    }

    #[test]
    fn config_invariants_enforced() {
        let constants = PhysicalConstants::default();
        // overlapping disks rejected
        let err = FieldConfiguration::new(
            constants,
            prim(0.0, 0.0, 1.0, 1.0),
            prim(1.5, 0.0, 1.0, 1.0),
            vec![],
            ReceiverRegion::InsideSpectator,
        );
        assert!(err.is_err());
        // stray replicating the source rejected
        let err = FieldConfiguration::new(
            constants,
            prim(0.0, 0.0, 1.0, 1.0),
            prim(5.0, 0.0, 1.0, 1.0),
            vec![prim(0.0, 0.0, 1.0, 0.7)],
            ReceiverRegion::InsideSpectator,
        );
        assert!(err.is_err());
        // off-origin source rejected
        let err = FieldConfiguration::new(
            constants,
            prim(0.5, 0.0, 1.0, 1.0),
            prim(5.0, 0.0, 1.0, 1.0),
            vec![],
            ReceiverRegion::InsideSpectator,
        );
        assert!(err.is_err());
    }
}
