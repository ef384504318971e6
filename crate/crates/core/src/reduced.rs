//! The quantized reduced system of circle II.
//!
//! Substituting the constraint solutions p_i = a_i(x) into the orbital
//! angular momentum J_z = eps_ij x_i p_j splits it into a flux constant plus
//! a harmonic oscillator:
//!
//! ```text
//!   J_z = q Phi_0 / (2 pi c) + H_osc / omega_eff,
//! ```
//!
//! so the spectra are two independent ladders,
//!
//! ```text
//!   E_n = hbar omega_eff (n + 1/2),        J_n = J_AB + hbar (n + 1/2),
//! ```
//!
//! with J_AB = q Phi_0 / (2 pi c) set only by the source flux. Uniform fields
//! over circle II (spectator, covering strays) enter omega_eff and hence the
//! energies; the source AB tail enters only J_AB. That split is the whole
//! transmission mechanism.

use crate::constraint::{Classification, ConstraintReport, FirstOrderLagrangian, LagrangianProvenance};
use crate::error::{CoreError, Result};
use crate::field::{FieldConfiguration, PhysicalConstants, ReceiverRegion};
use crate::geometry::Vector2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The quantized reduced oscillator of circle II.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedSystem {
    pub constants: PhysicalConstants,
    /// Effective cyclotron frequency q B_total / (mu c), including any stray
    /// uniform field covering the receiver point.
    pub omega_eff: f64,
    /// Induced fractional angular momentum q Phi_0 / (2 pi c).
    pub j_ab: f64,
    /// The source flux that produced j_ab.
    pub source_flux: f64,
}

impl ReducedSystem {
    /// Energy ladder hbar omega_eff (n + 1/2).
    pub fn energy_ladder(&self, n: u32) -> f64 {
        self.constants.hbar * self.omega_eff * (n as f64 + 0.5)
    }

    /// Angular-momentum ladder J_AB + hbar (n + 1/2).
    pub fn angmom_ladder(&self, n: u32) -> f64 {
        self.j_ab + self.constants.hbar * (n as f64 + 0.5)
    }

    /// Ground energy hbar omega_eff / 2.
    pub fn ground_energy(&self) -> f64 {
        self.constants.hbar * self.omega_eff * 0.5
    }

    /// Zero-point angular momentum hbar/2 + J_AB.
    pub fn zero_point_j(&self) -> f64 {
        self.constants.hbar * 0.5 + self.j_ab
    }
}

/// Builds the reduced system from a field configuration and a second-class
/// constraint report for the circle-II Lagrangian.
///
/// Refuses degenerate reports (the blind area), receivers placed in the
/// intervening region, and Lagrangians whose spectator gauge constant was
/// not removed.
pub fn reduce(config: &FieldConfiguration, report: &ConstraintReport) -> Result<ReducedSystem> {
    if config.receiver_region != ReceiverRegion::InsideSpectator {
        return Err(CoreError::DegenerateRefusal(
            "receiver sits in the intervening region (the blind area); the reduced system \
             cannot be quantized there"
                .into(),
        ));
    }
    if report.classification == Classification::Degenerate {
        return Err(CoreError::DegenerateRefusal(
            "constraint report is degenerate (blind area); quantization refused".into(),
        ));
    }
    if report.provenance != LagrangianProvenance::ReducedCircleII {
        return Err(CoreError::InvalidInput(
            "reduce expects a circle-II constraint report".into(),
        ));
    }
    if !report.gauge_shifted {
        return Err(CoreError::InvalidInput(
            "the spectator's constant gauge term must be removed before reduction; \
             build the Lagrangian with the gauge-shifted spectator"
                .into(),
        ));
    }

    let k = &config.constants;
    let omega_eff = k.omega(config.total_field_at(config.receiver_point()));
    if omega_eff <= 0.0 {
        return Err(CoreError::DegenerateTrap(format!(
            "effective cyclotron frequency {omega_eff} is not positive; the reduced \
             oscillator does not exist"
        )));
    }
    // cross-check against the constraint engine's C_12 = mu omega_eff
    let expected_c12 = k.mu * omega_eff;
    if (report.c12_mean - expected_c12).abs() > 1e-9 * expected_c12.abs().max(1e-30) {
        return Err(CoreError::InternalConsistency(format!(
            "constraint matrix C_12 = {} does not match mu omega_eff = {expected_c12}",
            report.c12_mean
        )));
    }

    let flux = config.source.flux();
    Ok(ReducedSystem {
        constants: *k,
        omega_eff,
        j_ab: k.q * flux / (2.0 * PI * k.c),
        source_flux: flux,
    })
}

/// Minimum spectator-disk radius (c hbar / (q B_c))^(1/2) for the reduced
/// ground state to fit.
pub fn min_trap_radius(constants: &PhysicalConstants, b_c: f64) -> Result<f64> {
    constants.validate()?;
    if !(b_c.is_finite() && b_c > 0.0) {
        return Err(CoreError::InvalidInput(format!(
            "spectator field must be positive for a trap bound, got {b_c}"
        )));
    }
    Ok((constants.c * constants.hbar / (constants.q * b_c)).sqrt())
}

/// Applies a stray uniform field over circle II: omega_eff shifts by
/// q dB / (mu c), the energy ladder shifts with it, and J_AB is unchanged
/// bit for bit.
pub fn noise_response(system: &ReducedSystem, stray_uniform_b: f64) -> Result<ReducedSystem> {
    if !stray_uniform_b.is_finite() {
        return Err(CoreError::InvalidInput("stray field must be finite".into()));
    }
    let omega_new = system.omega_eff + system.constants.omega(stray_uniform_b);
    if omega_new <= 0.0 {
        return Err(CoreError::DegenerateTrap(format!(
            "stray field {stray_uniform_b} drives omega_eff to {omega_new}; the reduced \
             oscillator ceases to exist"
        )));
    }
    Ok(ReducedSystem {
        constants: system.constants,
        omega_eff: omega_new,
        j_ab: system.j_ab,
        source_flux: system.source_flux,
    })
}

/// Configuration warnings: currently the trap-size bound.
pub fn config_warnings(config: &FieldConfiguration) -> Vec<String> {
    let mut warnings = Vec::new();
    if config.spectator.b > 0.0 {
        if let Ok(bound) = min_trap_radius(&config.constants, config.spectator.b) {
            if config.spectator.radius < bound {
                warnings.push(format!(
                    "spectator radius a_c = {} is below the minimum trap radius \
                     (c hbar / (q B_c))^(1/2) = {bound}; the reduced ground state does \
                     not fit in circle II",
                    config.spectator.radius
                ));
            }
        }
    }
    warnings
}

/// The position-independent constant left in the reduced J_z after removing
/// the oscillator part: J_z(x) - (C_12/2) |x|^2 evaluated at `p`.
///
/// For a stray-free circle-II Lagrangian this equals mu omega_0 a_0^2 / 2 =
/// q Phi_0 / (2 pi c) at every point. Angular momentum is taken about the
/// source center (the origin).
pub fn reduced_jz_constant(lagr: &FirstOrderLagrangian, p: Vector2) -> Result<f64> {
    if lagr.provenance() != LagrangianProvenance::ReducedCircleII {
        return Err(CoreError::InvalidInput(
            "the reduced J_z constant is defined for the circle-II Lagrangian".into(),
        ));
    }
    if !lagr.gauge_shifted() {
        return Err(CoreError::InvalidInput(
            "the reduced J_z constant requires the gauge-shifted spectator".into(),
        ));
    }
    let a = crate::constraint::canonical_momenta(lagr, p)?;
    let jz = p.cross(a);
    let osc = lagr.c12_closed(p) / 2.0 * p.norm_sq();
    Ok(jz - osc)
}
