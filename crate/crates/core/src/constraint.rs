//! Dirac constrained analysis of the reduced first-order Lagrangians.
//!
//! A reduced Lagrangian has the form `L0 = a_i(x) xdot_i - E_const`, which
//! forces the primary constraints `phi_i = p_i - a_i(x) = 0`. The Poisson
//! brackets of the constraints form the antisymmetric matrix
//!
//! ```text
//!   C_ij(x) = d_i a_j - d_j a_i
//! ```
//!
//! Uniform (inside-branch) coupling terms contribute `q B / c` to `C_12`;
//! AB-type tails and constant fields contribute nothing, no matter how large
//! their flux. When `C_12` is nonzero and uniform over the region the system
//! is second class and the coordinates acquire the Dirac bracket
//! `{x_1, x_2}_D = 1 / C_12`; when `C` vanishes identically the inverse does
//! not exist and no quantum dynamics can be established there.

use crate::error::{CoreError, Result};
use crate::field::{FieldConfiguration, GaugePrimitive};
use crate::geometry::Vector2;
use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

/// One additive contribution to the velocity-coupling field g(x); the
/// Lagrangian coefficient field is a(x) = -sum of terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CouplingTerm {
    /// g = half_scale * eps . (x - about); half_scale = qB/(2c).
    Uniform {
        about: Vector2,
        half_scale: f64,
        omega_ref: f64,
    },
    /// g = kappa * eps . (x - center) / rho^2; kappa = q B a^2 / (2c).
    AbTail {
        center: Vector2,
        kappa: f64,
        omega_ref: f64,
    },
    /// Branch selected per evaluation point: uniform inside the disk,
    /// AB tail outside.
    Branching {
        center: Vector2,
        radius: f64,
        half_scale: f64,
        omega_ref: f64,
    },
    /// A constant vector field (the gradient of a linear gauge function).
    ConstantField { g: Vector2 },
}

impl CouplingTerm {
    /// Uniform term from a primitive, gauge-shifted so that the potential is
    /// centered `about` the given point (usually the origin).
    pub fn uniform_from(prim: &GaugePrimitive, about: Vector2, k: &crate::field::PhysicalConstants) -> Self {
        CouplingTerm::Uniform {
            about,
            half_scale: k.q * prim.b / (2.0 * k.c),
            omega_ref: k.omega(prim.b).abs(),
        }
    }

    /// AB-tail (outside-branch) term from a primitive.
    pub fn ab_tail_from(prim: &GaugePrimitive, k: &crate::field::PhysicalConstants) -> Self {
        CouplingTerm::AbTail {
            center: prim.center,
            kappa: k.q * prim.b * prim.radius * prim.radius / (2.0 * k.c),
            omega_ref: k.omega(prim.b).abs(),
        }
    }

    /// Branch-per-point term from a primitive.
    pub fn branching_from(prim: &GaugePrimitive, k: &crate::field::PhysicalConstants) -> Self {
        CouplingTerm::Branching {
            center: prim.center,
            radius: prim.radius,
            half_scale: k.q * prim.b / (2.0 * k.c),
            omega_ref: k.omega(prim.b).abs(),
        }
    }

    /// The coupling field g at `p`.
    pub fn g_at(&self, p: Vector2) -> Vector2 {
        match *self {
            CouplingTerm::Uniform { about, half_scale, .. } => (p - about).eps_dot() * half_scale,
            CouplingTerm::AbTail { center, kappa, .. } => {
                let r = p - center;
                r.eps_dot() * (kappa / r.norm_sq())
            }
            CouplingTerm::Branching {
                center,
                radius,
                half_scale,
                ..
            } => {
                let r = p - center;
                if r.norm() < radius {
                    r.eps_dot() * half_scale
                } else {
                    r.eps_dot() * (half_scale * radius * radius / r.norm_sq())
                }
            }
            CouplingTerm::ConstantField { g } => g,
        }
    }

    /// Contribution to C_12 = d1 a2 - d2 a1 with a = -g. Uniform coverage
    /// contributes 2 * half_scale = qB/c; curl-free terms contribute zero.
    fn c12_at(&self, p: Vector2) -> f64 {
        match *self {
            CouplingTerm::Uniform { half_scale, .. } => 2.0 * half_scale,
            CouplingTerm::AbTail { .. } | CouplingTerm::ConstantField { .. } => 0.0,
            CouplingTerm::Branching {
                center,
                radius,
                half_scale,
                ..
            } => {
                if (p - center).norm() < radius {
                    2.0 * half_scale
                } else {
                    0.0
                }
            }
        }
    }

    fn omega_ref(&self) -> f64 {
        match *self {
            CouplingTerm::Uniform { omega_ref, .. }
            | CouplingTerm::AbTail { omega_ref, .. }
            | CouplingTerm::Branching { omega_ref, .. } => omega_ref,
            CouplingTerm::ConstantField { .. } => 0.0,
        }
    }

    /// Short formula for reports and assembly metadata.
    pub fn describe(&self) -> String {
        match *self {
            CouplingTerm::Uniform { about, half_scale, .. } => format!(
                "{half_scale} * eps_ij (x - ({}, {}))_j",
                about.x1, about.x2
            ),
            CouplingTerm::AbTail { center, kappa, .. } => format!(
                "{kappa} * eps_ij (x - ({}, {}))_j / rho^2",
                center.x1, center.x2
            ),
            CouplingTerm::Branching {
                center,
                radius,
                half_scale,
                ..
            } => format!(
                "branching(|x - ({}, {})| vs {radius}): {half_scale} * eps_ij (x - c)_j inside, \
                 tail outside",
                center.x1, center.x2
            ),
            CouplingTerm::ConstantField { g } => format!("({}, {})_i", g.x1, g.x2),
        }
    }
}

/// The domain over which a reduced Lagrangian is declared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RegionSpec {
    /// The interior of a disk (circle II).
    Disk { center: Vector2, radius: f64 },
    /// The field-free area outside every listed disk, restricted to a
    /// bounding box for sampling purposes.
    Intervening {
        exclusions: Vec<(Vector2, f64)>,
        bbox_lo: Vector2,
        bbox_hi: Vector2,
    },
}

/// Relative margin keeping samples away from branch circles.
const SAMPLE_MARGIN: f64 = 1e-3;

impl RegionSpec {
    pub fn contains(&self, p: Vector2) -> bool {
        match self {
            RegionSpec::Disk { center, radius } => (p - *center).norm() < *radius,
            RegionSpec::Intervening {
                exclusions,
                bbox_lo,
                bbox_hi,
            } => {
                p.x1 >= bbox_lo.x1
                    && p.x1 <= bbox_hi.x1
                    && p.x2 >= bbox_lo.x2
                    && p.x2 <= bbox_hi.x2
                    && exclusions.iter().all(|(c, r)| (p - *c).norm() >= *r)
            }
        }
    }

    /// Deterministic low-discrepancy sample of the region (R2 sequence,
    /// offset by the seed). Points keep a small margin from region and
    /// exclusion boundaries.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Vector2> {
        // plastic-number additive recurrence
        const PHI2: f64 = 1.324_717_957_244_746;
        let a1 = 1.0 / PHI2;
        let a2 = 1.0 / (PHI2 * PHI2);
        let start = seed.wrapping_mul(7919).wrapping_add(1);
        let unit = |k: u64| {
            let kf = k as f64;
            ((0.5 + kf * a1).fract(), (0.5 + kf * a2).fract())
        };
        let mut out = Vec::with_capacity(n);
        match self {
            RegionSpec::Disk { center, radius } => {
                let r_max = radius * (1.0 - SAMPLE_MARGIN);
                for k in 0..n as u64 {
                    let (u, v) = unit(start + k);
                    let r = r_max * u.sqrt();
                    let theta = 2.0 * std::f64::consts::PI * v;
                    out.push(*center + Vector2::new(r * theta.cos(), r * theta.sin()));
                }
            }
            RegionSpec::Intervening {
                exclusions,
                bbox_lo,
                bbox_hi,
            } => {
                let span = *bbox_hi - *bbox_lo;
                let mut k = 0u64;
                while out.len() < n {
                    let (u, v) = unit(start + k);
                    k += 1;
                    let p = *bbox_lo + Vector2::new(u * span.x1, v * span.x2);
                    let clear = exclusions
                        .iter()
                        .all(|(c, r)| (p - *c).norm() >= r * (1.0 + SAMPLE_MARGIN));
                    if clear {
                        out.push(p);
                    }
                    if k > 1_000_000 {
                        break; // degenerate geometry; caller sees too few samples
                    }
                }
            }
        }
        out
    }
}

/// Which physical reduction produced a first-order Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LagrangianProvenance {
    #[serde(rename = "reduced_circle_ii")]
    ReducedCircleII,
    #[serde(rename = "reduced_region_iii")]
    ReducedRegionIII,
}

/// A first-order Lagrangian `L0 = a_i(x) xdot_i - E_const` over a declared
/// region, with `a(x) = -g(x)` carried as a closed-form sum of primitive
/// coupling terms.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderLagrangian {
    terms: Vec<CouplingTerm>,
    e_const: f64,
    provenance: LagrangianProvenance,
    region: RegionSpec,
    gauge_shifted: bool,
    mu: f64,
}

impl FirstOrderLagrangian {
    /// The circle-II reduction: spectator inside branch with its constant
    /// gauge term removed (centered at the origin), source AB tail, and stray
    /// contributions. Strays fully covering circle II enter as gauge-shifted
    /// uniform terms; strays disjoint from it as AB tails; partial overlaps
    /// keep their branching form and will be flagged by classification.
    pub fn reduced_circle_ii(config: &FieldConfiguration) -> Result<Self> {
        Self::circle_ii_terms(config, true)
    }

    /// Same coupling content as [`Self::reduced_circle_ii`] but without the
    /// centering gauge transformation: the spectator keeps the constant term
    /// of its own inside branch. The constraint matrix is identical; the
    /// quantization entry point refuses this form.
    pub fn reduced_circle_ii_unshifted(config: &FieldConfiguration) -> Result<Self> {
        Self::circle_ii_terms(config, false)
    }

    fn circle_ii_terms(config: &FieldConfiguration, shift: bool) -> Result<Self> {
        config.validate()?;
        let k = &config.constants;
        let spect = &config.spectator;
        let mut terms = Vec::new();
        if shift {
            terms.push(CouplingTerm::uniform_from(spect, Vector2::ZERO, k));
        } else {
            terms.push(CouplingTerm::uniform_from(spect, spect.center, k));
        }
        terms.push(CouplingTerm::ab_tail_from(&config.source, k));
        for s in &config.strays {
            let d = (s.center - spect.center).norm();
            if d + spect.radius <= s.radius {
                // stray covers all of circle II: treat as another uniform
                // field, gauge-shifted the same way as the spectator
                let about = if shift { Vector2::ZERO } else { s.center };
                terms.push(CouplingTerm::uniform_from(s, about, k));
            } else if d >= s.radius + spect.radius {
                terms.push(CouplingTerm::ab_tail_from(s, k));
            } else {
                terms.push(CouplingTerm::branching_from(s, k));
            }
        }
        let omega_eff = k.omega(config.total_field_at(config.receiver_point()));
        Ok(FirstOrderLagrangian {
            terms,
            e_const: k.hbar * omega_eff / 2.0,
            provenance: LagrangianProvenance::ReducedCircleII,
            region: RegionSpec::Disk {
                center: spect.center,
                radius: spect.radius,
            },
            gauge_shifted: shift,
            mu: k.mu,
        })
    }

    /// The region-III reduction: both named AB tails plus stray terms, over
    /// the field-free area outside every disk. `e_k` is the constant energy
    /// the Hamiltonian approaches; it never enters the constraint analysis.
    pub fn reduced_region_iii(config: &FieldConfiguration, e_k: f64) -> Result<Self> {
        config.validate()?;
        let k = &config.constants;
        let mut terms = vec![
            CouplingTerm::ab_tail_from(&config.source, k),
            CouplingTerm::ab_tail_from(&config.spectator, k),
        ];
        let mut exclusions = vec![
            (config.source.center, config.source.radius),
            (config.spectator.center, config.spectator.radius),
        ];
        for s in &config.strays {
            terms.push(CouplingTerm::branching_from(s, k));
            exclusions.push((s.center, s.radius));
        }
        let pad = config.source.radius.max(config.spectator.radius).max(1.0);
        let x_c = config.spectator_offset();
        let bbox_lo = Vector2::new(-config.source.radius - pad, -pad - config.source.radius.max(config.spectator.radius));
        let bbox_hi = Vector2::new(
            x_c + config.spectator.radius + pad,
            pad + config.source.radius.max(config.spectator.radius),
        );
        Ok(FirstOrderLagrangian {
            terms,
            e_const: e_k,
            provenance: LagrangianProvenance::ReducedRegionIII,
            region: RegionSpec::Intervening {
                exclusions,
                bbox_lo,
                bbox_hi,
            },
            gauge_shifted: true,
            mu: k.mu,
        })
    }

    pub fn provenance(&self) -> LagrangianProvenance {
        self.provenance
    }

    pub fn gauge_shifted(&self) -> bool {
        self.gauge_shifted
    }

    pub fn region(&self) -> &RegionSpec {
        &self.region
    }

    pub fn terms(&self) -> &[CouplingTerm] {
        &self.terms
    }

    pub fn e_const(&self) -> f64 {
        self.e_const
    }

    /// The velocity-coefficient field a(x) = -g(x).
    pub fn a_at(&self, p: Vector2) -> Vector2 {
        let mut g = Vector2::ZERO;
        for t in &self.terms {
            g = g + t.g_at(p);
        }
        -g
    }

    /// Closed-form C_12(p).
    pub fn c12_closed(&self, p: Vector2) -> f64 {
        self.terms.iter().map(|t| t.c12_at(p)).sum()
    }

    /// Largest cyclotron-frequency scale among the coupling terms; sets the
    /// degeneracy tolerance.
    pub fn omega_scale(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.omega_ref())
            .fold(0.0, f64::max)
    }

    /// |C_12| below this counts as zero. The region-III vanishing is exact,
    /// so any nonzero residual above rounding flags a geometry bug.
    pub fn degeneracy_tolerance(&self) -> f64 {
        1e-10 * self.mu * self.omega_scale().max(1.0)
    }

    fn nearest_term_center_distance(&self, p: Vector2) -> f64 {
        self.terms
            .iter()
            .filter_map(|t| match *t {
                CouplingTerm::AbTail { center, .. } => Some((p - center).norm()),
                CouplingTerm::Branching { center, .. } => Some((p - center).norm()),
                CouplingTerm::Uniform { .. } | CouplingTerm::ConstantField { .. } => None,
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn fd_step(&self, p: Vector2) -> f64 {
        let rho = self.nearest_term_center_distance(p);
        let base = if rho.is_finite() { rho } else { 1.0 };
        1e-4 * base.clamp(0.05, 100.0)
    }

    /// True when a centered FD stencil of step h at p stays on one branch of
    /// every branching term.
    fn fd_stencil_clear(&self, p: Vector2, h: f64) -> bool {
        self.terms.iter().all(|t| match *t {
            CouplingTerm::Branching { center, radius, .. } => {
                ((p - center).norm() - radius).abs() > 8.0 * h
            }
            _ => true,
        })
    }

    /// Central-difference C_12 = d1 a2 - d2 a1.
    pub fn c12_finite_difference(&self, p: Vector2, h: f64) -> f64 {
        let e1 = Vector2::new(h, 0.0);
        let e2 = Vector2::new(0.0, h);
        let d1_a2 = (self.a_at(p + e1).x2 - self.a_at(p - e1).x2) / (2.0 * h);
        let d2_a1 = (self.a_at(p + e2).x1 - self.a_at(p - e2).x1) / (2.0 * h);
        d1_a2 - d2_a1
    }

    /// Human-readable constraint formulas phi_i = p_i + (terms).
    pub fn constraint_description(&self) -> Vec<String> {
        let body = self
            .terms
            .iter()
            .map(|t| t.describe())
            .collect::<Vec<_>>()
            .join(" + ");
        vec![format!("phi_i = p_i + {body} = 0")]
    }
}

/// Canonical momenta forced by the first-order Lagrangian: p_i = a_i(x).
pub fn canonical_momenta(lagr: &FirstOrderLagrangian, p: Vector2) -> Result<Vector2> {
    if !lagr.region.contains(p) {
        return Err(CoreError::InvalidInput(format!(
            "point ({}, {}) is outside the Lagrangian's declared region",
            p.x1, p.x2
        )));
    }
    if lagr.nearest_term_center_distance(p) < 1e-12 {
        return Err(CoreError::SingularPoint(format!(
            "({}, {}) coincides with an AB-tail center",
            p.x1, p.x2
        )));
    }
    Ok(lagr.a_at(p))
}

/// Constraint matrix C_ij(p), closed form cross-checked against central
/// finite differences (the FD check is skipped within a few stencil widths
/// of a branch circle, where plain differencing is not meaningful).
pub fn constraint_matrix(lagr: &FirstOrderLagrangian, p: Vector2) -> Result<Matrix2<f64>> {
    if !lagr.region.contains(p) {
        return Err(CoreError::InvalidInput(format!(
            "point ({}, {}) is outside the Lagrangian's declared region",
            p.x1, p.x2
        )));
    }
    let closed = lagr.c12_closed(p);
    let h = lagr.fd_step(p);
    if lagr.fd_stencil_clear(p, h) {
        let fd = lagr.c12_finite_difference(p, h);
        let scale = (lagr.mu * lagr.omega_scale()).max(closed.abs()).max(1e-30);
        if (closed - fd).abs() > 1e-6 * scale {
            return Err(CoreError::InternalConsistency(format!(
                "closed-form C_12 = {closed} disagrees with finite differences {fd} at \
                 ({}, {})",
                p.x1, p.x2
            )));
        }
    }
    Ok(Matrix2::new(0.0, closed, -closed, 0.0))
}

/// Classification outcome of the constraint matrix over a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    SecondClass,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SecondaryStatus {
    /// Second-class constraints: consistency generates nothing further.
    NoneRequired,
    /// Degenerate constraints: the chain is recorded, not constructed.
    DegenerateChainNote { note: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C12Sample {
    pub point: Vector2,
    pub c12: f64,
}

/// Result of Dirac analysis of a reduced Lagrangian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub provenance: LagrangianProvenance,
    pub gauge_shifted: bool,
    pub mu: f64,
    pub constraint_description: Vec<String>,
    pub classification: Classification,
    /// Mean of C_12 over the samples (zero when degenerate).
    pub c12_mean: f64,
    pub c12_min_abs: f64,
    pub c12_max_abs: f64,
    pub degeneracy_tolerance: f64,
    /// {x_1, x_2}_D = 1 / C_12; present iff second class.
    pub dirac_x1_x2: Option<f64>,
    pub secondary_status: SecondaryStatus,
    pub samples: Vec<C12Sample>,
}

const DEGENERATE_NOTE: &str = "the constraint matrix vanishes identically, so its inverse and \
the Dirac brackets cannot be defined: there is no way to establish dynamics at the quantum \
mechanical level in this region. No secondary-constraint chain is constructed; the only stated \
candidate references a confinement frequency that is undefined for this free region, and a \
constant reduced Hamiltonian has vanishing brackets with the primary constraints anyway.";

/// Classifies a reduced Lagrangian over explicit region samples.
///
/// Requires at least 16 in-region samples. Returns `SecondClass` when
/// |C_12| clears the degeneracy tolerance at every sample (and is uniform, as
/// the closed-form construction guarantees for non-overlapping geometry),
/// `Degenerate` when it vanishes everywhere, and an ambiguous-region error
/// for mixed signatures, which means the declared region straddles a field
/// boundary and must be refined.
pub fn classify(lagr: &FirstOrderLagrangian, samples: &[Vector2]) -> Result<ConstraintReport> {
    if samples.len() < 16 {
        return Err(CoreError::InvalidInput(format!(
            "classification requires at least 16 region samples, got {}",
            samples.len()
        )));
    }
    for p in samples {
        if !lagr.region.contains(*p) {
            return Err(CoreError::InvalidInput(format!(
                "sample ({}, {}) lies outside the declared region",
                p.x1, p.x2
            )));
        }
    }

    let tol = lagr.degeneracy_tolerance();
    let mut values = Vec::with_capacity(samples.len());
    for &p in samples {
        // closed form; FD cross-check where the stencil is clean
        let h = lagr.fd_step(p);
        let closed = lagr.c12_closed(p);
        if lagr.fd_stencil_clear(p, h) {
            let fd = lagr.c12_finite_difference(p, h);
            let scale = (lagr.mu * lagr.omega_scale()).max(closed.abs()).max(1e-30);
            if (closed - fd).abs() > 1e-6 * scale {
                return Err(CoreError::InternalConsistency(format!(
                    "closed-form C_12 = {closed} vs finite differences {fd} at ({}, {})",
                    p.x1, p.x2
                )));
            }
        }
        values.push(C12Sample { point: p, c12: closed });
    }

    let n_zero = values.iter().filter(|s| s.c12.abs() <= tol).count();
    let (min_abs, max_abs) = values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
        (lo.min(s.c12.abs()), hi.max(s.c12.abs()))
    });

    let classification = if n_zero == values.len() {
        Classification::Degenerate
    } else if n_zero == 0 {
        // uniformity: a single Dirac bracket must describe the whole region
        let mean = values.iter().map(|s| s.c12).sum::<f64>() / values.len() as f64;
        let spread = values
            .iter()
            .map(|s| (s.c12 - mean).abs())
            .fold(0.0, f64::max);
        if spread > 1e-9 * max_abs {
            return Err(CoreError::AmbiguousRegion(format!(
                "C_12 is nonzero but varies over the sampled region \
                 (spread {spread}, mean {mean}); refine the region"
            )));
        }
        Classification::SecondClass
    } else {
        return Err(CoreError::AmbiguousRegion(format!(
            "mixed constraint signature: {} of {} samples have vanishing C_12; \
             the declared region straddles a field boundary and must be refined",
            n_zero,
            values.len()
        )));
    };

    let c12_mean = match classification {
        Classification::SecondClass => {
            values.iter().map(|s| s.c12).sum::<f64>() / values.len() as f64
        }
        Classification::Degenerate => 0.0,
    };

    Ok(ConstraintReport {
        provenance: lagr.provenance,
        gauge_shifted: lagr.gauge_shifted,
        mu: lagr.mu,
        constraint_description: lagr.constraint_description(),
        classification,
        c12_mean,
        c12_min_abs: min_abs,
        c12_max_abs: max_abs,
        degeneracy_tolerance: tol,
        dirac_x1_x2: match classification {
            Classification::SecondClass => Some(1.0 / c12_mean),
            Classification::Degenerate => None,
        },
        secondary_status: match classification {
            Classification::SecondClass => SecondaryStatus::NoneRequired,
            Classification::Degenerate => SecondaryStatus::DegenerateChainNote {
                note: DEGENERATE_NOTE.to_string(),
            },
        },
        samples: values,
    })
}

/// Classifies using the Lagrangian's own deterministic region sampler.
pub fn classify_default(lagr: &FirstOrderLagrangian, n_samples: usize, seed: u64) -> Result<ConstraintReport> {
    let samples = lagr.region.sample(n_samples.max(16), seed);
    classify(lagr, &samples)
}

/// The coordinate Dirac bracket {x_1, x_2}_D = 1/(mu omega_c) of a
/// second-class report. Calling this on a degenerate report is a contract
/// violation.
pub fn dirac_bracket_coordinates(report: &ConstraintReport) -> Result<f64> {
    match report.classification {
        Classification::SecondClass => Ok(report
            .dirac_x1_x2
            .expect("second-class report carries a Dirac bracket")),
        Classification::Degenerate => Err(CoreError::DegenerateRefusal(
            "Dirac brackets are undefined for a degenerate constraint matrix".into(),
        )),
    }
}

impl ConstraintReport {
    /// {q, p}_D for the canonical pair q = x_1, p = mu omega_c x_2.
    pub fn canonical_pair_bracket(&self) -> Result<f64> {
        let dirac = dirac_bracket_coordinates(self)?;
        Ok(self.c12_mean * dirac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PhysicalConstants, ReceiverRegion};

    fn demo_config(b_c: f64) -> FieldConfiguration {
        FieldConfiguration::new(
            PhysicalConstants::default(),
            GaugePrimitive::new(Vector2::ZERO, 1.0, 2.0 / std::f64::consts::PI).unwrap(),
            GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, b_c).unwrap(),
            vec![],
            ReceiverRegion::InsideSpectator,
        )
        .unwrap()
    }

    #[test]
    fn circle_ii_momenta_hand_value() {
        // mu = omega_c = 1, source with mu omega_0 a0^2 / 2 = alpha = 0.3:
        // at (5, 0): p_1 = 0, p_2 = 2.5 + alpha/5
        let alpha = 0.3;
        let b0 = 2.0 * alpha; // mu omega_0 a0^2 / 2 = alpha with a0 = 1 natural units
        let config = FieldConfiguration::new(
            PhysicalConstants::default(),
            GaugePrimitive::new(Vector2::ZERO, 1.0, b0).unwrap(),
            GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, 1.0).unwrap(),
            vec![],
            ReceiverRegion::InsideSpectator,
        )
        .unwrap();
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        let p = canonical_momenta(&lagr, Vector2::new(5.0, 0.0)).unwrap();
        assert!((p.x1 - 0.0).abs() < 1e-15);
        assert!((p.x2 - (2.5 + alpha / 5.0)).abs() < 1e-15);
    }

    #[test]
    fn zero_field_momenta_vanish() {
        let config = FieldConfiguration::new(
            PhysicalConstants::default(),
            GaugePrimitive::new(Vector2::ZERO, 1.0, 0.0).unwrap(),
            GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, 0.0).unwrap(),
            vec![],
            ReceiverRegion::InsideSpectator,
        )
        .unwrap();
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        for p in lagr.region().sample(8, 3) {
            assert_eq!(canonical_momenta(&lagr, p).unwrap(), Vector2::ZERO);
        }
    }

    #[test]
    fn region_iii_momenta_sum_of_tails() {
        let config = demo_config(1.0);
        let lagr = FirstOrderLagrangian::reduced_region_iii(&config, 0.0).unwrap();
        let p = Vector2::new(2.5, 0.0); // equidistant from both centers
        let got = canonical_momenta(&lagr, p).unwrap();
        // hand evaluation: a = -(kappa0 eps.x/rho0^2 + kappa_c eps.(x-xc)/rho_c^2)
        let k = PhysicalConstants::default();
        let kap0 = k.q * config.source.b * 1.0 / (2.0 * k.c);
        let kapc = k.q * config.spectator.b * 1.0 / (2.0 * k.c);
        let expect = -((p.eps_dot() * (kap0 / p.norm_sq()))
            + ((p - config.spectator.center).eps_dot()
                * (kapc / (p - config.spectator.center).norm_sq())));
        assert!((got - expect).norm() < 1e-15);
    }

    #[test]
    fn constraint_matrix_uniform_value() {
        // mu = 1, omega_c = 2 -> C_12 = 2 everywhere inside
        let config = demo_config(2.0);
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        for p in lagr.region().sample(32, 0) {
            let c = constraint_matrix(&lagr, p).unwrap();
            assert!((c[(0, 1)] - 2.0).abs() < 1e-12);
            assert_eq!(c[(0, 1)], -c[(1, 0)]);
            assert_eq!(c[(0, 0)], 0.0);
            assert_eq!(c[(1, 1)], 0.0);
        }
    }

    #[test]
    fn region_iii_matrix_vanishes() {
        let config = demo_config(1.0);
        let lagr = FirstOrderLagrangian::reduced_region_iii(&config, 0.0).unwrap();
        for p in lagr.region().sample(32, 1) {
            let c = constraint_matrix(&lagr, p).unwrap();
            assert_eq!(c[(0, 1)], 0.0);
        }
    }

    #[test]
    fn ab_strays_leave_matrix_unchanged() {
        let base = demo_config(1.0);
        let mut with_stray = base.clone();
        with_stray.strays.push(
            GaugePrimitive::new(Vector2::new(2.5, 2.5), 0.5, 0.8).unwrap(),
        );
        let l0 = FirstOrderLagrangian::reduced_circle_ii(&base).unwrap();
        let l1 = FirstOrderLagrangian::reduced_circle_ii(&with_stray).unwrap();
        for p in l0.region().sample(64, 5) {
            assert_eq!(l0.c12_closed(p), l1.c12_closed(p));
        }
    }

    #[test]
    fn classify_circle_ii_second_class() {
        let config = demo_config(1.0);
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        let report = classify_default(&lagr, 64, 0).unwrap();
        assert_eq!(report.classification, Classification::SecondClass);
        assert!((dirac_bracket_coordinates(&report).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(report.secondary_status, SecondaryStatus::NoneRequired);
    }

    #[test]
    fn classify_region_iii_degenerate() {
        let config = demo_config(1.0);
        let lagr = FirstOrderLagrangian::reduced_region_iii(&config, 0.0).unwrap();
        let report = classify_default(&lagr, 64, 0).unwrap();
        assert_eq!(report.classification, Classification::Degenerate);
        assert!(report.dirac_x1_x2.is_none());
        assert!(matches!(
            report.secondary_status,
            SecondaryStatus::DegenerateChainNote { .. }
        ));
        assert!(dirac_bracket_coordinates(&report).is_err());
    }

    #[test]
    fn dirac_bracket_scaling() {
        // omega_c = 4 -> 1/(mu omega_c) = 0.25
        let config = demo_config(4.0);
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        let report = classify_default(&lagr, 32, 0).unwrap();
        assert!((dirac_bracket_coordinates(&report).unwrap() - 0.25).abs() < 1e-14);

        // mu = 2, omega_c = 5 -> 0.1
        let constants = PhysicalConstants::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let config = FieldConfiguration::new(
            constants,
            GaugePrimitive::new(Vector2::ZERO, 1.0, 0.0).unwrap(),
            GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, 10.0).unwrap(),
            vec![],
            ReceiverRegion::InsideSpectator,
        )
        .unwrap();
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        let report = classify_default(&lagr, 32, 0).unwrap();
        assert!((dirac_bracket_coordinates(&report).unwrap() - 0.1).abs() < 1e-14);
    }

    #[test]
    fn classify_mixed_region_is_ambiguous() {
        // stray half-covering circle II
        let mut config = demo_config(1.0);
        config.strays.push(
            GaugePrimitive::new(Vector2::new(5.0, 1.0), 1.0, 0.5).unwrap(),
        );
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        let err = classify_default(&lagr, 64, 0).unwrap_err();
        assert!(matches!(err, CoreError::AmbiguousRegion(_)));
    }

    #[test]
    fn classify_requires_enough_samples() {
        let config = demo_config(1.0);
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config).unwrap();
        let samples = lagr.region().sample(8, 0);
        assert!(classify(&lagr, &samples).is_err());
    }

    #[test]
    fn momenta_rejected_at_tail_center() {
        let config = demo_config(1.0);
        let lagr = FirstOrderLagrangian::reduced_region_iii(&config, 0.0).unwrap();
        // the source center is excluded from the region anyway; use a point
        // outside the region to check the region guard as well
        assert!(canonical_momenta(&lagr, Vector2::new(0.0, 0.0)).is_err());
    }
}
