//! Constraint-engine invariants: antisymmetry, closed-form vs numeric
//! agreement, flux immunity of the constraint matrix, and the commutator
//! correspondence.

use abflux_core::constraint::{
    classify_default, constraint_matrix, FirstOrderLagrangian,
};
use abflux_core::field::{FieldConfiguration, GaugePrimitive, PhysicalConstants, ReceiverRegion};
use abflux_core::geometry::Vector2;

fn config(b0: f64, b_c: f64) -> FieldConfiguration {
    FieldConfiguration::new(
        PhysicalConstants::default(),
        GaugePrimitive::new(Vector2::ZERO, 1.0, b0).unwrap(),
        GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, b_c).unwrap(),
        vec![],
        ReceiverRegion::InsideSpectator,
    )
    .unwrap()
}

#[test]
fn antisymmetry_and_fd_agreement_on_many_points() {
    let cfg = config(0.7, 1.3);
    let lagr2 = FirstOrderLagrangian::reduced_circle_ii(&cfg).unwrap();
    let lagr3 = FirstOrderLagrangian::reduced_region_iii(&cfg, 0.0).unwrap();
    let scale = cfg.constants.mu * cfg.constants.omega(cfg.spectator.b);
    for (lagr, expect) in [(&lagr2, scale), (&lagr3, 0.0)] {
        for p in lagr.region().sample(500, 11) {
            let c = constraint_matrix(lagr, p).unwrap(); // includes the FD cross-check
            assert_eq!(c[(0, 0)], 0.0);
            assert_eq!(c[(1, 1)], 0.0);
            assert_eq!(c[(0, 1)], -c[(1, 0)]);
            assert!((c[(0, 1)] - expect).abs() <= 1e-12 * scale.max(1.0));
            let fd = lagr.c12_finite_difference(p, 1e-4);
            assert!((c[(0, 1)] - fd).abs() <= 1e-6 * scale.max(1.0));
        }
    }
}

#[test]
fn constraint_matrix_immune_to_source_flux() {
    // replacing Phi_0 by any other value leaves C_12 unchanged everywhere
    let base = config(0.0, 1.0);
    let lagr_base = FirstOrderLagrangian::reduced_circle_ii(&base).unwrap();
    let points = lagr_base.region().sample(200, 13);
    let reference: Vec<f64> = points.iter().map(|&p| lagr_base.c12_closed(p)).collect();
    for b0 in [0.5, -3.0, 10.0, 1e6] {
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&config(b0, 1.0)).unwrap();
        for (p, r) in points.iter().zip(&reference) {
            assert_eq!(lagr.c12_closed(*p), *r);
        }
    }
}

#[test]
fn commutator_correspondence() {
    // hbar C_12 equals the mechanical-momentum commutator coefficient
    // hbar mu omega_c in circle II and zero in region III
    let cfg = config(2.0 / std::f64::consts::PI, 2.5);
    let k = &cfg.constants;
    let lagr2 = FirstOrderLagrangian::reduced_circle_ii(&cfg).unwrap();
    let report = classify_default(&lagr2, 64, 0).unwrap();
    let commutator_coeff = k.hbar * k.mu * k.omega(cfg.spectator.b);
    assert!((k.hbar * report.c12_mean - commutator_coeff).abs() < 1e-12 * commutator_coeff);

    let lagr3 = FirstOrderLagrangian::reduced_region_iii(&cfg, 0.0).unwrap();
    let report3 = classify_default(&lagr3, 64, 0).unwrap();
    assert_eq!(k.hbar * report3.c12_mean, 0.0);
}

#[test]
fn shifted_and_unshifted_gauges_agree_on_constraints() {
    // the centering gauge transformation changes the momenta by a constant
    // but not the constraint matrix or the classification
    let cfg = config(1.0, 1.7);
    let shifted = FirstOrderLagrangian::reduced_circle_ii(&cfg).unwrap();
    let unshifted = FirstOrderLagrangian::reduced_circle_ii_unshifted(&cfg).unwrap();
    for p in shifted.region().sample(100, 17) {
        assert_eq!(shifted.c12_closed(p), unshifted.c12_closed(p));
    }
    let r1 = classify_default(&shifted, 64, 0).unwrap();
    let r2 = classify_default(&unshifted, 64, 0).unwrap();
    assert_eq!(r1.classification, r2.classification);
    assert_eq!(r1.dirac_x1_x2, r2.dirac_x1_x2);
    assert!(r1.gauge_shifted);
    assert!(!r2.gauge_shifted);
}

#[test]
fn report_serialization_roundtrip() {
    let cfg = config(1.0, 1.0);
    let lagr = FirstOrderLagrangian::reduced_circle_ii(&cfg).unwrap();
    let report = classify_default(&lagr, 32, 0).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let back: abflux_core::constraint::ConstraintReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report, back);
}
