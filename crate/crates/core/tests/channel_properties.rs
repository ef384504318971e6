//! Channel invariants: exact noise immunity of the decoded observable, live
//! noise on the energy readout, the blind area, determinism, and causality.

use abflux_core::channel::{
    encode, transmit, ChannelOpts, FluxAlphabet, NoiseModel, StraySite, SymbolVerdict,
};
use abflux_core::field::{FieldConfiguration, GaugePrimitive, PhysicalConstants, ReceiverRegion};
use abflux_core::geometry::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn config(receiver: ReceiverRegion) -> FieldConfiguration {
    FieldConfiguration::new(
        PhysicalConstants::default(),
        GaugePrimitive::new(Vector2::ZERO, 1.0, 0.0).unwrap(),
        GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, 1.0).unwrap(),
        vec![],
        receiver,
    )
    .unwrap()
}

fn noise() -> NoiseModel {
    NoiseModel {
        sites: vec![
            StraySite {
                center: Vector2::new(5.0, 0.0),
                radius: 2.0,
                max_delta_b: 0.05,
            },
            StraySite {
                center: Vector2::new(2.5, 2.5),
                radius: 0.5,
                max_delta_b: 0.1,
            },
        ],
    }
}

fn random_message(n: usize, arity: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0..arity)).collect()
}

#[test]
fn per_frame_j_matches_flux_law() {
    let alphabet = FluxAlphabet::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let schedule = encode(&random_message(500, 4, 31), &alphabet).unwrap();
    let report = transmit(
        &schedule,
        &config(ReceiverRegion::InsideSpectator),
        &noise(),
        &ChannelOpts::new(77, 5.0),
    )
    .unwrap();
    assert_eq!(report.symbol_error_rate, 0.0);
    for f in &report.frames {
        let j = f.j_readout.unwrap();
        let law = f.flux / (2.0 * PI); // q Phi / (2 pi c), natural units
        assert!((j - law).abs() <= 2.0 * f64::EPSILON * law.abs().max(1.0));
    }
}

#[test]
fn blind_area_for_any_schedule_and_seed() {
    let alphabet = FluxAlphabet::new(vec![0.0, 2.0, 5.0]).unwrap();
    for seed in [0u64, 9, 123456] {
        let schedule = encode(&random_message(64, 3, seed), &alphabet).unwrap();
        let report = transmit(
            &schedule,
            &config(ReceiverRegion::InterveningRegion),
            &noise(),
            &ChannelOpts::new(seed, 2.0),
        )
        .unwrap();
        assert!(report.blind_area);
        assert!(report
            .frames
            .iter()
            .all(|f| f.symbol_out == SymbolVerdict::NoSignal));
    }
}

#[test]
fn reports_bitwise_deterministic() {
    let alphabet = FluxAlphabet::new(vec![0.0, 1.0]).unwrap();
    let schedule = encode(&random_message(300, 2, 5), &alphabet).unwrap();
    let run = || {
        let report = transmit(
            &schedule,
            &config(ReceiverRegion::InsideSpectator),
            &noise(),
            &ChannelOpts::new(999, 5.0),
        )
        .unwrap();
        serde_json::to_string(&report).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn arrival_bookkeeping() {
    let alphabet = FluxAlphabet::new(vec![0.0, 1.0]).unwrap();
    let schedule = encode(&[0, 1, 0, 1], &alphabet).unwrap();
    let mut opts = ChannelOpts::new(1, 3.0);
    opts.observe_until = Some(4.5); // frames 0 (t=3) and 1 (t=4) have arrived
    let report = transmit(
        &schedule,
        &config(ReceiverRegion::InsideSpectator),
        &NoiseModel::none(),
        &opts,
    )
    .unwrap();
    assert_eq!(report.frames[0].symbol_out, SymbolVerdict::Decoded(0));
    assert_eq!(report.frames[1].symbol_out, SymbolVerdict::Decoded(1));
    assert_eq!(report.frames[2].symbol_out, SymbolVerdict::NotYetArrived);
    assert_eq!(report.frames[3].symbol_out, SymbolVerdict::NotYetArrived);
    for f in &report.frames {
        assert_eq!(f.arrival_time, f.emit_time + 3.0);
    }
}

#[test]
fn noise_visible_in_energy_not_in_j() {
    let alphabet = FluxAlphabet::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let schedule = encode(&random_message(1000, 4, 8), &alphabet).unwrap();
    let report = transmit(
        &schedule,
        &config(ReceiverRegion::InsideSpectator),
        &noise(),
        &ChannelOpts::new(4242, 5.0),
    )
    .unwrap();
    assert!(report.e0_jitter_stddev > 0.0);
    assert_eq!(report.j_readout_variance_per_symbol, 0.0);
    assert!(report.noise_applied);
}
