//! The flux-modulation information channel.
//!
//! Symbols are encoded as source-flux levels Phi_0(t). Each frame rebuilds
//! the world with that flux plus freshly drawn stray fields, runs the
//! constraint analysis and reduction at the receiver, and decodes the symbol
//! from J_AB = q Phi_0 / (2 pi c). Stray fields shift the receiver's energy
//! ladder (visible as E0 jitter) but never J_AB, so the symbol error rate is
//! exactly zero whenever the alphabet has positive guard spacing. A receiver
//! in the intervening region classifies as degenerate every frame and reads
//! nothing: the blind area.
//!
//! Frames draw their noise from per-frame streams of a seeded counter RNG,
//! so serial and parallel runs are bitwise identical.

use crate::constraint::{classify, Classification, FirstOrderLagrangian};
use crate::error::{CoreError, Result};
use crate::field::{FieldConfiguration, GaugePrimitive, ReceiverRegion};
use crate::geometry::Vector2;
use crate::reduced::reduce;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Number of region samples used for per-frame classification.
const CLASSIFY_SAMPLES: usize = 16;
/// Sampling seed for per-frame classification (fixed: classification of the
/// same geometry must never depend on the channel seed).
const CLASSIFY_SEED: u64 = 0;

/// An ordered set of distinct flux levels, one per symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxAlphabet {
    levels: Vec<f64>,
}

impl FluxAlphabet {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(CoreError::ConfigInvariant(
                "flux alphabet needs at least one level".into(),
            ));
        }
        if levels.iter().any(|l| !l.is_finite()) {
            return Err(CoreError::ConfigInvariant(
                "flux levels must be finite".into(),
            ));
        }
        let alphabet = FluxAlphabet { levels };
        if alphabet.guard_spacing() <= 0.0 {
            return Err(CoreError::ConfigInvariant(
                "flux levels must be strictly distinct (guard spacing > 0)".into(),
            ));
        }
        Ok(alphabet)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Minimum |Phi_i - Phi_j| over distinct pairs; infinite for a
    /// one-symbol alphabet.
    pub fn guard_spacing(&self) -> f64 {
        let mut guard = f64::INFINITY;
        for (i, a) in self.levels.iter().enumerate() {
            for b in &self.levels[i + 1..] {
                guard = guard.min((a - b).abs());
            }
        }
        guard
    }

    /// Nearest-level decoder with tolerance guard/2.
    pub fn decode(&self, flux: f64) -> Option<usize> {
        let (best, dist) = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l - flux).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        let tol = self.guard_spacing() / 2.0;
        if dist <= tol {
            Some(best)
        } else {
            None
        }
    }
}

/// A message encoded as a piecewise-constant flux schedule, one level per
/// frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxSchedule {
    pub alphabet: FluxAlphabet,
    pub symbols: Vec<usize>,
    pub fluxes: Vec<f64>,
}

/// Maps a symbol sequence onto its flux schedule.
pub fn encode(message: &[usize], alphabet: &FluxAlphabet) -> Result<FluxSchedule> {
    let mut fluxes = Vec::with_capacity(message.len());
    for &s in message {
        let flux = *alphabet.levels().get(s).ok_or_else(|| {
            CoreError::InvalidInput(format!(
                "symbol {s} is outside the {}-ary alphabet",
                alphabet.len()
            ))
        })?;
        fluxes.push(flux);
    }
    Ok(FluxSchedule {
        alphabet: alphabet.clone(),
        symbols: message.to_vec(),
        fluxes,
    })
}

/// One stray-field site: a disk whose strength is redrawn every frame from
/// the uniform distribution on [-max_delta_b, max_delta_b].
///
/// Sites should either contain the spectator disk entirely (shifting the
/// receiver's energy ladder) or stay disjoint from it; a partial overlap
/// makes the per-frame classification ambiguous and aborts the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StraySite {
    pub center: Vector2,
    pub radius: f64,
    pub max_delta_b: f64,
}

/// The stray-field noise model: a fixed set of sites with per-frame draws.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sites: Vec<StraySite>,
}

impl NoiseModel {
    pub fn none() -> Self {
        NoiseModel { sites: Vec::new() }
    }

    pub fn validate(&self, config: &FieldConfiguration) -> Result<()> {
        let mut covering_budget = 0.0;
        for (i, s) in self.sites.iter().enumerate() {
            if !(s.radius > 0.0 && s.radius.is_finite()) {
                return Err(CoreError::ConfigInvariant(format!(
                    "noise site {i}: radius must be positive"
                )));
            }
            if !(s.max_delta_b >= 0.0 && s.max_delta_b.is_finite()) {
                return Err(CoreError::ConfigInvariant(format!(
                    "noise site {i}: max_delta_b must be non-negative"
                )));
            }
            if s.center == config.source.center && s.radius == config.source.radius {
                return Err(CoreError::ConfigInvariant(format!(
                    "noise site {i} replicates the source disk geometry"
                )));
            }
            let d = (s.center - config.spectator.center).norm();
            let covers = d + config.spectator.radius <= s.radius;
            let disjoint = d >= s.radius + config.spectator.radius;
            if !covers && !disjoint {
                return Err(CoreError::ConfigInvariant(format!(
                    "noise site {i} partially overlaps circle II; make it cover the disk \
                     or keep it disjoint"
                )));
            }
            if covers {
                covering_budget += s.max_delta_b;
            }
        }
        if config.spectator.b > 0.0 && covering_budget >= config.spectator.b {
            return Err(CoreError::ConfigInvariant(format!(
                "covering noise amplitude {covering_budget} can cancel the spectator field \
                 {}; the reduced trap would collapse",
                config.spectator.b
            )));
        }
        Ok(())
    }

    fn draw(&self, seed: u64, frame: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(frame.wrapping_add(1));
        self.sites
            .iter()
            .map(|s| {
                if s.max_delta_b == 0.0 {
                    0.0
                } else {
                    rng.random_range(-s.max_delta_b..=s.max_delta_b)
                }
            })
            .collect()
    }
}

/// Channel run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelOpts {
    pub seed: u64,
    /// Propagation delay T between emission and arrival; a configuration
    /// parameter (default x_C / c), not a field solve.
    pub delay: f64,
    /// Wall-clock horizon: frames arriving after it read NotYetArrived.
    pub observe_until: Option<f64>,
}

impl ChannelOpts {
    pub fn new(seed: u64, delay: f64) -> Self {
        ChannelOpts {
            seed,
            delay,
            observe_until: None,
        }
    }
}

/// Receiver verdict for one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "symbol", rename_all = "snake_case")]
pub enum SymbolVerdict {
    Decoded(usize),
    NoSignal,
    NotYetArrived,
}

/// One transmitted symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFrame {
    pub index: usize,
    pub symbol_in: usize,
    pub flux: f64,
    pub emit_time: f64,
    pub arrival_time: f64,
    /// Drawn strengths, aligned with the noise model's sites.
    pub stray_draws: Vec<f64>,
    pub j_readout: Option<f64>,
    pub e0_readout: Option<f64>,
    pub symbol_out: SymbolVerdict,
}

/// Aggregated result of a channel run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub frames: Vec<ChannelFrame>,
    pub symbol_error_rate: f64,
    /// Max over symbols of the within-symbol variance of J readouts.
    pub j_readout_variance_per_symbol: f64,
    pub e0_jitter_stddev: f64,
    pub noise_applied: bool,
    pub blind_area: bool,
    pub alphabet: Vec<f64>,
    pub seed: u64,
    pub delay: f64,
}

fn frame_config(
    base: &FieldConfiguration,
    flux: f64,
    noise: &NoiseModel,
    draws: &[f64],
) -> Result<FieldConfiguration> {
    let b0 = flux / (PI * base.source.radius * base.source.radius);
    let mut strays = base.strays.clone();
    for (site, &db) in noise.sites.iter().zip(draws) {
        strays.push(GaugePrimitive::new(site.center, site.radius, db)?);
    }
    FieldConfiguration::new(
        base.constants,
        GaugePrimitive::new(base.source.center, base.source.radius, b0)?,
        base.spectator,
        strays,
        base.receiver_region,
    )
}

fn eval_frame(
    base: &FieldConfiguration,
    schedule: &FluxSchedule,
    noise: &NoiseModel,
    opts: &ChannelOpts,
    index: usize,
) -> Result<ChannelFrame> {
    let flux = schedule.fluxes[index];
    let emit_time = index as f64;
    let arrival_time = emit_time + opts.delay;
    let draws = noise.draw(opts.seed, index as u64);

    if arrival_time > opts.observe_until.unwrap_or(f64::INFINITY) {
        return Ok(ChannelFrame {
            index,
            symbol_in: schedule.symbols[index],
            flux,
            emit_time,
            arrival_time,
            stray_draws: draws,
            j_readout: None,
            e0_readout: None,
            symbol_out: SymbolVerdict::NotYetArrived,
        });
    }

    let world = frame_config(base, flux, noise, &draws)?;
    let (j, e0, verdict) = match world.receiver_region {
        ReceiverRegion::InsideSpectator => {
            let lagr = FirstOrderLagrangian::reduced_circle_ii(&world)?;
            let samples = lagr.region().sample(CLASSIFY_SAMPLES, CLASSIFY_SEED);
            let report = classify(&lagr, &samples)?;
            let system = reduce(&world, &report)?;
            // zero_point_J - hbar/2, taken in its exact closed form J_AB so
            // the readout is reproducible bit for bit
            let j = system.j_ab;
            let decoded = schedule
                .alphabet
                .decode(2.0 * PI * system.constants.c * j / system.constants.q);
            (
                Some(j),
                Some(system.ground_energy()),
                match decoded {
                    Some(s) => SymbolVerdict::Decoded(s),
                    None => SymbolVerdict::NoSignal,
                },
            )
        }
        ReceiverRegion::InterveningRegion => {
            let lagr = FirstOrderLagrangian::reduced_region_iii(&world, 0.0)?;
            let samples = lagr.region().sample(CLASSIFY_SAMPLES, CLASSIFY_SEED);
            let report = classify(&lagr, &samples)?;
            debug_assert_eq!(report.classification, Classification::Degenerate);
            // no Dirac quantization, no observable: nothing arrives here
            (None, None, SymbolVerdict::NoSignal)
        }
    };

    Ok(ChannelFrame {
        index,
        symbol_in: schedule.symbols[index],
        flux,
        emit_time,
        arrival_time,
        stray_draws: draws,
        j_readout: j,
        e0_readout: e0,
        symbol_out: verdict,
    })
}

/// Runs the channel: one frame per scheduled symbol, independent draws per
/// frame, deterministic for a fixed (schedule, config, noise, seed, delay)
/// regardless of thread count.
pub fn transmit(
    schedule: &FluxSchedule,
    config: &FieldConfiguration,
    noise: &NoiseModel,
    opts: &ChannelOpts,
) -> Result<ChannelReport> {
    config.validate()?;
    noise.validate(config)?;
    if !(opts.delay.is_finite() && opts.delay >= 0.0) {
        return Err(CoreError::ConfigInvariant(format!(
            "delay must be a non-negative time, got {}",
            opts.delay
        )));
    }

    let frames: Vec<ChannelFrame> = (0..schedule.fluxes.len())
        .into_par_iter()
        .map(|i| eval_frame(config, schedule, noise, opts, i))
        .collect::<Result<Vec<_>>>()?;

    let n = frames.len();
    let errors = frames
        .iter()
        .filter(|f| f.symbol_out != SymbolVerdict::Decoded(f.symbol_in))
        .count();
    let symbol_error_rate = if n == 0 { 0.0 } else { errors as f64 / n as f64 };

    // within-symbol variance of J readouts, maximized over symbols
    let mut j_variance: f64 = 0.0;
    for s in 0..schedule.alphabet.len() {
        let js: Vec<f64> = frames
            .iter()
            .filter(|f| f.symbol_in == s)
            .filter_map(|f| f.j_readout)
            .collect();
        if js.len() > 1 {
            // identical readouts must report a variance of exactly zero;
            // accumulating a mean first would smear them by rounding
            if js.iter().any(|j| j.to_bits() != js[0].to_bits()) {
                let mean = js.iter().sum::<f64>() / js.len() as f64;
                let var =
                    js.iter().map(|j| (j - mean) * (j - mean)).sum::<f64>() / js.len() as f64;
                j_variance = j_variance.max(var);
            }
        }
    }

    let e0s: Vec<f64> = frames.iter().filter_map(|f| f.e0_readout).collect();
    let e0_jitter_stddev = if e0s.len() > 1 {
        let mean = e0s.iter().sum::<f64>() / e0s.len() as f64;
        (e0s.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / e0s.len() as f64).sqrt()
    } else {
        0.0
    };

    let blind_area = config.receiver_region == ReceiverRegion::InterveningRegion;
    Ok(ChannelReport {
        frames,
        symbol_error_rate,
        j_readout_variance_per_symbol: j_variance,
        e0_jitter_stddev,
        noise_applied: noise.sites.iter().any(|s| s.max_delta_b > 0.0),
        blind_area,
        alphabet: schedule.alphabet.levels().to_vec(),
        seed: opts.seed,
        delay: opts.delay,
    })
}

/// Audit verdict for the no-energy-transmission claim.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyAudit {
    /// Max over frames and level pairs of |dE0/dPhi| at fixed noise draw.
    pub max_flux_energy_slope: f64,
    /// All recorded E0 readouts reproduced from the stray draws alone.
    pub e0_reproduced: bool,
    /// All recorded J readouts reproduced from the flux alone.
    pub j_reproduced: bool,
}

/// Verifies that the receiver energy never depends on the transmitted flux:
/// for every frame the ground energy is recomputed at the frame's recorded
/// stray draw for each alphabet level, and the slope against flux must
/// vanish. Requires a circle-II receiver run.
pub fn energy_transmission_audit(
    report: &ChannelReport,
    config: &FieldConfiguration,
    noise: &NoiseModel,
) -> Result<EnergyAudit> {
    if report.blind_area {
        return Err(CoreError::InvalidInput(
            "the energy audit applies to circle-II receiver runs".into(),
        ));
    }
    let alphabet = FluxAlphabet::new(report.alphabet.clone())?;
    let mut max_slope: f64 = 0.0;
    let mut e0_ok = true;
    let mut j_ok = true;

    let e0_at = |flux: f64, draws: &[f64]| -> Result<(f64, f64)> {
        let world = frame_config(config, flux, noise, draws)?;
        let lagr = FirstOrderLagrangian::reduced_circle_ii(&world)?;
        let samples = lagr.region().sample(CLASSIFY_SAMPLES, CLASSIFY_SEED);
        let system = reduce(&world, &classify(&lagr, &samples)?)?;
        Ok((system.ground_energy(), system.j_ab))
    };

    for frame in &report.frames {
        if frame.symbol_out == SymbolVerdict::NotYetArrived {
            continue;
        }
        let mut e0_per_level = Vec::with_capacity(alphabet.len());
        for &level in alphabet.levels() {
            let (e0, j) = e0_at(level, &frame.stray_draws)?;
            e0_per_level.push((level, e0));
            if level == frame.flux {
                e0_ok &= frame.e0_readout == Some(e0);
                j_ok &= frame.j_readout == Some(j);
            }
        }
        for (i, &(la, ea)) in e0_per_level.iter().enumerate() {
            for &(lb, eb) in &e0_per_level[i + 1..] {
                let dphi = (la - lb).abs();
                if dphi > 0.0 {
                    max_slope = max_slope.max((ea - eb).abs() / dphi);
                }
            }
        }
    }
    Ok(EnergyAudit {
        max_flux_energy_slope: max_slope,
        e0_reproduced: e0_ok,
        j_reproduced: j_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PhysicalConstants;

    fn base_config(receiver: ReceiverRegion) -> FieldConfiguration {
        FieldConfiguration::new(
            PhysicalConstants::default(),
            GaugePrimitive::new(Vector2::ZERO, 1.0, 0.0).unwrap(),
            GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, 1.0).unwrap(),
            vec![],
            receiver,
        )
        .unwrap()
    }

    fn noise_model() -> NoiseModel {
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

    #[test]
    fn encode_direct_mapping() {
        let alphabet = FluxAlphabet::new(vec![0.0, PI]).unwrap();
        let schedule = encode(&[0, 1, 0], &alphabet).unwrap();
        assert_eq!(schedule.fluxes, vec![0.0, PI, 0.0]);
        let empty = encode(&[], &alphabet).unwrap();
        assert!(empty.fluxes.is_empty());
        assert!(encode(&[2], &alphabet).is_err());
    }

    #[test]
    fn alphabet_invariants() {
        assert!(FluxAlphabet::new(vec![]).is_err());
        assert!(FluxAlphabet::new(vec![1.0, 1.0]).is_err());
        let a = FluxAlphabet::new(vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(a.guard_spacing(), 1.0);
        let single = FluxAlphabet::new(vec![PI]).unwrap();
        assert_eq!(single.guard_spacing(), f64::INFINITY);
    }

    #[test]
    fn single_symbol_readout_value() {
        // Phi = pi in natural units: J = pi / (2 pi) = 0.5
        let alphabet = FluxAlphabet::new(vec![PI]).unwrap();
        let schedule = encode(&[0], &alphabet).unwrap();
        let report = transmit(
            &schedule,
            &base_config(ReceiverRegion::InsideSpectator),
            &NoiseModel::none(),
            &ChannelOpts::new(0, 5.0),
        )
        .unwrap();
        assert_eq!(report.frames[0].j_readout, Some(0.5));
        assert_eq!(report.frames[0].symbol_out, SymbolVerdict::Decoded(0));
        assert_eq!(report.symbol_error_rate, 0.0);
    }

    #[test]
    fn noisy_run_decodes_cleanly_with_jitter() {
        let alphabet = FluxAlphabet::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let message: Vec<usize> = (0..256).map(|i| i % 4).collect();
        let schedule = encode(&message, &alphabet).unwrap();
        let report = transmit(
            &schedule,
            &base_config(ReceiverRegion::InsideSpectator),
            &noise_model(),
            &ChannelOpts::new(42, 5.0),
        )
        .unwrap();
        assert_eq!(report.symbol_error_rate, 0.0);
        assert_eq!(report.j_readout_variance_per_symbol, 0.0);
        assert!(report.e0_jitter_stddev > 0.0);
        assert!(report.noise_applied);
    }

    #[test]
    fn blind_area_never_decodes() {
        let alphabet = FluxAlphabet::new(vec![0.0, 1.0]).unwrap();
        let schedule = encode(&[0, 1, 1, 0], &alphabet).unwrap();
        let report = transmit(
            &schedule,
            &base_config(ReceiverRegion::InterveningRegion),
            &noise_model(),
            &ChannelOpts::new(7, 5.0),
        )
        .unwrap();
        assert!(report.blind_area);
        for f in &report.frames {
            assert_eq!(f.symbol_out, SymbolVerdict::NoSignal);
            assert_eq!(f.j_readout, None);
        }
    }

    #[test]
    fn causality_horizon() {
        let alphabet = FluxAlphabet::new(vec![0.0, 1.0]).unwrap();
        let schedule = encode(&[0, 1, 0], &alphabet).unwrap();
        let mut opts = ChannelOpts::new(3, 10.0);
        opts.observe_until = Some(10.5); // only frame 0 (arrival 10.0) is in
        let report = transmit(
            &schedule,
            &base_config(ReceiverRegion::InsideSpectator),
            &NoiseModel::none(),
            &opts,
        )
        .unwrap();
        assert_eq!(report.frames[0].symbol_out, SymbolVerdict::Decoded(0));
        assert_eq!(report.frames[1].symbol_out, SymbolVerdict::NotYetArrived);
        assert_eq!(report.frames[2].symbol_out, SymbolVerdict::NotYetArrived);
        for f in &report.frames {
            assert_eq!(f.arrival_time - f.emit_time, 10.0);
        }
    }

    #[test]
    fn audit_zero_slope_under_noise() {
        let alphabet = FluxAlphabet::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let message: Vec<usize> = (0..64).map(|i| (i * 7) % 4).collect();
        let schedule = encode(&message, &alphabet).unwrap();
        let config = base_config(ReceiverRegion::InsideSpectator);
        let noise = noise_model();
        let report = transmit(&schedule, &config, &noise, &ChannelOpts::new(11, 5.0)).unwrap();
        let audit = energy_transmission_audit(&report, &config, &noise).unwrap();
        assert_eq!(audit.max_flux_energy_slope, 0.0);
        assert!(audit.e0_reproduced);
        assert!(audit.j_reproduced);
    }

    #[test]
    fn strays_disabled_constant_e0() {
        let alphabet = FluxAlphabet::new(vec![0.0, 1.0]).unwrap();
        let message: Vec<usize> = (0..32).map(|i| i % 2).collect();
        let schedule = encode(&message, &alphabet).unwrap();
        let report = transmit(
            &schedule,
            &base_config(ReceiverRegion::InsideSpectator),
            &NoiseModel::none(),
            &ChannelOpts::new(0, 5.0),
        )
        .unwrap();
        let first = report.frames[0].e0_readout.unwrap();
        for f in &report.frames {
            assert_eq!(f.e0_readout, Some(first));
        }
        assert_eq!(report.e0_jitter_stddev, 0.0);
        assert!(!report.noise_applied);
    }

    #[test]
    fn noise_model_rejects_partial_overlap_and_cancellation() {
        let config = base_config(ReceiverRegion::InsideSpectator);
        let partial = NoiseModel {
            sites: vec![StraySite {
                center: Vector2::new(5.0, 1.0),
                radius: 1.0,
                max_delta_b: 0.1,
            }],
        };
        assert!(partial.validate(&config).is_err());
        let too_strong = NoiseModel {
            sites: vec![StraySite {
                center: Vector2::new(5.0, 0.0),
                radius: 2.0,
                max_delta_b: 1.5,
            }],
        };
        assert!(too_strong.validate(&config).is_err());
    }

    #[test]
    fn roundtrip_random_symbols() {
        let alphabet = FluxAlphabet::new(vec![0.0, 0.5, 1.5, 4.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let message: Vec<usize> = (0..1000).map(|_| rng.random_range(0..4)).collect();
        let schedule = encode(&message, &alphabet).unwrap();
        for (i, &f) in schedule.fluxes.iter().enumerate() {
            assert_eq!(alphabet.decode(f), Some(message[i]));
        }
    }
}
