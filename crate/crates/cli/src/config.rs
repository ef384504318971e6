//! The JSON run-configuration schema and its mapping onto core types.

use abflux_core::channel::{ChannelOpts, FluxAlphabet, NoiseModel, StraySite};
use abflux_core::field::{FieldConfiguration, GaugePrimitive, PhysicalConstants, ReceiverRegion};
use abflux_core::geometry::Vector2;
use abflux_core::lab::LevelRule;
use abflux_core::{CoreError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub constants: ConstantsSpec,
    pub source: SourceSpec,
    pub spectator: SpectatorSpec,
    #[serde(default)]
    pub strays: Vec<DiskSpec>,
    pub receiver_region: ReceiverRegion,
    /// Seed for the deterministic region sampling used by `analyze`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub channel: Option<ChannelSpec>,
    /// Default output destination; the --out and --format flags override.
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<String>,
    /// "json" or "csv".
    #[serde(default)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSpec {
    pub hbar: f64,
    pub c: f64,
    pub mu: f64,
    pub q: f64,
}

impl Default for ConstantsSpec {
    fn default() -> Self {
        ConstantsSpec {
            hbar: 1.0,
            c: 1.0,
            mu: 1.0,
            q: 1.0,
        }
    }
}

/// Circle I; always centered at the origin.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub radius: f64,
    pub b_field: f64,
}

/// Circle II; centered at (x_c, 0).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectatorSpec {
    pub x_c: f64,
    pub radius: f64,
    pub b_field: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub b_field: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Coarsest grid spacing of the convergence protocol.
    pub spacing: f64,
    #[serde(default = "default_refinements")]
    pub refinements: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default)]
    pub level_rule: LevelRuleSpec,
    #[serde(default = "default_eig_tol")]
    pub eig_tol: f64,
    /// Residual tolerance for the gauge-invariance probe; much tighter than
    /// the level study so the reported deviation is solver-limited.
    #[serde(default = "default_gauge_eig_tol")]
    pub gauge_eig_tol: f64,
}

fn default_refinements() -> usize {
    2
}

fn default_levels() -> usize {
    3
}

fn default_eig_tol() -> f64 {
    1e-3
}

fn default_gauge_eig_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRuleSpec {
    /// Landau bulk indexing when the spectator carries at least two flux
    /// quanta, plain otherwise.
    #[default]
    Auto,
    Plain,
    Landau,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub alphabet: Vec<f64>,
    /// Explicit symbol sequence; mutually exclusive with message_length.
    #[serde(default)]
    pub message: Option<Vec<usize>>,
    /// Generate this many uniform random symbols from message_seed.
    #[serde(default)]
    pub message_length: Option<usize>,
    #[serde(default)]
    pub message_seed: u64,
    pub seed: u64,
    /// Propagation delay T; defaults to x_C / c.
    #[serde(default)]
    pub delay: Option<f64>,
    #[serde(default)]
    pub observe_until: Option<f64>,
    #[serde(default)]
    pub noise: NoiseSpec,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub sites: Vec<SiteSpec>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub max_delta_b: f64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)
            .map_err(|e| CoreError::ConfigInvariant(format!("config parse error: {e}")))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CoreError::ConfigInvariant(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        // re-check the world invariants eagerly so bad geometry fails at load
        config.field_configuration()?;
        Ok(config)
    }

    pub fn constants(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(
            self.constants.hbar,
            self.constants.c,
            self.constants.mu,
            self.constants.q,
        )
    }

    pub fn field_configuration(&self) -> Result<FieldConfiguration> {
        let constants = self.constants()?;
        let source = GaugePrimitive::new(Vector2::ZERO, self.source.radius, self.source.b_field)?;
        let spectator = GaugePrimitive::new(
            Vector2::new(self.spectator.x_c, 0.0),
            self.spectator.radius,
            self.spectator.b_field,
        )?;
        let strays = self
            .strays
            .iter()
            .map(|s| GaugePrimitive::new(Vector2::new(s.center[0], s.center[1]), s.radius, s.b_field))
            .collect::<Result<Vec<_>>>()?;
        FieldConfiguration::new(constants, source, spectator, strays, self.receiver_region)
    }

    pub fn level_rule(&self, config: &FieldConfiguration) -> LevelRule {
        let spec = self.grid.map(|g| g.level_rule).unwrap_or_default();
        match spec {
            LevelRuleSpec::Plain => LevelRule::Plain,
            LevelRuleSpec::Landau => LevelRule::LandauBulk,
            LevelRuleSpec::Auto => {
                let k = &config.constants;
                let n_phi = k.q * config.spectator.b * config.spectator.radius.powi(2)
                    / (2.0 * k.hbar * k.c);
                if n_phi >= 2.0 {
                    LevelRule::LandauBulk
                } else {
                    LevelRule::Plain
                }
            }
        }
    }

    pub fn noise_model(&self) -> NoiseModel {
        let sites = self
            .channel
            .as_ref()
            .map(|c| {
                c.noise
                    .sites
                    .iter()
                    .map(|s| StraySite {
                        center: Vector2::new(s.center[0], s.center[1]),
                        radius: s.radius,
                        max_delta_b: s.max_delta_b,
                    })
                    .collect()
            })
            .unwrap_or_default();
        NoiseModel { sites }
    }

    /// The symbol sequence: explicit, or generated from message_seed.
    pub fn message(&self, alphabet: &FluxAlphabet) -> Result<Vec<usize>> {
        let channel = self.channel.as_ref().ok_or_else(|| {
            CoreError::ConfigInvariant("config has no channel section".into())
        })?;
        match (&channel.message, channel.message_length) {
            (Some(m), None) => Ok(m.clone()),
            (None, Some(len)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(channel.message_seed);
                Ok((0..len).map(|_| rng.random_range(0..alphabet.len())).collect())
            }
            (Some(_), Some(_)) => Err(CoreError::ConfigInvariant(
                "give either message or message_length, not both".into(),
            )),
            (None, None) => Err(CoreError::ConfigInvariant(
                "channel needs a message or a message_length".into(),
            )),
        }
    }

    pub fn channel_opts(&self, seed_override: Option<u64>) -> Result<ChannelOpts> {
        let channel = self.channel.as_ref().ok_or_else(|| {
            CoreError::ConfigInvariant("config has no channel section".into())
        })?;
        let constants = self.constants()?;
        Ok(ChannelOpts {
            seed: seed_override.unwrap_or(channel.seed),
            delay: channel.delay.unwrap_or(self.spectator.x_c / constants.c),
            observe_until: channel.observe_until,
        })
    }
}
