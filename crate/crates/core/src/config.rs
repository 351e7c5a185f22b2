//! Simulation configuration, its defaults, validation and TOML parsing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matching_engine::Price;
use crate::numeric::normal_quantile;
use crate::Scalar;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config value for `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
}

/// All model and run parameters. Every field is optional in the TOML file
/// and falls back to the defaults below; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Agent population size, which also caps the number of resting orders.
    pub n_agents: usize,
    /// Total simulated steps, including warm-up.
    pub steps: u64,
    /// Leading steps excluded from all recorded statistics.
    pub warmup_steps: u64,
    /// Sentiment strength; fixes the trading frequency of the model.
    pub phi_0: Scalar,
    /// EMA memory length L.
    pub ema_length: usize,
    /// Cancellation sensitivity gamma.
    pub gamma: Scalar,
    /// Resting-order time-out in steps.
    pub t_max: u64,
    /// Mean of the shared placement/volume log-normal variable.
    pub lognormal_mean: Scalar,
    /// Standard deviation of the shared log-normal variable.
    pub lognormal_std: Scalar,
    /// Quantile of the placement distribution centred on the own-side best.
    pub q: Scalar,
    /// Risk-aversion range, sampled uniformly per agent.
    pub kappa_min: Scalar,
    pub kappa_max: Scalar,
    /// Initial price in ticks; the placement reference until both sides of
    /// the book are populated.
    pub p0: Price,
    /// Initial perceived volatility (the squared-return EMA starts at its
    /// square).
    pub nu_0: Scalar,
    /// Lower bound on the perceived volatility.
    pub nu_floor: Scalar,
    /// Base RNG seed; a run is fully determined by (config, seed).
    pub seed: u64,
    /// One-lot limit orders per side deposited before the first step so the
    /// entry feedback loop has something to react to.
    pub initial_orders_per_side: usize,
    /// Depth-profile snapshot cadence in steps (0 disables snapshots).
    pub depth_every: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_agents: 10_000,
            steps: 100_000,
            warmup_steps: 2_000,
            phi_0: 0.165,
            ema_length: 5,
            gamma: 0.02,
            t_max: 100,
            lognormal_mean: 7.0,
            lognormal_std: 10.0,
            q: 0.5,
            kappa_min: 0.25,
            kappa_max: 0.75,
            p0: 1_000,
            nu_0: 1.0,
            nu_floor: 0.1,
            seed: 1,
            initial_orders_per_side: 250,
            depth_every: 100,
        }
    }
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let config: SimConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |field: &'static str, reason: String| ConfigError::Invalid { field, reason };
        if self.n_agents == 0 {
            return Err(invalid("n_agents", "must be positive".into()));
        }
        if self.steps <= self.warmup_steps {
            return Err(invalid(
                "steps",
                format!(
                    "must exceed warmup_steps ({} <= {})",
                    self.steps, self.warmup_steps
                ),
            ));
        }
        if self.phi_0 <= 0.0 {
            return Err(invalid("phi_0", "must be positive".into()));
        }
        if self.ema_length == 0 {
            return Err(invalid("ema_length", "must be at least 1".into()));
        }
        if self.gamma <= 0.0 {
            return Err(invalid("gamma", "must be positive".into()));
        }
        if self.t_max == 0 {
            return Err(invalid("t_max", "must be positive".into()));
        }
        if self.lognormal_mean <= 0.0 {
            return Err(invalid("lognormal_mean", "must be positive".into()));
        }
        if self.lognormal_std <= 0.0 {
            return Err(invalid("lognormal_std", "must be positive".into()));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(invalid("q", format!("must lie in (0, 1), got {}", self.q)));
        }
        if !(0.0 < self.kappa_min && self.kappa_min <= self.kappa_max) {
            return Err(invalid(
                "kappa_min",
                "must satisfy 0 < kappa_min <= kappa_max".into(),
            ));
        }
        if self.p0 < 1 {
            return Err(invalid("p0", "must be at least 1 tick".into()));
        }
        if self.nu_0 <= 0.0 {
            return Err(invalid("nu_0", "must be positive".into()));
        }
        if self.nu_floor <= 0.0 {
            return Err(invalid("nu_floor", "must be positive".into()));
        }
        if self.initial_orders_per_side * 2 > self.n_agents {
            return Err(invalid(
                "initial_orders_per_side",
                "initial resting agents cannot exceed the population".into(),
            ));
        }
        Ok(())
    }

    /// Parameters `(mu, sigma)` of the underlying normal such that the
    /// log-normal variable itself has the configured mean and standard
    /// deviation.
    pub fn lognormal_params(&self) -> (Scalar, Scalar) {
        let cv2 = (self.lognormal_std / self.lognormal_mean).powi(2);
        let sigma2 = (1.0 + cv2).ln();
        let mu = self.lognormal_mean.ln() - sigma2 / 2.0;
        (mu, sigma2.sqrt())
    }

    /// The q-quantile of the placement distribution, rounded up to ticks
    /// like every placement draw.
    pub fn q_offset_ticks(&self) -> i64 {
        let (mu, sigma) = self.lognormal_params();
        let quantile = (mu + sigma * normal_quantile(self.q)).exp();
        quantile.ceil() as i64
    }

    /// Market-order liquidity threshold `min(50, N/10)` in lots.
    pub fn n_min(&self) -> i64 {
        50.min(self.n_agents as i64 / 10)
    }

    /// Steps recorded after the warm-up.
    pub fn recorded_steps(&self) -> u64 {
        self.steps - self.warmup_steps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_toml_gives_defaults() {
        let config = SimConfig::from_toml_str("").unwrap();
        assert_eq!(config, SimConfig::default());
        assert_eq!(config.n_agents, 10_000);
        assert_eq!(config.steps, 100_000);
        assert_relative_eq!(config.phi_0, 0.165);
        assert_eq!(config.ema_length, 5);
        assert_relative_eq!(config.gamma, 0.02);
        assert_eq!(config.t_max, 100);
    }

    #[test]
    fn partial_toml_overrides() {
        let config = SimConfig::from_toml_str("n_agents = 2000\nphi_0 = 1.65\n").unwrap();
        assert_eq!(config.n_agents, 2000);
        assert_relative_eq!(config.phi_0, 1.65);
        assert_eq!(config.steps, 100_000);
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let err = SimConfig::from_toml_str("no_such_knob = 3\n").unwrap_err();
        assert!(err.to_string().contains("no_such_knob"), "{err}");
    }

    #[test]
    fn invalid_values_name_the_field() {
        let err = SimConfig::from_toml_str("steps = 10\nwarmup_steps = 20\n").unwrap_err();
        assert!(err.to_string().contains("steps"), "{err}");
        let err = SimConfig::from_toml_str("q = 1.5\n").unwrap_err();
        assert!(err.to_string().contains('q'), "{err}");
        let err = SimConfig::from_toml_str("phi_0 = -1.0\n").unwrap_err();
        assert!(err.to_string().contains("phi_0"), "{err}");
    }

    #[test]
    fn lognormal_moment_inversion() {
        let config = SimConfig::default();
        let (mu, sigma) = config.lognormal_params();
        // Moment inversion for mean 7, std 10.
        assert_relative_eq!(sigma * sigma, (1.0 + 100.0 / 49.0f64).ln(), epsilon = 1e-12);
        assert_relative_eq!(mu, 7.0f64.ln() - sigma * sigma / 2.0, epsilon = 1e-12);
        // Median exp(mu) ~ 4.01, rounded up like the draws.
        assert_eq!(config.q_offset_ticks(), 5);
    }

    #[test]
    fn n_min_rule() {
        let config = SimConfig::default();
        assert_eq!(config.n_min(), 50);
        let small = SimConfig {
            n_agents: 100,
            ..SimConfig::default()
        };
        assert_eq!(small.n_min(), 10);
    }
}
