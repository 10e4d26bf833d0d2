use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::HardwareProfile;
use crate::error::{Result, SdrError};
use crate::evolution::Method;
use crate::generalization::EpsRange;
use crate::matching::MatchMode;
use crate::pipeline::{EncodeConfig, SimulateConfig, Thinning};
use crate::rydberg::BasisMode;
use crate::store::read_text;

/// Environment variable naming a config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "SDR_CONFIG";

/// Every tunable of the `sdr` binary. Defaults apply first, then the config
/// file, then command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub profile: HardwareProfile,
    /// Relative edge threshold, fraction of the strongest Sobel response.
    pub threshold: f64,
    pub absolute_threshold: Option<f64>,
    /// Resampling spacing, pixels.
    pub spacing: f64,
    pub budget: usize,
    /// RDP tolerance search bracket, pixels.
    pub eps_range: EpsRange,
    pub min_chain: usize,
    pub thinning: Thinning,
    /// µs
    pub duration: f64,
    /// µs
    pub dt: f64,
    pub method: Method,
    pub basis: BasisMode,
    pub alpha: f64,
    pub strict: bool,
    pub match_mode: MatchMode,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        let e = EncodeConfig::default();
        let s = SimulateConfig::default();
        Config {
            profile: HardwareProfile::default(),
            threshold: e.threshold,
            absolute_threshold: e.absolute_threshold,
            spacing: e.spacing,
            budget: e.budget,
            eps_range: e.eps_range,
            min_chain: e.min_chain,
            thinning: e.thinning,
            duration: s.duration,
            dt: s.dt,
            method: s.method,
            basis: s.basis,
            alpha: s.alpha,
            strict: s.strict,
            match_mode: MatchMode::Geometry,
            seed: 0,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?).map_err(|e| match e {
            SdrError::Json(j) => SdrError::invalid(format!("config {}: {j}", path.display())),
            other => other,
        })
    }

    /// File named by `explicit`, else by `$SDR_CONFIG`, else defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::load(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn encode(&self) -> EncodeConfig {
        EncodeConfig {
            threshold: self.threshold,
            absolute_threshold: self.absolute_threshold,
            spacing: self.spacing,
            budget: self.budget,
            eps_range: self.eps_range,
            min_chain: self.min_chain,
            thinning: self.thinning,
        }
    }

    pub fn simulate(&self) -> SimulateConfig {
        SimulateConfig {
            duration: self.duration,
            dt: self.dt,
            method: self.method,
            basis: self.basis,
            alpha: self.alpha,
            strict: self.strict,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c = Config::from_json(r#"{"budget": 12, "profile": {"min_spacing": 5.0}}"#).unwrap();
        assert_eq!(c.budget, 12);
        assert_eq!(c.profile.min_spacing, 5.0);
        assert_eq!(c.profile.max_atoms, HardwareProfile::default().max_atoms);
        assert_eq!(c.spacing, 3.0);
    }

    #[test]
    fn serialized_default_roundtrips() {
        let c = Config::default();
        assert_eq!(Config::from_json(&serde_json::to_string(&c).unwrap()).unwrap(), c);
        assert!(Config::from_json(r#"{"bugdet": 3}"#).is_err());
    }
}
