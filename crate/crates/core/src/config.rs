//! Run configuration: a flat TOML table whose defaults are the reference
//! hyperparameters. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concept::Concept;
use crate::motion::{ClusterFeatures, MixtureParams, RegionOptions, ThresholdParams};
use crate::registry;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config value `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
    #[error("unknown {kind} `{name}` (available: {})", available.join(", "))]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: Vec<&'static str>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seeds every randomized step (k-means++ initialization).
    pub seed: u64,

    pub background_model: String,
    pub mog_components: usize,
    pub mog_learning_rate: f64,
    pub mog_match_threshold: f64,
    pub mog_background_ratio: f64,
    pub mog_min_variance: f64,
    pub mog_initial_variance: f64,

    /// Mask values strictly above this become `threshold_maxval`.
    pub threshold: u8,
    pub threshold_maxval: u8,

    /// Restrict the activity average to the youth's detected region.
    pub youth_region: bool,
    pub youth_region_policy: String,
    /// Cluster position used by the `index` policy.
    pub youth_region_index: usize,
    pub kmeans_features: ClusterFeatures,
    pub kmeans_max_iterations: usize,

    pub scale_map: String,
    /// Items compared by `evaluate`.
    pub items: Vec<Concept>,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mog = MixtureParams::default();
        let threshold = ThresholdParams::default();
        RunConfig {
            seed: 0,
            background_model: "mog".into(),
            mog_components: mog.components,
            mog_learning_rate: mog.learning_rate,
            mog_match_threshold: mog.match_threshold,
            mog_background_ratio: mog.background_ratio,
            mog_min_variance: mog.min_variance,
            mog_initial_variance: mog.initial_variance,
            threshold: threshold.thresh,
            threshold_maxval: threshold.maxval,
            youth_region: false,
            youth_region_policy: "largest-mean-area".into(),
            youth_region_index: 0,
            kmeans_features: ClusterFeatures::Center,
            kmeans_max_iterations: 100,
            scale_map: "linear".into(),
            items: Concept::ALL.to_vec(),
            output_dir: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.mixture_params()
            .validate()
            .map_err(|e| ConfigError::Invalid {
                key: "mog_*",
                message: e.to_string(),
            })?;
        if self.threshold_maxval == 0 {
            return Err(ConfigError::Invalid {
                key: "threshold_maxval",
                message: "must be positive so thresholded pixels count as active".into(),
            });
        }
        if self.threshold == u8::MAX {
            return Err(ConfigError::Invalid {
                key: "threshold",
                message: "255 would mark every pixel inactive".into(),
            });
        }
        if self.kmeans_max_iterations == 0 {
            return Err(ConfigError::Invalid {
                key: "kmeans_max_iterations",
                message: "must be at least 1".into(),
            });
        }
        if self.items.is_empty() {
            return Err(ConfigError::Invalid {
                key: "items",
                message: "at least one item must be compared".into(),
            });
        }
        registry::background_models().check(&self.background_model)?;
        registry::region_selectors().check(&self.youth_region_policy)?;
        registry::scale_maps().check(&self.scale_map)?;
        Ok(())
    }

    pub fn mixture_params(&self) -> MixtureParams {
        MixtureParams {
            components: self.mog_components,
            learning_rate: self.mog_learning_rate,
            match_threshold: self.mog_match_threshold,
            background_ratio: self.mog_background_ratio,
            min_variance: self.mog_min_variance,
            initial_variance: self.mog_initial_variance,
        }
    }

    pub fn threshold_params(&self) -> ThresholdParams {
        ThresholdParams {
            thresh: self.threshold,
            maxval: self.threshold_maxval,
        }
    }

    pub fn region_options(&self, frame_size: Option<(u32, u32)>) -> RegionOptions {
        RegionOptions {
            features: self.kmeans_features,
            max_iterations: self.kmeans_max_iterations,
            seed: self.seed,
            frame_size,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        RunConfig::from_toml_str(text, Path::new("test.toml"))
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            seed: 9,
            items: vec![Concept::Anxiety, Concept::Gaze],
            output_dir: Some("out".into()),
            kmeans_features: ClusterFeatures::Corners,
            ..Default::default()
        };
        assert_eq!(parse(&cfg.to_toml_string()).unwrap(), cfg);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = parse("sede = 3\n").unwrap_err();
        assert!(err.to_string().contains("sede"), "{err}");
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(parse("mog_learning_rate = 1.5\n").is_err());
        assert!(parse("mog_components = 0\n").is_err());
        assert!(parse("items = []\n").is_err());
        assert!(parse("items = [\"smile\"]\n").is_err());
        assert!(parse("kmeans_features = \"edges\"\n").is_err());
    }

    #[test]
    fn unknown_strategy_names_alternatives() {
        let err = parse("scale_map = \"cubic\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cubic") && msg.contains("linear") && msg.contains("bins"), "{msg}");
    }
}
