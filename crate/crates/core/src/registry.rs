//! Name-to-constructor tables for the swappable algorithm families.

use std::collections::BTreeMap;

use crate::config::{ConfigError, RunConfig};
use crate::motion::{
    BackgroundSubtractor, ClusterIndex, LargestMeanArea, MixtureBackground, RegionSelector,
};
use crate::rating::{EqualBins, LinearHalfPoint, ScaleMap};

pub type Factory<T> = fn(&RunConfig) -> Result<Box<T>, ConfigError>;

/// Strategies of one family, keyed by name.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    factories: BTreeMap<&'static str, Factory<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            factories: BTreeMap::new(),
        }
    }

    /// Later registrations under the same name replace earlier ones.
    pub fn register(&mut self, name: &'static str, factory: Factory<T>) -> &mut Self {
        self.factories.insert(name, factory);
        self
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn check(&self, name: &str) -> Result<(), ConfigError> {
        self.factory(name).map(|_| ())
    }

    pub fn create(&self, name: &str, config: &RunConfig) -> Result<Box<T>, ConfigError> {
        (self.factory(name)?)(config)
    }

    fn factory(&self, name: &str) -> Result<Factory<T>, ConfigError> {
        self.factories
            .get(name)
            .copied()
            .ok_or_else(|| ConfigError::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names(),
            })
    }
}

pub fn scale_maps() -> Registry<dyn ScaleMap> {
    let mut r = Registry::new("scale map");
    r.register("linear", |_| Ok(Box::new(LinearHalfPoint) as Box<dyn ScaleMap>))
        .register("bins", |_| Ok(Box::new(EqualBins)));
    r
}

pub fn region_selectors() -> Registry<dyn RegionSelector> {
    let mut r = Registry::new("youth-region policy");
    r.register("largest-mean-area", |_| {
        Ok(Box::new(LargestMeanArea) as Box<dyn RegionSelector>)
    })
    .register("index", |cfg| Ok(Box::new(ClusterIndex(cfg.youth_region_index))));
    r
}

pub fn background_models() -> Registry<dyn BackgroundSubtractor> {
    let mut r = Registry::new("background model");
    r.register("mog", |cfg| {
        MixtureBackground::new(cfg.mixture_params())
            .map(|m| Box::new(m) as Box<dyn BackgroundSubtractor>)
            .map_err(|e| ConfigError::Invalid {
                key: "mog_*",
                message: e.to_string(),
            })
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn created_strategies_report_their_names() {
        let cfg = RunConfig::default();
        for name in scale_maps().names() {
            assert_eq!(scale_maps().create(name, &cfg).unwrap().name(), name);
        }
        for name in region_selectors().names() {
            assert_eq!(region_selectors().create(name, &cfg).unwrap().name(), name);
        }
        for name in background_models().names() {
            assert_eq!(background_models().create(name, &cfg).unwrap().name(), name);
        }
    }

    #[test]
    fn unknown_name() {
        let err = scale_maps().create("quantile", &RunConfig::default()).err().unwrap();
        assert!(matches!(err, ConfigError::UnknownStrategy { .. }));
    }

    #[test]
    fn index_policy_reads_config() {
        let cfg = RunConfig {
            youth_region_index: 1,
            ..Default::default()
        };
        let sel = region_selectors().create("index", &cfg).unwrap();
        assert!(sel.select(&[]).is_err());
    }
}
