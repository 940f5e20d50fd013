//! Run configuration: built-in defaults, then an optional TOML file, then
//! command-line flags. Environment variables are never consulted.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kb: Option<PathBuf>,
    pub symbols: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub breadth: usize,
    pub depth: usize,
    /// Defaults to the largest rule ID of the knowledge base.
    pub output_dim: Option<usize>,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub depth_limit: usize,
    pub node_budget: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kb: None,
            symbols: None,
            model: None,
            breadth: 3,
            depth: 2,
            output_dim: None,
            epochs: 200,
            learning_rate: 0.5,
            seed: 0,
            depth_limit: 10,
            node_budget: None,
        }
    }
}

/// Every setting, each optional. Used for both the config file and flags.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Overrides {
    pub kb: Option<PathBuf>,
    pub symbols: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub breadth: Option<usize>,
    pub depth: Option<usize>,
    pub output_dim: Option<usize>,
    pub epochs: Option<usize>,
    pub lr: Option<f64>,
    pub seed: Option<u64>,
    pub depth_limit: Option<usize>,
    pub node_budget: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config {path}: {source}")]
    Toml {
        path: String,
        source: toml::de::Error,
    },
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("learning rate must be positive and finite")]
    LearningRate,
}

impl Overrides {
    /// Read a TOML config file. Relative paths inside it are taken relative
    /// to the file's own directory.
    pub fn from_file(path: &Path) -> Result<Overrides, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut parsed: Overrides = toml::from_str(&text).map_err(|source| ConfigError::Toml {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut parsed.kb, &mut parsed.symbols, &mut parsed.model]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(parsed)
    }
}

impl RunConfig {
    pub fn apply(mut self, o: &Overrides) -> RunConfig {
        fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
            if let Some(v) = value {
                *slot = v.clone();
            }
        }
        if o.kb.is_some() {
            self.kb = o.kb.clone();
        }
        if o.symbols.is_some() {
            self.symbols = o.symbols.clone();
        }
        if o.model.is_some() {
            self.model = o.model.clone();
        }
        if o.output_dim.is_some() {
            self.output_dim = o.output_dim;
        }
        if o.node_budget.is_some() {
            self.node_budget = o.node_budget;
        }
        set(&mut self.breadth, &o.breadth);
        set(&mut self.depth, &o.depth);
        set(&mut self.epochs, &o.epochs);
        set(&mut self.learning_rate, &o.lr);
        set(&mut self.seed, &o.seed);
        set(&mut self.depth_limit, &o.depth_limit);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("breadth", self.breadth),
            ("depth", self.depth),
            ("epochs", self.epochs),
            ("depth-limit", self.depth_limit),
            ("output-dim", self.output_dim.unwrap_or(1)),
            ("node-budget", self.node_budget.unwrap_or(1) as usize),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(ConfigError::Zero(name));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(ConfigError::LearningRate);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "kb = \"bigger.jsonl\"\nepochs = 50\nlr = 0.1\n").unwrap();
        let file = Overrides::from_file(&path).unwrap();
        let flags = Overrides {
            epochs: Some(7),
            ..Overrides::default()
        };
        let cfg = RunConfig::default().apply(&file).apply(&flags);
        assert_eq!(cfg.epochs, 7);
        assert_eq!(cfg.learning_rate, 0.1);
        assert_eq!(cfg.kb, Some(dir.path().join("bigger.jsonl")));
        assert_eq!(cfg.breadth, 3);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "epochz = 5\n").unwrap();
        assert!(matches!(
            Overrides::from_file(&path),
            Err(ConfigError::Toml { .. })
        ));

        let zero = RunConfig {
            depth: 0,
            ..RunConfig::default()
        };
        assert!(matches!(zero.validate(), Err(ConfigError::Zero("depth"))));
        let lr = RunConfig {
            learning_rate: 0.0,
            ..RunConfig::default()
        };
        assert!(matches!(lr.validate(), Err(ConfigError::LearningRate)));
        assert!(RunConfig::default().validate().is_ok());
    }
}
